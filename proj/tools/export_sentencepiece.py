#!/usr/bin/env python3
# Copyright 2026 The tokparity Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exports a SentencePiece model proto to tokparity's unigram JSON format.

Usage: export_sentencepiece.py tokenizer.model out.unigram.json

Control, unknown and <0xNN> byte pieces are dropped; the engine supplies its
own byte fallback. For BPE-type protos the stored scores are merge priorities,
not log-probabilities, so every piece gets log_prob -1 minus a tiny rank
term. Viterbi then minimizes piece count and breaks ties by merge order.
"""

import json
import sys

from sentencepiece import sentencepiece_model_pb2 as pb

NORMAL = 1
USER_DEFINED = 4
BPE = 2


def main(argv):
    if len(argv) != 3:
        sys.stderr.write(__doc__)
        return 1
    proto = pb.ModelProto()
    with open(argv[1], "rb") as f:
        proto.ParseFromString(f.read())

    kept = [p for p in proto.pieces if p.type in (NORMAL, USER_DEFINED)]
    is_bpe = proto.trainer_spec.model_type == BPE
    n = len(kept)
    pieces = []
    for i, p in enumerate(kept):
        score = -1.0 - 1e-6 * i / n if is_bpe else p.score
        pieces.append([p.piece, score])

    out = {
        "pieces": pieces,
        "byte_fallback": bool(proto.trainer_spec.byte_fallback),
        "add_dummy_prefix": bool(proto.normalizer_spec.add_dummy_prefix),
        "space_symbol": "▁",
    }
    with open(argv[2], "w", encoding="utf-8") as f:
        json.dump(out, f, ensure_ascii=False, separators=(",", ":"))
        f.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
