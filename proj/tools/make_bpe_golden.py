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

"""Writes tests/data/o200k_golden.jsonl with tiktoken as the reference encoder.

Usage: make_bpe_golden.py models/o200k_base.tiktoken fixtures/appendix2.tsv out.jsonl

One JSON object per line: {"source", "text", "ids"}. Random strings only use
code points assigned in Unicode 13 so that category tables agree between
tiktoken and ICU.
"""

import json
import random
import sys
import unicodedata

import tiktoken
from tiktoken.load import load_tiktoken_bpe

O200K_PATTERN = "|".join([
    r"""[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]*[\p{Ll}\p{Lm}\p{Lo}\p{M}]+(?i:'s|'t|'re|'ve|'m|'ll|'d)?""",
    r"""[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]+[\p{Ll}\p{Lm}\p{Lo}\p{M}]*(?i:'s|'t|'re|'ve|'m|'ll|'d)?""",
    r"""\p{N}{1,3}""",
    r""" ?[^\s\p{L}\p{N}]+[\r\n/]*""",
    r"""\s*[\r\n]+""",
    r"""\s+(?!\S)""",
    r"""\s+""",
])

SEED = 20260101
COUNT = 100

WHITESPACE = [" ", " ", " ", "\n", "\r", "\t", "\r\n", " ", "　", " ", "\u0085"]
SNIPPETS = ["'s", "'T", "'re", "'VE", "'m", "'ll", "'D", "ſ", "...", "//", "123456", "١٢٣"]
RANGES = [
    (0x21, 0x7E, 30),       # ASCII
    (0xA0, 0x24F, 6),       # Latin-1, Latin Extended
    (0x300, 0x36F, 3),      # combining marks
    (0x370, 0x4FF, 4),      # Greek, Cyrillic
    (0x600, 0x6FF, 10),     # Arabic
    (0x900, 0x97F, 3),      # Devanagari
    (0x3040, 0x30FF, 3),    # kana
    (0x4E00, 0x9FFF, 4),    # CJK
    (0xAC00, 0xD7A3, 3),    # Hangul
    (0x1F300, 0x1F64F, 3),  # emoji
    (0x1D400, 0x1D7FF, 2),  # math alphanumerics
    (0x0, 0x10FFFF, 3),     # anything assigned
]


def assigned(cp):
    if 0xD800 <= cp <= 0xDFFF:
        return False
    return unicodedata.category(chr(cp)) not in ("Cn", "Cs", "Co")


def random_char(rng):
    lo, hi, _ = rng.choices(RANGES, weights=[r[2] for r in RANGES])[0]
    while True:
        cp = rng.randint(lo, hi)
        if assigned(cp):
            return chr(cp)


def random_text(rng):
    parts = []
    for _ in range(rng.randint(1, 40)):
        r = rng.random()
        if r < 0.2:
            parts.append(rng.choice(WHITESPACE))
        elif r < 0.27:
            parts.append(rng.choice(SNIPPETS))
        else:
            parts.append(random_char(rng))
    return "".join(parts)


def main(argv):
    if len(argv) != 4:
        sys.stderr.write(__doc__)
        return 1
    enc = tiktoken.Encoding(
        name="o200k_base",
        pat_str=O200K_PATTERN,
        mergeable_ranks=load_tiktoken_bpe(argv[1]),
        special_tokens={},
    )
    rng = random.Random(SEED)
    records = []
    for i in range(COUNT):
        text = random_text(rng)
        records.append({"source": f"random/{i}", "text": text})
    with open(argv[2], encoding="utf-8") as f:
        lines = f.read().rstrip("\n").split("\n")
    langs = lines[0].split("\t")[1:]
    for line in lines[1:]:
        cells = line.split("\t")
        for lang, text in zip(langs, cells[1:]):
            text = unicodedata.normalize("NFC", text)
            records.append({"source": f"fixture/{cells[0]}/{lang}", "text": text})
    with open(argv[3], "w", encoding="utf-8") as out:
        for rec in records:
            rec["ids"] = enc.encode_ordinary(rec["text"])
            out.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
