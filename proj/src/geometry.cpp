// Copyright 2026 The tokparity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tokparity/geometry.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace tokparity {

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

EmbeddingSet::EmbeddingSet(std::string label,
                           std::vector<std::string> row_labels,
                           Eigen::MatrixXd vectors)
    : label_(std::move(label)),
      row_labels_(std::move(row_labels)),
      vectors_(std::move(vectors)) {
  if (vectors_.rows() < 2) throw ValidationError("embedding set needs >= 2 rows");
  if (vectors_.cols() < 2) throw ValidationError("embedding dimension must be >= 2");
  if (static_cast<Eigen::Index>(row_labels_.size()) != vectors_.rows()) {
    throw ValidationError("row label count does not match the matrix");
  }
  if (!vectors_.allFinite()) {
    throw ValidationError("embedding set '" + label_ + "' has non-finite values");
  }
}

Eigen::Index EmbeddingSet::index_of(std::string_view row_label) const {
  for (std::size_t i = 0; i < row_labels_.size(); ++i) {
    if (row_labels_[i] == row_label) return static_cast<Eigen::Index>(i);
  }
  throw LookupError(std::string(row_label));
}

EmbeddingSet parse_embeddings(std::string_view text, std::string label) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  while (!lines.empty() && split_spaces(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "empty embedding file");

  const auto header = split_spaces(lines[0]);
  long long n = 0;
  long long d = 0;
  if (header.size() != 2 || !parse_number(header[0], n) ||
      !parse_number(header[1], d) || n < 0 || d < 0) {
    throw ParseError(1, "expected '<n> <d>' header");
  }
  if (static_cast<long long>(lines.size()) - 1 != n) {
    throw ParseError(lines.size(), fmt::format("header declares {} rows, found {}",
                                               n, lines.size() - 1));
  }
  Eigen::MatrixXd m(n, d);
  std::vector<std::string> labels;
  for (long long r = 0; r < n; ++r) {
    const auto cells = split_spaces(lines[static_cast<std::size_t>(r + 1)]);
    const std::size_t line_no = static_cast<std::size_t>(r + 2);
    if (static_cast<long long>(cells.size()) != d + 1) {
      throw ParseError(line_no, fmt::format("expected label and {} values", d));
    }
    labels.emplace_back(cells[0]);
    for (long long c = 0; c < d; ++c) {
      double v = 0.0;
      if (!parse_number(cells[static_cast<std::size_t>(c + 1)], v)) {
        throw ParseError(line_no, "bad number '" +
                                      std::string(cells[static_cast<std::size_t>(c + 1)]) + "'");
      }
      m(r, c) = v;
    }
  }
  return EmbeddingSet(std::move(label), std::move(labels), std::move(m));
}

EmbeddingSet load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embedding file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_embeddings(buffer.str(), path.stem().string());
}

std::string serialize_embeddings(const EmbeddingSet& set) {
  std::string out = fmt::format("{} {}\n", set.size(), set.dim());
  for (Eigen::Index r = 0; r < set.size(); ++r) {
    out += set.row_labels()[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < set.dim(); ++c) {
      out += fmt::format(" {}", set.vectors()(r, c));
    }
    out += '\n';
  }
  return out;
}

double anisotropy(const EmbeddingSet& set, const AnisotropyOptions& options) {
  for (Eigen::Index r = 0; r < set.size(); ++r) {
    if (set.vectors().row(r).squaredNorm() == 0.0) {
      throw ValidationError("row '" + set.row_labels()[static_cast<std::size_t>(r)] +
                            "' of set '" + set.label() + "' is a zero vector");
    }
  }
  return anisotropy(set.vectors(), options);
}

GeometryReport spectrum(const EmbeddingSet& set, const AnisotropyOptions& options) {
  GeometryReport report;
  report.seed = options.seed;
  report.anisotropy = anisotropy(set, options);
  const auto n = static_cast<std::size_t>(set.size());
  report.anisotropy_sampled = n > options.exact_limit;
  report.anisotropy_pairs = report.anisotropy_sampled
                                ? options.exact_limit * (options.exact_limit - 1) / 2
                                : n * (n - 1) / 2;

  const auto centered = singular_spectrum(center_rows(set.vectors()));
  report.singular_values = to_std(centered.values);
  report.uncentered_singular_values = to_std(singular_spectrum(set.vectors()).values);
  if (centered.rank == 0) {
    throw DegenerateError("set '" + set.label() +
                          "' has identical rows; the centered spectrum is zero");
  }
  report.effective_rank = effective_rank(centered.values);
  report.participation_ratio = participation_ratio(centered.values);
  return report;
}

SubspaceConvergence subspace_convergence(const EmbeddingSet& a,
                                         const EmbeddingSet& b, std::size_t k) {
  if (a.dim() != b.dim()) {
    throw ValidationError(fmt::format("dimension mismatch: {} has {}, {} has {}",
                                      a.label(), a.dim(), b.label(), b.dim()));
  }
  if (k == 0) throw ValidationError("k must be positive");
  SubspaceConvergence out;
  out.centroid_cosine = cosine(a.vectors().colwise().mean().transpose().eval(),
                               b.vectors().colwise().mean().transpose().eval());

  const auto sa = singular_spectrum(center_rows(a.vectors()));
  const auto sb = singular_spectrum(center_rows(b.vectors()));
  const auto kk = static_cast<Eigen::Index>(k);
  if (kk > sa.rank || kk > sb.rank) {
    throw ValidationError(fmt::format(
        "k={} exceeds the available rank ({}: {}, {}: {})", k, a.label(),
        sa.rank, b.label(), sb.rank));
  }
  const Eigen::VectorXd cosines = principal_angle_cosines(
      sa.right_vectors.leftCols(kk), sb.right_vectors.leftCols(kk));
  out.principal_angle_cosines = to_std(cosines);
  out.mean_principal_angle_cos = cosines.mean();
  return out;
}

double association_probe(const EmbeddingSet& set, std::string_view target,
                         const std::vector<std::string>& pos_attrs,
                         const std::vector<std::string>& neg_attrs) {
  if (pos_attrs.empty() || neg_attrs.empty()) {
    throw ValidationError("association probe needs non-empty attribute lists");
  }
  const Eigen::VectorXd t = set.vectors().row(set.index_of(target)).transpose();
  auto mean_cos = [&](const std::vector<std::string>& attrs) {
    std::vector<double> values;
    for (const std::string& label : attrs) {
      values.push_back(
          cosine(t, set.vectors().row(set.index_of(label)).transpose().eval()));
    }
    return pairwise_sum<double>(values) / static_cast<double>(values.size());
  };
  return mean_cos(pos_attrs) - mean_cos(neg_attrs);
}

}  // namespace tokparity
