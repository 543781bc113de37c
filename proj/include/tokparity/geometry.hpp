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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tokparity/error.hpp"

namespace tokparity {

// Sum by recursive halving; the association order depends only on the
// length, so results do not depend on how the values were produced.
template <typename Scalar>
Scalar pairwise_sum(std::span<const Scalar> values) {
  if (values.size() <= 8) {
    Scalar s(0);
    for (const Scalar& v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct AnisotropyOptions {
  std::size_t exact_limit = 2000;
  std::uint64_t seed = 0;
};

// Mean cosine similarity over unordered row pairs. Above `exact_limit` rows,
// a fixed-seed uniform sample of exact_limit*(exact_limit-1)/2 pairs is used.
// Throws ValidationError naming the first zero row.
template <typename Derived>
typename Derived::Scalar anisotropy(const Eigen::MatrixBase<Derived>& rows,
                                    const AnisotropyOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = rows.rows();
  if (n < 2) throw ValidationError("anisotropy needs at least 2 rows");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> unit = rows;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar norm = unit.row(i).norm();
    if (norm == Scalar(0)) {
      throw ValidationError("row " + std::to_string(i) + " is a zero vector");
    }
    unit.row(i) /= norm;
  }

  std::vector<Scalar> cosines;
  if (static_cast<std::size_t>(n) <= options.exact_limit) {
    cosines.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        cosines.push_back(unit.row(i).dot(unit.row(j)));
      }
    }
  } else {
    const std::size_t samples =
        options.exact_limit * (options.exact_limit - 1) / 2;
    cosines.reserve(samples);
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    while (cosines.size() < samples) {
      const Eigen::Index i = pick(rng);
      const Eigen::Index j = pick(rng);
      if (i == j) continue;
      cosines.push_back(unit.row(i).dot(unit.row(j)));
    }
  }
  return pairwise_sum<Scalar>(cosines) / static_cast<Scalar>(cosines.size());
}

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;  // descending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns
};

// Leading `count` eigenpairs of a symmetric positive semidefinite matrix by
// power iteration, deflating each found direction by re-orthogonalization.
// Stops a component once ||A v - lambda v|| <= tolerance * lambda_max.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> power_iteration_eigen(
    const Eigen::MatrixBase<Derived>& a, Eigen::Index count,
    const PowerIterationOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index d = a.rows();
  SymmetricEigen<Scalar> out;
  out.values = Vector::Zero(count);
  out.vectors = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(d, count);

  std::mt19937_64 rng(0);
  std::normal_distribution<double> gauss;
  Scalar scale(0);  // largest eigenvalue, for the relative stopping rule

  auto orthogonalize = [&](Vector& v, Eigen::Index found) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < found; ++k) {
        v -= out.vectors.col(k).dot(v) * out.vectors.col(k);
      }
    }
  };

  for (Eigen::Index c = 0; c < count; ++c) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = static_cast<Scalar>(gauss(rng));
    orthogonalize(v, c);
    v.normalize();
    Scalar lambda(0);
    for (int it = 0; it < options.max_iterations; ++it) {
      Vector w = a * v;
      orthogonalize(w, c);
      lambda = v.dot(w);
      const Scalar residual = (w - lambda * v).norm();
      const Scalar w_norm = w.norm();
      const Scalar ref = c == 0 ? std::abs(lambda) : scale;
      if (w_norm == Scalar(0) || residual <= options.tolerance * ref) break;
      v = w / w_norm;
    }
    if (lambda < Scalar(0)) lambda = Scalar(0);
    if (c == 0) scale = lambda;
    out.values(c) = lambda;
    out.vectors.col(c) = v;
  }

  // Power iteration finds the dominant remaining pair first, but nearly tied
  // values can come out swapped.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    return out.values(l) > out.values(r);
  });
  SymmetricEigen<Scalar> sorted;
  sorted.values.resize(count);
  sorted.vectors.resize(d, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    sorted.values(i) = out.values(order[static_cast<std::size_t>(i)]);
    sorted.vectors.col(i) = out.vectors.col(order[static_cast<std::size_t>(i)]);
  }
  return sorted;
}

template <typename Scalar>
struct SingularSpectrum {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;  // descending
  // Right singular vectors (columns, length = dim) for nonzero values.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> right_vectors;
  Eigen::Index rank = 0;
};

// Relative cutoff below which a singular value is treated as zero: the
// Gram-matrix route loses about half the digits of the smallest values.
inline constexpr double kRankTolerance = 1e-7;

// Singular values of `x` (rows are observations) from the smaller of its two
// Gram matrices.
template <typename Derived>
SingularSpectrum<typename Derived::Scalar> singular_spectrum(
    const Eigen::MatrixBase<Derived>& x,
    const PowerIterationOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const Eigen::Index count = std::min(n, d);
  const bool wide = n < d;
  const Matrix gram = wide ? Matrix(x * x.transpose()) : Matrix(x.transpose() * x);
  const auto eig = power_iteration_eigen(gram, count, options);

  SingularSpectrum<Scalar> out;
  out.values = eig.values.cwiseMax(Scalar(0)).cwiseSqrt();
  const Scalar top = count > 0 ? out.values(0) : Scalar(0);
  for (Eigen::Index i = 0; i < count; ++i) {
    if (out.values(i) <= Scalar(kRankTolerance) * top || top == Scalar(0)) {
      out.values(i) = Scalar(0);
    } else {
      ++out.rank;
    }
  }
  out.right_vectors = Matrix::Zero(d, out.rank);
  for (Eigen::Index i = 0; i < out.rank; ++i) {
    if (wide) {
      out.right_vectors.col(i) = x.transpose() * eig.vectors.col(i) / out.values(i);
      out.right_vectors.col(i).normalize();
    } else {
      out.right_vectors.col(i) = eig.vectors.col(i);
    }
  }
  return out;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
center_rows(const Eigen::MatrixBase<Derived>& x) {
  return x.rowwise() - x.colwise().mean();
}

// exp of the Shannon entropy of sigma / sum(sigma); zero terms skipped.
template <typename Derived>
typename Derived::Scalar effective_rank(const Eigen::MatrixBase<Derived>& sigma) {
  using Scalar = typename Derived::Scalar;
  const Scalar total = sigma.sum();
  if (total <= Scalar(0)) throw DegenerateError("spectrum is identically zero");
  Scalar entropy(0);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const Scalar p = sigma(i) / total;
    if (p > Scalar(0)) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

// (sum sigma^2)^2 / sum sigma^4
template <typename Derived>
typename Derived::Scalar participation_ratio(
    const Eigen::MatrixBase<Derived>& sigma) {
  using Scalar = typename Derived::Scalar;
  const auto sq = sigma.array().square();
  const Scalar denom = sq.square().sum();
  if (denom <= Scalar(0)) throw DegenerateError("spectrum is identically zero");
  const Scalar num = sq.sum();
  return num * num / denom;
}

// Cosines of the principal angles between span(a) and span(b); both inputs
// have orthonormal columns.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1>
principal_angle_cosines(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
      a.transpose() * b;
  const auto eig = power_iteration_eigen(
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(m.transpose() * m),
      m.cols());
  return eig.values.cwiseMax(Scalar(0)).cwiseSqrt().cwiseMin(Scalar(1));
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar denom = a.norm() * b.norm();
  if (denom == Scalar(0)) throw DegenerateError("cosine of a zero vector");
  return a.dot(b) / denom;
}

// ---------------------------------------------------------------------------
// Labeled embedding sets and the audit operations over them.

class EmbeddingSet {
 public:
  EmbeddingSet(std::string label, std::vector<std::string> row_labels,
               Eigen::MatrixXd vectors);

  const std::string& label() const { return label_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  Eigen::Index dim() const { return vectors_.cols(); }
  Eigen::Index size() const { return vectors_.rows(); }

  Eigen::Index index_of(std::string_view row_label) const;

 private:
  std::string label_;
  std::vector<std::string> row_labels_;
  Eigen::MatrixXd vectors_;
};

// `<n> <d>` header, then `<label> <d floats>` per row.
EmbeddingSet parse_embeddings(std::string_view text, std::string label);
EmbeddingSet load_embeddings(const std::filesystem::path& path);
std::string serialize_embeddings(const EmbeddingSet& set);

struct GeometryReport {
  double anisotropy = 0.0;
  std::vector<double> singular_values;            // centered, descending
  std::vector<double> uncentered_singular_values;
  double effective_rank = 0.0;
  double participation_ratio = 0.0;
  std::size_t anisotropy_pairs = 0;
  bool anisotropy_sampled = false;
  std::uint64_t seed = 0;

  bool operator==(const GeometryReport&) const = default;
};

double anisotropy(const EmbeddingSet& set, const AnisotropyOptions& options = {});

GeometryReport spectrum(const EmbeddingSet& set,
                        const AnisotropyOptions& options = {});

struct SubspaceConvergence {
  double centroid_cosine = 0.0;
  double mean_principal_angle_cos = 0.0;
  std::vector<double> principal_angle_cosines;
};

// Centroid cosine and mean principal-angle cosine between the top-k
// principal subspaces of the centered sets. Values near 1 mean one variety
// has been absorbed into the other's subspace.
SubspaceConvergence subspace_convergence(const EmbeddingSet& a,
                                         const EmbeddingSet& b, std::size_t k);

double association_probe(const EmbeddingSet& set, std::string_view target,
                         const std::vector<std::string>& pos_attrs,
                         const std::vector<std::string>& neg_attrs);

}  // namespace tokparity
