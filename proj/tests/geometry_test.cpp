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

#include <cmath>
#include <random>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include "tokparity/error.hpp"

namespace tokparity {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<std::string> labels(Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

EmbeddingSet make_set(const MatrixXd& m, const std::string& name = "s") {
  return EmbeddingSet(name, labels(m.rows()), m);
}

MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g(rng);
  }
  return m;
}

MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index d) {
  Eigen::HouseholderQR<MatrixXd> qr(gaussian(rng, d, d));
  return qr.householderQ();
}

// Eigenvalues of a symmetric integer matrix from its characteristic
// polynomial: Faddeev-LeVerrier coefficients in exact integers, then
// sign-change scan and bisection on [0, trace].
std::vector<double> charpoly_eigenvalues(const Eigen::Matrix<long long, 4, 4>& g) {
  using M = Eigen::Matrix<long long, 4, 4>;
  std::array<long long, 5> c{};  // p(x) = sum c[k] x^(4-k)
  c[0] = 1;
  M mk = M::Zero();
  for (int k = 1; k <= 4; ++k) {
    mk = g * mk + c[k - 1] * M::Identity();
    c[k] = -(g * mk).trace() / k;
  }
  auto p = [&](long double x) {
    long double v = 0;
    for (long long ck : c) v = v * x + static_cast<long double>(ck);
    return v;
  };
  const long double hi = static_cast<long double>(g.trace()) + 1;
  std::vector<double> roots;
  const int steps = 2000000;
  long double prev_x = -1e-9L;
  long double prev = p(prev_x);
  for (int i = 1; i <= steps; ++i) {
    const long double x = hi * i / steps;
    const long double v = p(x);
    if ((prev < 0) != (v < 0)) {
      long double a = prev_x;
      long double b = x;
      for (int it = 0; it < 200; ++it) {
        const long double m = (a + b) / 2;
        if ((p(a) < 0) != (p(m) < 0)) {
          b = m;
        } else {
          a = m;
        }
      }
      roots.push_back(static_cast<double>((a + b) / 2));
    }
    prev_x = x;
    prev = v;
  }
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

TEST(PairwiseSumTest, MatchesLinearSum) {
  std::vector<double> v;
  for (int i = 1; i <= 1000; ++i) v.push_back(i);
  EXPECT_EQ(pairwise_sum<double>(v), 500500.0);
  EXPECT_EQ(pairwise_sum<double>(std::span<const double>()), 0.0);
}

TEST(AnisotropyTest, TrivialCases) {
  MatrixXd same(4, 3);
  same.rowwise() = Eigen::RowVector3d(1, 2, 3);
  EXPECT_NEAR(anisotropy(make_set(same)), 1.0, 1e-9);
  EXPECT_NEAR(anisotropy(make_set(MatrixXd::Identity(5, 5))), 0.0, 1e-9);
}

TEST(AnisotropyTest, MatchesTenPairOracle) {
  std::mt19937_64 rng(4);
  const MatrixXd m = gaussian(rng, 5, 4);
  double total = 0;
  int pairs = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      double dot = 0, ni = 0, nj = 0;
      for (int k = 0; k < 4; ++k) {
        dot += m(i, k) * m(j, k);
        ni += m(i, k) * m(i, k);
        nj += m(j, k) * m(j, k);
      }
      total += dot / std::sqrt(ni * nj);
      ++pairs;
    }
  }
  ASSERT_EQ(pairs, 10);
  EXPECT_NEAR(anisotropy(make_set(m)), total / 10, 1e-9);
}

TEST(AnisotropyTest, ZeroRowIsNamed) {
  MatrixXd m = MatrixXd::Identity(3, 3);
  m.row(1).setZero();
  try {
    anisotropy(make_set(m));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("w1"), std::string::npos);
  }
}

TEST(AnisotropyTest, SampledAboveLimitIsSeeded) {
  std::mt19937_64 rng(9);
  const MatrixXd m = gaussian(rng, 60, 4).array() + 1.0;
  AnisotropyOptions options;
  options.exact_limit = 20;
  const double exact = anisotropy(m);
  const double a = anisotropy(m, options);
  EXPECT_EQ(a, anisotropy(m, options));
  options.seed = 1;
  EXPECT_NE(a, anisotropy(m, options));
  EXPECT_NEAR(a, exact, 0.1);
  const GeometryReport report = spectrum(make_set(m), options);
  EXPECT_TRUE(report.anisotropy_sampled);
  EXPECT_EQ(report.anisotropy_pairs, 190u);
  EXPECT_EQ(report.seed, 1u);
}

TEST(SpectrumTest, RankOne) {
  const Eigen::RowVector4d v(1, -2, 0.5, 3);
  MatrixXd m(4, 4);
  const double scales[] = {1, 2, 3, 5};
  for (int i = 0; i < 4; ++i) m.row(i) = scales[i] * v;
  const GeometryReport r = spectrum(make_set(m));
  EXPECT_NEAR(r.effective_rank, 1.0, 1e-9);
  EXPECT_NEAR(r.participation_ratio, 1.0, 1e-9);
}

TEST(SpectrumTest, EqualSingularValues) {
  for (int d = 2; d <= 5; ++d) {
    MatrixXd m(2 * d, d);
    m << MatrixXd::Identity(d, d), -MatrixXd::Identity(d, d);
    m.array() += 0.25;  // centering removes the offset
    const GeometryReport r = spectrum(make_set(m));
    EXPECT_NEAR(r.effective_rank, d, 1e-9);
    EXPECT_NEAR(r.participation_ratio, d, 1e-9);
  }
}

TEST(SpectrumTest, IdenticalRowsAreDegenerate) {
  MatrixXd same(3, 2);
  same.rowwise() = Eigen::RowVector2d(1, 1);
  EXPECT_THROW(spectrum(make_set(same)), DegenerateError);
}

TEST(SpectrumTest, MatchesCharacteristicPolynomial) {
  Eigen::Matrix<long long, 6, 4> x;
  x << 3, 1, 4, 1,
       5, 9, 2, 6,
       5, 3, 5, 8,
       9, 7, 9, 3,
       2, 3, 8, 4,
       6, 2, 6, 4;
  const Eigen::Matrix<long long, 4, 4> g = x.transpose() * x;
  const auto eig = charpoly_eigenvalues(g);
  ASSERT_EQ(eig.size(), 4u);
  const auto s = singular_spectrum(MatrixXd(x.cast<double>()));
  ASSERT_EQ(s.values.size(), 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.values(i), std::sqrt(eig[i]), 1e-6);
  // The wide orientation goes through the 4x4 Gram matrix of the rows.
  const auto t = singular_spectrum(MatrixXd(x.transpose().cast<double>()));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(t.values(i), std::sqrt(eig[i]), 1e-6);
}

TEST(SpectrumTest, WorksForFloatMatrices) {
  Eigen::MatrixXf m(3, 2);
  m << 1, 0, 0, 2, 0, 0;
  const auto s = singular_spectrum(m);
  EXPECT_NEAR(s.values(0), 2.0f, 1e-5f);
  EXPECT_NEAR(s.values(1), 1.0f, 1e-5f);
}

TEST(SpectrumTest, Bounds) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const MatrixXd m = gaussian(rng, 12, 5);
    const GeometryReport r = spectrum(make_set(m));
    EXPECT_GE(r.anisotropy, -1.0);
    EXPECT_LE(r.anisotropy, 1.0);
    EXPECT_GE(r.effective_rank, 1.0 - 1e-12);
    EXPECT_LE(r.effective_rank, 5.0 + 1e-12);
    EXPECT_GE(r.participation_ratio, 1.0 - 1e-12);
    EXPECT_LE(r.participation_ratio, 5.0 + 1e-12);
    EXPECT_TRUE(std::is_sorted(r.singular_values.rbegin(), r.singular_values.rend()));
  }
}

TEST(InvarianceTest, RotationAndScale) {
  std::mt19937_64 rng(100);
  std::uniform_real_distribution<double> positive(0.2, 5.0);
  const MatrixXd a = gaussian(rng, 10, 6);
  const MatrixXd b = gaussian(rng, 8, 6) + MatrixXd::Constant(8, 6, 0.3);
  const GeometryReport ra = spectrum(make_set(a));
  const auto conv = subspace_convergence(make_set(a, "a"), make_set(b, "b"), 3);
  const std::vector<std::string> pos = {"w1", "w2"};
  const std::vector<std::string> neg = {"w3", "w4", "w5"};
  const double probe = association_probe(make_set(a), "w0", pos, neg);

  for (int t = 0; t < 100; ++t) {
    const MatrixXd q = random_orthogonal(rng, 6);
    const MatrixXd ar = a * q;
    const MatrixXd br = b * q;
    const GeometryReport rr = spectrum(make_set(ar));
    EXPECT_NEAR(rr.anisotropy, ra.anisotropy, 1e-6);
    EXPECT_NEAR(rr.effective_rank, ra.effective_rank, 1e-6);
    EXPECT_NEAR(rr.participation_ratio, ra.participation_ratio, 1e-6);
    const auto cr = subspace_convergence(make_set(ar, "a"), make_set(br, "b"), 3);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(cr.principal_angle_cosines[i], conv.principal_angle_cosines[i], 1e-6);
    }
    EXPECT_NEAR(cr.centroid_cosine, conv.centroid_cosine, 1e-6);
    EXPECT_NEAR(association_probe(make_set(ar), "w0", pos, neg), probe, 1e-6);

    MatrixXd scaled = ar;
    for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i) *= positive(rng);
    EXPECT_NEAR(anisotropy(make_set(scaled)), ra.anisotropy, 1e-6);
    EXPECT_NEAR(association_probe(make_set(scaled), "w0", pos, neg), probe, 1e-6);

    const double c = positive(rng);
    const GeometryReport rs = spectrum(make_set(MatrixXd(c * ar)));
    for (std::size_t i = 0; i < rs.singular_values.size(); ++i) {
      EXPECT_NEAR(rs.singular_values[i], c * ra.singular_values[i], 1e-6 * c);
    }
    EXPECT_NEAR(rs.effective_rank, ra.effective_rank, 1e-6);
    EXPECT_NEAR(rs.participation_ratio, ra.participation_ratio, 1e-6);
  }
}

TEST(ConvergenceTest, IdenticalSets) {
  std::mt19937_64 rng(1);
  const MatrixXd m = gaussian(rng, 7, 4).array() + 2.0;
  const auto c = subspace_convergence(make_set(m, "a"), make_set(m, "b"), 2);
  EXPECT_NEAR(c.centroid_cosine, 1.0, 1e-9);
  EXPECT_NEAR(c.mean_principal_angle_cos, 1.0, 1e-9);
}

TEST(ConvergenceTest, Disjoint) {
  MatrixXd a(2, 4);
  a << 1, 1, 0, 0,
       1, -1, 0, 0;
  MatrixXd b(2, 4);
  b << 0, 0, 1, 1,
       0, 0, 1, -1;
  const auto c = subspace_convergence(make_set(a), make_set(b), 1);
  EXPECT_NEAR(c.centroid_cosine, 0.0, 1e-9);
  EXPECT_NEAR(c.mean_principal_angle_cos, 0.0, 1e-9);
}

TEST(ConvergenceTest, SharedAxis) {
  // a varies in span{e1, e2}, b in span{e1, e3}: angles 0 and pi/2.
  MatrixXd a(4, 3);
  a << 3, 0, 0,
       -1, 0, 0,
       1, 1, 0,
       1, -1, 0;
  MatrixXd b(4, 3);
  b << 3, 0, 0,
       -1, 0, 0,
       1, 0, 1,
       1, 0, -1;
  const auto ab = subspace_convergence(make_set(a), make_set(b), 2);
  const auto ba = subspace_convergence(make_set(b), make_set(a), 2);
  EXPECT_NEAR(ab.mean_principal_angle_cos, 0.5, 1e-9);
  EXPECT_NEAR(ab.principal_angle_cosines[0], 1.0, 1e-9);
  EXPECT_NEAR(ab.principal_angle_cosines[1], 0.0, 1e-9);
  EXPECT_NEAR(ba.mean_principal_angle_cos, ab.mean_principal_angle_cos, 1e-12);
  EXPECT_NEAR(ab.centroid_cosine, 1.0, 1e-12);
}

TEST(ConvergenceTest, Errors) {
  const MatrixXd a = MatrixXd::Identity(3, 3);
  EXPECT_THROW(subspace_convergence(make_set(a), make_set(a), 3), ValidationError);
  EXPECT_THROW(subspace_convergence(make_set(a), make_set(a), 0), ValidationError);
  EXPECT_THROW(subspace_convergence(make_set(a), make_set(MatrixXd::Identity(3, 4)), 1),
               ValidationError);
}

TEST(ProbeTest, Cases) {
  MatrixXd m(4, 2);
  m << 1, 0,
       1, 1,
       0, 1,
       -1, 0;
  const EmbeddingSet set = make_set(m);
  EXPECT_NEAR(association_probe(set, "w0", {"w1", "w2"}, {"w1", "w2"}), 0.0, 1e-12);
  EXPECT_NEAR(association_probe(set, "w0", {"w0"}, {"w2"}), 1.0, 1e-12);
  EXPECT_NEAR(association_probe(set, "w0", {"w1", "w3"}, {"w2"}),
              (1.0 / std::sqrt(2.0) - 1.0) / 2.0, 1e-9);
  try {
    association_probe(set, "w0", {"nope"}, {"w2"});
    FAIL();
  } catch (const LookupError& e) {
    EXPECT_EQ(e.label(), "nope");
  }
}

TEST(EmbeddingFileTest, ParseAndRoundTrip) {
  const EmbeddingSet set = parse_embeddings("3 2\nfoo 1 2\nbar -0.5 3e-2\nbaz 0 1\n", "toy");
  EXPECT_EQ(set.size(), 3);
  EXPECT_EQ(set.dim(), 2);
  EXPECT_EQ(set.index_of("bar"), 1);
  EXPECT_DOUBLE_EQ(set.vectors()(1, 1), 0.03);
  const EmbeddingSet again = parse_embeddings(serialize_embeddings(set), "toy");
  EXPECT_EQ(again.vectors(), set.vectors());
  EXPECT_EQ(again.row_labels(), set.row_labels());
}

TEST(EmbeddingFileTest, Errors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_embeddings(text, "x");
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of(""), 1u);
  EXPECT_EQ(line_of("2\na 1 2\n"), 1u);
  EXPECT_EQ(line_of("2 2\na 1 2\nb 1\n"), 3u);
  EXPECT_EQ(line_of("2 2\na 1 2\nb 1 x\n"), 3u);
  EXPECT_THROW(parse_embeddings("1 2\na 1 2\n", "x"), ValidationError);
  EXPECT_THROW(parse_embeddings("2 2\na 1 nan\nb 1 2\n", "x"), ValidationError);
}

}  // namespace
}  // namespace tokparity
