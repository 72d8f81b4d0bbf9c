#include <cmath>

#include <gtest/gtest.h>

#include "esqpt/error.hpp"
#include "esqpt/model.hpp"
#include "oracles.hpp"

using esqpt::build_matrix;
using esqpt::coefficients;
using esqpt::ModelParams;

TEST(Coefficients, IdentityPointHasNoTwoBodyTerms) {
  for (long n : {1L, 7L, 1000L}) {
    const auto k = coefficients(ModelParams(1.0, 0.3, 0.0, n));
    EXPECT_EQ(k.a, 1.0);
    EXPECT_EQ(k.b, 0.0);
    EXPECT_EQ(k.c, 0.0);
    EXPECT_EQ(k.d, 0.0);
    EXPECT_EQ(k.e, 0.0);
    EXPECT_EQ(k.f, 0.0);
    EXPECT_EQ(k.delta, 0.0);
  }
}

TEST(Coefficients, HalfAlphaNoOmega) {
  const auto k = coefficients(ModelParams(0.5, 0.0, 0.0, 100));
  EXPECT_NEAR(k.a, 0.51, 1e-15);
  EXPECT_EQ(k.b, 0.0);
  EXPECT_NEAR(k.c, -0.01, 1e-15);
  EXPECT_NEAR(k.d, -0.005, 1e-15);
  EXPECT_EQ(k.e, 0.0);
  EXPECT_EQ(k.f, 0.0);
  EXPECT_NEAR(k.delta, -0.5, 1e-15);
}

TEST(Coefficients, OmegaTerms) {
  const double w = 1.0 / std::sqrt(2.0);
  const auto k = coefficients(ModelParams(0.5, w, 0.0, 1000));
  EXPECT_NEAR(k.b, -w / 2000.0, 1e-15);
  EXPECT_NEAR(k.b, -3.5355e-4, 1e-8);
  EXPECT_NEAR(k.f, -2.5e-4, 1e-15);
  EXPECT_NEAR(k.e, 2.0 * k.b, 1e-18);
}

TEST(Coefficients, CouplingEntersOnlyA) {
  const auto k0 = coefficients(ModelParams(0.3, 0.7, 0.0, 40));
  const auto k1 = coefficients(ModelParams(0.3, 0.7, 1.25, 40));
  EXPECT_DOUBLE_EQ(k1.a - k0.a, 1.25);
  EXPECT_EQ(k1.b, k0.b);
  EXPECT_EQ(k1.f, k0.f);
}

TEST(ModelParams, RejectsOutOfRange) {
  EXPECT_THROW(ModelParams(-0.1, 0, 0, 10), esqpt::InvalidSpec);
  EXPECT_THROW(ModelParams(1.1, 0, 0, 10), esqpt::InvalidSpec);
  EXPECT_THROW(ModelParams(0.5, -1, 0, 10), esqpt::InvalidSpec);
  EXPECT_THROW(ModelParams(0.5, 0, -0.1, 10), esqpt::InvalidSpec);
  EXPECT_THROW(ModelParams(0.5, 0, 0, 0), esqpt::InvalidSpec);
  EXPECT_THROW(ModelParams(std::nan(""), 0, 0, 10), esqpt::InvalidSpec);
}

TEST(ModelParams, RecordRoundTrip) {
  const ModelParams p(0.5, 1.0 / std::sqrt(2.0), 1.17, 2500);
  EXPECT_EQ(ModelParams::from_record(p.to_record()), p);
  auto rec = p.to_record();
  rec.erase("lambda");
  EXPECT_EQ(ModelParams::from_record(rec).lambda(), 0.0);
  rec.erase("N");
  EXPECT_THROW(ModelParams::from_record(rec), esqpt::InvalidSpec);
}

TEST(BuildMatrix, NumberOperatorAtAlphaOne) {
  const auto h = build_matrix(ModelParams(1.0, 0.0, 0.0, 4));
  ASSERT_EQ(h.dimension(), 5u);
  for (std::size_t l = 0; l < 5; ++l) EXPECT_EQ(h.diag[l], double(l));
  for (double x : h.offdiag1) EXPECT_EQ(x, 0.0);
  for (double x : h.offdiag2) EXPECT_EQ(x, 0.0);
}

TEST(BuildMatrix, TwoStateShiftConvention) {
  const ModelParams p(0.5, 0.0, 0.0, 1);
  const auto h = build_matrix(p);
  ASSERT_EQ(h.dimension(), 2u);
  EXPECT_NEAR(h.diag[0], 0.0, 1e-15);
  EXPECT_NEAR(h.diag[1], 0.5, 1e-15);
  EXPECT_NEAR(h.offdiag1[0], 0.0, 1e-15);
  const Eigen::MatrixXd brute = oracle::model_matrix(0.5, 0.0, 0.0, 1);
  EXPECT_NEAR(brute(0, 0), -0.5, 1e-15);
  EXPECT_NEAR(brute(1, 1), 0.0, 1e-15);
  const double delta = coefficients(p).delta;
  EXPECT_NEAR(brute(0, 0) - delta, h.diag[0], 1e-15);
  EXPECT_NEAR(brute(1, 1) - delta, h.diag[1], 1e-15);
}

TEST(BuildMatrix, ThreeStateHasSecondOffDiagonal) {
  const auto h = build_matrix(ModelParams(0.5, 1.0 / std::sqrt(2.0), 0.0, 2));
  ASSERT_EQ(h.offdiag2.size(), 1u);
  EXPECT_NE(h.offdiag2[0], 0.0);
  const Eigen::MatrixXd brute = oracle::model_matrix(0.5, 1.0 / std::sqrt(2.0), 0.0, 2) + 0.5 * Eigen::MatrixXd::Identity(3, 3);
  EXPECT_LT((brute - oracle::dense(h)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BuildMatrix, MatchesOperatorApplication) {
  for (int n = 1; n <= 12; ++n)
    for (double alpha : {0.0, 0.3, 0.5, 0.8, 1.0})
      for (double omega : {0.0, 0.2, 1.0 / std::sqrt(2.0), 1.7})
        for (double lambda : {0.0, 0.45, 2.0}) {
          const ModelParams p(alpha, omega, lambda, n);
          const Eigen::MatrixXd built = oracle::dense(build_matrix(p));
          const Eigen::MatrixXd brute = oracle::model_matrix(alpha, omega, lambda, n) -
                                        coefficients(p).delta * Eigen::MatrixXd::Identity(n + 1, n + 1);
          for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
              ASSERT_LE(std::abs(built(i, j) - brute(i, j)), 1e-12 * std::max(1.0, std::abs(brute(i, j))))
                  << "N=" << n << " alpha=" << alpha << " omega=" << omega << " lambda=" << lambda << " (" << i
                  << "," << j << ")";
        }
}

TEST(BuildMatrix, DenseCopyIsSymmetric) {
  const auto h = build_matrix(ModelParams(0.37, 0.9, 0.4, 9));
  const auto d = h.dense();
  const std::size_t n = h.dimension();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(d[i * n + j], d[j * n + i]);
}

TEST(BuildMatrix, AffineInCoupling) {
  for (double lambda : {0.1, 0.75, 3.0}) {
    const auto h0 = build_matrix(ModelParams(0.5, 0.6, 0.0, 57));
    const auto h1 = build_matrix(ModelParams(0.5, 0.6, lambda, 57));
    for (std::size_t l = 0; l < h0.dimension(); ++l) EXPECT_EQ(h1.diag[l], h0.diag[l] + lambda * double(l));
    EXPECT_EQ(h1.offdiag1, h0.offdiag1);
    EXPECT_EQ(h1.offdiag2, h0.offdiag2);
  }
}

TEST(BuildMatrix, FiniteAtLargeN) {
  const auto h = build_matrix(ModelParams(0.2, 2.0, 1.0, 100000));
  for (double x : h.diag) ASSERT_TRUE(std::isfinite(x));
  for (double x : h.offdiag1) ASSERT_TRUE(std::isfinite(x));
  for (double x : h.offdiag2) ASSERT_TRUE(std::isfinite(x));
}

TEST(BuildMatrix, MultiplyMatchesDense) {
  const auto h = build_matrix(ModelParams(0.4, 0.5, 0.2, 11));
  std::vector<double> x(h.dimension()), y;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(1.0 + double(i));
  h.multiply(x, y);
  const Eigen::VectorXd ref = oracle::dense(h) * Eigen::Map<Eigen::VectorXd>(x.data(), Eigen::Index(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], ref(Eigen::Index(i)), 1e-13);
}

TEST(BuildMatrix, ParityConservationOnlyWithoutOmega) {
  EXPECT_TRUE(build_matrix(ModelParams(0.5, 0.0, 0.3, 20)).parity_conserving());
  EXPECT_FALSE(build_matrix(ModelParams(0.5, 0.1, 0.3, 20)).parity_conserving());
}
