#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lmg/entanglement.hpp"
#include "lmg/linalg.hpp"
#include "lmg/model.hpp"
#include "lmg/oracle.hpp"

namespace {

// Direct binomial by multiplicative formula; exact in double for small arguments.
double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

lmg::BlockDensityMatrix diagonal_rho(const std::vector<double>& probs) {
  lmg::BlockDensityMatrix rho{static_cast<int>(probs.size()) - 1, lmg::DenseMatrix(probs.size(), probs.size())};
  for (std::size_t i = 0; i < probs.size(); ++i) rho.entries(i, i) = probs[i];
  return rho;
}

lmg::DickeVector ground(int n, double gamma, double field) {
  return lmg::eig_pentadiagonal_ground(lmg::build_hamiltonian({n, gamma, field, 1.0})).state;
}

TEST(HypergeometricWeights, FourSpinsHalfBlock) {
  const auto w = lmg::hypergeometric_weights(4, 2, 2);
  ASSERT_EQ(w.weights.size(), 3u);
  for (int l = 0; l <= 2; ++l) {
    EXPECT_NEAR(w.weights[l], choose(2, l) * choose(2, 2 - l) / choose(4, 2), 1e-15);
  }
  EXPECT_NEAR(w.weights[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(w.weights[1], 2.0 / 3.0, 1e-15);
}

TEST(HypergeometricWeights, PolarizedEdges) {
  const auto none = lmg::hypergeometric_weights(30, 7, 0);
  EXPECT_EQ(none.weights[0], 1.0);
  for (int l = 1; l <= 7; ++l) EXPECT_EQ(none.weights[l], 0.0);
  const auto all = lmg::hypergeometric_weights(30, 7, 30);
  EXPECT_EQ(all.weights[7], 1.0);
  for (int l = 0; l < 7; ++l) EXPECT_EQ(all.weights[l], 0.0);
}

TEST(HypergeometricWeights, MatchesDirectBinomialsAndSupport) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 60);
    const int block = static_cast<int>(rng() % (n + 1));
    const int up = static_cast<int>(rng() % (n + 1));
    const auto w = lmg::hypergeometric_weights(n, block, up);
    for (int l = 0; l <= block; ++l) {
      const double expected = choose(block, l) * choose(n - block, up - l) / choose(n, up);
      EXPECT_NEAR(w.weights[l], expected, 1e-13 * std::max(1.0, expected));
      if (l < std::max(0, up - (n - block)) || l > std::min(block, up)) {
        EXPECT_EQ(w.weights[l], 0.0);
      }
    }
  }
}

TEST(HypergeometricWeights, SumsToOneUpToFourThousandSpins) {
  std::mt19937 rng(2);
  std::vector<std::array<int, 3>> cases{{4000, 2000, 2000}, {4000, 1, 3999}, {4000, 3999, 1}, {2000, 1000, 1000}};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4000);
    cases.push_back({n, static_cast<int>(rng() % (n + 1)), static_cast<int>(rng() % (n + 1))});
  }
  for (const auto& [n, block, up] : cases) {
    const auto w = lmg::hypergeometric_weights(n, block, up);
    double sum = 0.0;
    for (double p : w.weights) {
      EXPECT_GE(p, 0.0);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12) << n << " " << block << " " << up;
  }
}

TEST(HypergeometricWeights, RejectsOutOfRange) {
  EXPECT_THROW(lmg::hypergeometric_weights(10, 11, 3), lmg::usage_error);
  EXPECT_THROW(lmg::hypergeometric_weights(10, -1, 3), lmg::usage_error);
  EXPECT_THROW(lmg::hypergeometric_weights(10, 3, 11), lmg::usage_error);
}

TEST(ReduceBlock, SingleDickeStateGivesHypergeometricDiagonal) {
  const auto state = lmg::DickeVector::basis_state(40, 23);
  const auto rho = lmg::reduce_block(state, 11);
  const auto w = lmg::hypergeometric_weights(40, 11, 23);
  for (int l = 0; l <= 11; ++l) {
    for (int lp = 0; lp <= 11; ++lp) EXPECT_NEAR(rho.entries(l, lp), l == lp ? w.weights[l] : 0.0, 1e-15);
  }
  EXPECT_NEAR(lmg::spectrum_of(rho).entropy_bits, lmg::entropy_bits(w.weights), 1e-12);
}

TEST(ReduceBlock, FullyPolarizedStateIsPure) {
  const auto rho = lmg::reduce_block(lmg::DickeVector::basis_state(50, 50), 20);
  for (int l = 0; l <= 20; ++l) {
    for (int lp = 0; lp <= 20; ++lp) EXPECT_EQ(rho.entries(l, lp), (l == 20 && lp == 20) ? 1.0 : 0.0);
  }
  EXPECT_EQ(lmg::spectrum_of(rho).entropy_bits, 0.0);
}

// Direct partial trace of the embedded 2^8 state, projected onto the block's symmetric basis.
TEST(ReduceBlock, MatchesOraclePartialTrace) {
  const int n = 8;
  const int block = 4;
  const auto state = ground(n, 0.0, 0.5);
  const auto rho = lmg::reduce_block(state, block);
  const auto full = lmg::oracle::oracle_reduce(lmg::oracle::embed(state), block);
  for (int l = 0; l <= block; ++l) {
    const auto bl = lmg::oracle::symmetric_basis_vector(block, l);
    const auto rbl = full.rho.apply(bl);
    for (int lp = 0; lp <= block; ++lp) {
      const auto blp = lmg::oracle::symmetric_basis_vector(block, lp);
      double element = 0.0;
      for (std::size_t s = 0; s < blp.size(); ++s) element += blp[s] * rbl[s];
      EXPECT_NEAR(rho.entries(lp, l), element, 1e-9);
    }
  }
  EXPECT_NEAR(lmg::spectrum_of(rho).entropy_bits, full.entropy_bits, 1e-9);
}

TEST(ReduceBlock, RejectsBadBlockSize) {
  const auto state = lmg::DickeVector::basis_state(10, 5);
  EXPECT_THROW(lmg::reduce_block(state, 0), lmg::usage_error);
  EXPECT_THROW(lmg::reduce_block(state, 10), lmg::usage_error);
}

TEST(SpectrumOf, SimpleEntropies) {
  EXPECT_NEAR(lmg::spectrum_of(diagonal_rho({0.5, 0.5})).entropy_bits, 1.0, 1e-15);
  EXPECT_EQ(lmg::spectrum_of(diagonal_rho({1.0, 0.0, 0.0})).entropy_bits, 0.0);
  const double expected = -2.0 * (1.0 / 6.0) * std::log2(1.0 / 6.0) - (2.0 / 3.0) * std::log2(2.0 / 3.0);
  const auto s = lmg::spectrum_of(diagonal_rho({1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}));
  EXPECT_NEAR(s.entropy_bits, expected, 1e-14);
  EXPECT_NEAR(s.entropy_bits, 1.2516, 1e-4);
  EXPECT_NEAR(s.probs[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.cumulants.back(), 1.0, 1e-15);
}

TEST(SpectrumOf, ClipsNoiseAndRejectsNegative) {
  const auto s = lmg::EntanglementSpectrum::from_eigenvalues({1.0, -5e-11});
  EXPECT_EQ(s.probs[1], 0.0);
  EXPECT_THROW(lmg::EntanglementSpectrum::from_eigenvalues({1.0, -1e-9}), lmg::numerical_error);
  // Values at the eigensolver's round-off level carry no information.
  const auto noisy = lmg::EntanglementSpectrum::from_eigenvalues({0.5, 0.5, 1e-16, 3e-17});
  EXPECT_EQ(noisy.probs[2], 0.0);
  EXPECT_EQ(noisy.entropy_bits, 1.0);
  EXPECT_GT(lmg::EntanglementSpectrum::from_eigenvalues({1.0, 1e-14}).probs[1], 0.0);
  lmg::BlockDensityMatrix bad{1, lmg::DenseMatrix(2, 2)};
  bad.entries(0, 0) = 0.5;
  bad.entries(1, 1) = 0.5;
  bad.entries(0, 1) = bad.entries(1, 0) = 0.7;  // eigenvalue -0.2
  EXPECT_THROW(lmg::spectrum_of(bad), lmg::numerical_error);
  bad.entries(0, 0) = 0.9;  // trace 1.4
  EXPECT_THROW(lmg::spectrum_of(bad), lmg::numerical_error);
}

TEST(GaussianEntropy, ClosedFormValue) {
  const double variance = 500.0 * 500.0 * 750.0 * 250.0 / 1e9;
  EXPECT_DOUBLE_EQ(variance, 46.875);
  const double s = lmg::gaussian_entropy(1000, 250, 500);
  EXPECT_NEAR(s, 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * 46.875), 1e-12);
  EXPECT_NEAR(s, 4.8225, 1e-4);
  EXPECT_NEAR(s, lmg::hypergeometric_entropy(1000, 250, 500), 0.01);
}

TEST(GaussianEntropy, BlockComplementSymmetry) {
  for (int block : {1, 13, 250, 499}) {
    EXPECT_EQ(lmg::gaussian_entropy(1000, block, 377), lmg::gaussian_entropy(1000, 1000 - block, 377));
  }
}

TEST(GaussianEntropy, IsotropicFieldLaw) {
  const int n = 500;
  const int block = 125;
  const double field = 0.6;
  const int up = lmg::isotropic_ground_up_count({n, 1.0, field, 1.0});
  const double predicted = 0.5 * std::log2(block * (n - block) / static_cast<double>(n)) +
                           0.5 * std::log2(1.0 - field * field) +
                           0.5 * std::log2(std::numbers::pi * std::numbers::e / 2.0);
  EXPECT_NEAR(lmg::gaussian_entropy(n, block, up), predicted, 0.05);
}

TEST(GaussianEntropy, RejectsZeroVariance) {
  EXPECT_THROW(lmg::gaussian_entropy(100, 25, 0), lmg::usage_error);
  EXPECT_THROW(lmg::gaussian_entropy(100, 25, 100), lmg::usage_error);
  EXPECT_THROW(lmg::gaussian_entropy(100, 0, 50), lmg::usage_error);
}

TEST(GaussianEntropy, ConvergesToExactEntropy) {
  double previous = 1.0;
  for (int n : {100, 400, 1600}) {
    const double error = std::abs(lmg::gaussian_entropy(n, n / 4, n / 2) - lmg::hypergeometric_entropy(n, n / 4, n / 2));
    EXPECT_LT(error, previous);
    previous = error;
  }
  EXPECT_LT(previous, 0.02);
}

TEST(Majorization, Examples) {
  const auto uniform = lmg::EntanglementSpectrum::from_eigenvalues({0.5, 0.5});
  const auto pure = lmg::EntanglementSpectrum::from_eigenvalues({1.0, 0.0});
  EXPECT_EQ(lmg::majorization_compare(uniform, pure), lmg::Majorization::y_majorizes_x);
  EXPECT_EQ(lmg::majorization_compare(pure, uniform), lmg::Majorization::x_majorizes_y);
  EXPECT_EQ(lmg::majorization_compare(uniform, uniform), lmg::Majorization::equal);
  const auto a = lmg::EntanglementSpectrum::from_eigenvalues({0.6, 0.2, 0.2});
  const auto b = lmg::EntanglementSpectrum::from_eigenvalues({0.55, 0.45, 0.0});
  EXPECT_EQ(lmg::majorization_compare(a, b), lmg::Majorization::incomparable);
}

TEST(Majorization, PadsShorterSpectrum) {
  const auto shorter = lmg::EntanglementSpectrum::from_eigenvalues({0.7, 0.3});
  const auto longer = lmg::EntanglementSpectrum::from_eigenvalues({0.5, 0.3, 0.2});
  EXPECT_EQ(lmg::majorization_compare(longer, shorter), lmg::Majorization::y_majorizes_x);
  const auto same = lmg::EntanglementSpectrum::from_eigenvalues({0.7, 0.3, 0.0, 0.0});
  EXPECT_EQ(lmg::majorization_compare(shorter, same), lmg::Majorization::equal);
}

// Random ground states: density-matrix invariants, the log2(L+1) bound and
// equal entropies for complementary blocks.
TEST(EntanglementProperties, RandomGroundStates) {
  std::mt19937 rng(314);
  std::uniform_real_distribution<double> gamma(-1.0, 1.0);
  std::uniform_real_distribution<double> field(0.0, 2.5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 200);
    const int block = 1 + static_cast<int>(rng() % (n - 1));
    const auto state = ground(n, gamma(rng), field(rng));
    const auto rho = lmg::reduce_block(state, block);
    EXPECT_NO_THROW(rho.validate());
    const auto s = lmg::spectrum_of(rho);
    double sum = 0.0;
    for (double p : s.probs) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    EXPECT_TRUE(std::is_sorted(s.cumulants.begin(), s.cumulants.end()));
    EXPECT_LE(s.entropy_bits, std::log2(block + 1.0) + 1e-12);
    const auto complement = lmg::spectrum_of(lmg::reduce_block(state, n - block));
    EXPECT_NEAR(s.entropy_bits, complement.entropy_bits, 1e-8);
  }
}

}  // namespace
