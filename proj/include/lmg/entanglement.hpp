#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lmg/error.hpp"
#include "lmg/linalg.hpp"
#include "lmg/model.hpp"

namespace lmg {

// Table of log(k!) for k = 0..max_n, accumulated in extended precision so that
// ratios of large binomials keep ~1e-15 relative accuracy up to N of a few
// thousand. std::lgamma is avoided because it writes the global signgam.
class LogFactorials {
 public:
  explicit LogFactorials(int max_n) : table_(static_cast<std::size_t>(std::max(max_n, 0)) + 1, 0.0L) {
    long double sum = 0.0L;
    for (std::size_t k = 2; k < table_.size(); ++k) {
      sum += std::log(static_cast<long double>(k));
      table_[k] = sum;
    }
  }

  [[nodiscard]] long double log_choose(int n, int k) const {
    return table_[static_cast<std::size_t>(n)] - table_[static_cast<std::size_t>(k)] -
           table_[static_cast<std::size_t>(n - k)];
  }

 private:
  std::vector<long double> table_;
};

// Squared Schmidt coefficients of |N/2, n - N/2> split into blocks of L and N - L spins:
// p[l] = C(L, l) C(N - L, n - l) / C(N, n).
struct HypergeometricWeights {
  int block_size = 0;
  int environment_size = 0;
  int up_count = 0;
  std::vector<double> weights;

  [[nodiscard]] int support_min() const { return std::max(0, up_count - environment_size); }
  [[nodiscard]] int support_max() const { return std::min(block_size, up_count); }
};

namespace detail {

inline HypergeometricWeights hypergeometric_weights(const LogFactorials& log_fact, int n_spins, int block, int up) {
  HypergeometricWeights w;
  w.block_size = block;
  w.environment_size = n_spins - block;
  w.up_count = up;
  w.weights.assign(static_cast<std::size_t>(block) + 1, 0.0);
  const long double log_total = log_fact.log_choose(n_spins, up);
  for (int l = w.support_min(); l <= w.support_max(); ++l) {
    const long double log_p =
        log_fact.log_choose(block, l) + log_fact.log_choose(n_spins - block, up - l) - log_total;
    w.weights[static_cast<std::size_t>(l)] = static_cast<double>(std::exp(log_p));
  }
  return w;
}

}  // namespace detail

inline HypergeometricWeights hypergeometric_weights(int n_spins, int block, int up) {
  detail::require(n_spins >= 1, "hypergeometric_weights: N must be >= 1");
  detail::require(block >= 0 && block <= n_spins, "hypergeometric_weights: L must lie in [0, N]");
  detail::require(up >= 0 && up <= n_spins, "hypergeometric_weights: n must lie in [0, N]");
  return detail::hypergeometric_weights(LogFactorials(n_spins), n_spins, block, up);
}

// Reduced density matrix of an L-spin block, in the block's Dicke basis |L/2, l - L/2>.
struct BlockDensityMatrix {
  int block_size = 0;
  DenseMatrix entries;

  // Throws numerical_error when trace or symmetry are off. Positivity is
  // checked by spectrum_of.
  void validate() const {
    const std::size_t dim = static_cast<std::size_t>(block_size) + 1;
    if (entries.rows() != dim || entries.cols() != dim) throw numerical_error("density matrix has wrong shape");
    if (std::abs(entries.trace() - 1.0) > 1e-10) {
      throw numerical_error("density matrix trace deviates from 1 by " + std::to_string(entries.trace() - 1.0));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (std::abs(entries(i, j) - entries(j, i)) > 1e-12) throw numerical_error("density matrix is not symmetric");
      }
    }
  }
};

// rho[l, l'] = sum_m a_{l+m} a_{l'+m} q_l(l+m) q_{l'}(l'+m), with q the square
// roots of the hypergeometric weights and m the environment up-count.
inline BlockDensityMatrix reduce_block(const DickeVector& state, int block) {
  const int n_spins = state.spin_count;
  detail::require(static_cast<int>(state.coeffs.size()) == n_spins + 1, "reduce_block: state has wrong length");
  detail::require(block >= 1 && block <= n_spins - 1,
                  "reduce_block: L must lie in [1, N-1], got " + std::to_string(block));
  const int env = n_spins - block;
  const std::size_t dim = static_cast<std::size_t>(block) + 1;
  const std::size_t env_dim = static_cast<std::size_t>(env) + 1;

  // Schmidt amplitudes amp(l, m) = a_{l+m} q_l(l+m), filled one total up-count at a time.
  const LogFactorials log_fact(n_spins);
  DenseMatrix amp(dim, env_dim);
  for (int up = 0; up <= n_spins; ++up) {
    const double a = state.coeffs[static_cast<std::size_t>(up)];
    if (a == 0.0) continue;
    const auto w = detail::hypergeometric_weights(log_fact, n_spins, block, up);
    for (int l = w.support_min(); l <= w.support_max(); ++l) {
      amp(static_cast<std::size_t>(l), static_cast<std::size_t>(up - l)) =
          a * std::sqrt(w.weights[static_cast<std::size_t>(l)]);
    }
  }

  BlockDensityMatrix rho{block, DenseMatrix(dim, dim)};
  for (std::size_t l = 0; l < dim; ++l) {
    const auto row_l = amp.row(l);
    for (std::size_t lp = 0; lp <= l; ++lp) {
      const auto row_lp = amp.row(lp);
      double sum = 0.0;
      for (std::size_t m = 0; m < env_dim; ++m) sum += row_l[m] * row_lp[m];
      rho.entries(l, lp) = sum;
      rho.entries(lp, l) = sum;
    }
  }
  return rho;
}

// Von Neumann entropy in bits of a probability vector, with 0 log 0 = 0.
inline double entropy_bits(std::span<const double> probs) {
  double s = 0.0;
  for (double p : probs) {
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

struct EntanglementSpectrum {
  std::vector<double> probs;      // descending
  double entropy_bits = 0.0;
  std::vector<double> cumulants;  // partial sums of probs

  [[nodiscard]] double largest_prob() const { return probs.empty() ? 0.0 : probs.front(); }

  // Builds the spectrum from raw eigenvalues: clips noise in [-1e-10, 0),
  // zeroes values below the eigensolver's resolution (dim * eps * largest),
  // renormalizes, sorts descending.
  static EntanglementSpectrum from_eigenvalues(std::vector<double> values) {
    detail::require(!values.empty(), "spectrum needs at least one eigenvalue");
    double largest = 0.0;
    for (double& v : values) {
      if (!(v >= -1e-10)) throw numerical_error("density matrix has eigenvalue " + std::to_string(v) + " below -1e-10");
      if (v < 0.0) v = 0.0;
      largest = std::max(largest, v);
    }
    const double resolution =
        static_cast<double>(values.size()) * std::numeric_limits<double>::epsilon() * largest;
    for (double& v : values) {
      if (v <= resolution) v = 0.0;
    }
    double total = 0.0;
    for (double v : values) total += v;
    if (!(total > 0.0)) throw numerical_error("density matrix has vanishing trace");
    for (double& v : values) v /= total;
    std::sort(values.begin(), values.end(), std::greater<>());
    EntanglementSpectrum spectrum;
    spectrum.probs = std::move(values);
    spectrum.entropy_bits = lmg::entropy_bits(spectrum.probs);
    spectrum.cumulants.resize(spectrum.probs.size());
    double running = 0.0;
    for (std::size_t i = 0; i < spectrum.probs.size(); ++i) {
      running += spectrum.probs[i];
      spectrum.cumulants[i] = running;
    }
    return spectrum;
  }
};

inline EntanglementSpectrum spectrum_of(const BlockDensityMatrix& rho) {
  rho.validate();
  auto eig = eig_dense_symmetric(rho.entries, /*want_vectors=*/false);
  return EntanglementSpectrum::from_eigenvalues(std::move(eig.eigenvalues));
}

// Entropy of the hypergeometric distribution, i.e. of the block reduction of a
// single Dicke state.
inline double hypergeometric_entropy(int n_spins, int block, int up) {
  return entropy_bits(hypergeometric_weights(n_spins, block, up).weights);
}

// Entropy of the Gaussian that approximates the hypergeometric weights, with
// variance n (N - n) (N - L) L / N^3.
inline double gaussian_entropy(int n_spins, int block, int up) {
  detail::require(n_spins >= 1, "gaussian_entropy: N must be >= 1");
  detail::require(block >= 0 && block <= n_spins && up >= 0 && up <= n_spins,
                  "gaussian_entropy: L and n must lie in [0, N]");
  const double count = n_spins;
  // L (N - L) is formed first so that L and N - L give bit-identical results.
  const double block_term = static_cast<double>(block) * (count - block);
  const double variance = static_cast<double>(up) * (count - up) * block_term / (count * count * count);
  detail::require(variance > 0.0, "gaussian_entropy: variance vanishes (n or L at 0 or N)");
  return 0.5 * (std::log2(std::numbers::e) + std::log2(2.0 * std::numbers::pi) + std::log2(variance));
}

enum class Majorization { x_majorizes_y, y_majorizes_x, equal, incomparable };

inline std::string to_string(Majorization m) {
  switch (m) {
    case Majorization::x_majorizes_y: return "x_majorizes_y";
    case Majorization::y_majorizes_x: return "y_majorizes_x";
    case Majorization::equal: return "equal";
    case Majorization::incomparable: return "incomparable";
  }
  return "unknown";
}

// y majorizes x (x < y) iff every cumulant of x is <= the matching cumulant
// of y. The shorter spectrum is zero-padded.
inline Majorization majorization_compare(const EntanglementSpectrum& x, const EntanglementSpectrum& y) {
  constexpr double tol = 1e-10;
  const std::size_t len = std::max(x.cumulants.size(), y.cumulants.size());
  auto cumulant = [](const std::vector<double>& c, std::size_t i) {
    if (c.empty()) return 0.0;
    return i < c.size() ? c[i] : c.back();
  };
  bool x_below = true;
  bool y_below = true;
  for (std::size_t i = 0; i < len; ++i) {
    const double cx = cumulant(x.cumulants, i);
    const double cy = cumulant(y.cumulants, i);
    if (cx > cy + tol) x_below = false;
    if (cy > cx + tol) y_below = false;
  }
  if (x_below && y_below) return Majorization::equal;
  if (x_below) return Majorization::y_majorizes_x;
  if (y_below) return Majorization::x_majorizes_y;
  return Majorization::incomparable;
}

}  // namespace lmg
