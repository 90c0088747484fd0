#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lmg/entanglement.hpp"
#include "lmg/error.hpp"
#include "lmg/linalg.hpp"
#include "lmg/model.hpp"

// Brute-force reference in the full 2^N Hilbert space. Qubit i (i = 0 is the
// first site) is bit N-1-i of the basis index; bit value 0 is spin up
// (sigma_z = +1).
namespace lmg::oracle {

inline constexpr int kMaxSpins = 14;

struct FullStateVector {
  int spin_count = 0;
  std::vector<double> amps;
};

struct OracleGroundState {
  double energy = 0.0;
  double first_excited = 0.0;  // lowest eigenvalue orthogonal to the returned state
  FullStateVector state;

  [[nodiscard]] double gap() const { return first_excited - energy; }
};

struct OracleReduction {
  DenseMatrix rho;
  double entropy_bits = 0.0;
};

namespace detail {

inline void check_size(const LmgParams& params) {
  params.validate();
  lmg::detail::require(params.spin_count <= kMaxSpins,
                       "oracle is limited to N <= " + std::to_string(kMaxSpins) + ", got " +
                           std::to_string(params.spin_count));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline double normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
  return n;
}

}  // namespace detail

// Matrix-free action of the site-basis Hamiltonian
//   H = -(lambda/N) sum_{i<j} (sx_i sx_j + gamma sy_i sy_j) - h sum_i sz_i.
// sx_i sx_j and sy_i sy_j both flip bits i and j; sy sy picks up -1 when the
// two bits agree and +1 when they differ, so H is real.
class OracleOperator {
 public:
  explicit OracleOperator(const LmgParams& params) : params_(params) {
    detail::check_size(params);
    const int n = params.spin_count;
    dim_ = std::size_t{1} << n;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const auto bi = std::uint32_t{1} << (n - 1 - i);
        const auto bj = std::uint32_t{1} << (n - 1 - j);
        pairs_.push_back({bi, bj});
      }
    }
  }

  [[nodiscard]] std::size_t dimension() const { return dim_; }

  [[nodiscard]] double diagonal(std::uint32_t s) const {
    const int n = params_.spin_count;
    const int down = std::popcount(s);
    return -params_.field * static_cast<double>(n - 2 * down);
  }

  // Matrix element <s ^ (bi | bj)| H |s> for the pair (i, j).
  [[nodiscard]] double pair_element(std::uint32_t s, std::uint32_t bi, std::uint32_t bj) const {
    const bool agree = ((s & bi) != 0) == ((s & bj) != 0);
    const double yy = agree ? -1.0 : 1.0;
    return -params_.coupling / params_.spin_count * (1.0 + params_.anisotropy * yy);
  }

  void apply(std::span<const double> x, std::span<double> y) const {
    for (std::uint32_t s = 0; s < dim_; ++s) {
      double sum = diagonal(s) * x[s];
      for (const auto& [bi, bj] : pairs_) sum += pair_element(s, bi, bj) * x[s ^ (bi | bj)];
      y[s] = sum;
    }
  }

  [[nodiscard]] DenseMatrix dense() const {
    DenseMatrix h(dim_, dim_);
    for (std::uint32_t s = 0; s < dim_; ++s) {
      h(s, s) += diagonal(s);
      for (const auto& [bi, bj] : pairs_) h(s ^ (bi | bj), s) += pair_element(s, bi, bj);
    }
    return h;
  }

  [[nodiscard]] const LmgParams& params() const { return params_; }

 private:
  struct Pair {
    std::uint32_t first;
    std::uint32_t second;
  };
  LmgParams params_;
  std::size_t dim_ = 0;
  std::vector<Pair> pairs_;
};

inline DenseMatrix oracle_hamiltonian(const LmgParams& params) { return OracleOperator(params).dense(); }

namespace detail {

// Lowest eigenpair of op restricted to the orthogonal complement of `deflate`,
// by Lanczos with full reorthogonalization and explicit restarts.
inline std::pair<double, std::vector<double>> lanczos_lowest(const OracleOperator& op,
                                                             const std::vector<std::vector<double>>& deflate,
                                                             std::uint32_t seed) {
  const std::size_t dim = op.dimension();
  const std::size_t free_dim = dim - deflate.size();
  const std::size_t max_basis = std::min<std::size_t>(free_dim, 160);
  constexpr int kMaxRestarts = 50;

  auto project = [&](std::vector<double>& v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& d : deflate) axpy(-dot(d, v), d, v);
    }
  };

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> start(dim);
  for (double& v : start) v = dist(rng);
  project(start);
  normalize(start);

  std::vector<double> w(dim);
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    std::vector<std::vector<double>> basis{start};
    std::vector<double> alpha;
    std::vector<double> beta;
    while (true) {
      const auto& v = basis.back();
      op.apply(v, w);
      project(w);
      alpha.push_back(dot(v, w));
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) axpy(-dot(b, w), b, w);
        project(w);
      }
      if (basis.size() >= max_basis) break;
      const double b = normalize(w);
      if (b < 1e-12 * std::max(1.0, std::abs(alpha.back()))) break;
      beta.push_back(b);
      basis.push_back(w);
    }
    const std::size_t k = basis.size();
    std::vector<double> ritz = alpha;
    DenseMatrix rows = DenseMatrix::identity(k);
    lmg::detail::tridiagonal_ql(ritz, beta, &rows, "oracle Lanczos");
    const auto lowest = static_cast<std::size_t>(std::min_element(ritz.begin(), ritz.end()) - ritz.begin());
    std::vector<double> vec(dim, 0.0);
    for (std::size_t j = 0; j < k; ++j) axpy(rows(lowest, j), basis[j], vec);
    project(vec);
    normalize(vec);

    op.apply(vec, w);
    project(w);
    const double theta = dot(vec, w);
    double residual = 0.0;
    for (std::size_t i = 0; i < dim; ++i) residual += (w[i] - theta * vec[i]) * (w[i] - theta * vec[i]);
    residual = std::sqrt(residual);
    if (residual <= 1e-12 * std::max(1.0, std::abs(theta)) || k == free_dim) return {theta, std::move(vec)};
    start = std::move(vec);
  }
  throw numerical_error("oracle Lanczos did not converge for N = " + std::to_string(op.params().spin_count));
}

}  // namespace detail

// Ground state of the full Hamiltonian plus the next eigenvalue, so callers
// can detect degenerate ground spaces.
inline OracleGroundState oracle_ground_state(const LmgParams& params) {
  const OracleOperator op(params);
  OracleGroundState result;
  result.state.spin_count = params.spin_count;
  auto [energy, vec] = detail::lanczos_lowest(op, {}, 12345u);
  result.energy = energy;
  result.first_excited = detail::lanczos_lowest(op, {vec}, 67890u).first;
  lmg::detail::fix_sign(vec);
  result.state.amps = std::move(vec);
  return result;
}

// Partial trace over the last N - L qubits; the first L qubits form the block.
inline OracleReduction oracle_reduce(const FullStateVector& state, int block) {
  const int n = state.spin_count;
  lmg::detail::require(n >= 2 && n <= kMaxSpins, "oracle_reduce: N must lie in [2, " + std::to_string(kMaxSpins) + "]");
  lmg::detail::require(state.amps.size() == (std::size_t{1} << n), "oracle_reduce: state has wrong length");
  lmg::detail::require(block >= 1 && block <= n - 1, "oracle_reduce: L must lie in [1, N-1]");
  const std::size_t block_dim = std::size_t{1} << block;
  const std::size_t env_dim = std::size_t{1} << (n - block);
  OracleReduction out{DenseMatrix(block_dim, block_dim), 0.0};
  for (std::size_t i = 0; i < block_dim; ++i) {
    const std::span<const double> row_i(state.amps.data() + i * env_dim, env_dim);
    for (std::size_t ip = 0; ip <= i; ++ip) {
      const std::span<const double> row_ip(state.amps.data() + ip * env_dim, env_dim);
      const double v = detail::dot(row_i, row_ip);
      out.rho(i, ip) = v;
      out.rho(ip, i) = v;
    }
  }
  auto eig = eig_dense_symmetric(out.rho, false);
  out.entropy_bits = EntanglementSpectrum::from_eigenvalues(std::move(eig.eigenvalues)).entropy_bits;
  return out;
}

// Normalized symmetric combination of all bitstrings with `up` spins up.
inline std::vector<double> symmetric_basis_vector(int n_spins, int up) {
  lmg::detail::require(n_spins >= 1 && n_spins <= kMaxSpins && up >= 0 && up <= n_spins,
                       "symmetric_basis_vector: arguments out of range");
  const std::size_t dim = std::size_t{1} << n_spins;
  std::vector<double> v(dim, 0.0);
  for (std::uint32_t s = 0; s < dim; ++s) {
    if (n_spins - std::popcount(s) == up) v[s] = 1.0;
  }
  detail::normalize(v);
  return v;
}

// Embeds a Dicke-basis state into the full space.
inline FullStateVector embed(const DickeVector& state) {
  const int n = state.spin_count;
  FullStateVector full{n, std::vector<double>(std::size_t{1} << n, 0.0)};
  for (int up = 0; up <= n; ++up) {
    const double a = state.coeffs[static_cast<std::size_t>(up)];
    if (a == 0.0) continue;
    detail::axpy(a, symmetric_basis_vector(n, up), full.amps);
  }
  return full;
}

}  // namespace lmg::oracle
