#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lmg/error.hpp"

namespace lmg {

// Parameters of one LMG Hamiltonian
//   H = -(coupling/N) sum_{i<j} (sx_i sx_j + anisotropy sy_i sy_j) - field sum_i sz_i
struct LmgParams {
  int spin_count = 1;
  double anisotropy = 0.0;
  double field = 0.0;
  double coupling = 1.0;

  void validate() const {
    detail::require(spin_count >= 1, "spin_count must be >= 1, got " + std::to_string(spin_count));
    detail::require(std::isfinite(anisotropy), "anisotropy must be finite");
    detail::require(std::isfinite(field), "field must be finite");
    detail::require(std::isfinite(coupling), "coupling must be finite");
    detail::require(coupling > 0.0, "coupling must be positive (ferromagnetic)");
  }
};

// Hamiltonian restricted to the J = N/2 sector, in the Dicke basis indexed by
// the up-spin count n = M + N/2. Only entries (n, n) and (n, n+2) are nonzero.
struct PentadiagonalSymmetric {
  std::vector<double> diagonal;              // length N+1
  std::vector<double> second_superdiagonal;  // length N-1, entry k couples k and k+2

  [[nodiscard]] std::size_t dimension() const { return diagonal.size(); }

  [[nodiscard]] double at(std::size_t row, std::size_t col) const {
    if (row == col) return diagonal[row];
    if (row + 2 == col) return second_superdiagonal[row];
    if (col + 2 == row) return second_superdiagonal[col];
    return 0.0;
  }

  // Maximum absolute row sum.
  [[nodiscard]] double norm_inf() const {
    double best = 0.0;
    const std::size_t dim = dimension();
    for (std::size_t row = 0; row < dim; ++row) {
      double sum = std::abs(diagonal[row]);
      if (row + 2 < dim) sum += std::abs(second_superdiagonal[row]);
      if (row >= 2) sum += std::abs(second_superdiagonal[row - 2]);
      best = std::max(best, sum);
    }
    return best;
  }

  // y = H x
  [[nodiscard]] std::vector<double> apply(const std::vector<double>& x) const {
    const std::size_t dim = dimension();
    std::vector<double> y(dim);
    for (std::size_t row = 0; row < dim; ++row) {
      double sum = diagonal[row] * x[row];
      if (row + 2 < dim) sum += second_superdiagonal[row] * x[row + 2];
      if (row >= 2) sum += second_superdiagonal[row - 2] * x[row - 2];
      y[row] = sum;
    }
    return y;
  }
};

// Real state in the J = N/2 sector; coeffs[n] is the amplitude on |N/2, n - N/2>.
struct DickeVector {
  int spin_count = 0;
  std::vector<double> coeffs;

  [[nodiscard]] double norm() const {
    double sum = 0.0;
    for (double c : coeffs) sum += c * c;
    return std::sqrt(sum);
  }

  static DickeVector basis_state(int spin_count, int up_count) {
    detail::require(spin_count >= 1 && up_count >= 0 && up_count <= spin_count,
                    "basis_state: up_count out of range");
    DickeVector v{spin_count, std::vector<double>(static_cast<std::size_t>(spin_count) + 1, 0.0)};
    v.coeffs[static_cast<std::size_t>(up_count)] = 1.0;
    return v;
  }
};

inline PentadiagonalSymmetric build_hamiltonian(const LmgParams& params) {
  params.validate();
  const int n_spins = params.spin_count;
  const double count = n_spins;
  const double j = count / 2.0;
  const double casimir = j * (j + 1.0);
  const double diag_scale = params.coupling / count * (1.0 + params.anisotropy);
  const double pair_scale = params.coupling / (2.0 * count) * (1.0 - params.anisotropy);

  PentadiagonalSymmetric h;
  h.diagonal.resize(static_cast<std::size_t>(n_spins) + 1);
  for (int n = 0; n <= n_spins; ++n) {
    const double m = n - j;
    h.diagonal[static_cast<std::size_t>(n)] =
        -diag_scale * (casimir - m * m - count / 2.0) - 2.0 * params.field * m;
  }
  h.second_superdiagonal.resize(n_spins >= 2 ? static_cast<std::size_t>(n_spins) - 1 : 0);
  for (int n = 0; n + 2 <= n_spins; ++n) {
    const double m = n - j;
    // <M+2| J+ J+ |M>
    const double raise = std::sqrt((casimir - m * (m + 1.0)) * (casimir - (m + 1.0) * (m + 2.0)));
    h.second_superdiagonal[static_cast<std::size_t>(n)] = -pair_scale * raise;
  }
  return h;
}

// Up-spin count of the isotropic (anisotropy = 1) ground state. Ties at
// half-integer distance resolve towards larger M, i.e. round-half-away-from-zero
// for field >= 0. Ties are genuine degeneracies of two adjacent Dicke states.
inline int isotropic_ground_up_count(const LmgParams& params) {
  params.validate();
  detail::require(params.anisotropy == 1.0, "isotropic ground state requires anisotropy == 1");
  detail::require(params.field >= 0.0, "isotropic ground state requires field >= 0");
  const int n_spins = params.spin_count;
  if (params.field >= 1.0) return n_spins;
  const double half = n_spins / 2.0;
  const auto up = static_cast<int>(std::floor(params.field * half + half + 0.5));
  return std::min(up, n_spins);
}

// Jz eigenvalue M of the isotropic ground state; half-integer for odd N.
inline double isotropic_ground_m(const LmgParams& params) {
  return isotropic_ground_up_count(params) - params.spin_count / 2.0;
}

inline double isotropic_ground_energy(const LmgParams& params, double m) {
  params.validate();
  detail::require(params.anisotropy == 1.0, "isotropic ground energy requires anisotropy == 1");
  const double count = params.spin_count;
  return params.coupling * (-count / 2.0 + 2.0 / count * m * m) - 2.0 * params.field * m;
}

}  // namespace lmg
