#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmg/error.hpp"
#include "lmg/model.hpp"

namespace lmg {

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t dim) {
    DenseMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  [[nodiscard]] const std::vector<double>& data() const { return data_; }

  [[nodiscard]] double max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::abs(v));
    return best;
  }

  [[nodiscard]] double norm_inf() const {
    double best = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      double sum = 0.0;
      for (double v : row(r)) sum += std::abs(v);
      best = std::max(best, sum);
    }
    return best;
  }

  [[nodiscard]] double trace() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) sum += (*this)(i, i);
    return sum;
  }

  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const {
    std::vector<double> y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto values = row(r);
      double sum = 0.0;
      for (std::size_t c = 0; c < cols_; ++c) sum += values[c] * x[c];
      y[r] = sum;
    }
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SymmetricEigenResult {
  std::vector<double> eigenvalues;          // ascending
  std::optional<DenseMatrix> eigenvectors;  // column k pairs with eigenvalues[k]
};

struct GroundState {
  double energy = 0.0;
  DickeVector state;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  std::size_t point_count = 0;
};

namespace detail {

inline constexpr int kSweepsPerEigenvalue = 50;
inline constexpr double kSymmetryTolerance = 1e-10;

// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
// diag and offdiag (offdiag[i] couples i and i+1, length >= n-1) are
// overwritten; on exit diag holds the unsorted eigenvalues. When rows is non
// null it holds one vector per row and receives the same rotations, so an
// identity input yields eigenvectors as rows.
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double> offdiag,
                           DenseMatrix* rows, const std::string& context) {
  const int n = static_cast<int>(diag.size());
  if (n <= 1) return;
  offdiag.resize(static_cast<std::size_t>(n), 0.0);
  offdiag[static_cast<std::size_t>(n - 1)] = 0.0;
  auto& d = diag;
  auto& e = offdiag;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  // Absolute deflation floor far below anything the callers resolve; it stops
  // the relative test from chasing eigenvalues that are zero to working precision.
  double norm = 0.0;
  for (int i = 0; i < n; ++i) norm = std::max(norm, std::abs(d[i]) + std::abs(e[i]) + (i > 0 ? std::abs(e[i - 1]) : 0.0));
  const double floor = eps * eps * norm;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) <= floor) break;
      }
      if (m != l) {
        if (iter++ == kSweepsPerEigenvalue) {
          throw numerical_error(context + ": QL iteration did not converge for eigenvalue " + std::to_string(l) +
                                " of " + std::to_string(n));
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (rows != nullptr) {
            auto lower = rows->row(static_cast<std::size_t>(i));
            auto upper = rows->row(static_cast<std::size_t>(i + 1));
            for (std::size_t k = 0; k < lower.size(); ++k) {
              f = upper[k];
              upper[k] = s * lower[k] + c * f;
              lower[k] = c * lower[k] - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Householder reduction of a symmetric matrix to tridiagonal form. The matrix
// is stored in full and both triangles are updated so every inner loop runs
// along a row. Returns (diag, offdiag); when want_vectors is set, a holds the
// orthogonal transform Q on exit with A = Q T Q^T.
inline std::pair<std::vector<double>, std::vector<double>> householder_tridiagonalize(DenseMatrix& a,
                                                                                      bool want_vectors) {
  const std::size_t n = a.rows();
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n, 0.0);  // e[i] couples i-1 and i
  std::vector<double> p(n, 0.0);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t l = i - 1;
    double h = 0.0;
    auto ri = a.row(i);
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t k = 0; k < i; ++k) scale += std::abs(ri[k]);
      if (scale == 0.0) {
        e[i] = ri[l];
      } else {
        for (std::size_t k = 0; k < i; ++k) {
          ri[k] /= scale;
          h += ri[k] * ri[k];
        }
        const double f = ri[l];
        const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        ri[l] = f - g;
        double k_num = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
          const auto rj = a.row(j);
          double sum = 0.0;
          for (std::size_t k = 0; k < i; ++k) sum += rj[k] * ri[k];
          p[j] = sum / h;
          k_num += p[j] * ri[j];
        }
        const double hh = k_num / (h + h);
        for (std::size_t j = 0; j < i; ++j) p[j] -= hh * ri[j];
        for (std::size_t j = 0; j < i; ++j) {
          auto rj = a.row(j);
          const double uj = ri[j];
          const double qj = p[j];
          for (std::size_t k = 0; k < i; ++k) rj[k] -= qj * ri[k] + uj * p[k];
        }
        if (want_vectors) {
          for (std::size_t j = 0; j < i; ++j) a(j, i) = ri[j] / h;
        }
      }
    } else {
      e[i] = ri[l];
    }
    d[i] = h;
  }
  d[0] = 0.0;
  if (!want_vectors) {
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] != 0.0) {
        for (std::size_t j = 0; j < i; ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
          for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
        }
      }
      d[i] = a(i, i);
      a(i, i) = 1.0;
      for (std::size_t j = 0; j < i; ++j) {
        a(j, i) = 0.0;
        a(i, j) = 0.0;
      }
    }
  }
  std::vector<double> offdiag(n > 0 ? n - 1 : 0);
  for (std::size_t i = 1; i < n; ++i) offdiag[i - 1] = e[i];
  return {std::move(d), std::move(offdiag)};
}

inline void check_symmetric(const DenseMatrix& a) {
  if (a.rows() != a.cols()) {
    throw usage_error("matrix is not square: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  const double tol = kSymmetryTolerance * std::max(a.max_abs(), std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!std::isfinite(a(i, j)) || !std::isfinite(a(j, i))) throw usage_error("matrix has non-finite entries");
      if (std::abs(a(i, j) - a(j, i)) > tol) {
        throw usage_error("matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
    if (!std::isfinite(a(i, i))) throw usage_error("matrix has non-finite entries");
  }
}

}  // namespace detail

// Eigenvalues (ascending) of a symmetric tridiagonal matrix.
inline std::vector<double> symmetric_tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> offdiag) {
  detail::tridiagonal_ql(diag, std::move(offdiag), nullptr, "tridiagonal eigensolver");
  std::sort(diag.begin(), diag.end());
  return diag;
}

// Full spectrum of a dense real symmetric matrix via Householder
// tridiagonalization followed by implicit QL.
inline SymmetricEigenResult eig_dense_symmetric(const DenseMatrix& matrix, bool want_vectors = true) {
  detail::check_symmetric(matrix);
  const std::size_t n = matrix.rows();
  SymmetricEigenResult result;
  if (n == 0) {
    if (want_vectors) result.eigenvectors = DenseMatrix();
    return result;
  }
  DenseMatrix work = matrix;
  auto [diag, offdiag] = detail::householder_tridiagonalize(work, want_vectors);
  if (!want_vectors) {
    detail::tridiagonal_ql(diag, std::move(offdiag), nullptr, "dense eigensolver");
    std::sort(diag.begin(), diag.end());
    result.eigenvalues = std::move(diag);
    return result;
  }
  // Rotate the rows of Q^T so that row k ends up as eigenvector k.
  DenseMatrix vt(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) vt(i, j) = work(j, i);
  }
  detail::tridiagonal_ql(diag, std::move(offdiag), &vt, "dense eigensolver");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
  DenseMatrix vectors(n, n);
  result.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    result.eigenvalues[k] = diag[order[k]];
    const auto source = vt.row(order[k]);
    for (std::size_t i = 0; i < n; ++i) vectors(i, k) = source[i];
  }
  result.eigenvectors = std::move(vectors);
  return result;
}

namespace detail {

// Lowest eigenpair of one parity block. Inverse iteration runs with a shift
// just below the QL minimum so the shifted matrix stays positive definite and
// an unpivoted LDL^T factorization is backward stable.
inline std::pair<double, std::vector<double>> lowest_tridiagonal_pair(const std::vector<double>& diag,
                                                                      const std::vector<double>& offdiag,
                                                                      const std::string& context) {
  const std::size_t n = diag.size();
  const bool decoupled = std::all_of(offdiag.begin(), offdiag.end(), [](double v) { return v == 0.0; });
  if (decoupled) {
    const auto it = std::min_element(diag.begin(), diag.end());
    std::vector<double> vec(n, 0.0);
    vec[static_cast<std::size_t>(it - diag.begin())] = 1.0;
    return {*it, std::move(vec)};
  }

  std::vector<double> evals = diag;
  tridiagonal_ql(evals, offdiag, nullptr, context);
  const double lowest = *std::min_element(evals.begin(), evals.end());

  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = std::abs(diag[i]);
    if (i + 1 < n) sum += std::abs(offdiag[i]);
    if (i > 0) sum += std::abs(offdiag[i - 1]);
    norm = std::max(norm, sum);
  }
  const double tol = 1e-13 * std::max(norm, 1.0);
  auto residual_of = [&](const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double hv = diag[i] * v[i];
      if (i + 1 < n) hv += offdiag[i] * v[i + 1];
      if (i > 0) hv += offdiag[i - 1] * v[i - 1];
      worst = std::max(worst, std::abs(hv - lowest * v[i]));
    }
    return worst;
  };

  std::vector<double> vec(n, 1.0);
  std::vector<double> pivots(n);
  std::vector<double> multipliers(n > 0 ? n - 1 : 0);
  double margin = 16.0 * std::numeric_limits<double>::epsilon() * std::max(norm, 1.0);
  for (int attempt = 0; attempt < kSweepsPerEigenvalue; ++attempt) {
    const double shift = lowest - margin;
    bool positive = true;
    for (std::size_t i = 0; i < n && positive; ++i) {
      pivots[i] = diag[i] - shift;
      if (i > 0) {
        multipliers[i - 1] = offdiag[i - 1] / pivots[i - 1];
        pivots[i] -= multipliers[i - 1] * offdiag[i - 1];
      }
      positive = pivots[i] > 0.0;
    }
    if (!positive) {
      margin *= 8.0;
      continue;
    }
    for (int sweep = 0; sweep < 4; ++sweep) {
      for (std::size_t i = 1; i < n; ++i) vec[i] -= multipliers[i - 1] * vec[i - 1];
      for (std::size_t i = 0; i < n; ++i) vec[i] /= pivots[i];
      for (std::size_t i = n - 1; i > 0; --i) vec[i - 1] -= multipliers[i - 1] * vec[i];
      double scale = 0.0;
      for (double v : vec) scale += v * v;
      scale = std::sqrt(scale);
      for (double& v : vec) v /= scale;
    }
    if (residual_of(vec) <= tol) return {lowest, std::move(vec)};
  }
  throw numerical_error(context + ": inverse iteration did not converge (block size " + std::to_string(n) + ")");
}

inline void fix_sign(std::vector<double>& vec) {
  double largest = 0.0;
  for (double v : vec) largest = std::max(largest, std::abs(v));
  for (double v : vec) {
    if (std::abs(v) > 1e-12 * largest) {
      if (v < 0.0) {
        for (double& w : vec) w = -w;
      }
      return;
    }
  }
}

}  // namespace detail

// Ground state of the Dicke-basis Hamiltonian. Entries couple n to n +- 2
// only, so even-n and odd-n indices are solved as two independent tridiagonal
// blocks. Near-ties between the block minima go to the even block.
inline GroundState eig_pentadiagonal_ground(const PentadiagonalSymmetric& h) {
  const std::size_t dim = h.dimension();
  detail::require(dim >= 1, "Hamiltonian has dimension 0");
  detail::require(h.second_superdiagonal.size() + 2 == dim || (dim == 1 && h.second_superdiagonal.empty()),
                  "second superdiagonal must have length dimension - 2");
  for (double v : h.diagonal) detail::require(std::isfinite(v), "Hamiltonian has non-finite entries");
  for (double v : h.second_superdiagonal) detail::require(std::isfinite(v), "Hamiltonian has non-finite entries");

  const double norm = h.norm_inf();
  std::optional<std::pair<double, std::vector<double>>> best;
  std::size_t best_parity = 0;
  for (std::size_t parity = 0; parity < 2 && parity < dim; ++parity) {
    std::vector<double> diag;
    std::vector<double> offdiag;
    for (std::size_t n = parity; n < dim; n += 2) {
      diag.push_back(h.diagonal[n]);
      if (n + 2 < dim) offdiag.push_back(h.second_superdiagonal[n]);
    }
    const std::string context = std::string(parity == 0 ? "even" : "odd") + " parity block of size " +
                                std::to_string(diag.size());
    auto pair = detail::lowest_tridiagonal_pair(diag, offdiag, context);
    if (!best || pair.first < best->first - 1e-12 * norm) {
      best = std::move(pair);
      best_parity = parity;
    }
  }
  GroundState ground;
  ground.energy = best->first;
  ground.state.spin_count = static_cast<int>(dim) - 1;
  ground.state.coeffs.assign(dim, 0.0);
  for (std::size_t k = 0; k < best->second.size(); ++k) ground.state.coeffs[best_parity + 2 * k] = best->second[k];
  detail::fix_sign(ground.state.coeffs);
  return ground;
}

// Ordinary least-squares line y = slope * x + intercept.
inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  detail::require(xs.size() == ys.size(), "fit_line: xs and ys differ in length");
  detail::require(xs.size() >= 2, "fit_line: need at least two points");
  const auto count = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    detail::require(std::isfinite(xs[i]) && std::isfinite(ys[i]), "fit_line: non-finite input");
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    sxx += dx * dx;
    sxy += dx * (ys[i] - mean_y);
  }
  const bool spread = std::any_of(xs.begin(), xs.end(), [&](double x) { return x != xs[0]; });
  detail::require(spread && sxx > 0.0, "fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    sum_sq += r * r;
  }
  fit.residual_rms = std::sqrt(sum_sq / count);
  fit.point_count = xs.size();
  return fit;
}

}  // namespace lmg
