#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "lmg/entanglement.hpp"
#include "lmg/error.hpp"
#include "lmg/linalg.hpp"
#include "lmg/model.hpp"

namespace lmg {

struct SweepRecord {
  int n = 0;
  int l = 0;
  double gamma = 0.0;
  double h = 0.0;
  double entropy_bits = 0.0;
  double largest_prob = 0.0;
  double ground_energy = 0.0;
};

struct PointResult {
  SweepRecord record;
  EntanglementSpectrum spectrum;
};

// Worker count from LMG_WORKERS, falling back to the number of logical cores.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("LMG_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && value >= 1) return static_cast<std::size_t>(value);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Runs fn(0..count-1) on a fixed pool and returns results in index order.
// If any call throws, the exception from the lowest index is rethrown.
template <typename Fn>
auto parallel_map(std::size_t count, std::size_t workers, Fn fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t pool = std::min(std::max<std::size_t>(workers, 1), std::max<std::size_t>(count, 1));
  if (pool <= 1) {
    drain();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(drain);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

namespace detail {

inline std::string describe_point(int n, int l, double gamma, double h) {
  std::ostringstream os;
  os << "(N=" << n << ", L=" << l << ", gamma=" << gamma << ", h=" << h << ")";
  return os.str();
}

// Re-raises library errors with the grid point appended, preserving the error kind.
template <typename Fn>
auto at_point(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const numerical_error& e) {
    throw numerical_error(std::string(e.what()) + " at " + where);
  } catch (const usage_error& e) {
    throw usage_error(std::string(e.what()) + " at " + where);
  }
}

inline void check_block(int n, int l) {
  require(n >= 2, "N must be >= 2 for a bipartition, got " + std::to_string(n));
  require(l >= 1 && l <= n - 1, "L must lie in [1, N-1], got L=" + std::to_string(l) + " for N=" + std::to_string(n));
}

inline PointResult evaluate_with_state(const GroundState& ground, int n, int l, double gamma, double h) {
  PointResult out;
  out.spectrum = spectrum_of(reduce_block(ground.state, l));
  out.record = SweepRecord{n, l, gamma, h, out.spectrum.entropy_bits, out.spectrum.largest_prob(), ground.energy};
  return out;
}

}  // namespace detail

// Full pipeline for one point: Hamiltonian, ground state, block reduction, spectrum.
inline PointResult evaluate_point(int n, int l, double gamma, double h) {
  detail::check_block(n, l);
  return detail::at_point(detail::describe_point(n, l, gamma, h), [&] {
    const auto ground = eig_pentadiagonal_ground(build_hamiltonian({n, gamma, h, 1.0}));
    return detail::evaluate_with_state(ground, n, l, gamma, h);
  });
}

// Records in gamma-major, then h order.
inline std::vector<SweepRecord> sweep_plane(int n, int l, const std::vector<double>& gamma_grid,
                                            const std::vector<double>& h_grid, std::size_t workers) {
  detail::require(!gamma_grid.empty() && !h_grid.empty(), "sweep grids must be nonempty");
  detail::check_block(n, l);
  return parallel_map(gamma_grid.size() * h_grid.size(), workers, [&](std::size_t i) {
    return evaluate_point(n, l, gamma_grid[i / h_grid.size()], h_grid[i % h_grid.size()]).record;
  });
}

inline int block_for_ratio(int n, double ratio) {
  detail::require(ratio > 0.0 && ratio < 1.0, "ratio L/N must lie in (0, 1)");
  const auto l = static_cast<int>(std::lround(ratio * n));
  detail::check_block(n, l);
  return l;
}

// h-scan at fixed L/N for several N; records in N-major, then h order.
inline std::vector<SweepRecord> scan_h_fixed_ratio(const std::vector<int>& sizes, double ratio, double gamma,
                                                   const std::vector<double>& h_grid, std::size_t workers) {
  detail::require(!sizes.empty() && !h_grid.empty(), "scan grids must be nonempty");
  std::vector<int> blocks;
  for (int n : sizes) blocks.push_back(block_for_ratio(n, ratio));
  return parallel_map(sizes.size() * h_grid.size(), workers, [&](std::size_t i) {
    const std::size_t k = i / h_grid.size();
    return evaluate_point(sizes[k], blocks[k], gamma, h_grid[i % h_grid.size()]).record;
  });
}

// h-scan at fixed (N, L).
inline std::vector<SweepRecord> scan_h(int n, int l, double gamma, const std::vector<double>& h_grid,
                                       std::size_t workers) {
  return sweep_plane(n, l, {gamma}, h_grid, workers);
}

// L-scan on a single ground state.
inline std::vector<SweepRecord> scan_l(int n, double gamma, double h, const std::vector<int>& l_grid,
                                       std::size_t workers) {
  detail::require(!l_grid.empty(), "L grid must be nonempty");
  for (int l : l_grid) detail::check_block(n, l);
  const auto ground = detail::at_point(detail::describe_point(n, l_grid.front(), gamma, h), [&] {
    return eig_pentadiagonal_ground(build_hamiltonian({n, gamma, h, 1.0}));
  });
  return parallel_map(l_grid.size(), workers, [&](std::size_t i) {
    const int l = l_grid[i];
    return detail::at_point(detail::describe_point(n, l, gamma, h),
                            [&] { return detail::evaluate_with_state(ground, n, l, gamma, h).record; });
  });
}

inline std::vector<SweepRecord> scan_gamma(int n, int l, double h, const std::vector<double>& gamma_grid,
                                           std::size_t workers) {
  detail::require(!gamma_grid.empty(), "gamma grid must be nonempty");
  return sweep_plane(n, l, gamma_grid, {h}, workers);
}

// Closed-form entropy at anisotropy 1, where the ground state is a single Dicke state.
enum class EntropyModel { exact, gaussian };

inline double isotropic_entropy(int n, int l, double h, EntropyModel model = EntropyModel::exact) {
  detail::check_block(n, l);
  const int up = isotropic_ground_up_count({n, 1.0, h, 1.0});
  return model == EntropyModel::exact ? hypergeometric_entropy(n, l, up) : gaussian_entropy(n, l, up);
}

enum class Coefficient { iso_prefactor, a, b, f };

inline std::string to_string(Coefficient c) {
  switch (c) {
    case Coefficient::iso_prefactor: return "iso_prefactor";
    case Coefficient::a: return "a";
    case Coefficient::b: return "b";
    case Coefficient::f: return "f";
  }
  return "unknown";
}

struct CoefficientReport {
  Coefficient name = Coefficient::iso_prefactor;
  double fitted_value = 0.0;
  std::string window;
  LineFit fit;
  std::string note;
  std::vector<double> abscissae;
  std::vector<double> entropies;
};

namespace detail {

inline std::string describe_values(const char* label, const std::vector<double>& values) {
  std::ostringstream os;
  os << label << " in [" << *std::min_element(values.begin(), values.end()) << ", "
     << *std::max_element(values.begin(), values.end()) << "], " << values.size() << " points";
  return os.str();
}

inline std::vector<double> block_abscissae(int n, const std::vector<int>& l_grid) {
  std::vector<double> xs;
  for (int l : l_grid) xs.push_back(std::log2(static_cast<double>(l) * (n - l) / n));
  return xs;
}

inline void require_spread(const std::vector<int>& l_grid) {
  require(l_grid.size() >= 2 && std::any_of(l_grid.begin(), l_grid.end(), [&](int l) { return l != l_grid[0]; }),
          "L grid needs at least two distinct block sizes");
}

}  // namespace detail

// Slope of S against log2(L (N - L) / N) for the isotropic ground state, h < 1.
inline CoefficientReport fit_iso_prefactor(int n, const std::vector<int>& l_grid, double h,
                                           EntropyModel model = EntropyModel::exact) {
  detail::require(h >= 0.0 && h < 1.0, "isotropic prefactor fit requires 0 <= h < 1");
  detail::require_spread(l_grid);
  CoefficientReport report;
  report.name = Coefficient::iso_prefactor;
  report.abscissae = detail::block_abscissae(n, l_grid);
  for (int l : l_grid) report.entropies.push_back(isotropic_entropy(n, l, h, model));
  report.fit = fit_line(report.abscissae, report.entropies);
  report.fitted_value = report.fit.slope;
  std::ostringstream os;
  os << "N=" << n << ", gamma=1, h=" << h << ", L in [" << *std::min_element(l_grid.begin(), l_grid.end()) << ", "
     << *std::max_element(l_grid.begin(), l_grid.end()) << "] (" << l_grid.size() << " sizes)";
  report.window = os.str();
  report.note = "slope of S vs log2(L(N-L)/N) at gamma=1; asymptotic prefactor 1/2";
  return report;
}

// Closest approach to h = 1 allowed in a field-divergence fit. Inside
// |1 - h| ~ N^(-2/3) the finite-size gap rounds off the divergence.
inline double field_window_floor(int n) { return std::pow(static_cast<double>(n), -2.0 / 3.0); }

// Slope of S against -log2|1 - h| from precomputed samples.
inline CoefficientReport fit_a_from_samples(const std::vector<double>& h_grid, const std::vector<double>& entropies) {
  detail::require(h_grid.size() == entropies.size(), "fit a: grids differ in length");
  detail::require(h_grid.size() >= 2, "fit a: need at least two field values");
  const bool below = h_grid.front() < 1.0;
  for (double h : h_grid) {
    detail::require(h != 1.0, "fit a: field window touches the critical point h=1");
    detail::require((h < 1.0) == below, "fit a: field window straddles h=1");
  }
  CoefficientReport report;
  report.name = Coefficient::a;
  for (double h : h_grid) report.abscissae.push_back(-std::log2(std::abs(1.0 - h)));
  report.entropies = entropies;
  report.fit = fit_line(report.abscissae, report.entropies);
  report.fitted_value = report.fit.slope;
  report.window = detail::describe_values("h", h_grid);
  report.note =
      "slope of S vs -log2|1-h|; finite-size fits give about 1/6, the exact N->infinity coefficient is 1/4";
  return report;
}

inline CoefficientReport fit_a(int n, int l, double gamma, const std::vector<double>& h_grid, std::size_t workers) {
  detail::require(gamma != 1.0, "fit a requires gamma != 1");
  detail::require(h_grid.size() >= 2, "fit a: need at least two field values");
  const double floor = field_window_floor(n);
  for (double h : h_grid) {
    detail::require(h > 0.0, "fit a: field values must be positive");
    if (std::abs(1.0 - h) < floor) {
      std::ostringstream os;
      os << "fit a: field h=" << h << " is within " << floor << " of h=1 (finite-size floor N^(-2/3))";
      throw usage_error(os.str());
    }
  }
  std::vector<double> entropies;
  for (const auto& r : scan_h(n, l, gamma, h_grid, workers)) entropies.push_back(r.entropy_bits);
  auto report = fit_a_from_samples(h_grid, entropies);
  std::ostringstream os;
  os << "N=" << n << ", L=" << l << ", gamma=" << gamma << ", " << report.window;
  report.window = os.str();
  return report;
}

// Slope of S at h = 1 against log2(L (N - L) / N).
inline CoefficientReport fit_b(int n, double gamma, const std::vector<int>& l_grid, std::size_t workers) {
  detail::require(gamma != 1.0, "fit b requires gamma != 1 (gamma = 1 follows the isotropic law)");
  detail::require_spread(l_grid);
  CoefficientReport report;
  report.name = Coefficient::b;
  report.abscissae = detail::block_abscissae(n, l_grid);
  for (const auto& r : scan_l(n, gamma, 1.0, l_grid, workers)) report.entropies.push_back(r.entropy_bits);
  report.fit = fit_line(report.abscissae, report.entropies);
  report.fitted_value = report.fit.slope;
  std::ostringstream os;
  os << "N=" << n << ", gamma=" << gamma << ", h=1, L in [" << *std::min_element(l_grid.begin(), l_grid.end())
     << ", " << *std::max_element(l_grid.begin(), l_grid.end()) << "] (" << l_grid.size() << " sizes)";
  report.window = os.str();
  report.note =
      "slope of S vs log2(L(N-L)/N) at h=1; finite-size fits give about 1/3, the exact N->infinity prefactor is 1/2";
  return report;
}

// Largest anisotropy accepted by the gamma fit; gamma -> 1 and N -> infinity do not commute.
inline constexpr double kMaxFitGamma = 0.9;

// Slope of S(gamma) - S(0) against log2(1 - gamma) from precomputed differences.
inline CoefficientReport fit_f_from_samples(const std::vector<double>& gamma_grid,
                                            const std::vector<double>& entropy_differences) {
  detail::require(gamma_grid.size() == entropy_differences.size(), "fit f: grids differ in length");
  for (double g : gamma_grid) detail::require(g < 1.0, "fit f: gamma grid must stay below 1");
  detail::require(gamma_grid.size() >= 2 && std::any_of(gamma_grid.begin(), gamma_grid.end(),
                                                         [&](double g) { return g != gamma_grid[0]; }),
                  "fit f: gamma grid needs at least two distinct values");
  CoefficientReport report;
  report.name = Coefficient::f;
  for (double g : gamma_grid) report.abscissae.push_back(std::log2(1.0 - g));
  report.entropies = entropy_differences;
  report.fit = fit_line(report.abscissae, report.entropies);
  report.fitted_value = report.fit.slope;
  report.window = detail::describe_values("gamma", gamma_grid);
  report.note = "slope of S(gamma)-S(0) vs log2(1-gamma) at h=1; expected about 1/6";
  return report;
}

inline CoefficientReport fit_f(int n, int l, const std::vector<double>& gamma_grid, std::size_t workers) {
  for (double g : gamma_grid) {
    detail::require(g >= -1.0 && g <= kMaxFitGamma,
                    "fit f: gamma values must lie in [-1, " + std::to_string(kMaxFitGamma) + "], got " + std::to_string(g));
  }
  detail::require(gamma_grid.size() >= 2 && std::any_of(gamma_grid.begin(), gamma_grid.end(),
                                                         [&](double g) { return g != gamma_grid[0]; }),
                  "fit f: gamma grid needs at least two distinct values");
  std::vector<double> grid = gamma_grid;
  grid.push_back(0.0);
  const auto records = scan_gamma(n, l, 1.0, grid, workers);
  const double reference = records.back().entropy_bits;
  std::vector<double> differences;
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) differences.push_back(records[i].entropy_bits - reference);
  auto report = fit_f_from_samples(gamma_grid, differences);
  std::ostringstream os;
  os << "N=" << n << ", L=" << l << ", h=1, " << report.window;
  report.window = os.str();
  return report;
}

struct MajorizationStep {
  double h_from = 0.0;
  double h_to = 0.0;
  Majorization relation = Majorization::incomparable;  // x = spectrum at h_from, y = spectrum at h_to
};

// Compares the entanglement spectra at consecutive fields of the sequence.
inline std::vector<MajorizationStep> majorization_chain(int n, int l, double gamma, const std::vector<double>& h_sequence,
                                                        std::size_t workers) {
  detail::require(h_sequence.size() >= 2, "majorization chain needs at least two fields");
  const auto spectra = parallel_map(h_sequence.size(), workers,
                                    [&](std::size_t i) { return evaluate_point(n, l, gamma, h_sequence[i]).spectrum; });
  std::vector<MajorizationStep> steps;
  for (std::size_t i = 0; i + 1 < h_sequence.size(); ++i) {
    steps.push_back({h_sequence[i], h_sequence[i + 1], majorization_compare(spectra[i], spectra[i + 1])});
  }
  return steps;
}

}  // namespace lmg
