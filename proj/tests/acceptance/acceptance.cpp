// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lmg/lmg.hpp"
#include "lmg_cli.hpp"

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_seconds;
  std::function<Verdict()> check;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

std::vector<int> int_range(int start, int stop, int step) {
  std::vector<int> out;
  for (int v = start; v <= stop; v += step) out.push_back(v);
  return out;
}

Verdict in_window(const lmg::CoefficientReport& report, double lo, double hi) {
  return {report.fitted_value >= lo && report.fitted_value <= hi,
          fmt("%s = %.6f (window [%.2f, %.2f], residual_rms %.2e, %s)", lmg::to_string(report.name).c_str(),
              report.fitted_value, lo, hi, report.fit.residual_rms, report.window.c_str())};
}

Verdict oracle_equivalence() {
  lmg::EquivalenceGrid grid;
  grid.min_n = 4;
  grid.max_n = 12;
  const auto report = lmg::run_equivalence(grid, lmg::default_workers());
  const double worst = report.max_deviation();
  return {worst < 1e-8 && !report.comparisons.empty(),
          fmt("max |S_pipeline - S_oracle| = %.3e over %zu comparisons, %zu degenerate points skipped", worst,
              report.comparisons.size(), report.skipped.size())};
}

Verdict isotropic_prefactor() { return in_window(lmg::fit_iso_prefactor(2000, int_range(50, 1000, 50), 0.0), 0.45, 0.55); }

Verdict isotropic_field_law() {
  const int n = 500;
  const int l = 125;
  const double s0 = lmg::evaluate_point(n, l, 1.0, 0.0).record.entropy_bits;
  double worst = 0.0;
  double worst_h = 0.0;
  for (int k = 0; k <= 9; ++k) {
    const double h = 0.1 * k;
    const double s = lmg::evaluate_point(n, l, 1.0, h).record.entropy_bits;
    const double dev = std::abs((s - s0) - 0.5 * std::log2(1.0 - h * h));
    if (dev > worst) {
      worst = dev;
      worst_h = h;
    }
  }
  return {worst < 0.1, fmt("max deviation %.4f bits at h = %.1f", worst, worst_h)};
}

Verdict critical_scaling() {
  std::string detail;
  bool pass = true;
  for (double gamma : {0.0, 0.5}) {
    const auto v = in_window(lmg::fit_b(2000, gamma, int_range(100, 1000, 100), lmg::default_workers()), 0.28, 0.40);
    pass = pass && v.pass;
    detail += (detail.empty() ? "" : "; ") + v.detail;
  }
  return {pass, detail};
}

Verdict field_divergence() {
  const auto grid = lmg::io::parse_grid("0.85:0.98:0.0025");
  return in_window(lmg::fit_a(2000, 1000, 0.0, grid, lmg::default_workers()), 0.12, 0.22);
}

Verdict anisotropy_law() {
  const auto grid = lmg::io::parse_grid("-1:0.75:0.25");
  return in_window(lmg::fit_f(2000, 500, grid, lmg::default_workers()), 0.12, 0.20);
}

Verdict limits() {
  const double ghz = lmg::evaluate_point(500, 125, 0.0, 0.0).record.entropy_bits;
  const double polarized = lmg::evaluate_point(500, 125, 0.0, 20.0).record.entropy_bits;
  bool iso_zero = true;
  for (double h : {1.0, 1.25, 2.0, 5.0}) {
    for (int l : {1, 125, 250}) iso_zero = iso_zero && lmg::evaluate_point(500, l, 1.0, h).record.entropy_bits == 0.0;
  }
  return {ghz >= 0.95 && ghz <= 1.0 && polarized < 0.01 && iso_zero,
          fmt("S(gamma=0,h=0) = %.6f, S(gamma=0,h=20) = %.3e, isotropic h>=1 all exactly 0: %s", ghz, polarized,
              iso_zero ? "yes" : "no")};
}

Verdict bound_and_symmetry() {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> size(2, 600);
  std::uniform_real_distribution<double> gamma(-1.0, 1.0);
  std::uniform_real_distribution<double> field(0.0, 2.0);
  double worst_asym = 0.0;
  double worst_excess = -1e300;
  int failures = 0;
  for (int sample = 0; sample < 200; ++sample) {
    const int n = size(rng);
    const int l = std::uniform_int_distribution<int>(1, n - 1)(rng);
    const double g = gamma(rng);
    const double h = field(rng);
    const auto ground = lmg::eig_pentadiagonal_ground(lmg::build_hamiltonian({n, g, h, 1.0}));
    const double s = lmg::spectrum_of(lmg::reduce_block(ground.state, l)).entropy_bits;
    const double s_mirror = lmg::spectrum_of(lmg::reduce_block(ground.state, n - l)).entropy_bits;
    const double excess = s - std::log2(l + 1.0);
    const double asym = std::abs(s - s_mirror);
    worst_excess = std::max(worst_excess, excess);
    worst_asym = std::max(worst_asym, asym);
    if (!(excess <= 0.0) || !(asym < 1e-8)) ++failures;
  }
  return {failures == 0, fmt("200 samples: max S - log2(L+1) = %.3e, max |S(L) - S(N-L)| = %.3e", worst_excess,
                             worst_asym)};
}

Verdict majorization() {
  const std::vector<double> fields{1.2, 1.4, 1.6, 1.8, 2.0};
  const auto steps = lmg::majorization_chain(400, 100, 0.0, fields, lmg::default_workers());
  std::string detail;
  bool pass = true;
  for (const auto& step : steps) {
    pass = pass && step.relation == lmg::Majorization::y_majorizes_x;
    detail += fmt("%s%.1f->%.1f: %s", detail.empty() ? "" : ", ", step.h_from, step.h_to,
                  lmg::to_string(step.relation).c_str());
  }
  return {pass, detail};
}

Verdict gaussian_convergence() {
  std::vector<double> errors;
  for (int n : {100, 400, 1600}) {
    errors.push_back(std::abs(lmg::gaussian_entropy(n, n / 4, n / 2) - lmg::hypergeometric_entropy(n, n / 4, n / 2)));
  }
  const bool decreasing = errors[1] < errors[0] && errors[2] < errors[1];
  return {decreasing && errors[2] < 0.02,
          fmt("|error| at N=100, 400, 1600: %.3e, %.3e, %.3e", errors[0], errors[1], errors[2])};
}

Verdict determinism() {
  const std::vector<std::vector<std::string>> commands{
      {"sweep", "--n", "200", "--l", "50", "--gamma-grid", "-0.5:1:0.25", "--h-grid", "0:2:0.1"},
      {"scan-h", "--gamma", "0", "--ratio", "0.25", "--n", "200,400", "--h-grid", "0:2:0.05"},
      {"scan-l", "--n", "400", "--gamma", "0.5", "--h", "1"},
      {"scan-gamma", "--n", "400", "--l", "100", "--h", "1", "--gamma-grid", "-1:0.9:0.1"}};
  std::size_t bytes = 0;
  for (const auto& command : commands) {
    std::string reference;
    for (const char* workers : {"1", "3", "8"}) {
      auto args = command;
      args.insert(args.end(), {"--workers", workers});
      std::ostringstream out;
      std::ostringstream err;
      if (lmg::cli::run(args, out, err) != 0) return {false, command.front() + " failed: " + err.str()};
      if (reference.empty()) {
        reference = out.str();
        bytes += reference.size();
      } else if (out.str() != reference) {
        return {false, command.front() + " output differs with --workers " + workers};
      }
    }
  }
  return {true, fmt("4 commands x workers {1, 3, 8}: byte-identical CSV (%zu bytes each run set)", bytes)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", 300, oracle_equivalence},
      {2, "isotropic prefactor", 60, isotropic_prefactor},
      {3, "isotropic field law", 60, isotropic_field_law},
      {4, "anisotropic critical scaling", 600, critical_scaling},
      {5, "field divergence", 300, field_divergence},
      {6, "anisotropy law", 600, anisotropy_law},
      {7, "limits", 60, limits},
      {8, "entropy bound and Schmidt symmetry", 300, bound_and_symmetry},
      {9, "majorization chain", 60, majorization},
      {10, "gaussian approximation convergence", 60, gaussian_convergence},
      {11, "determinism across worker counts", 300, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.time_limit_seconds;
    const bool pass = v.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s criterion %2d (%s): %s [%.1f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str(),
                seconds, in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
