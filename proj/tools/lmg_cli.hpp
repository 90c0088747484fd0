#pragma once

// Command-line front end. Kept header-only so the tests can drive `run`
// in-process and compare its output byte for byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmg/lmg.hpp"

namespace lmg::cli {

// Thrown when --help was requested; carries the formatted help text.
class help_requested : public std::runtime_error {
 public:
  explicit help_requested(const std::string& text) : std::runtime_error(text) {}
};

// Everything a subcommand needs. Raw flag text is kept next to the resolved
// values so one validation pass can report every problem at once.
struct RunConfig {
  std::string command;
  std::string kind;  // fit only: iso, a, b, f

  int n = 0;
  int l = 0;
  double gamma = 0.0;
  double h = 0.0;
  double ratio = 0.25;
  int max_n = 10;
  int min_n = 4;
  std::size_t workers = 0;
  std::string model = "exact";

  bool l_given = false;
  bool n_given = false;

  std::string n_text;
  std::string l_grid_text;
  std::string h_grid_text;
  std::string gamma_grid_text;
  double h_min = 0.85;
  double h_max = 0.98;
  double h_step = 0.0025;

  std::string out_path;
  std::string json_path;
  std::string spectrum_csv_path;

  // Filled in by resolve().
  std::vector<int> sizes;
  std::vector<int> l_grid;
  std::vector<double> h_grid;
  std::vector<double> gamma_grid;
};

namespace detail {

class Problems {
 public:
  void check(bool ok, const std::string& message) {
    if (!ok) items_.push_back(message);
  }

  template <typename Fn>
  void attempt(Fn&& fn) {
    try {
      fn();
    } catch (const usage_error& e) {
      items_.emplace_back(e.what());
    }
  }

  void raise() const {
    if (items_.empty()) return;
    std::string message = items_.size() == 1 ? "invalid arguments: " : "invalid arguments:";
    for (const auto& item : items_) message += (items_.size() == 1 ? "" : "\n  - ") + item;
    throw usage_error(message);
  }

 private:
  std::vector<std::string> items_;
};

inline std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

// Reads `key = value` lines (with # comments) into `--key=value` tokens.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("--config: cannot read '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    const std::string where = path + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw usage_error("--config: expected key = value at " + where);
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    const bool key_ok = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
      return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '-';
    });
    if (!key_ok || key == "config") throw usage_error("--config: invalid key '" + key + "' at " + where);
    if (value.empty()) throw usage_error("--config: empty value for '" + key + "' at " + where);
    entries.emplace_back(key, value);
  }
  return entries;
}

inline bool flag_present(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Appends config-file entries for every flag not already on the command line.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const auto original = args;
  for (const auto& [key, value] : read_config_file(path)) {
    if (!flag_present(original, "--" + key)) args.push_back("--" + key + "=" + value);
  }
  return args;
}

inline std::string format_number(double value) {
  std::ostringstream os;
  os << std::setprecision(12) << value;
  return os.str();
}

inline std::string grid_text(int start, int stop, int step) {
  return std::to_string(start) + ":" + std::to_string(stop) + ":" + std::to_string(step);
}

}  // namespace detail

// Parses arguments (without the program name) into a RunConfig, applying the
// config file if one is named. Grids are resolved separately by resolve().
inline RunConfig parse_arguments(const std::vector<std::string>& raw_args) {
  const auto args = detail::merge_config(raw_args);
  RunConfig cfg;
  std::string config_path;
  long workers = 0;

  CLI::App app{"Block entanglement of the Lipkin-Meshkov-Glick model in the Dicke basis", "lmg"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.add_option("--config", config_path, "key = value file; command-line flags take precedence");
  app.add_option("--workers", workers, "worker threads (default: LMG_WORKERS or the number of cores)");

  auto add_common = [&](CLI::App* sub) {
    sub->fallthrough();
    return sub;
  };

  auto* point = add_common(app.add_subcommand("point", "ground state, block entropy and entanglement spectrum"));
  point->add_option("--n", cfg.n, "number of spins")->default_val(500);
  point->add_option("--gamma", cfg.gamma, "anisotropy")->default_val(0.0);
  point->add_option("--h", cfg.h, "transverse field")->default_val(0.0);
  auto* point_l = point->add_option("--l", cfg.l, "block size (default N/4)");
  point->add_option("--spectrum-csv", cfg.spectrum_csv_path, "also write the spectrum as CSV");

  auto* sweep = add_common(app.add_subcommand("sweep", "entropy over a (gamma, h) grid at fixed N and L"));
  sweep->add_option("--n", cfg.n, "number of spins")->default_val(500);
  auto* sweep_l = sweep->add_option("--l", cfg.l, "block size (default N/4)");
  sweep->add_option("--gamma-grid", cfg.gamma_grid_text, "gamma values: list a,b,c or range start:stop:step")
      ->default_val("0:1:0.1");
  sweep->add_option("--h-grid", cfg.h_grid_text, "field values")->default_val("0:2:0.05");
  sweep->add_option("--out", cfg.out_path, "output CSV (default: standard output)");

  auto* scan_h = add_common(app.add_subcommand("scan-h", "entropy versus h at fixed L/N for several N"));
  scan_h->add_option("--n", cfg.n_text, "comma-separated system sizes")->default_val("200,400,800");
  scan_h->add_option("--ratio", cfg.ratio, "block fraction L/N")->default_val(0.25);
  scan_h->add_option("--gamma", cfg.gamma, "anisotropy")->default_val(0.0);
  scan_h->add_option("--h-grid", cfg.h_grid_text, "field values")->default_val("0:2:0.02");
  scan_h->add_option("--out", cfg.out_path, "output CSV (default: standard output)");

  auto* scan_l = add_common(app.add_subcommand("scan-l", "entropy versus block size on one ground state"));
  auto* scan_l_n = scan_l->add_option("--n", cfg.n, "number of spins")->default_val(2000);
  scan_l->add_option("--gamma", cfg.gamma, "anisotropy")->default_val(0.0);
  scan_l->add_option("--h", cfg.h, "transverse field")->default_val(1.0);
  scan_l->add_option("--l-grid", cfg.l_grid_text, "block sizes (default N/40 .. N/2)");
  scan_l->add_option("--out", cfg.out_path, "output CSV (default: standard output)");

  auto* scan_gamma = add_common(app.add_subcommand("scan-gamma", "entropy versus anisotropy"));
  scan_gamma->add_option("--n", cfg.n, "number of spins")->default_val(2000);
  auto* scan_gamma_l = scan_gamma->add_option("--l", cfg.l, "block size (default N/4)");
  scan_gamma->add_option("--h", cfg.h, "transverse field")->default_val(1.0);
  scan_gamma->add_option("--gamma-grid", cfg.gamma_grid_text, "gamma values")->default_val("-1:0.9:0.05");
  scan_gamma->add_option("--out", cfg.out_path, "output CSV (default: standard output)");

  auto* fit = add_common(app.add_subcommand("fit", "fit a scaling coefficient: iso, a, b or f"));
  fit->add_option("kind", cfg.kind, "coefficient to fit")->required()->check(CLI::IsMember({"iso", "a", "b", "f"}));
  auto* fit_n = fit->add_option("--n", cfg.n, "number of spins")->default_val(2000);
  auto* fit_l = fit->add_option("--l", cfg.l, "block size (a: default N/2, f: default N/4)");
  fit->add_option("--gamma", cfg.gamma, "anisotropy (a, b)")->default_val(0.0);
  fit->add_option("--h", cfg.h, "transverse field (iso)")->default_val(0.0);
  fit->add_option("--l-grid", cfg.l_grid_text, "block sizes (iso: default N/40..N/2, b: N/20..N/2)");
  fit->add_option("--h-min", cfg.h_min, "lower end of the field window (a)")->default_val(0.85);
  fit->add_option("--h-max", cfg.h_max, "upper end of the field window (a)")->default_val(0.98);
  fit->add_option("--h-step", cfg.h_step, "field step (a)")->default_val(0.0025);
  fit->add_option("--gamma-grid", cfg.gamma_grid_text, "anisotropies (f)")->default_val("-1:0.75:0.25");
  fit->add_option("--model", cfg.model, "entropy model for iso")->default_val("exact")->check(
      CLI::IsMember({"exact", "gaussian"}));
  fit->add_option("--json", cfg.json_path, "write the report as JSON ('-' for standard output)");

  auto* verify = add_common(app.add_subcommand("verify", "compare against the full-Hilbert-space oracle"));
  verify->add_option("--max-n", cfg.max_n, "largest N compared (at most 14)")->default_val(10);
  verify->add_option("--min-n", cfg.min_n, "smallest N compared")->default_val(4);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = app.exit(e, out, err);
    if (code == 0) throw help_requested(out.str());
    throw usage_error(detail::trim(err.str()));
  }

  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  cfg.l_given = point_l->count() + sweep_l->count() + scan_gamma_l->count() + fit_l->count() > 0;
  cfg.n_given = scan_l_n->count() + fit_n->count() > 0;
  if (workers < 0) throw usage_error("--workers must be >= 1, got " + std::to_string(workers));
  cfg.workers = workers > 0 ? static_cast<std::size_t>(workers) : default_workers();
  (void)config_path;
  return cfg;
}

// Fills defaults that depend on N, parses grids, and checks every
// precondition, reporting all problems in one usage_error.
inline void resolve(RunConfig& cfg) {
  detail::Problems problems;
  const auto& cmd = cfg.command;
  const bool single_n = cmd != "scan-h" && cmd != "verify";

  if (single_n) problems.check(cfg.n >= 2, "--n must be >= 2, got " + std::to_string(cfg.n));
  const bool n_ok = !single_n || cfg.n >= 2;

  const bool uses_l = cmd == "point" || cmd == "sweep" || cmd == "scan-gamma" || (cmd == "fit" && (cfg.kind == "a" || cfg.kind == "f"));
  if (uses_l) {
    if (!cfg.l_given) cfg.l = (cmd == "fit" && cfg.kind == "a") ? cfg.n / 2 : cfg.n / 4;
    if (!cfg.l_given && cfg.l < 1) cfg.l = 1;
    problems.check(!n_ok || (cfg.l >= 1 && cfg.l <= cfg.n - 1),
                   "--l must lie in [1, N-1] = [1, " + std::to_string(cfg.n - 1) + "], got " + std::to_string(cfg.l));
  }

  auto finite = [&](double v, const char* flag) {
    problems.check(std::isfinite(v), std::string(flag) + " must be finite");
  };
  finite(cfg.gamma, "--gamma");
  finite(cfg.h, "--h");
  const bool uses_h = cmd == "point" || cmd == "scan-l" || cmd == "scan-gamma" || (cmd == "fit" && cfg.kind == "iso");
  if (uses_h) problems.check(!(cfg.h < 0.0), "--h must be >= 0, got " + detail::format_number(cfg.h));

  auto parse_doubles = [&](const std::string& text, const char* flag, std::vector<double>& into) {
    problems.attempt([&] {
      try {
        into = io::parse_grid(text);
      } catch (const usage_error& e) {
        throw usage_error(std::string(flag) + ": " + e.what());
      }
      for (double v : into) {
        if (!std::isfinite(v)) throw usage_error(std::string(flag) + ": values must be finite");
      }
    });
  };
  auto parse_ints = [&](const std::string& text, const char* flag, std::vector<int>& into) {
    problems.attempt([&] {
      try {
        into = io::parse_int_grid(text);
      } catch (const usage_error& e) {
        throw usage_error(std::string(flag) + ": " + e.what());
      }
    });
  };
  auto check_blocks = [&](const std::vector<int>& blocks) {
    for (int l : blocks) {
      if (l < 1 || l > cfg.n - 1) {
        problems.check(false, "--l-grid: block sizes must lie in [1, N-1] = [1, " + std::to_string(cfg.n - 1) +
                                  "], got " + std::to_string(l));
        return;
      }
    }
  };
  auto check_fields = [&](const char* flag) {
    for (double h : cfg.h_grid) {
      if (h < 0.0) {
        problems.check(false, std::string(flag) + ": field values must be >= 0");
        return;
      }
    }
  };

  if (cmd == "sweep") {
    parse_doubles(cfg.gamma_grid_text, "--gamma-grid", cfg.gamma_grid);
    parse_doubles(cfg.h_grid_text, "--h-grid", cfg.h_grid);
    check_fields("--h-grid");
  } else if (cmd == "scan-h") {
    parse_ints(cfg.n_text, "--n", cfg.sizes);
    parse_doubles(cfg.h_grid_text, "--h-grid", cfg.h_grid);
    check_fields("--h-grid");
    problems.check(cfg.ratio > 0.0 && cfg.ratio < 1.0,
                   "--ratio must lie in (0, 1), got " + detail::format_number(cfg.ratio));
    if (cfg.ratio > 0.0 && cfg.ratio < 1.0) {
      for (int n : cfg.sizes) {
        const long l = std::lround(cfg.ratio * n);
        if (n < 2 || l < 1 || l > n - 1) {
          problems.check(false, "--n: size " + std::to_string(n) + " gives no valid block at ratio " +
                                    detail::format_number(cfg.ratio));
          break;
        }
      }
    }
  } else if (cmd == "scan-l") {
    if (cfg.l_grid_text.empty() && n_ok) {
      const int step = std::max(1, cfg.n / 40);
      cfg.l_grid_text = detail::grid_text(step, cfg.n / 2, step);
    }
    parse_ints(cfg.l_grid_text, "--l-grid", cfg.l_grid);
    if (n_ok) check_blocks(cfg.l_grid);
  } else if (cmd == "scan-gamma") {
    parse_doubles(cfg.gamma_grid_text, "--gamma-grid", cfg.gamma_grid);
  } else if (cmd == "fit") {
    if (cfg.kind == "iso" || cfg.kind == "b") {
      if (cfg.l_grid_text.empty() && n_ok) {
        const int step = std::max(1, cfg.n / (cfg.kind == "iso" ? 40 : 20));
        cfg.l_grid_text = detail::grid_text(step, cfg.n / 2, step);
      }
      parse_ints(cfg.l_grid_text, "--l-grid", cfg.l_grid);
      if (n_ok) check_blocks(cfg.l_grid);
      if (cfg.kind == "iso") {
        problems.check(cfg.h >= 0.0 && cfg.h < 1.0, "--h: the isotropic fit needs 0 <= h < 1");
      } else {
        problems.check(cfg.gamma != 1.0, "--gamma: fit b needs gamma != 1");
      }
    } else if (cfg.kind == "a") {
      problems.check(cfg.gamma != 1.0, "--gamma: fit a needs gamma != 1");
      const double floor = n_ok ? field_window_floor(cfg.n) : 0.0;
      for (const auto& [flag, value] : {std::pair{"--h-min", cfg.h_min}, std::pair{"--h-max", cfg.h_max}}) {
        problems.check(std::isfinite(value) && value > 0.0, std::string(flag) + " must be positive");
        problems.check(!(std::abs(1.0 - value) < floor),
                       std::string(flag) + "=" + detail::format_number(value) + " lies within the finite-size floor " +
                           "N^(-2/3) = " + detail::format_number(floor) + " of h=1");
      }
      problems.check(cfg.h_min < cfg.h_max, "--h-min must be below --h-max");
      problems.check((cfg.h_min < 1.0) == (cfg.h_max < 1.0), "--h-min and --h-max must lie on the same side of h=1");
      problems.check(cfg.h_step > 0.0, "--h-step must be positive");
      if (cfg.h_min < cfg.h_max && cfg.h_step > 0.0) {
        problems.attempt([&] {
          cfg.h_grid = io::parse_grid(io::format_double(cfg.h_min) + ":" + io::format_double(cfg.h_max) + ":" +
                                      io::format_double(cfg.h_step));
        });
        problems.check(cfg.h_grid.size() >= 2, "--h-step leaves fewer than two field values in the window");
      }
    } else if (cfg.kind == "f") {
      parse_doubles(cfg.gamma_grid_text, "--gamma-grid", cfg.gamma_grid);
      for (double g : cfg.gamma_grid) {
        if (g < -1.0 || g > kMaxFitGamma) {
          problems.check(false, "--gamma-grid: values must lie in [-1, " + detail::format_number(kMaxFitGamma) + "]");
          break;
        }
      }
    }
  } else if (cmd == "verify") {
    problems.check(cfg.max_n <= oracle::kMaxSpins, "--max-n must be <= " + std::to_string(oracle::kMaxSpins) +
                                                       " (oracle cap), got " + std::to_string(cfg.max_n));
    problems.check(cfg.min_n >= 2, "--min-n must be >= 2");
    problems.check(cfg.min_n <= cfg.max_n, "--min-n must not exceed --max-n");
  }
  problems.raise();
}

namespace detail {

inline void emit_csv(const RunConfig& cfg, const std::vector<SweepRecord>& records, std::ostream& out) {
  if (cfg.out_path.empty() || cfg.out_path == "-") {
    io::write_csv(out, records);
  } else {
    io::write_csv_file(cfg.out_path, records);
  }
}

inline void run_point(const RunConfig& cfg, std::ostream& out) {
  // Open the optional output first so a bad path fails before the solve.
  std::ofstream spectrum_file;
  if (!cfg.spectrum_csv_path.empty()) {
    spectrum_file.open(cfg.spectrum_csv_path, std::ios::binary | std::ios::trunc);
    if (!spectrum_file) throw usage_error("--spectrum-csv: cannot open '" + cfg.spectrum_csv_path + "'");
  }
  const auto result = evaluate_point(cfg.n, cfg.l, cfg.gamma, cfg.h);
  const auto& r = result.record;
  out << "N = " << r.n << ", L = " << r.l << ", gamma = " << io::format_double(r.gamma)
      << ", h = " << io::format_double(r.h) << '\n';
  out << "ground_energy = " << io::format_double(r.ground_energy) << '\n';
  out << "entropy_bits  = " << io::format_double(r.entropy_bits) << '\n';
  out << "largest_prob  = " << io::format_double(r.largest_prob) << '\n';
  out << "bound log2(L+1) = " << io::format_double(std::log2(r.l + 1.0)) << '\n';
  out << "spectrum (" << result.spectrum.probs.size() << " values, descending):\n";
  for (std::size_t i = 0; i < result.spectrum.probs.size(); ++i) {
    out << "  " << i << ' ' << io::format_double(result.spectrum.probs[i]) << '\n';
  }
  if (spectrum_file.is_open()) {
    spectrum_file << "index,prob,cumulant\n";
    for (std::size_t i = 0; i < result.spectrum.probs.size(); ++i) {
      spectrum_file << i << ',' << io::format_double(result.spectrum.probs[i]) << ','
                    << io::format_double(result.spectrum.cumulants[i]) << '\n';
    }
    spectrum_file.flush();
    if (!spectrum_file) throw usage_error("--spectrum-csv: failed writing '" + cfg.spectrum_csv_path + "'");
  }
}

inline nlohmann::ordered_json report_json(const CoefficientReport& report) {
  nlohmann::ordered_json j;
  j["name"] = to_string(report.name);
  j["fitted_value"] = report.fitted_value;
  j["window"] = report.window;
  j["residual_rms"] = report.fit.residual_rms;
  j["fit"] = {{"slope", report.fit.slope},
              {"intercept", report.fit.intercept},
              {"residual_rms", report.fit.residual_rms},
              {"point_count", report.fit.point_count}};
  j["note"] = report.note;
  auto points = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.abscissae.size(); ++i) {
    points.push_back({{"x", report.abscissae[i]}, {"entropy", report.entropies[i]}});
  }
  j["points"] = std::move(points);
  return j;
}

inline void run_fit(const RunConfig& cfg, std::ostream& out) {
  std::ofstream json_file;
  if (!cfg.json_path.empty() && cfg.json_path != "-") {
    json_file.open(cfg.json_path, std::ios::binary | std::ios::trunc);
    if (!json_file) throw usage_error("--json: cannot open '" + cfg.json_path + "'");
  }
  CoefficientReport report;
  if (cfg.kind == "iso") {
    report = fit_iso_prefactor(cfg.n, cfg.l_grid, cfg.h, cfg.model == "gaussian" ? EntropyModel::gaussian : EntropyModel::exact);
  } else if (cfg.kind == "a") {
    report = fit_a(cfg.n, cfg.l, cfg.gamma, cfg.h_grid, cfg.workers);
  } else if (cfg.kind == "b") {
    report = fit_b(cfg.n, cfg.gamma, cfg.l_grid, cfg.workers);
  } else {
    report = fit_f(cfg.n, cfg.l, cfg.gamma_grid, cfg.workers);
  }
  if (cfg.json_path == "-") {
    out << report_json(report).dump(2) << '\n';
    return;
  }
  out << "coefficient  = " << to_string(report.name) << '\n';
  out << "fitted_value = " << io::format_double(report.fitted_value) << '\n';
  out << "window       = " << report.window << '\n';
  out << "intercept    = " << io::format_double(report.fit.intercept) << '\n';
  out << "residual_rms = " << io::format_double(report.fit.residual_rms) << '\n';
  out << "points       = " << report.fit.point_count << '\n';
  out << "note         = " << report.note << '\n';
  if (json_file.is_open()) {
    json_file << report_json(report).dump(2) << '\n';
    json_file.flush();
    if (!json_file) throw usage_error("--json: failed writing '" + cfg.json_path + "'");
  }
}

// Returns the exit code: 0 when every deviation is below 1e-8.
inline int run_verify(const RunConfig& cfg, std::ostream& out) {
  EquivalenceGrid grid;
  grid.min_n = cfg.min_n;
  grid.max_n = cfg.max_n;
  const auto report = run_equivalence(grid, cfg.workers);
  constexpr double tolerance = 1e-8;
  out << "compared points: " << report.comparisons.size() << '\n';
  out << "max entropy deviation: " << io::format_double(report.max_deviation()) << '\n';
  if (const auto* w = report.worst()) {
    out << "worst point: " << lmg::detail::describe_point(w->n, w->l, w->gamma, w->h) << '\n';
  }
  out << "degenerate points skipped: " << report.skipped.size() << '\n';
  for (const auto& s : report.skipped) {
    out << "  N=" << s.n << " gamma=" << io::format_double(s.gamma) << " h=" << io::format_double(s.h)
        << " gap=" << io::format_double(s.gap) << '\n';
  }
  int breaches = 0;
  for (const auto& c : report.comparisons) {
    if (!(c.deviation() < tolerance)) {
      ++breaches;
      out << "DEVIATION " << io::format_double(c.deviation()) << " at N=" << c.n << " L=" << c.l
          << " gamma=" << io::format_double(c.gamma) << " h=" << io::format_double(c.h) << '\n';
    }
  }
  out << (breaches == 0 ? "verify: ok" : "verify: FAILED") << '\n';
  return breaches == 0 ? 0 : 1;
}

}  // namespace detail

inline int execute(const RunConfig& cfg, std::ostream& out) {
  const auto& cmd = cfg.command;
  if (cmd == "point") {
    detail::run_point(cfg, out);
  } else if (cmd == "sweep") {
    detail::emit_csv(cfg, sweep_plane(cfg.n, cfg.l, cfg.gamma_grid, cfg.h_grid, cfg.workers), out);
  } else if (cmd == "scan-h") {
    detail::emit_csv(cfg, scan_h_fixed_ratio(cfg.sizes, cfg.ratio, cfg.gamma, cfg.h_grid, cfg.workers), out);
  } else if (cmd == "scan-l") {
    detail::emit_csv(cfg, scan_l(cfg.n, cfg.gamma, cfg.h, cfg.l_grid, cfg.workers), out);
  } else if (cmd == "scan-gamma") {
    detail::emit_csv(cfg, scan_gamma(cfg.n, cfg.l, cfg.h, cfg.gamma_grid, cfg.workers), out);
  } else if (cmd == "fit") {
    detail::run_fit(cfg, out);
  } else if (cmd == "verify") {
    return detail::run_verify(cfg, out);
  } else {
    throw usage_error("unknown command '" + cmd + "'");
  }
  return 0;
}

// Exit codes: 0 success, 1 numerical failure, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    auto cfg = parse_arguments(args);
    resolve(cfg);
    return execute(cfg, out);
  } catch (const help_requested& h) {
    out << h.what();
    return 0;
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lmg::cli
