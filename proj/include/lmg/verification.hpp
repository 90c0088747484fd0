#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lmg/entanglement.hpp"
#include "lmg/error.hpp"
#include "lmg/linalg.hpp"
#include "lmg/model.hpp"
#include "lmg/oracle.hpp"
#include "lmg/sweeps.hpp"

namespace lmg {

// Ground-state pairs closer than this are treated as degenerate: the ground
// vector is not unique and the two pipelines may legitimately pick different ones.
inline constexpr double kDegeneracyGap = 1e-10;

struct EquivalenceGrid {
  int min_n = 4;
  int max_n = 10;
  std::vector<double> gammas{-0.5, 0.0, 0.5, 1.0};
  std::vector<double> fields{0.0, 0.5, 1.0, 1.5};
};

struct EquivalenceComparison {
  int n = 0;
  int l = 0;
  double gamma = 0.0;
  double h = 0.0;
  double pipeline_entropy = 0.0;
  double oracle_entropy = 0.0;

  [[nodiscard]] double deviation() const { return std::abs(pipeline_entropy - oracle_entropy); }
};

struct SkippedPoint {
  int n = 0;
  double gamma = 0.0;
  double h = 0.0;
  double gap = 0.0;
};

struct EquivalenceReport {
  std::vector<EquivalenceComparison> comparisons;
  std::vector<SkippedPoint> skipped;

  [[nodiscard]] double max_deviation() const {
    double worst = 0.0;
    for (const auto& c : comparisons) worst = std::max(worst, c.deviation());
    return worst;
  }

  [[nodiscard]] const EquivalenceComparison* worst() const {
    const EquivalenceComparison* w = nullptr;
    for (const auto& c : comparisons) {
      if (w == nullptr || c.deviation() > w->deviation()) w = &c;
    }
    return w;
  }
};

// Block sizes compared at each N: a single spin and half the system.
inline std::vector<int> equivalence_blocks(int n) {
  std::vector<int> blocks{1};
  if (n / 2 != 1) blocks.push_back(n / 2);
  return blocks;
}

// Compares Dicke-basis block entropies against the full-Hilbert-space oracle on
// every point of the grid, skipping points whose ground state is degenerate.
inline EquivalenceReport run_equivalence(const EquivalenceGrid& grid, std::size_t workers) {
  detail::require(grid.min_n >= 2, "verify: smallest N must be >= 2");
  detail::require(grid.max_n <= oracle::kMaxSpins,
                  "verify: --max-n must be <= " + std::to_string(oracle::kMaxSpins) + " (oracle cap), got " +
                      std::to_string(grid.max_n));
  detail::require(grid.min_n <= grid.max_n, "verify: smallest N exceeds --max-n");
  detail::require(!grid.gammas.empty() && !grid.fields.empty(), "verify: empty parameter grid");

  struct Task {
    int n;
    double gamma;
    double h;
  };
  std::vector<Task> tasks;
  for (int n = grid.min_n; n <= grid.max_n; ++n)
    for (double g : grid.gammas)
      for (double h : grid.fields) tasks.push_back({n, g, h});

  struct Outcome {
    std::vector<EquivalenceComparison> comparisons;
    double gap = 0.0;
    bool skipped = false;
  };
  const auto outcomes = parallel_map(tasks.size(), workers, [&](std::size_t i) {
    const Task t = tasks[i];
    const LmgParams params{t.n, t.gamma, t.h, 1.0};
    return detail::at_point(detail::describe_point(t.n, 0, t.gamma, t.h), [&] {
      Outcome out;
      const auto full = oracle::oracle_ground_state(params);
      out.gap = full.gap();
      if (out.gap < kDegeneracyGap) {
        out.skipped = true;
        return out;
      }
      const auto dicke = eig_pentadiagonal_ground(build_hamiltonian(params));
      for (int l : equivalence_blocks(t.n)) {
        out.comparisons.push_back({t.n, l, t.gamma, t.h, spectrum_of(reduce_block(dicke.state, l)).entropy_bits,
                                   oracle::oracle_reduce(full.state, l).entropy_bits});
      }
      return out;
    });
  });

  EquivalenceReport report;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (outcomes[i].skipped) {
      report.skipped.push_back({tasks[i].n, tasks[i].gamma, tasks[i].h, outcomes[i].gap});
    } else {
      report.comparisons.insert(report.comparisons.end(), outcomes[i].comparisons.begin(),
                                outcomes[i].comparisons.end());
    }
  }
  return report;
}

}  // namespace lmg
