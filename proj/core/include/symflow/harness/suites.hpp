#pragma once

#include <vector>

#include "symflow/harness/config.hpp"
#include "symflow/harness/report.hpp"

namespace symflow::harness {

/// Monte Carlo audits: suite identities (polarization and symmetry) or bounds
/// (constant-model collapse, BSC, ECO, Ric(J e1, e2), |w|^2 and Kato).
Report run_verify(const RunConfig& config);

/// Thresholds, pinching constants and sign certificates over grids. Writes
/// thresholds.csv and constants.csv.
Report run_constants(const RunConfig& config);

/// Runs the flow and its claim checks. Writes diagnostics.csv and mesh snapshots.
/// A fixture rejected by its preconditions raises ConfigError before stepping.
Report run_flow(const RunConfig& config);

/// Dispatches on config.suite, validates first, writes report.json and records
/// the wall-clock time.
Report run_suite(const RunConfig& config);

struct RefinementStudy {
  std::vector<int> resolutions;
  std::vector<double> values;
  /// values[i] / values[i + 1]
  std::vector<double> ratios;
  double min_ratio() const;
};

/// Max |H| over vertices of the initial fixture at each resolution.
RefinementStudy mean_curvature_refinement(const flow::FixtureSpec& fixture, double k, const std::vector<int>& resolutions);

/// Area-weighted RMS of the cos(alpha) evolution residual over one step at each resolution.
RefinementStudy residual_refinement(const flow::FixtureSpec& fixture, double k, double cfl,
                                    const std::vector<int>& resolutions);

/// Largest distance any vertex moves from its initial position over `steps` steps.
double stationary_drift(const flow::FixtureSpec& fixture, double k, double cfl, int steps);

}  // namespace symflow::harness
