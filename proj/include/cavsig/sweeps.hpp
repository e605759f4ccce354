#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cavsig/coefficient.hpp"
#include "cavsig/fourth_order.hpp"
#include "cavsig/second_order.hpp"

// Experiment drivers: coefficient scans over the mode cutoff or the switching
// time, the max-over-higher-cutoffs envelope that tames the oscillatory
// convergence, and log-log power-law fits of the acausal tails.

namespace cavsig {

struct SweepMeta {
  ParameterSnapshot params;
  std::string coefficient;
};

struct SweepSeries {
  std::string axis_label;
  std::vector<double> axis;     // strictly increasing
  std::vector<Complex> values;  // same length as axis
  SweepMeta meta;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
};

/// Generic scan over an arbitrary evaluator (used by tests with stubs).
SweepSeries cutoff_scan(const std::function<Complex(int)>& eval, std::span<const int> cutoffs,
                        const SweepMeta& meta);
SweepSeries time_scan(const std::function<Complex(double)>& eval, std::span<const double> times,
                      const SweepMeta& meta, int threads = 1);

/// Selected channel coefficient vs cutoff, all other parameters fixed.
/// Single fixed-order pass over modes, independent of the grid spacing.
SweepSeries cutoff_scan(Coefficient which, const ParameterSnapshot& params,
                        std::span<const int> cutoffs);

/// Selected coefficient vs switching time at fixed cutoff. Points are
/// independent and may be evaluated on `threads` workers; output order is by
/// axis regardless.
SweepSeries time_scan(Coefficient which, const ParameterSnapshot& params,
                      std::span<const double> times, int threads = 1);

/// env(x_i) = max over samples with x >= x_i of |value|; non-increasing.
SweepSeries envelope(const SweepSeries& series);

SweepSeries normalize_series(const SweepSeries& series, double reference);

/// Least squares on (log axis, log |value|) over samples inside
/// [window_min, window_max]. Requires at least 3 samples, all nonzero.
PowerLawFit fit_power_law(const SweepSeries& series, double window_min, double window_max);

}  // namespace cavsig
