#pragma once

#include <ostream>
#include <string>

#include "cavsig/sweeps.hpp"

// CSV and SVG emission. Output is byte-identical for identical config and
// artifact version: every double is printed with "%.17g" and every file
// starts with a comment line carrying the version and the merged config.

namespace cavsig {

std::string format_double(double value);

void write_header_comment(std::ostream& out, const std::string& config_echo);

/// Columns: axis,value_re,value_im,value_abs
void write_series_csv(std::ostream& out, const SweepSeries& series,
                      const std::string& config_echo);

/// Columns: n_min,n_max,slope,intercept,r_squared
void write_fit_csv(std::ostream& out, const PowerLawFit& fit, const std::string& config_echo);

/// Minimal self-contained line plot of |value| vs axis; log-log when
/// requested. No external renderer involved.
void write_series_svg(std::ostream& out, const SweepSeries& series, bool log_log);

}  // namespace cavsig
