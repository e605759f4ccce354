#include "cavsig/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cavsig/version.hpp"

namespace cavsig {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_header_comment(std::ostream& out, const std::string& config_echo) {
  out << "# cavsig " << kVersion << " " << config_echo << "\n";
}

void write_series_csv(std::ostream& out, const SweepSeries& series,
                      const std::string& config_echo) {
  write_header_comment(out, config_echo);
  out << "axis,value_re,value_im,value_abs\n";
  for (std::size_t i = 0; i < series.axis.size(); ++i) {
    out << format_double(series.axis[i]) << ',' << format_double(series.values[i].real()) << ','
        << format_double(series.values[i].imag()) << ','
        << format_double(std::abs(series.values[i])) << '\n';
  }
}

void write_fit_csv(std::ostream& out, const PowerLawFit& fit, const std::string& config_echo) {
  write_header_comment(out, config_echo);
  out << "n_min,n_max,slope,intercept,r_squared\n";
  out << format_double(fit.window_min) << ',' << format_double(fit.window_max) << ','
      << format_double(fit.slope) << ',' << format_double(fit.intercept) << ','
      << format_double(fit.r_squared) << '\n';
}

void write_series_svg(std::ostream& out, const SweepSeries& series, bool log_log) {
  constexpr int kWidth = 640, kHeight = 420, kMargin = 56;
  const auto tx = [&](double v) { return log_log ? std::log10(v) : v; };

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < series.axis.size(); ++i) {
    const double y = std::abs(series.values[i]);
    if (log_log && (!(series.axis[i] > 0.0) || !(y > 0.0))) continue;
    const double px = tx(series.axis[i]);
    const double py = tx(y);
    pts.emplace_back(px, py);
    xmin = std::min(xmin, px); xmax = std::max(xmax, px);
    ymin = std::min(ymin, py); ymax = std::max(ymax, py);
  }
  if (pts.empty()) { xmin = xmax = ymin = ymax = 0.0; }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;

  const auto px = [&](double x) {
    return kMargin + (x - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin);
  };
  const auto py = [&](double y) {
    return kHeight - kMargin - (y - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : pts) out << px(x) << ',' << py(y) << ' ';
  out << "\"/>\n";
  const std::string xlabel = (log_log ? "log10 " : "") + series.axis_label;
  const std::string ylabel =
      (log_log ? "log10 |" : "|") + series.meta.coefficient + "|";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << ylabel << "</text>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\" font-size=\"11\">"
      << format_double(log_log ? std::pow(10, xmin) : xmin) << "</text>\n";
  out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16
      << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(log_log ? std::pow(10, xmax) : xmax) << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin << "\" text-anchor=\"end\" "
      << "font-size=\"11\">" << format_double(log_log ? std::pow(10, ymax) : ymax)
      << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin
      << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(log_log ? std::pow(10, ymin) : ymin) << "</text>\n";
  out << "</svg>\n";
}

}  // namespace cavsig
