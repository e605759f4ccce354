#include "cavsig/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace cavsig {

namespace {

void check_axis_increasing(std::span<const double> axis) {
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) {
      throw std::invalid_argument("sweep: axis must be strictly increasing");
    }
  }
}

Complex eval_at_time(Coefficient which, const ParameterSnapshot& p, double T) {
  switch (which) {
    case Coefficient::kP2: return compute_noise(p.cavity, p.detector_b, T).p2;
    case Coefficient::kQ2: return compute_noise(p.cavity, p.detector_b, T).q2;
    case Coefficient::kR2: return compute_noise(p.cavity, p.detector_b, T).r2;
    case Coefficient::kS2: return compute_noise(p.cavity, p.detector_b, T).s2;
    case Coefficient::kC2: return compute_signal(p.cavity, p.detector_a, p.detector_b, T).c2;
    case Coefficient::kD2: return compute_signal(p.cavity, p.detector_a, p.detector_b, T).d2;
    case Coefficient::kCD: {
      const SignalCoeffs s = compute_signal(p.cavity, p.detector_a, p.detector_b, T);
      return s.c2 + std::conj(s.d2);
    }
    case Coefficient::kA4: return compute_a4(p.cavity, p.detector_a, p.detector_b, T);
    case Coefficient::kB4: return compute_b4(p.cavity, p.detector_a, p.detector_b, T);
    case Coefficient::kP4: return compute_p4(p.cavity, p.detector_b, T);
  }
  throw std::invalid_argument("sweep: unknown coefficient selector");
}

}  // namespace

SweepSeries cutoff_scan(const std::function<Complex(int)>& eval, std::span<const int> cutoffs,
                        const SweepMeta& meta) {
  if (cutoffs.empty()) throw std::invalid_argument("cutoff_scan: empty grid");
  SweepSeries series;
  series.axis_label = "N_C";
  series.meta = meta;
  series.axis.reserve(cutoffs.size());
  series.values.reserve(cutoffs.size());
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < 1 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
      throw std::invalid_argument("cutoff_scan: cutoffs must be >= 1 and strictly increasing");
    }
    series.axis.push_back(static_cast<double>(cutoffs[i]));
    series.values.push_back(eval(cutoffs[i]));
  }
  return series;
}

SweepSeries cutoff_scan(Coefficient which, const ParameterSnapshot& params,
                        std::span<const int> cutoffs) {
  SweepMeta meta{params, std::string(to_string(which))};
  SweepSeries series;
  series.axis_label = "N_C";
  series.meta = meta;
  series.axis.reserve(cutoffs.size());
  for (int n : cutoffs) series.axis.push_back(static_cast<double>(n));
  if (is_fourth_order(which)) {
    const auto values = fourth_order_by_cutoff(which, params.cavity.length, params.detector_a,
                                               params.detector_b, params.switching_time, cutoffs);
    series.values.assign(values.begin(), values.end());
  } else {
    series.values = second_order_by_cutoff(which, params.cavity.length, params.detector_a,
                                           params.detector_b, params.switching_time, cutoffs);
  }
  return series;
}

SweepSeries time_scan(const std::function<Complex(double)>& eval, std::span<const double> times,
                      const SweepMeta& meta, int threads) {
  if (times.empty()) throw std::invalid_argument("time_scan: empty grid");
  check_axis_increasing(times);
  SweepSeries series;
  series.axis_label = "T";
  series.meta = meta;
  series.axis.assign(times.begin(), times.end());
  series.values.resize(times.size());

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(times.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < times.size(); ++i) series.values[i] = eval(times[i]);
    return series;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> cursor{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = cursor.fetch_add(1); i < times.size(); i = cursor.fetch_add(1)) {
        series.values[i] = eval(times[i]);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return series;
}

SweepSeries time_scan(Coefficient which, const ParameterSnapshot& params,
                      std::span<const double> times, int threads) {
  for (double t : times) validate_switching_time(t);
  SweepMeta meta{params, std::string(to_string(which))};
  return time_scan([&](double T) { return eval_at_time(which, params, T); }, times, meta,
                   threads);
}

SweepSeries envelope(const SweepSeries& series) {
  if (series.values.empty()) throw std::invalid_argument("envelope: empty series");
  SweepSeries out = series;
  double running = 0.0;
  for (std::size_t i = series.values.size(); i-- > 0;) {
    running = std::max(running, std::abs(series.values[i]));
    out.values[i] = running;
  }
  return out;
}

SweepSeries normalize_series(const SweepSeries& series, double reference) {
  if (reference == 0.0) throw std::invalid_argument("normalize_series: zero reference");
  SweepSeries out = series;
  const double scale = 1.0 / std::abs(reference);
  for (Complex& v : out.values) v *= scale;
  return out;
}

PowerLawFit fit_power_law(const SweepSeries& series, double window_min, double window_max) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < series.axis.size(); ++i) {
    const double x = series.axis[i];
    if (x < window_min || x > window_max) continue;
    const double v = std::abs(series.values[i]);
    if (!(v > 0.0)) {
      throw std::invalid_argument("fit_power_law: non-positive value inside fit window");
    }
    if (!(x > 0.0)) throw std::invalid_argument("fit_power_law: non-positive axis value");
    xs.push_back(std::log(x));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 3) {
    throw std::invalid_argument("fit_power_law: need at least 3 samples inside the window");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_power_law: degenerate window");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  fit.window_min = window_min;
  fit.window_max = window_max;
  return fit;
}

}  // namespace cavsig
