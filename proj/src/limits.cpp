#include "qdeform/limits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdeform {

namespace {

double lse(std::span<const double> v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - mx);
  return mx + std::log(sum);
}

double ols_slope(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - xm) * (ys[i] - ym);
    sxx += (xs[i] - xm) * (xs[i] - xm);
  }
  if (sxx == 0.0) throw Error(ErrorKind::Fit, "slope regression degenerate: constant abscissa");
  return sxy / sxx;
}

}  // namespace

double ldp_scaled_statistic(const QBinomialSpec& spec, const QFactorialTable& table,
                            double x) {
  if (!(x > 0.0) || !(x < 1.0)) {
    throw Error(ErrorKind::Domain, "ldp_scaled_statistic requires 0 < x < 1");
  }
  const std::uint64_t n = spec.n;
  const std::vector<double> s = qlog_weights(spec, table);
  const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * x));
  const std::size_t tail = std::min(m + 1, s.size());
  const double q = spec.param.q();
  const double scale = detail::pow_eln(static_cast<double>(n), 2.0 - q);
  const std::span<const double> all(s);
  if (q == 1.0) {
    // exact log of the normalized cumulative
    return (lse(all.subspan(0, tail)) - lse(all)) / scale;
  }
  const double tail_max = *std::max_element(s.begin(), s.begin() + tail);
  const double all_max = *std::max_element(s.begin(), s.end());
  return (tail_max - all_max) / scale;
}

LdpSeries ldp_convergence_series(const DeformationParameter& param, double r,
                                 double x, std::span<const std::uint64_t> n_list) {
  if (n_list.size() < 1) {
    throw Error(ErrorKind::Constraint, "ldp_convergence_series: empty n list");
  }
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1]) {
      throw Error(ErrorKind::Constraint, "ldp_convergence_series: n list must be strictly increasing");
    }
  }
  LdpSeries series{param, r, x, {}, -rate_function(param, x, r)};
  series.entries.reserve(n_list.size());
  for (std::uint64_t n : n_list) {
    try {
      const QFactorialTable table(param, n);
      const QBinomialSpec spec(param, n, r);
      series.entries.push_back({n, ldp_scaled_statistic(spec, table, x)});
    } catch (const Error& e) {
      throw Error(e.kind(), "ldp series at n=" + std::to_string(n) + ": " + e.what());
    }
  }
  return series;
}

CltResidualReport clt_residuals(const QBinomialSpec& spec, const QFactorialTable& table,
                                double window) {
  if (!(window > 0.0)) {
    throw Error(ErrorKind::Domain, "clt_residuals requires window > 0");
  }
  const std::uint64_t n = spec.n;
  if (n > table.max_n()) {
    throw Error(ErrorKind::Range, "clt_residuals: n exceeds table max_n");
  }
  const double q = spec.param.q();
  const double r = spec.r;
  const double mean = static_cast<double>(n) * r;
  const double sigma = detail::pow_eln(static_cast<double>(n), q / 2.0) *
                       std::sqrt(r * (1.0 - r));
  const auto center = static_cast<std::uint64_t>(std::floor(mean));
  const double lo_d = std::max(0.0, std::ceil(mean - window * sigma));
  const double hi_d = std::min(static_cast<double>(n), std::floor(mean + window * sigma));

  const long double lr = detail::q_ln_raw_ld(2.0 - q, static_cast<long double>(r));
  const long double l1r = detail::q_ln_raw_ld(2.0 - q, static_cast<long double>(1.0 - r));
  const long double qq = 2.0L - static_cast<long double>(q);
  const auto weight = [&](std::uint64_t k) {
    const long double binom =
        table.q_ln_factorial_ld(n) -
        (table.q_ln_factorial_ld(k) + table.q_ln_factorial_ld(n - k));
    const long double pk =
        k == 0 ? 0.0L : detail::pow_eln_ld(static_cast<long double>(k), qq);
    const long double pnk =
        k == n ? 0.0L : detail::pow_eln_ld(static_cast<long double>(n - k), qq);
    return binom + (pk * lr + pnk * l1r) / qq;
  };

  const long double s_center = weight(center);
  CltResidualReport report{spec.param, r, n, window, {}, 0.0};
  for (std::uint64_t k = static_cast<std::uint64_t>(lo_d);
       k <= static_cast<std::uint64_t>(hi_d); ++k) {
    const double xk = (static_cast<double>(k) - mean) / sigma;
    if (std::fabs(xk) > window) continue;
    const long double res =
        (weight(k) - s_center) +
        0.5L * static_cast<long double>(xk) * static_cast<long double>(xk);
    report.residuals.push_back({k, xk, static_cast<double>(res)});
  }
  if (report.residuals.size() < 5) {
    throw Error(ErrorKind::Window, "clt_residuals: fewer than 5 grid points in |x_k| <= " +
                                       std::to_string(window));
  }
  for (const auto& e : report.residuals) {
    report.max_abs_residual = std::max(report.max_abs_residual, std::fabs(e.residual));
  }
  return report;
}

double residual_decay_slope(std::span<const DecayPoint> points) {
  if (points.size() < 3) {
    throw Error(ErrorKind::Constraint, "residual_decay_slope requires >= 3 points");
  }
  std::vector<double> lx, ly;
  lx.reserve(points.size());
  ly.reserve(points.size());
  for (const auto& p : points) {
    if (!(p.max_abs_residual > 0.0)) {
      throw Error(ErrorKind::Fit, "residual_decay_slope: degenerate (nonpositive residual)");
    }
    lx.push_back(std::log(static_cast<double>(p.n)));
    ly.push_back(std::log(p.max_abs_residual));
  }
  return ols_slope(lx, ly);
}

std::vector<DensityPoint> scaled_density(const QBinomialPmf& pmf) {
  const auto probs = pmf.probs();
  const auto grid = pmf.grid();
  std::vector<DensityPoint> out(probs.size());
  for (std::size_t k = 0; k < probs.size(); ++k) {
    out[k] = {grid[k], pmf.sigma_q() * probs[k]};
  }
  return out;
}

QGaussianFit fit_q_gaussian(std::span<const DensityPoint> density,
                            const DeformationParameter& param, double window) {
  if (!(window > 0.0)) throw Error(ErrorKind::Domain, "fit window must be positive");
  std::vector<DensityPoint> pts;
  for (const auto& d : density) {
    if (std::fabs(d.x) <= window && d.g > 0.0) pts.push_back(d);
  }
  if (pts.size() < 10) {
    throw Error(ErrorKind::Window, "fit_q_gaussian: fewer than 10 positive points in window");
  }
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (std::fabs(pts[i].x) < std::fabs(pts[nearest].x)) nearest = i;
  }
  const double amplitude = pts[nearest].g;
  const double q = param.q();
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : pts) {
    const double y = detail::q_ln_raw(q, p.g / amplitude);
    const double z = -p.x * p.x;
    sxy += z * y;
    sxx += z * z;
  }
  if (sxx == 0.0) throw Error(ErrorKind::Fit, "fit_q_gaussian: degenerate regression");
  const double beta = sxy / sxx;
  if (!(beta > 0.0)) {
    throw Error(ErrorKind::Fit, "fit_q_gaussian: fitted curvature not positive");
  }
  double sup = 0.0;
  for (const auto& d : density) {
    if (std::fabs(d.x) > window) continue;
    const double model = amplitude * detail::q_exp_raw(q, -beta * d.x * d.x);
    sup = std::max(sup, std::fabs(model - d.g));
  }
  return QGaussianFit{q, beta, amplitude, sup, window};
}

}  // namespace qdeform
