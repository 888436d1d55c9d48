#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "skewtv/errors.hpp"

namespace skewtv {

/// Tolerances for adaptive integration. The estimate is accepted once the
/// accumulated error bound drops below max(abs_tol, rel_tol * |result|).
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw std::domain_error("QuadratureSpec: tolerances must be positive");
    if (max_subdivisions < 10)
      throw std::domain_error("QuadratureSpec: max_subdivisions must be >= 10");
  }
};

namespace detail {

struct PanelResult {
  double value;
  double error;
};

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK qk15).
template <class F>
PanelResult gk15(F&& f, double a, double b) {
  static const double xgk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static const double wgk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static const double wg[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double resk = wgk[7] * fc;
  double resg = wg[3] * fc;
  double resabs = std::fabs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double fsum = fv1[j] + fv2[j];
    resk += wgk[j] * fsum;
    if (j % 2 == 1) resg += wg[j / 2] * fsum;
    resabs += wgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
  }
  const double reskh = 0.5 * resk;
  double resasc = wgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += wgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  resabs *= std::fabs(half);
  resasc *= std::fabs(half);

  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::fmin(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50)
    err = std::fmax(eps50 * resabs, err);
  return {resk * half, err};
}

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
template <class F>
double integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.validate();
  std::priority_queue<detail::Segment> segments;
  auto first = detail::gk15(f, a, b);
  segments.push({a, b, first.value, first.error});
  double total = first.value;
  double total_err = first.error;

  int subdivisions = 0;
  while (total_err > std::fmax(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
    if (subdivisions >= spec.max_subdivisions)
      throw ConvergenceError("integrate_finite: tolerance not reached", total,
                             total_err);
    const detail::Segment worst = segments.top();
    segments.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      throw ConvergenceError("integrate_finite: interval too small to split",
                             total, total_err);
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    segments.push({worst.a, mid, left.value, left.error});
    segments.push({mid, worst.b, right.value, right.error});
    ++subdivisions;
  }
  return total;
}

/// Adaptive integration of f over (0, inf) via the map x = t/(1-t).
template <class F>
double integrate_halfline(F&& f, const QuadratureSpec& spec = {}) {
  auto g = [&f](double t) {
    const double om = 1.0 - t;
    if (om <= 0.0) return 0.0;  // rounding artifact at the mapped endpoint
    double x = t / om;
    if (x > 1e300) x = 1e300;  // keep deep-subdivision evaluations finite
    const double fx = f(x);
    if (fx == 0.0) return 0.0;  // avoid 0 * inf as om -> 0
    return fx / (om * om);
  };
  return integrate_finite(g, 0.0, 1.0, spec);
}

/// Adaptive integration of f over the whole real line (folded half lines).
template <class F>
double integrate_real(F&& f, const QuadratureSpec& spec = {}) {
  return integrate_halfline([&f](double x) { return f(x) + f(-x); }, spec);
}

}  // namespace skewtv
