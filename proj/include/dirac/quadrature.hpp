#pragma once

// One-dimensional quadrature used by the field, holonomy and angular momentum
// code: fixed Gauss-Legendre rules, adaptive Gauss-Kronrod (7/15), and a
// pairwise accumulator so results do not depend on summation order.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include "dirac/errors.hpp"

namespace dirac {

template <typename Scalar>
Scalar pairwise_sum(std::span<const Scalar> values) {
  if (values.size() <= 8) {
    Scalar s{0};
    for (const Scalar& v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

struct GaussRule {
  Eigen::VectorXd nodes;    // on [-1, 1]
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  GaussRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  return rule;
}

/// Integral of f over [a, b] with a fixed rule split into `panels` equal panels.
template <typename F>
double composite_gauss(F&& f, double a, double b, const GaussRule& rule, int panels = 1) {
  std::vector<double> parts(static_cast<std::size_t>(panels));
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width, mid = lo + half;
    double s = 0.0;
    for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) s += rule.weights(k) * f(mid + half * rule.nodes(k));
    parts[static_cast<std::size_t>(p)] = s * half;
  }
  return pairwise_sum<double>(parts);
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

struct KronrodSegment {
  double a, b, value, error;
  bool operator<(const KronrodSegment& o) const { return error < o.error; }
};

template <typename F>
KronrodSegment kronrod15(F& f, double a, double b) {
  static constexpr double xgk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr double wgk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                   0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = wgk[7] * fc, gauss = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double s = f(c - h * xgk[j]) + f(c + h * xgk[j]);
    kron += wgk[j] * s;
    if (j % 2 == 1) gauss += wg[j / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 on a finite interval. Bisects the
/// segment with the largest error until abs or rel tolerance is met.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                              int max_segments = 2000) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::KronrodSegment> heap;
  heap.push(detail::kronrod15(f, a, b));
  out.evaluations = 15;
  double total_err = heap.top().error;
  double total_val = heap.top().value;
  while (static_cast<int>(heap.size()) < max_segments) {
    if (total_err <= std::max(abs_tol, rel_tol * std::abs(total_val))) {
      out.converged = true;
      break;
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const auto left = detail::kronrod15(f, worst.a, mid);
    const auto right = detail::kronrod15(f, mid, worst.b);
    out.evaluations += 30;
    heap.push(left);
    heap.push(right);
    total_err += left.error + right.error - worst.error;
    total_val += left.value + right.value - worst.value;
  }
  // Re-sum in interval order for a reproducible value.
  std::vector<detail::KronrodSegment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  std::vector<double> vals(segs.size()), errs(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) vals[i] = segs[i].value, errs[i] = segs[i].error;
  out.value = pairwise_sum<double>(vals);
  out.error = pairwise_sum<double>(errs);
  if (!out.converged) out.converged = out.error <= std::max(abs_tol, rel_tol * std::abs(out.value));
  return out;
}

/// Adaptive integral over [a, inf) via x = a + t/(1-t).
template <typename F>
QuadResult integrate_to_infinity(F&& f, double a, double abs_tol, double rel_tol, int max_segments = 2000) {
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    const double v = f(a + t / u);
    return std::isfinite(v) ? v / (u * u) : 0.0;
  };
  return integrate_adaptive(mapped, 0.0, 1.0, abs_tol, rel_tol, max_segments);
}

}  // namespace dirac
