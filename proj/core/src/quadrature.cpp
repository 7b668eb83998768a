// Copyright 2026 The hallqet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hallqet/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

#include "hallqet/errors.hpp"

namespace hallqet {

namespace {

constexpr double kEpsMach = std::numeric_limits<double>::epsilon();
constexpr double kUflow = std::numeric_limits<double>::min();
constexpr double kPiLocal = 3.14159265358979323846;

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// weights belong to the odd-indexed abscissae.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525040214, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Neumaier {
  double sum = 0;
  double c = 0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + c; }
};

struct Gk21 {
  double value;
  double error;
  bool roundoff_limited;  // error is the 50 eps |f| floor; bisection cannot help
};

Gk21 gk21(const Integrand1D& f, double a, double b) {
  double centr = 0.5 * (a + b);
  double hlgth = 0.5 * (b - a);
  double fc = f(centr);
  double resg = 0;
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  std::array<double, 10> fv1, fv2;
  for (int j = 0; j < 10; ++j) {
    double absc = hlgth * kXgk[j];
    double f1 = f(centr - absc);
    double f2 = f(centr + absc);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  double reskh = resk * 0.5;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  double result = resk * hlgth;
  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0 && abserr != 0) {
    abserr = resasc * std::min(1.0, std::pow(200 * abserr / resasc, 1.5));
  }
  bool floor = false;
  if (resabs > kUflow / (50 * kEpsMach) && kEpsMach * 50 * resabs >= abserr) {
    abserr = kEpsMach * 50 * resabs;
    floor = true;
  }
  if (!std::isfinite(result)) {
    throw ConvergenceFailure("integrand is not finite on [" + std::to_string(a) + ", " +
                                 std::to_string(b) + "]",
                             result, std::numeric_limits<double>::infinity());
  }
  return {result, abserr, floor};
}

void check_spec(const IntegrationSpec& spec, std::size_t max_dim) {
  if (spec.bounds.empty() || spec.bounds.size() > max_dim) {
    throw std::invalid_argument("integration dimension must be 1.." + std::to_string(max_dim));
  }
  for (const auto& b : spec.bounds) {
    if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
      throw std::invalid_argument("integration bounds must satisfy lo < hi");
    }
  }
  if (!(spec.rel_tol >= 0) || !(spec.abs_tol >= 0) || (spec.rel_tol == 0 && spec.abs_tol == 0)) {
    throw std::invalid_argument("integration tolerances must be non-negative, one positive");
  }
}

QuadResult finish(QuadResult r, const IntegrationSpec& spec) {
  if (!r.converged && spec.throw_on_failure) {
    throw ConvergenceFailure("quadrature did not converge: value " + std::to_string(r.value) +
                                 ", error estimate " + std::to_string(r.error_estimate) +
                                 " after " + std::to_string(r.subdivisions_used) +
                                 " subdivisions",
                             r.value, r.error_estimate);
  }
  return r;
}

double tolerance(const IntegrationSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

// Genz-Malik degree-7 rule with embedded degree-5 estimate.
struct GenzMalik {
  explicit GenzMalik(int n) : dim(n) {
    double d = n;
    w1 = (12824 - 9120 * d + 400 * d * d) / 19683;
    w2 = 980.0 / 6561;
    w3 = (1820 - 400 * d) / 19683;
    w4 = 200.0 / 19683;
    w5 = 6859.0 / 19683 / std::ldexp(1.0, n);
    e1 = (729 - 950 * d + 50 * d * d) / 729;
    e2 = 245.0 / 486;
    e3 = (265 - 100 * d) / 1458;
    e4 = 25.0 / 729;
    points = 1 + 4 * n + 2 * n * (n - 1) + (1 << n);
  }
  int dim;
  double w1, w2, w3, w4, w5, e1, e2, e3, e4;
  std::size_t points;
  static constexpr double l2 = 0.35856858280031809199;  // sqrt(9/70)
  static constexpr double l4 = 0.94868329805051379960;  // sqrt(9/10)
  static constexpr double l5 = 0.68824720161168529772;  // sqrt(9/19)
  static constexpr double ratio = (9.0 / 70) / (9.0 / 10);
};

struct Region {
  std::array<double, 4> c{};
  std::array<double, 4> h{};
  double value = 0;
  double error = 0;
  int split_axis = 0;
  bool active = true;
};

void eval_region(const IntegrandND& f, const GenzMalik& gm, Region& r) {
  const int n = gm.dim;
  std::array<double, 4> x{};
  std::span<const double> xs(x.data(), n);
  auto at = [&]() { return f(xs); };
  for (int i = 0; i < n; ++i) x[i] = r.c[i];
  double f0 = at();
  double sum2 = 0, sum3 = 0, sum4 = 0, sum5 = 0;
  double best = -1;
  int axis = 0;
  for (int i = 0; i < n; ++i) {
    x[i] = r.c[i] - GenzMalik::l2 * r.h[i];
    double a = at();
    x[i] = r.c[i] + GenzMalik::l2 * r.h[i];
    double b = at();
    x[i] = r.c[i] - GenzMalik::l4 * r.h[i];
    double c = at();
    x[i] = r.c[i] + GenzMalik::l4 * r.h[i];
    double d = at();
    x[i] = r.c[i];
    sum2 += a + b;
    sum3 += c + d;
    double diff = std::abs(a + b - 2 * f0 - GenzMalik::ratio * (c + d - 2 * f0));
    if (diff > best) {
      best = diff;
      axis = i;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int s = 0; s < 4; ++s) {
        x[i] = r.c[i] + ((s & 1) ? 1 : -1) * GenzMalik::l4 * r.h[i];
        x[j] = r.c[j] + ((s & 2) ? 1 : -1) * GenzMalik::l4 * r.h[j];
        sum4 += at();
      }
      x[i] = r.c[i];
      x[j] = r.c[j];
    }
  }
  for (int mask = 0; mask < (1 << n); ++mask) {
    for (int i = 0; i < n; ++i) {
      x[i] = r.c[i] + ((mask >> i) & 1 ? 1 : -1) * GenzMalik::l5 * r.h[i];
    }
    sum5 += at();
  }
  double vol = 1;
  for (int i = 0; i < n; ++i) vol *= 2 * r.h[i];
  double r7 = vol * (gm.w1 * f0 + gm.w2 * sum2 + gm.w3 * sum3 + gm.w4 * sum4 + gm.w5 * sum5);
  double r5 = vol * (gm.e1 * f0 + gm.e2 * sum2 + gm.e3 * sum3 + gm.e4 * sum4);
  if (!std::isfinite(r7)) {
    throw ConvergenceFailure("integrand is not finite in cubature region", r7,
                             std::numeric_limits<double>::infinity());
  }
  r.value = r7;
  r.error = std::abs(r7 - r5);
  r.split_axis = axis;
}

}  // namespace

QuadResult integrate_1d(const Integrand1D& f, const IntegrationSpec& spec) {
  check_spec(spec, 1);
  const double lo = spec.bounds[0].lo;
  const double hi = spec.bounds[0].hi;
  std::vector<double> cuts{lo};
  {
    std::vector<double> bp;
    for (double x : spec.breakpoints) {
      if (x > lo && x < hi) bp.push_back(x);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    cuts.insert(cuts.end(), bp.begin(), bp.end());
    cuts.push_back(hi);
  }

  struct Seg {
    double a, b, value, error;
    std::size_t id;
    bool roundoff_limited;
  };
  std::vector<Seg> segs;
  auto worse = [&](std::size_t i, std::size_t j) {
    if (segs[i].error != segs[j].error) return segs[i].error < segs[j].error;
    return segs[i].id > segs[j].id;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);

  QuadResult res;
  std::size_t next_id = 0;
  double total = 0, total_err = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto g = gk21(f, cuts[i], cuts[i + 1]);
    res.evaluations += 21;
    segs.push_back({cuts[i], cuts[i + 1], g.value, g.error, next_id++, g.roundoff_limited});
    heap.push(segs.size() - 1);
    total += g.value;
    total_err += g.error;
  }
  std::vector<std::size_t> retired;  // too narrow to split further
  double retired_err = 0;
  while (total_err > tolerance(spec, total)) {
    if (res.subdivisions_used >= spec.max_subdivisions) break;
    if (spec.max_evaluations && res.evaluations + 42 > spec.max_evaluations) break;
    if (heap.empty()) break;
    std::size_t idx = heap.top();
    heap.pop();
    Seg s = segs[idx];
    double mid = 0.5 * (s.a + s.b);
    if (s.roundoff_limited || !(mid > s.a && mid < s.b) ||
        (s.b - s.a) < 1e-15 * std::max(std::abs(s.a), std::abs(s.b))) {
      retired.push_back(idx);
      retired_err += s.error;
      if (retired_err > tolerance(spec, total)) break;
      continue;
    }
    auto g1 = gk21(f, s.a, mid);
    auto g2 = gk21(f, mid, s.b);
    res.evaluations += 42;
    ++res.subdivisions_used;
    total += g1.value + g2.value - s.value;
    total_err += g1.error + g2.error - s.error;
    segs[idx] = {s.a, mid, g1.value, g1.error, next_id++, g1.roundoff_limited};
    heap.push(idx);
    segs.push_back({mid, s.b, g2.value, g2.error, next_id++, g2.roundoff_limited});
    heap.push(segs.size() - 1);
    if (res.subdivisions_used % 512 == 0) {
      Neumaier v, e;
      for (const auto& sg : segs) {
        v.add(sg.value);
        e.add(sg.error);
      }
      total = v.value();
      total_err = e.value();
    }
  }
  std::vector<std::size_t> order(segs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return segs[i].a < segs[j].a; });
  Neumaier v, e;
  for (std::size_t i : order) {
    v.add(segs[i].value);
    e.add(segs[i].error);
  }
  res.value = v.value();
  res.error_estimate = e.value();
  res.converged = res.error_estimate <= tolerance(spec, res.value);
  res.roundoff_limited = !retired.empty();
  return finish(res, spec);
}

QuadResult integrate_nd(const IntegrandND& f, const IntegrationSpec& spec) {
  check_spec(spec, 4);
  const int n = static_cast<int>(spec.dimension());
  if (n == 1) {
    auto g = [&f](double x) { return f(std::span<const double>(&x, 1)); };
    return integrate_1d(g, spec);
  }
  GenzMalik gm(n);
  std::vector<Region> regions;
  auto worse = [&](std::size_t i, std::size_t j) {
    if (regions[i].error != regions[j].error) return regions[i].error < regions[j].error;
    return i > j;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);

  QuadResult res;
  Region root;
  for (int i = 0; i < n; ++i) {
    root.c[i] = 0.5 * (spec.bounds[i].lo + spec.bounds[i].hi);
    root.h[i] = 0.5 * (spec.bounds[i].hi - spec.bounds[i].lo);
  }
  eval_region(f, gm, root);
  res.evaluations += gm.points;
  regions.push_back(root);
  heap.push(0);
  double total = root.value, total_err = root.error;
  while (total_err > tolerance(spec, total)) {
    if (res.subdivisions_used >= spec.max_subdivisions) break;
    if (spec.max_evaluations && res.evaluations + 2 * gm.points > spec.max_evaluations) break;
    std::size_t idx = heap.top();
    heap.pop();
    Region parent = regions[idx];
    regions[idx].active = false;
    int ax = parent.split_axis;
    Region a = parent, b = parent;
    a.h[ax] = b.h[ax] = 0.5 * parent.h[ax];
    a.c[ax] = parent.c[ax] - a.h[ax];
    b.c[ax] = parent.c[ax] + b.h[ax];
    eval_region(f, gm, a);
    eval_region(f, gm, b);
    res.evaluations += 2 * gm.points;
    ++res.subdivisions_used;
    total += a.value + b.value - parent.value;
    total_err += a.error + b.error - parent.error;
    regions.push_back(a);
    heap.push(regions.size() - 1);
    regions.push_back(b);
    heap.push(regions.size() - 1);
    if (res.subdivisions_used % 512 == 0) {
      Neumaier v, e;
      for (const auto& r : regions) {
        if (!r.active) continue;
        v.add(r.value);
        e.add(r.error);
      }
      total = v.value();
      total_err = e.value();
    }
  }
  Neumaier v, e;
  for (const auto& r : regions) {
    if (!r.active) continue;
    v.add(r.value);
    e.add(r.error);
  }
  res.value = v.value();
  res.error_estimate = e.value();
  res.converged = res.error_estimate <= tolerance(spec, res.value);
  return finish(res, spec);
}

QuadResult integrate_to_infinity(const Integrand1D& f, double lo, double rel_tol, double abs_tol,
                                 std::size_t max_subdivisions) {
  IntegrationSpec spec;
  spec.bounds = {{0.0, 1.0}};
  spec.rel_tol = rel_tol;
  spec.abs_tol = abs_tol;
  spec.max_subdivisions = max_subdivisions;
  auto g = [&](double t) {
    if (t >= 1.0) return 0.0;
    double s = 1.0 - t;
    return f(lo + t / s) / (s * s);
  };
  return integrate_1d(g, spec);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPiLocal * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
  }
}

double regularized_power_kernel(double u, int n, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("regularized_power_kernel needs eps > 0");
  if (n < 1) throw std::invalid_argument("regularized_power_kernel needs n >= 1");
  double s = std::max(std::abs(u), eps);
  double us = u / s, es = eps / s;
  // (u - i eps)^n / (u^2 + eps^2)^n in scaled variables.
  std::complex<double> z(us, -es), p(1.0, 0.0);
  double m = us * us + es * es, mp = 1;
  for (int k = 0; k < n; ++k) {
    p *= z;
    mp *= m;
  }
  return p.real() / mp / std::pow(s, n);
}

}  // namespace hallqet
