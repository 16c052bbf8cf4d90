#include "lanemden/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "lanemden/error.hpp"

namespace lanemden {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int k = 0; k < 7; ++k) {
    const double x = h * kXgk[k];
    const double f1 = f(c - x), f2 = f(c + x);
    resk += kWgk[k] * (f1 + f2);
    if (k % 2 == 1) resg += kWg[k / 2] * (f1 + f2);
  }
  const double value = resk * h;
  double err = std::abs((resk - resg) * h);
  if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
  return {a, b, value, err};
}

}  // namespace

double kronrod15(const Integrand& f, double a, double b) { return gk15(f, a, b).value; }

QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& opts) {
  if (breakpoints.size() < 2) throw ValidationError("integrate needs at least two breakpoints");
  std::priority_queue<Segment> heap;
  QuadratureResult res;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k + 1] >= breakpoints[k]))
      throw ValidationError("integration breakpoints must be nondecreasing");
    if (breakpoints[k + 1] == breakpoints[k]) continue;
    heap.push(gk15(f, breakpoints[k], breakpoints[k + 1]));
    res.evaluations += 15;
  }
  auto totals = [&heap](double& v, double& e) {
    // Sum in a fixed order (sorted by left endpoint) so results are reproducible.
    std::vector<Segment> segs;
    auto copy = heap;
    while (!copy.empty()) {
      segs.push_back(copy.top());
      copy.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    v = 0.0;
    e = 0.0;
    for (const auto& s : segs) {
      v += s.value;
      e += s.error;
    }
  };
  double value = 0.0, error = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
  }
  int count = static_cast<int>(heap.size());
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
  while (!heap.empty() && error > target() && count < opts.max_subintervals) {
    Segment s = heap.top();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) break;  // interval exhausted at machine precision
    heap.pop();
    Segment l = gk15(f, s.a, mid), r = gk15(f, mid, s.b);
    res.evaluations += 30;
    value += l.value + r.value - s.value;
    error += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  totals(value, error);
  res.value = value;
  res.error = error;
  res.converged = error <= target() || error == 0.0;
  if (!res.converged && opts.throw_on_failure) {
    std::ostringstream os;
    os << "quadrature did not converge: estimate " << value << ", achieved error " << error
       << ", requested " << target() << " after " << count << " subintervals";
    throw QuadratureError(os.str(), error, value);
  }
  return res;
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
  const double bp[2] = {a, b};
  return integrate(f, std::span<const double>(bp, 2), opts);
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a,
                                       const QuadratureOptions& opts) {
  auto g = [&](double s) {
    if (s >= 1.0) return 0.0;
    const double om = 1.0 - s;
    const double v = f(a + s / om);
    return v == 0.0 ? 0.0 : v / (om * om);
  };
  const double bp[6] = {0.0, 0.5, 0.9, 0.99, 0.999, 1.0};
  return integrate(g, std::span<const double>(bp, 6), opts);
}

}  // namespace lanemden
