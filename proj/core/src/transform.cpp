#include "lanemden/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "lanemden/bubble.hpp"

namespace lanemden {

MeridianPoint meridian_map(double s, double t) {
  if (!(s >= 0.0 && t >= 0.0)) throw ValidationError("meridian_map needs s, t >= 0");
  const double q = s * s + t * t;
  if (!(q > 0.0)) throw ValidationError("meridian_map is singular at the origin");
  // phi / 2 is the polar angle of (s, t); atan2 stays accurate near the axis
  return {0.5 * q, 2.0 * std::atan2(t, s)};
}

BiradialPoint meridian_inverse(double rho, double phi) {
  if (!(rho > 0.0)) throw ValidationError("meridian_inverse needs rho > 0");
  if (!(phi >= 0.0 && phi <= std::numbers::pi)) throw ValidationError("meridian_inverse needs phi in [0, pi]");
  const double r = std::sqrt(2.0 * rho);
  return {r * std::cos(0.5 * phi), r * std::sin(0.5 * phi)};
}

LiftGeometry lift_geometry(const AnnulusGeometry& lower) {
  lower.validate();
  if (lower.n < 3) throw ValidationError("the lift needs m = n - 1 >= 2");
  return {lower.n - 1, std::sqrt(2.0 * lower.r_inner), std::sqrt(2.0 * lower.r_outer)};
}

Lift::Lift(const MeridianField& u) : geo_(lift_geometry(u.grid().geometry())), spline_(u) {}

double Lift::operator()(double s, double t) const {
  const MeridianPoint p = meridian_map(s, t);
  return spline_(p.rho, p.phi);
}

LiftedField lift(const MeridianField& u, const std::vector<double>& s_nodes, const std::vector<double>& t_nodes) {
  if (u.empty()) throw ValidationError("lift of an empty field");
  const Lift v(u);
  LiftedField out;
  out.geometry = v.geometry();
  out.s = s_nodes;
  out.t = t_nodes;
  out.value.assign(s_nodes.size() * t_nodes.size(), std::numeric_limits<double>::quiet_NaN());
  const double a = out.geometry.a, b = out.geometry.b;
  for (std::size_t i = 0; i < s_nodes.size(); ++i)
    for (std::size_t j = 0; j < t_nodes.size(); ++j) {
      const double s = s_nodes[i], t = t_nodes[j];
      if (s < 0.0 || t < 0.0) throw ValidationError("lift nodes must be >= 0");
      const double r = std::hypot(s, t);
      if (r < a * (1.0 - 1e-13) || r > b * (1.0 + 1e-13)) continue;
      out.value[i * t_nodes.size() + j] = v(s, t);
    }
  return out;
}

std::vector<double> default_lift_nodes(const MeridianGrid& grid, int uniform) {
  if (uniform < 2) throw ValidationError("need at least two uniform lift nodes");
  const LiftGeometry lg = lift_geometry(grid.geometry());
  std::vector<double> nodes{0.0};
  for (int k = 0; k < uniform; ++k) nodes.push_back(lg.b * k / (uniform - 1));
  for (int i = 0; i < grid.nr(); ++i) nodes.push_back(std::sqrt(2.0 * grid.r(i)));
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

LiftMaximum lift_maximum(const LiftedField& v) {
  LiftMaximum best;
  double big = -1.0;
  for (std::size_t i = 0; i < v.s.size(); ++i)
    for (std::size_t j = 0; j < v.t.size(); ++j) {
      const double x = v.at(i, j);
      if (std::isfinite(x) && std::abs(x) > big) {
        big = std::abs(x);
        best = {v.s[i], v.t[j], x};
      }
    }
  if (big < 0.0) throw ValidationError("lifted field has no samples inside A");
  return best;
}

namespace {

double power_term(double v, double q) { return std::copysign(std::pow(std::abs(v), q), v); }

}  // namespace

LiftedResidual lifted_residual_check(const MeridianField& u, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("eps must lie in [0, 1)");
  const Lift v(u);
  const MeridianGrid& g = u.grid();
  const MeridianSpline& sp = v.spline();
  const int m = v.m();
  const double q = critical_exponent(g.n()) - eps;

  LiftedResidual out;
  for (int i = 0; i + 1 < g.nr(); ++i) {
    for (int j = 0; j + 1 < g.nphi(); ++j) {
      const double dr = g.r(i + 1) - g.r(i), dp = g.phi(j + 1) - g.phi(j);
      const double rho = g.r(i) + 0.5 * dr, phi = g.phi(j) + 0.5 * dp;

      const SplineJet w = sp.jet(rho, phi);
      const double lap_lower = w.rr + m / rho * w.r +
                               (w.phiphi + (m - 1) * std::cos(phi) / std::sin(phi) * w.phi) / (rho * rho);
      const double lower = -lap_lower - power_term(w.v, q) / (2.0 * rho);

      // the stencil stays inside the bicubic patch of the cell
      const BiradialPoint y = meridian_inverse(rho, phi);
      const double root = std::sqrt(2.0 * rho);
      const double h = 0.05 * std::min(dr / root, 0.5 * root * dp);
      const double c = v(y.s, y.t);
      const double sp_ = v(y.s + h, y.t), sm = v(y.s - h, y.t);
      const double tp = v(y.s, y.t + h), tm = v(y.s, y.t - h);
      const double lap_upper = (sp_ - 2.0 * c + sm) / (h * h) + (m - 1) / y.s * (sp_ - sm) / (2.0 * h) +
                               (tp - 2.0 * c + tm) / (h * h) + (m - 1) / y.t * (tp - tm) / (2.0 * h);
      const double upper = -lap_upper - power_term(c, q);

      ++out.samples;
      out.max_upper = std::max(out.max_upper, std::abs(upper));
      out.max_lower_weighted = std::max(out.max_lower_weighted, std::abs(2.0 * rho * lower));
      out.max_discrepancy = std::max(out.max_discrepancy, std::abs(upper - 2.0 * rho * lower));
      out.scale = std::max(out.scale, std::pow(std::abs(c), q));
    }
  }
  out.relative = out.scale > 0.0 ? out.max_discrepancy / out.scale : out.max_discrepancy;
  return out;
}

namespace {

double lower_laplacian(const AxisymmetricFunction& u, int m, double rho, double phi, double h) {
  const double c = u(rho, phi);
  const double rp = u(rho + h, phi), rm = u(rho - h, phi);
  const double pp = u(rho, phi + h), pm = u(rho, phi - h);
  const double urr = (rp - 2.0 * c + rm) / (h * h), ur = (rp - rm) / (2.0 * h);
  const double upp = (pp - 2.0 * c + pm) / (h * h), up = (pp - pm) / (2.0 * h);
  return urr + m / rho * ur + (upp + (m - 1) * std::cos(phi) / std::sin(phi) * up) / (rho * rho);
}

double upper_laplacian(const AxisymmetricFunction& u, int m, double s, double t, double h) {
  auto v = [&](double a, double b) {
    const MeridianPoint p = meridian_map(a, b);
    return u(p.rho, p.phi);
  };
  const double c = v(s, t);
  const double sp = v(s + h, t), sm = v(s - h, t), tp = v(s, t + h), tm = v(s, t - h);
  return (sp - 2.0 * c + sm) / (h * h) + (m - 1) / s * (sp - sm) / (2.0 * h) + (tp - 2.0 * c + tm) / (h * h) +
         (m - 1) / t * (tp - tm) / (2.0 * h);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

CorrespondenceCase check_correspondence(const std::string& name, const AxisymmetricFunction& u,
                                        const AnnulusGeometry& lower, const CorrespondenceOptions& opts,
                                        double h0) {
  const LiftGeometry lg = lift_geometry(lower);
  if (opts.levels < 2 || opts.radial_samples < 1 || opts.angular_samples < 1 || !(h0 > 0.0))
    throw ValidationError("invalid correspondence options");
  const int m = lg.m;

  std::vector<BiradialPoint> pts;
  for (int k = 0; k < opts.radial_samples; ++k) {
    const double r = lg.a + (lg.b - lg.a) * (k + 1) / (opts.radial_samples + 1);
    for (int l = 0; l < opts.angular_samples; ++l) {
      const double th = 0.5 * std::numbers::pi * (l + 1) / (opts.angular_samples + 1);
      pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  for (const BiradialPoint& y : pts)
    if (std::min(y.s, y.t) <= h0) throw ValidationError("finite-difference step too large for the samples");

  CorrespondenceCase out;
  out.name = name;
  double scale = 0.0;
  for (const BiradialPoint& y : pts) {
    const MeridianPoint p = meridian_map(y.s, y.t);
    scale = std::max(scale, std::abs(u(p.rho, p.phi)));
  }
  for (int level = 0; level < opts.levels; ++level) {
    const double h = h0 / std::pow(2.0, level);
    double worst = 0.0, rhs_size = 0.0;
    for (const BiradialPoint& y : pts) {
      const MeridianPoint p = meridian_map(y.s, y.t);
      const double rhs = 2.0 * p.rho * lower_laplacian(u, m, p.rho, p.phi, h);
      const double lhs = upper_laplacian(u, m, y.s, y.t, h);
      worst = std::max(worst, std::abs(lhs - rhs));
      rhs_size = std::max(rhs_size, std::abs(rhs));
    }
    if (level == 0) scale = std::max(scale, rhs_size);
    out.h.push_back(h);
    out.discrepancy.push_back(worst);
  }
  if (scale > 0.0)
    for (double& e : out.discrepancy) e /= scale;

  const double largest = *std::max_element(out.discrepancy.begin(), out.discrepancy.end());
  out.exact = largest <= opts.exact_floor;
  if (out.exact) {
    out.order = std::numeric_limits<double>::quiet_NaN();
    out.pass = true;
  } else {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < out.h.size(); ++k)
      if (out.discrepancy[k] > opts.exact_floor) {
        lx.push_back(std::log(out.h[k]));
        ly.push_back(std::log(out.discrepancy[k]));
      }
    out.order = lx.size() >= 2 ? fit_slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
    out.pass = std::isfinite(out.order) && out.order >= opts.min_order;
  }
  return out;
}

CorrespondenceReport verify_correspondence(int m, const AnnulusGeometry& lower, const CorrespondenceOptions& opts) {
  if (m < 2) throw ValidationError("m must be >= 2");
  if (lower.n != m + 1) throw ValidationError("lower annulus must live in R^{m+1}");
  if (opts.random_fields < 0) throw ValidationError("random_fields must be >= 0");
  CorrespondenceReport rep;
  rep.m = m;
  rep.lower = lower;
  rep.upper = lift_geometry(lower);

  rep.cases.push_back(check_correspondence(
      "axial_coordinate", [](double rho, double phi) { return rho * std::cos(phi); }, lower, opts, opts.h0));
  rep.cases.push_back(check_correspondence(
      "squared_radius", [](double rho, double) { return rho * rho; }, lower, opts, opts.h0));
  rep.cases.push_back(
      check_correspondence("constant", [](double, double) { return 1.5; }, lower, opts, opts.h0));

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double r0 = lower.r_inner, w = lower.width();
  for (int f = 0; f < opts.random_fields; ++f) {
    constexpr int K = 4;
    std::vector<double> a(K * K);
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < K; ++l) a[k * K + l] = coef(rng) / (1.0 + k * k + l * l);
    auto field = [a, r0, w](double rho, double phi) {
      double sum = 0.0;
      for (int k = 0; k < K; ++k) {
        const double ck = std::cos(k * std::numbers::pi * (rho - r0) / w);
        for (int l = 0; l < K; ++l) sum += a[k * K + l] * ck * std::cos(l * phi);
      }
      return sum;
    };
    rep.cases.push_back(check_correspondence("random_" + std::to_string(f), field, lower, opts, opts.h0));
  }

  if (opts.include_bubble) {
    const int n = m + 1;
    const double delta = 0.2, z = 0.5 * (lower.r_inner + lower.r_outer);
    auto field = [n, delta, z](double rho, double phi) {
      return bubble_profile(n, delta, rho * rho + z * z - 2.0 * rho * z * std::cos(phi));
    };
    rep.cases.push_back(check_correspondence("bubble", field, lower, opts, 0.1 * delta));
  }

  rep.all_pass = true;
  for (const CorrespondenceCase& c : rep.cases) {
    rep.all_pass = rep.all_pass && c.pass;
    rep.max_discrepancy = std::max(rep.max_discrepancy, c.discrepancy.back());
  }
  return rep;
}

SphereConcentration sphere_extract(const SolveResult& result, int m) {
  if (result.field.empty()) throw ValidationError("sphere_extract of an empty result");
  const MeridianGrid& g = result.field.grid();
  if (g.n() != m + 1) throw ValidationError("solution must live in R^{m+1}");

  // the global maximum of |u| has to sit on the axis
  double big = -1.0;
  int jbig = 0;
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.nphi(); ++j)
      if (std::abs(result.field(i, j)) > big) {
        big = std::abs(result.field(i, j));
        jbig = j;
      }
  if (jbig != 0 && jbig != g.nphi() - 1) {
    std::ostringstream os;
    os << "maximum of |u| off the axis (phi = " << g.phi(jbig) << ")";
    throw NumericalError(os.str());
  }
  if (result.diagnostics.peaks.empty()) throw NumericalError("no concentration peaks in the blow-up fit");

  SphereConcentration out;
  out.geometry = lift_geometry(g.geometry());
  for (const Peak& p : result.diagnostics.peaks) {
    ConcentrationSphere c;
    c.factor = p.z > 0.0 ? 1 : 2;
    c.rho = std::abs(p.z);
    c.radius = std::sqrt(2.0 * c.rho);
    c.sign = p.amplitude >= 0.0 ? 1 : -1;
    c.amplitude = p.amplitude;
    out.spheres.push_back(c);
  }
  return out;
}

}  // namespace lanemden
