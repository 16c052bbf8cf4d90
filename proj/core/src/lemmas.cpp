#include "lanemden/lemmas.hpp"

#include <algorithm>
#include <cmath>

#include "lanemden/error.hpp"
#include "lanemden/gamma_constants.hpp"
#include "lanemden/green.hpp"
#include "parallel.hpp"

namespace lanemden {

namespace {

LemmaEntry entry(std::string id, double eps, double lhs, double rhs, double tol) {
  LemmaEntry e;
  e.id = std::move(id);
  e.eps = eps;
  e.lhs = lhs;
  e.rhs = rhs;
  e.rhs_printed = rhs;
  e.ratio = lhs / rhs;
  e.ratio_printed = e.ratio;
  e.tolerance = tol;
  e.pass = std::isfinite(e.ratio) && std::abs(e.ratio - 1.0) <= tol;
  return e;
}

// first-order comparison for identities with an O(1) leading term
LemmaEntry first_order(std::string id, double eps, double lhs, double rhs, double lead, double tol) {
  LemmaEntry e = entry(std::move(id), eps, lhs, rhs, tol);
  e.ratio = (lhs - lead) / (rhs - lead);
  e.ratio_printed = e.ratio;
  e.pass = std::isfinite(e.ratio) && std::abs(e.ratio - 1.0) <= tol;
  return e;
}

void set_printed(LemmaEntry& e, double printed, double lead) {
  e.rhs_printed = printed;
  e.ratio_printed = (e.lhs - lead) / (printed - lead);
}

std::vector<LemmaEntry> evaluate_rung(int n, double eps, const AnnulusGeometry& geo,
                                      const LemmaOptions& o, const GammaConstants& g) {
  AnsatzConfig cfg;
  cfg.n = n;
  cfg.eps = eps;
  cfg.lambda = o.lambda;
  cfg.amplitude = AmplitudeMode::unit;
  cfg.pairs = {{1, o.d1, o.t1}, {-1, o.d2, o.t2}};
  const AnsatzIntegrator in(cfg, geo, o.quadrature);

  const std::size_t k1 = 0, k2 = o.lambda != 0 ? 2 : 1;
  const PolarCentre c1 = in.centre(k1), c2 = in.centre(k2);
  const double p = critical_exponent(n);
  const double m = 1.0 + std::abs(o.lambda);
  const double tau1 = c1.z - 1.0, tau2 = c2.z - 1.0;
  const double tau = std::min({tau1, tau2, 0.5 * std::abs(tau1 - tau2)});
  const double d1 = c1.delta, d2 = c2.delta;
  const double a1 = std::pow(d1 / (2.0 * tau1), n - 2);
  const double a2 = std::pow(d2 / (2.0 * tau2), n - 2);
  const double bd = std::pow(d1 * d2, 0.5 * (n - 2)) *
                    (std::pow(std::abs(tau1 - tau2), 2 - n) - std::pow(tau1 + tau2, 2 - n));
  const double g1 = g.gamma1, g2 = g.gamma2, g3 = g.gamma3;
  const double ball_volume = sphere_area(n - 1) / n;  // = int (1+|y|^2)^{-(n+2)/2}
  const PolarOptions& po = in.polar();

  auto up = [&](double xp, double xn) { return std::pow(in.bubble(k1, xp, xn), p); };
  auto ball = [&](const AxisIntegrand& f) { return integrate_ball(geo, c1, tau, f, po); };

  std::vector<LemmaEntry> out;

  const double self = ball([&](double xp, double xn) { return -up(xp, xn) * in.correction(k1, xp, xn); });
  out.push_back(entry("ball_self_correction", eps, self, -g2 * a1, 0.10));

  const double cross = ball([&](double xp, double xn) { return up(xp, xn) * in.projected(k2, xp, xn); });
  out.push_back(entry("ball_interaction", eps, cross, g2 * bd, 0.25));

  const double self_w = ball([&](double xp, double xn) {
    return -up(xp, xn) * in.correction(k1, xp, xn) / std::hypot(xp, xn);
  });
  out.push_back(entry("ball_self_correction_weighted", eps, self_w, -g2 * a1, 0.25));

  const double cross_w = ball([&](double xp, double xn) {
    return up(xp, xn) * in.projected(k2, xp, xn) / std::hypot(xp, xn);
  });
  LemmaEntry iv = entry("ball_interaction_weighted", eps, cross_w, g2 * bd, 0.25);
  set_printed(iv, -g2 * a1, 0.0);
  iv.note = "quoted form -gamma2 (delta1/2tau1)^{n-2} disagrees in sign and form; 1/|x| = 1 + O(eps) on the ball";
  out.push_back(iv);

  const double mass = integrate_about(
      geo, c1, [&](double xp, double xn) { return std::pow(in.bubble(k1, xp, xn), p + 1.0) / std::hypot(xp, xn); },
      po);
  LemmaEntry v = first_order("weighted_mass", eps, mass, g1 - g1 * tau1, g1, 0.10);
  v.note = "ratio of first-order parts (lhs - gamma1) / (-gamma1 tau1)";
  out.push_back(v);

  const MeridianSpline h1(regular_part(in.grid(), c1.z));
  const MeridianSpline h2(regular_part(in.grid(), c2.z));
  auto profile = [&](double xp, double xn) {
    const double dz = xn - c1.z;
    return std::pow(1.0 + (xp * xp + dz * dz) / (d1 * d1), -0.5 * (n + 2));
  };
  const double scale = std::pow(d1, -n);
  const double h_self = scale * ball([&](double xp, double xn) {
    return std::pow(tau1, n - 2) * h1(std::hypot(xp, xn), std::atan2(xp, xn)) * profile(xp, xn);
  });
  out.push_back(entry("scaled_regular_part_self", eps, h_self, std::pow(2.0, 2 - n) * ball_volume, 0.10));

  const double h_cross = scale * ball([&](double xp, double xn) {
    return std::pow(tau1 + tau2, n - 2) * h2(std::hypot(xp, xn), std::atan2(xp, xn)) * profile(xp, xn);
  });
  out.push_back(entry("scaled_regular_part_cross", eps, h_cross, ball_volume, 0.25));

  const double b_cross = scale * ball([&](double xp, double xn) {
    const double dz = xn - c2.z;
    return std::pow(std::abs(tau1 - tau2), n - 2) * std::pow(d2 * d2 + xp * xp + dz * dz, -0.5 * (n - 2)) *
           profile(xp, xn);
  });
  out.push_back(entry("scaled_cross_bubble", eps, b_cross, ball_volume, 0.25));

  // energy-level items; the quoted forms are stated for |lambda| = 1
  const double half = 0.5 * m;
  const double dir = 0.5 * in.dirichlet_integral();
  LemmaEntry e1 = first_order("dirichlet_energy", eps, dir, half * (2.0 * g1 - g2 * (a1 + a2 + 2.0 * bd)), m * g1, 0.25);
  set_printed(e1, half * (2.0 * g1 - g2 * (a1 + a2 + bd)), m * g1);
  e1.note = "first-order ratio; the quoted form carries the interaction term once instead of twice";
  out.push_back(e1);

  const double crit = in.weighted_potential(p + 1.0);
  const double lead2 = m * 2.0 * g1 / (p + 1.0);
  const double rhs2 = m * ((2.0 * g1 - g1 * (tau1 + tau2)) / (p + 1.0) - g2 * (a1 + a2 + 2.0 * bd));
  LemmaEntry e2 = first_order("critical_potential", eps, crit / (p + 1.0), rhs2, lead2, 0.25);
  e2.note = "first-order ratio";
  out.push_back(e2);

  const double q = p + 1.0 - eps;
  const double shift = in.weighted_potential(q) / q - crit / (p + 1.0);
  const double la = std::log(bubble_alpha(n));
  const double ld = std::log(d1) + std::log(d2);
  const double rhs3 = m * eps *
                      (2.0 * g1 / ((p + 1.0) * (p + 1.0)) - 2.0 * g1 * la / (p + 1.0) - 2.0 * g3 / (p + 1.0) +
                       (n - 2) * g1 / (2.0 * (p + 1.0)) * ld);
  LemmaEntry e3 = entry("subcritical_shift", eps, shift, rhs3, 0.25);
  set_printed(e3,
              m * (g1 / ((p + 1.0) * (p + 1.0)) - bubble_alpha(n) * g1 / (p + 1.0) - g3 * eps / (p + 1.0) +
                   (n - 2) / (2.0 * (p + 1.0)) * ld),
              0.0);
  e3.note = "quoted form lacks the overall eps and has alpha_n where log alpha_n belongs";
  out.push_back(e3);

  return out;
}

}  // namespace

LemmaReport verify_lemmas(int n, const std::vector<double>& eps_ladder, const AnnulusGeometry& geo,
                          const LemmaOptions& opts) {
  if (n < 3) throw ValidationError("verify_lemmas needs n >= 3");
  geo.validate();
  if (geo.n != n) throw ValidationError("annulus dimension does not match n");
  if (eps_ladder.empty()) throw ValidationError("eps ladder is empty");
  for (double e : eps_ladder)
    if (!(e > 0.0 && e < 1.0)) throw ValidationError("eps values must lie in (0, 1)");
  if (!(opts.t1 > 0.0 && opts.t1 < opts.t2)) throw ValidationError("need 0 < t1 < t2");
  if (!(opts.d1 > 0.0 && opts.d2 > 0.0)) throw ValidationError("need d1, d2 > 0");
  if (std::abs(opts.lambda) > 1) throw ValidationError("lambda must be -1, 0 or 1");

  const GammaConstants g = gamma_constants_closed_form(n);
  std::vector<std::vector<LemmaEntry>> rungs(eps_ladder.size());
  detail::parallel_for(eps_ladder.size(), opts.threads,
                       [&](std::size_t k) { rungs[k] = evaluate_rung(n, eps_ladder[k], geo, opts, g); });

  LemmaReport rep;
  rep.n = n;
  rep.geometry = geo;
  for (const auto& r : rungs) rep.entries.insert(rep.entries.end(), r.begin(), r.end());
  const auto smallest = std::min_element(eps_ladder.begin(), eps_ladder.end()) - eps_ladder.begin();
  rep.summary = rungs[smallest];
  rep.all_pass = std::all_of(rep.summary.begin(), rep.summary.end(), [](const LemmaEntry& e) { return e.pass; });
  return rep;
}

SlopeCheck weighted_mass_slope(int n, const AnnulusGeometry& geo, double delta, const std::vector<double>& tau,
                               const PolarOptions& polar) {
  if (tau.size() != 3) throw ValidationError("weighted_mass_slope needs three tau samples");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  geo.validate();
  const double p = critical_exponent(n);
  SlopeCheck s;
  s.tau = tau;
  for (double t : tau) {
    if (!(t > 0.0 && geo.r_inner + t < geo.r_outer)) throw ValidationError("tau sample outside the annulus");
    const double z = geo.r_inner + t;
    auto f = [&](double xp, double xn) {
      const double dz = xn - z;
      return std::pow(bubble_profile(n, delta, xp * xp + dz * dz), p + 1.0) / std::hypot(xp, xn);
    };
    s.value.push_back(integrate_about(geo, {z, delta}, f, polar));
  }
  // derivative at 0 of the interpolating quadratic
  const double x0 = tau[0], x1 = tau[1], x2 = tau[2];
  const double f0 = s.value[0], f1 = s.value[1], f2 = s.value[2];
  const double l0 = -(x1 + x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = -(x0 + x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = -(x0 + x1) / ((x2 - x0) * (x2 - x1));
  s.slope = l0 * f0 + l1 * f1 + l2 * f2;
  s.expected = -gamma_constants_closed_form(n).gamma1;
  s.relative_error = std::abs(s.slope - s.expected) / std::abs(s.expected);
  return s;
}

}  // namespace lanemden
