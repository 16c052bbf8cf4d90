#include "lanemden/expansion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "lanemden/green.hpp"
#include "lanemden/poisson.hpp"
#include "lanemden/spline.hpp"
#include "parallel.hpp"

namespace lanemden {

EnergyExpansion assembled_coefficients(int n, AmplitudeMode mode, int lambda_abs) {
  if (lambda_abs != 0 && lambda_abs != 1) throw ValidationError("lambda_abs must be 0 or 1");
  const GammaConstants g = gamma_constants_closed_form(n);
  const double p = critical_exponent(n);
  const double la = std::log(bubble_alpha(n));
  const double g1 = g.gamma1, g2 = g.gamma2, g3 = g.gamma3;
  EnergyExpansion e;
  e.n = n;
  e.gammas = g;
  e.lambda_abs = lambda_abs;
  e.provenance = Provenance::assembled;
  if (mode == AmplitudeMode::unit) {
    e.c[0] = g1 * p / (2.0 * (p + 1.0));
    e.c[1] = -0.5 * (g1 / ((p + 1.0) * (p + 1.0)) - g1 * la / (p + 1.0) - g3 / (p + 1.0));
    e.c[2] = -(n - 1) * g1 / (4.0 * (p + 1.0));
    e.c[3] = 0.0;
    e.c[4] = g1 / (2.0 * (p + 1.0));
    e.c[5] = (n - 2) * g1 / (4.0 * (p + 1.0));
  } else {
    const double k2 = std::pow(2.0, 2.0 / (p - 1.0));
    e.c[0] = k2 * g1 * (p - 1.0) / (2.0 * (p + 1.0));
    e.c[1] = k2 * (g1 * std::log(2.0) / ((p - 1.0) * (p + 1.0)) - g1 / ((p + 1.0) * (p + 1.0)) +
                   (g1 * la + g3) / (p + 1.0));
    e.c[2] = -k2 * (n - 1) * g1 / (2.0 * (p + 1.0));
    e.c[3] = k2 * g2 / 2.0;
    e.c[4] = k2 * g1 / (p + 1.0);
    e.c[5] = k2 * (n - 2) * g1 / (2.0 * (p + 1.0));
  }
  // The constant and eps terms are per bubble pair; the template carries the
  // (1 + |lambda|) factor only on Phi.
  const double mult = 1.0 + lambda_abs;
  e.c[0] *= mult;
  e.c[1] *= mult;
  e.c[2] *= mult;
  return e;
}

namespace {

double centre_tau(const AnnulusGeometry& geo, double z) {
  const double a = std::abs(z);
  return std::min(a - geo.r_inner, geo.r_outer - a);
}

}  // namespace

AnsatzIntegrator::AnsatzIntegrator(const AnsatzConfig& cfg, const AnnulusGeometry& geo,
                                   const EnergyQuadratureOptions& opts)
    : cfg_(cfg), geo_(geo), opts_(opts) {
  geo_.validate();
  if (geo_.n != cfg_.n) throw ValidationError("ansatz and annulus dimensions differ");
  terms_ = ansatz_terms(cfg_);
  z_.resize(terms_.size());
  delta_.resize(terms_.size());
  tau_ = geo_.width();
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    terms_[k].bubble.axis_position(z_[k]);
    delta_[k] = terms_[k].bubble.delta;
    const double a = std::abs(z_[k]);
    if (!(a > geo_.r_inner && a < geo_.r_outer))
      throw ValidationError("ansatz centres must lie strictly inside the annulus");
    tau_ = std::min(tau_, centre_tau(geo_, z_[k]));
    for (std::size_t l = 0; l < k; ++l)
      if (z_[l] * z_[k] > 0.0) tau_ = std::min(tau_, 0.5 * std::abs(z_[l] - z_[k]));
  }

  GridSpec spec;
  spec.nr = opts_.nr;
  spec.nphi = opts_.nphi;
  spec.radial_foci.push_back({geo_.r_inner, opts_.core_fraction * tau_});
  double zmax = 0.0;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    spec.radial_foci.push_back({std::abs(z_[k]), opts_.core_fraction * tau_});
    zmax = std::max(zmax, std::abs(z_[k]));
  }
  spec.pole_spacing = opts_.core_fraction * tau_ / zmax;
  grid_ = MeridianGrid::make(geo_, spec);

  corr_.reserve(terms_.size());
  for (const auto& t : terms_)
    corr_.emplace_back(harmonic_extension(grid_, bubble_boundary(*grid_, t.bubble)));
}

double AnsatzIntegrator::bubble(std::size_t k, double xp, double xn) const {
  const double dz = xn - z_[k];
  return bubble_profile(cfg_.n, delta_[k], xp * xp + dz * dz);
}

double AnsatzIntegrator::correction(std::size_t k, double xp, double xn) const {
  return corr_[k](std::hypot(xp, xn), std::atan2(xp, xn));
}

double AnsatzIntegrator::value(double xp, double xn) const {
  double v = 0.0;
  for (std::size_t k = 0; k < terms_.size(); ++k) v += terms_[k].coefficient * projected(k, xp, xn);
  return v;
}

double AnsatzIntegrator::gradient_pair(std::size_t k, std::size_t l) const {
  const double p = critical_exponent(cfg_.n);
  auto f = [&](double xp, double xn) { return std::pow(bubble(k, xp, xn), p) * projected(l, xp, xn); };
  return integrate_about(geo_, centre(k), f, opts_.polar);
}

double AnsatzIntegrator::dirichlet_integral() const {
  double g = 0.0;
  const std::size_t m = terms_.size();
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = k; l < m; ++l)
      g += (k == l ? 1.0 : 2.0) * terms_[k].coefficient * terms_[l].coefficient * gradient_pair(k, l);
  return g;
}

double AnsatzIntegrator::weighted_potential(double exponent) const {
  std::vector<PolarCentre> centres;
  for (std::size_t k = 0; k < terms_.size(); ++k) centres.push_back(centre(k));
  auto f = [&](double xp, double xn) {
    const double v = value(xp, xn);
    return v == 0.0 ? 0.0 : std::pow(std::abs(v), exponent) / std::hypot(xp, xn);
  };
  return integrate_partitioned(geo_, centres, f, opts_.polar);
}

AnsatzEnergy ansatz_energy(const AnsatzConfig& cfg, const AnnulusGeometry& geo,
                           const EnergyQuadratureOptions& opts) {
  const AnsatzIntegrator in(cfg, geo, opts);
  const double q = critical_exponent(cfg.n) + 1.0 - cfg.eps;
  AnsatzEnergy out;
  out.gradient = in.dirichlet_integral();
  out.potential = 0.5 * in.weighted_potential(q);
  out.total = 0.5 * out.gradient - out.potential / q;
  return out;
}

std::array<double, 6> template_row(int n, int lambda_abs, double eps,
                                   const std::vector<BubblePair>& pairs) {
  const int m = n - 2;
  const double s = eps * (1.0 + lambda_abs);
  std::array<double, 6> row{1.0, eps, eps * std::log(eps), 0.0, 0.0, 0.0};
  if (pairs.size() == 1) {
    row[3] = s * std::pow(pairs[0].d / (2.0 * pairs[0].t), m);
    row[4] = s * pairs[0].t;
    row[5] = -s * std::log(pairs[0].d);
  } else {
    const double d1 = pairs[0].d, d2 = pairs[1].d, t1 = pairs[0].t, t2 = pairs[1].t;
    row[3] = s * (std::pow(d1 / (2.0 * t1), m) + std::pow(d2 / (2.0 * t2), m) +
                  2.0 * std::pow(d1 * d2, 0.5 * m) *
                      (std::pow(std::abs(t1 - t2), -m) - std::pow(t1 + t2, -m)));
    row[4] = s * (t1 + t2);
    row[5] = -s * (std::log(d1) + std::log(d2));
  }
  return row;
}

double template_value(const EnergyExpansion& e, double eps, const std::vector<BubblePair>& pairs) {
  const auto row = template_row(e.n, e.lambda_abs, eps, pairs);
  double v = 0.0;
  for (int k = 0; k < 6; ++k) v += row[k] * e.c[k];
  return v;
}

FitReport fit_template(int n, int lambda_abs, const std::vector<FitSample>& samples) {
  if (samples.size() < 6) throw ValidationError("fit needs at least six samples");
  const auto rows = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(rows, 6);
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const FitSample& s = samples[static_cast<std::size_t>(r)];
    if (!(s.eps > 0.0)) throw ValidationError("fit samples need eps > 0");
    const auto row = template_row(n, lambda_abs, s.eps, s.pairs);
    const double w = 1.0 / (s.eps * s.eps);
    for (int k = 0; k < 6; ++k) a(r, k) = w * row[k];
    b(r) = w * s.energy;
  }
  // Column equilibration before the SVD keeps the rank test meaningful.
  Eigen::VectorXd colscale(6);
  for (int k = 0; k < 6; ++k) {
    colscale(k) = a.col(k).norm();
    if (!(colscale(k) > 0.0)) throw NumericalError("fit design matrix has a zero column");
    a.col(k) /= colscale(k);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  FitReport rep;
  rep.condition_number = sv(0) / sv(sv.size() - 1);
  if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) {
    std::ostringstream os;
    os << "rank-deficient fit design matrix (condition " << rep.condition_number
       << "); vary d, t and eps more widely";
    throw NumericalError(os.str());
  }
  const Eigen::VectorXd x = svd.solve(b).cwiseQuotient(colscale);

  rep.fitted.n = n;
  rep.fitted.lambda_abs = lambda_abs;
  rep.fitted.provenance = Provenance::fitted;
  rep.fitted.gammas = gamma_constants_closed_form(n);
  for (int k = 0; k < 6; ++k) rep.fitted.c[k] = x(k);
  rep.samples = samples;

  std::vector<double> eps_values;
  for (const auto& s : samples)
    if (std::find(eps_values.begin(), eps_values.end(), s.eps) == eps_values.end())
      eps_values.push_back(s.eps);
  std::sort(eps_values.begin(), eps_values.end(), std::greater<>());
  for (double eps : eps_values) {
    RungResidual rr;
    rr.eps = eps;
    for (const auto& s : samples) {
      if (s.eps != eps) continue;
      rr.max_abs_residual =
          std::max(rr.max_abs_residual, std::abs(s.energy - template_value(rep.fitted, eps, s.pairs)));
    }
    rr.residual_over_eps = rr.max_abs_residual / eps;
    rep.rungs.push_back(rr);
  }
  rep.remainder_decreasing = rep.rungs.size() >= 3;
  for (std::size_t k = rep.rungs.size() >= 3 ? rep.rungs.size() - 2 : rep.rungs.size();
       k < rep.rungs.size(); ++k)
    rep.remainder_decreasing =
        rep.remainder_decreasing && rep.rungs[k].residual_over_eps < rep.rungs[k - 1].residual_over_eps;
  return rep;
}

AnsatzFamily AnsatzFamily::case_i_default(int n) {
  AnsatzFamily f;
  f.n = n;
  for (double d : {0.05, 0.1, 0.2})
    for (double t : {0.25, 0.5, 1.0}) f.parameter_sets.push_back({{1, d, t}});
  return f;
}

void AnsatzFamily::validate() const {
  if (n < 3) throw ValidationError("family dimension must be >= 3");
  if (lambda < -1 || lambda > 1) throw ValidationError("lambda must be -1, 0 or +1");
  if (signs.empty() || signs.size() > 2) throw ValidationError("family needs one or two signs");
  if (parameter_sets.size() < 8) throw ValidationError("fit needs at least 8 (d, t) samples");
  for (const auto& ps : parameter_sets)
    if (ps.size() != signs.size()) throw ValidationError("parameter set size differs from sign count");
}

std::vector<double> default_fit_ladder() {
  std::vector<double> e;
  for (int k = 0; k <= 5; ++k) e.push_back(0.1 * std::pow(2.0, -k));
  return e;
}

FitReport fit_expansion(const AnsatzFamily& family, const std::vector<double>& eps_ladder,
                        const AnnulusGeometry& geo, const FitOptions& opts) {
  family.validate();
  geo.validate();
  if (eps_ladder.size() < 6) throw ValidationError("fit needs at least six eps values");
  for (double e : eps_ladder)
    if (!(e > 0.0)) throw ValidationError("eps values must be positive");

  std::vector<FitSample> samples;
  for (double eps : eps_ladder) {
    for (const auto& ps : family.parameter_sets) {
      FitSample s;
      s.eps = eps;
      s.pairs = ps;
      for (std::size_t k = 0; k < ps.size(); ++k) s.pairs[k].sign = family.signs[k];
      samples.push_back(s);
    }
  }

  detail::parallel_for(samples.size(), opts.threads, [&](std::size_t k) {
    AnsatzConfig cfg;
    cfg.n = family.n;
    cfg.eps = samples[k].eps;
    cfg.lambda = family.lambda;
    cfg.pairs = samples[k].pairs;
    cfg.amplitude = family.amplitude;
    samples[k].energy = ansatz_energy(cfg, geo, opts.quadrature).total;
  });

  FitReport rep = fit_template(family.n, std::abs(family.lambda), samples);
  rep.assembled = assembled_coefficients(family.n, family.amplitude, std::abs(family.lambda));
  for (int k = 0; k < 6; ++k)
    rep.relative_disagreement[k] = std::abs(rep.fitted.c[k] - rep.assembled.c[k]) /
                                   std::max(std::abs(rep.assembled.c[k]), 1e-12);
  return rep;
}

}  // namespace lanemden
