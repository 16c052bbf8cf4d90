#include "lanemden/reduced_energy.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lanemden {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::fitted: return "fitted";
    case Provenance::assembled: return "assembled";
    case Provenance::supplied: return "supplied";
    default: return "unit";
  }
}

std::string to_string(PhiCase c) { return c == PhiCase::single ? "single" : "double"; }

PhiCase phi_case_from_string(const std::string& s) {
  if (s == "single") return PhiCase::single;
  if (s == "double" || s == "pair") return PhiCase::pair;
  throw ValidationError("unknown case '" + s + "' (expected single or double)");
}

EnergyExpansion EnergyExpansion::unit(int n) {
  EnergyExpansion e;
  e.n = n;
  e.c = {0.0, 0.0, 0.0, 1.0, 1.0, 1.0};
  e.gammas.n = n;
  e.provenance = Provenance::unit;
  return e;
}

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError(std::string(what) + " must be positive and finite");
}

double interaction(double t1, double t2, int m) {
  return std::pow(std::abs(t1 - t2), -m) - std::pow(t1 + t2, -m);
}

}  // namespace

double phi_single(double d, double t, const EnergyExpansion& e) {
  check_positive(d, "d");
  check_positive(t, "t");
  const int m = e.n - 2;
  return e.c4() * std::pow(d / (2.0 * t), m) + e.c5() * t - e.c6() * std::log(d);
}

double phi_double(double d1, double d2, double t1, double t2, const EnergyExpansion& e) {
  check_positive(d1, "d1");
  check_positive(d2, "d2");
  check_positive(t1, "t1");
  check_positive(t2, "t2");
  if (t1 == t2) throw ValidationError("phi_double: t1 = t2 makes the interaction term singular");
  if (!(t1 < t2)) throw ValidationError("phi_double requires t1 < t2");
  const int m = e.n - 2;
  const double a = std::pow(d1 / (2.0 * t1), m) + std::pow(d2 / (2.0 * t2), m) +
                   2.0 * std::pow(d1 * d2, 0.5 * m) * interaction(t1, t2, m);
  return e.c4() * a + e.c5() * (t1 + t2) - e.c6() * (std::log(d1) + std::log(d2));
}

double phi_value(PhiCase c, const Eigen::VectorXd& x, const EnergyExpansion& e) {
  if (c == PhiCase::single) return phi_single(x(0), x(1), e);
  return phi_double(x(0), x(1), x(2), x(3), e);
}

Eigen::VectorXd phi_gradient(PhiCase c, const Eigen::VectorXd& x, const EnergyExpansion& e) {
  const int m = e.n - 2;
  if (c == PhiCase::single) {
    const double d = x(0), t = x(1);
    const double a = std::pow(d / (2.0 * t), m);
    Eigen::VectorXd g(2);
    g << e.c4() * m * a / d - e.c6() / d, -e.c4() * m * a / t + e.c5();
    return g;
  }
  const double d1 = x(0), d2 = x(1), t1 = x(2), t2 = x(3);
  const double a1 = std::pow(d1 / (2.0 * t1), m), a2 = std::pow(d2 / (2.0 * t2), m);
  const double b = std::pow(d1 * d2, 0.5 * m);
  const double dd = interaction(t1, t2, m);
  const double sg = t1 < t2 ? -1.0 : 1.0;
  const double diff = m * std::pow(std::abs(t1 - t2), -m - 1);
  const double sum = m * std::pow(t1 + t2, -m - 1);
  const double dD1 = -sg * diff + sum, dD2 = sg * diff + sum;
  Eigen::VectorXd g(4);
  g(0) = e.c4() * (m * a1 / d1 + m * b * dd / d1) - e.c6() / d1;
  g(1) = e.c4() * (m * a2 / d2 + m * b * dd / d2) - e.c6() / d2;
  g(2) = e.c4() * (-m * a1 / t1 + 2.0 * b * dD1) + e.c5();
  g(3) = e.c4() * (-m * a2 / t2 + 2.0 * b * dD2) + e.c5();
  return g;
}

Eigen::MatrixXd phi_hessian(PhiCase c, const Eigen::VectorXd& x, const EnergyExpansion& e) {
  const Eigen::Index k = x.size();
  Eigen::MatrixXd h(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double step = 1e-5 * x(j);
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    h.col(j) = (phi_gradient(c, xp, e) - phi_gradient(c, xm, e)) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

void SearchBox::validate() const {
  if (!(d_min > 0.0 && d_max > d_min && t_min > 0.0 && t_max > t_min))
    throw ValidationError("search box must satisfy 0 < min < max in both d and t");
  if (points_per_dim != 0 && points_per_dim < 3)
    throw ValidationError("search box needs at least 3 points per dimension");
}

int SearchBox::resolved_points(PhiCase c) const {
  if (points_per_dim > 0) return points_per_dim;
  return c == PhiCase::single ? 81 : 21;
}

Eigen::VectorXd CriticalPoint::params() const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(d.size() + t.size()));
  Eigen::Index k = 0;
  for (double v : d) x(k++) = v;
  for (double v : t) x(k++) = v;
  return x;
}

namespace {

double coefficient_scale(const EnergyExpansion& e) {
  return std::max({std::abs(e.c4()), std::abs(e.c5()), std::abs(e.c6())});
}

bool admissible(PhiCase c, const Eigen::VectorXd& x) {
  if ((x.array() <= 0.0).any() || !x.allFinite()) return false;
  return c == PhiCase::single || x(2) < x(3);
}

struct Axis {
  std::vector<double> d, t;
  double log_step;
};

Axis scan_axes(const SearchBox& box, int pts) {
  Axis a;
  const double ld0 = std::log(box.d_min), ld1 = std::log(box.d_max);
  const double lt0 = std::log(box.t_min), lt1 = std::log(box.t_max);
  for (int k = 0; k < pts; ++k) {
    a.d.push_back(std::exp(ld0 + (ld1 - ld0) * k / (pts - 1)));
    a.t.push_back(std::exp(lt0 + (lt1 - lt0) * k / (pts - 1)));
  }
  a.d.front() = box.d_min;
  a.d.back() = box.d_max;
  a.t.front() = box.t_min;
  a.t.back() = box.t_max;
  a.log_step = std::max((ld1 - ld0), (lt1 - lt0)) / (pts - 1);
  return a;
}

}  // namespace

GridSearchResult grid_search_phi(PhiCase c, const EnergyExpansion& e, const SearchBox& box) {
  box.validate();
  const int pts = box.resolved_points(c);
  const Axis ax = scan_axes(box, pts);
  GridSearchResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.log_step = ax.log_step;
  std::vector<int> best_idx;
  auto consider = [&](const Eigen::VectorXd& x, std::vector<int> idx) {
    const double v = phi_value(c, x, e);
    // Strict comparison in lexicographic scan order keeps the smallest tuple on ties.
    if (v < best.value) {
      best.value = v;
      best.params = x;
      best_idx = std::move(idx);
    }
  };
  if (c == PhiCase::single) {
    Eigen::VectorXd x(2);
    for (int i = 0; i < pts; ++i)
      for (int j = 0; j < pts; ++j) {
        x << ax.d[i], ax.t[j];
        consider(x, {i, j});
      }
  } else {
    Eigen::VectorXd x(4);
    for (int i1 = 0; i1 < pts; ++i1)
      for (int i2 = 0; i2 < pts; ++i2)
        for (int j1 = 0; j1 < pts; ++j1)
          for (int j2 = j1 + 1; j2 < pts; ++j2) {
            x << ax.d[i1], ax.d[i2], ax.t[j1], ax.t[j2];
            consider(x, {i1, i2, j1, j2});
          }
  }
  best.on_boundary = false;
  for (int k : best_idx)
    if (k == 0 || k == pts - 1) best.on_boundary = true;
  return best;
}

CriticalPoint minimize_phi(PhiCase c, const EnergyExpansion& e, const SearchBox& box) {
  box.validate();
  if (!e.phi_coefficients_positive())
    throw ValidationError("minimize_phi needs positive c4, c5, c6");
  const GridSearchResult start = grid_search_phi(c, e, box);
  const double scale = coefficient_scale(e);

  // Newton in y = log x keeps the iterates positive.
  Eigen::VectorXd y = start.params.array().log().matrix();
  auto value_at = [&](const Eigen::VectorXd& yy) {
    const Eigen::VectorXd x = yy.array().exp().matrix();
    if (!admissible(c, x)) return std::numeric_limits<double>::infinity();
    return phi_value(c, x, e);
  };
  auto grad_y = [&](const Eigen::VectorXd& yy) {
    const Eigen::VectorXd x = yy.array().exp().matrix();
    return Eigen::VectorXd(x.cwiseProduct(phi_gradient(c, x, e)));
  };
  auto hess_y = [&](const Eigen::VectorXd& yy) {
    const Eigen::VectorXd x = yy.array().exp().matrix();
    Eigen::MatrixXd h = x.asDiagonal() * phi_hessian(c, x, e) * x.asDiagonal();
    h += grad_y(yy).asDiagonal();
    return Eigen::MatrixXd(0.5 * (h + h.transpose()));
  };

  int iters = 0;
  double f = value_at(y);
  for (; iters < 200; ++iters) {
    const Eigen::VectorXd g = grad_y(y);
    if (g.cwiseAbs().maxCoeff() <= 1e-14 * scale) break;
    Eigen::MatrixXd h = hess_y(y);
    Eigen::VectorXd step;
    double shift = 0.0;
    for (int tries = 0; tries < 60; ++tries) {
      Eigen::LLT<Eigen::MatrixXd> llt(h + shift * Eigen::MatrixXd::Identity(h.rows(), h.cols()));
      if (llt.info() == Eigen::Success) {
        step = -llt.solve(g);
        break;
      }
      shift = shift == 0.0 ? 1e-8 * (1.0 + h.cwiseAbs().maxCoeff()) : 10.0 * shift;
    }
    if (step.size() == 0) step = -g;
    const double slope = g.dot(step);
    double a = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt, a *= 0.5) {
      const Eigen::VectorXd yn = y + a * step;
      const double fn = value_at(yn);
      if (fn <= f + 1e-4 * a * slope || (std::abs(fn - f) <= 1e-15 * std::abs(f) && fn <= f)) {
        y = yn;
        f = fn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    if ((a * step).cwiseAbs().maxCoeff() < 1e-15) break;
  }

  const Eigen::VectorXd x = y.array().exp().matrix();
  const Eigen::VectorXd g = phi_gradient(c, x, e);
  CriticalPoint cp;
  cp.kase = c;
  cp.value = phi_value(c, x, e);
  cp.scaled_gradient = x.cwiseProduct(g).cwiseAbs().maxCoeff() / scale;
  cp.newton_iterations = iters;
  const std::size_t half = c == PhiCase::single ? 1 : 2;
  for (std::size_t k = 0; k < half; ++k) {
    cp.d.push_back(x(static_cast<Eigen::Index>(k)));
    cp.t.push_back(x(static_cast<Eigen::Index>(half + k)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi_hessian(c, x, e));
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    cp.hessian_spectrum.push_back(es.eigenvalues()(k));

  const bool inside = (x.head(half).array() > box.d_min).all() &&
                      (x.head(half).array() < box.d_max).all() &&
                      (x.tail(half).array() > box.t_min).all() &&
                      (x.tail(half).array() < box.t_max).all();
  const bool stationary = cp.scaled_gradient <= 1e-8;
  const bool pd = cp.hessian_spectrum.front() > 0.0;
  if (!inside || !stationary || !pd) {
    std::ostringstream os;
    os << "no interior minimum of Phi (" << to_string(c) << ") in the search box; best scan value "
       << start.value << (start.on_boundary ? " on the box boundary" : " in the interior")
       << ", Newton ended with scaled gradient " << cp.scaled_gradient;
    std::vector<double> best(start.params.data(), start.params.data() + start.params.size());
    throw NoInteriorMinimum(os.str(), start.value, best);
  }
  return cp;
}

}  // namespace lanemden
