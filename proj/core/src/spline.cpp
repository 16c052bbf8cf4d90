#include "lanemden/spline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lanemden/error.hpp"

namespace lanemden {

namespace {

// Thomas algorithm; a = sub, b = diag, c = super (modified in place).
void solve_tridiagonal(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                       std::vector<double>& d) {
  const std::size_t n = b.size();
  for (std::size_t k = 1; k < n; ++k) {
    const double w = a[k] / b[k - 1];
    b[k] -= w * c[k - 1];
    d[k] -= w * d[k - 1];
  }
  d[n - 1] /= b[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) d[k] = (d[k] - c[k] * d[k + 1]) / b[k];
}

}  // namespace

std::vector<double> spline_slopes(const std::vector<double>& x, const std::vector<double>& y,
                                  const double* left_slope, const double* right_slope) {
  const std::size_t n = x.size();
  if (n < 4 || y.size() != n) throw ValidationError("spline needs at least four matching nodes");
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    del[k] = (y[k + 1] - y[k]) / h[k];
  }
  // Unknowns m_1..m_{n-2}; end slopes are eliminated.
  const std::size_t u = n - 2;
  std::vector<double> a(u, 0.0), b(u, 0.0), c(u, 0.0), d(u, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const std::size_t r = k - 1;
    a[r] = 1.0 / h[k - 1];
    b[r] = 2.0 * (1.0 / h[k - 1] + 1.0 / h[k]);
    c[r] = 1.0 / h[k];
    d[r] = 3.0 * (del[k - 1] / h[k - 1] + del[k] / h[k]);
  }
  // Left end: m_0 = p m_1 + q m_2 + s.
  double lp = 0, lq = 0, ls = 0;
  if (left_slope) {
    ls = *left_slope;
  } else {
    const double w = h[0] * h[0] / (h[1] * h[1]);
    lp = w - 1.0;
    lq = w;
    ls = 2.0 * del[0] - 2.0 * w * del[1];
  }
  b[0] += a[0] * lp;
  c[0] += a[0] * lq;
  d[0] -= a[0] * ls;
  a[0] = 0.0;
  // Right end: m_{n-1} = p m_{n-2} + q m_{n-3} + s.
  double rp = 0, rq = 0, rs = 0;
  if (right_slope) {
    rs = *right_slope;
  } else {
    const double w = h[n - 2] * h[n - 2] / (h[n - 3] * h[n - 3]);
    rp = w - 1.0;
    rq = w;
    rs = 2.0 * del[n - 2] - 2.0 * w * del[n - 3];
  }
  b[u - 1] += c[u - 1] * rp;
  if (u >= 2) a[u - 1] += c[u - 1] * rq;
  d[u - 1] -= c[u - 1] * rs;
  c[u - 1] = 0.0;
  solve_tridiagonal(a, b, c, d);

  std::vector<double> m(n);
  for (std::size_t k = 0; k < u; ++k) m[k + 1] = d[k];
  m[0] = lp * m[1] + lq * m[2] + ls;
  m[n - 1] = rp * m[n - 2] + rq * m[n - 3] + rs;
  return m;
}

MeridianSpline::MeridianSpline(const MeridianField& u) : grid_(u.grid_ptr()) {
  const MeridianGrid& g = *grid_;
  const int nr = g.nr(), np = g.nphi();
  const std::vector<double> rs(g.r().begin(), g.r().end());
  const std::vector<double> ps(g.phi().begin(), g.phi().end());
  f_.assign(u.values().begin(), u.values().end());
  fr_.assign(g.size(), 0.0);
  fp_.assign(g.size(), 0.0);
  frp_.assign(g.size(), 0.0);

  std::vector<double> col(nr);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < nr; ++i) col[i] = u(i, j);
    const auto s = spline_slopes(rs, col);
    for (int i = 0; i < nr; ++i) fr_[g.index(i, j)] = s[i];
  }
  const double zero = 0.0;
  std::vector<double> row(np), rowr(np);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < np; ++j) {
      row[j] = u(i, j);
      rowr[j] = fr_[g.index(i, j)];
    }
    const auto s = spline_slopes(ps, row, &zero, &zero);
    const auto sr = spline_slopes(ps, rowr, &zero, &zero);
    for (int j = 0; j < np; ++j) {
      fp_[g.index(i, j)] = s[j];
      frp_[g.index(i, j)] = sr[j];
    }
  }
}

double MeridianSpline::eval(double r, double phi, double* d_r, double* d_phi) const {
  const MeridianGrid& g = *grid_;
  const double r0 = g.r(0), r1 = g.r(g.nr() - 1);
  const double tol = 1e-12 * r1;
  if (!(r >= r0 - tol && r <= r1 + tol) || !(phi >= -1e-12 && phi <= g.phi(g.nphi() - 1) + 1e-12)) {
    std::ostringstream os;
    os << "interpolation query (r=" << r << ", phi=" << phi << ") outside grid [" << r0 << ", "
       << r1 << "] x [0, pi]";
    throw GuardBandError(os.str());
  }
  r = std::clamp(r, r0, r1);
  phi = std::clamp(phi, 0.0, g.phi(g.nphi() - 1));
  const int i = g.radial_interval(r), j = g.angular_interval(phi);
  const double hr = g.r(i + 1) - g.r(i), hp = g.phi(j + 1) - g.phi(j);
  const double s = (r - g.r(i)) / hr, t = (phi - g.phi(j)) / hp;

  auto basis = [](double x, double h, double v[4], double dv[4]) {
    const double x2 = x * x, x3 = x2 * x;
    v[0] = 1 - 3 * x2 + 2 * x3;
    v[1] = 3 * x2 - 2 * x3;
    v[2] = h * (x - 2 * x2 + x3);
    v[3] = h * (x3 - x2);
    dv[0] = (-6 * x + 6 * x2) / h;
    dv[1] = (6 * x - 6 * x2) / h;
    dv[2] = 1 - 4 * x + 3 * x2;
    dv[3] = 3 * x2 - 2 * x;
  };
  double br[4], dbr[4], bp[4], dbp[4];
  basis(s, hr, br, dbr);
  basis(t, hp, bp, dbp);

  double v = 0, vr = 0, vp = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const std::size_t k = g.index(i + a, j + b);
      const double F = f_[k], Fr = fr_[k], Fp = fp_[k], Frp = frp_[k];
      v += br[a] * bp[b] * F + br[2 + a] * bp[b] * Fr + br[a] * bp[2 + b] * Fp +
           br[2 + a] * bp[2 + b] * Frp;
      vr += dbr[a] * bp[b] * F + dbr[2 + a] * bp[b] * Fr + dbr[a] * bp[2 + b] * Fp +
            dbr[2 + a] * bp[2 + b] * Frp;
      vp += br[a] * dbp[b] * F + br[2 + a] * dbp[b] * Fr + br[a] * dbp[2 + b] * Fp +
            br[2 + a] * dbp[2 + b] * Frp;
    }
  }
  if (d_r) *d_r = vr;
  if (d_phi) *d_phi = vp;
  return v;
}



SplineJet MeridianSpline::jet(double r, double phi) const {
  const MeridianGrid& g = *grid_;
  const double r0 = g.r(0), r1 = g.r(g.nr() - 1);
  const double tol = 1e-12 * r1;
  if (!(r >= r0 - tol && r <= r1 + tol) || !(phi >= -1e-12 && phi <= g.phi(g.nphi() - 1) + 1e-12)) {
    std::ostringstream os;
    os << "interpolation query (r=" << r << ", phi=" << phi << ") outside grid [" << r0 << ", "
       << r1 << "] x [0, pi]";
    throw GuardBandError(os.str());
  }
  r = std::clamp(r, r0, r1);
  phi = std::clamp(phi, 0.0, g.phi(g.nphi() - 1));
  const int i = g.radial_interval(r), j = g.angular_interval(phi);
  const double hr = g.r(i + 1) - g.r(i), hp = g.phi(j + 1) - g.phi(j);
  const double s = (r - g.r(i)) / hr, t = (phi - g.phi(j)) / hp;

  // v, first and second derivative of the four Hermite basis functions
  auto basis = [](double x, double h, double v[4], double dv[4], double ddv[4]) {
    const double x2 = x * x, x3 = x2 * x;
    v[0] = 1 - 3 * x2 + 2 * x3;
    v[1] = 3 * x2 - 2 * x3;
    v[2] = h * (x - 2 * x2 + x3);
    v[3] = h * (x3 - x2);
    dv[0] = (-6 * x + 6 * x2) / h;
    dv[1] = (6 * x - 6 * x2) / h;
    dv[2] = 1 - 4 * x + 3 * x2;
    dv[3] = 3 * x2 - 2 * x;
    ddv[0] = (-6 + 12 * x) / (h * h);
    ddv[1] = (6 - 12 * x) / (h * h);
    ddv[2] = (-4 + 6 * x) / h;
    ddv[3] = (6 * x - 2) / h;
  };
  double br[4], dbr[4], ddbr[4], bp[4], dbp[4], ddbp[4];
  basis(s, hr, br, dbr, ddbr);
  basis(t, hp, bp, dbp, ddbp);

  SplineJet out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const std::size_t k = g.index(i + a, j + b);
      const double c[4] = {f_[k], fr_[k], fp_[k], frp_[k]};
      // coefficient layout: (r basis index, phi basis index) per stored value
      const int ra[4] = {a, 2 + a, a, 2 + a}, pb[4] = {b, b, 2 + b, 2 + b};
      for (int q = 0; q < 4; ++q) {
        out.v += br[ra[q]] * bp[pb[q]] * c[q];
        out.r += dbr[ra[q]] * bp[pb[q]] * c[q];
        out.phi += br[ra[q]] * dbp[pb[q]] * c[q];
        out.rr += ddbr[ra[q]] * bp[pb[q]] * c[q];
        out.rphi += dbr[ra[q]] * dbp[pb[q]] * c[q];
        out.phiphi += br[ra[q]] * ddbp[pb[q]] * c[q];
      }
    }
  }
  return out;
}

}  // namespace lanemden
