#include "lanemden/solver.hpp"

#include <Eigen/LU>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lanemden/bubble.hpp"
#include "lanemden/energy.hpp"
#include "lanemden/green.hpp"
#include "lanemden/laplacian.hpp"
#include "parallel.hpp"

namespace lanemden {

std::string to_string(TheoremCase c) {
  switch (c) {
    case TheoremCase::i: return "i";
    case TheoremCase::ii: return "ii";
    case TheoremCase::iii: return "iii";
    case TheoremCase::iv: return "iv";
    case TheoremCase::v_plus: return "v+";
    case TheoremCase::v_minus: return "v-";
  }
  return "?";
}

TheoremCase theorem_case_from_string(const std::string& s) {
  if (s == "i") return TheoremCase::i;
  if (s == "ii") return TheoremCase::ii;
  if (s == "iii") return TheoremCase::iii;
  if (s == "iv") return TheoremCase::iv;
  if (s == "v+" || s == "v_plus") return TheoremCase::v_plus;
  if (s == "v-" || s == "v_minus") return TheoremCase::v_minus;
  throw ValidationError("unknown case '" + s + "' (expected i, ii, iii, iv, v+ or v-)");
}

BranchSpec BranchSpec::make(TheoremCase c) {
  BranchSpec b;
  b.theorem_case = c;
  switch (c) {
    case TheoremCase::i: b.lambda = 0; b.pairs = 1; break;
    case TheoremCase::ii: b.lambda = 1; b.pairs = 1; break;
    case TheoremCase::iii: b.lambda = -1; b.pairs = 1; break;
    case TheoremCase::iv: b.lambda = 0; b.pairs = 2; break;
    case TheoremCase::v_plus: b.lambda = 1; b.pairs = 2; break;
    case TheoremCase::v_minus: b.lambda = -1; b.pairs = 2; break;
  }
  b.symmetry = symmetry_for_lambda(b.lambda);
  b.signs = b.pairs == 1 ? std::vector<int>{1} : std::vector<int>{1, -1};
  return b;
}

void BranchSpec::validate() const {
  const BranchSpec ref = make(theorem_case);
  if (lambda != ref.lambda || pairs != ref.pairs || symmetry != ref.symmetry)
    throw ValidationError("branch spec fields disagree with case " + to_string(theorem_case));
  if (static_cast<int>(signs.size()) != pairs) throw ValidationError("one sign per pair expected");
  for (int s : signs)
    if (s != 1 && s != -1) throw ValidationError("pair signs must be +1 or -1");
}

namespace {

double exponent_for(int n, double eps) { return critical_exponent(n) - eps; }

// strong residual on interior rows and the scale of the nonlinear term
MeridianField residual_with_scale(const MeridianField& u, double eps, double& scale) {
  if (u.empty()) throw ValidationError("residual of an empty field");
  if (!(eps >= 0.0)) throw ValidationError("eps must be >= 0");
  const MeridianGrid& g = u.grid();
  const double q = exponent_for(g.n(), eps);
  MeridianField r = AxisymmetricLaplacian::for_grid(u.grid_ptr())->apply(u);
  scale = 0.0;
  for (int i = 1; i + 1 < g.nr(); ++i)
    for (int j = 0; j < g.nphi(); ++j) {
      const double f = nonlinearity(u(i, j), q) / (2.0 * g.r(i));
      r.at(i, j) -= f;
      scale = std::max(scale, std::abs(f));
    }
  return r;
}

double relative(const MeridianField& r, double scale) {
  const double m = r.max_abs();
  return scale > 0.0 ? m / scale : m;
}

double smallest_singular_estimate(const SparseMatrix& j) {
  double norm = 0.0;
  for (int k = 0; k < j.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(j, k); it; ++it) col += std::abs(it.value());
    norm = std::max(norm, col);
  }
  const double mu = 1e-8 * std::max(norm, 1.0);
  SparseMatrix shifted = j;
  for (int k = 0; k < shifted.rows(); ++k) shifted.coeffRef(k, k) += mu;
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(j.rows()).normalized();
  double growth = 0.0;
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXd w = lu.solve(v);
    growth = w.norm();
    if (!(growth > 0.0) || !std::isfinite(growth)) return 0.0;
    v = w / growth;
  }
  return std::max(0.0, 1.0 / growth - mu);
}

// Jacobian K_II - diag(M f'(u) / 2r) and weak residual M r on interior unknowns.
void linearize(const AxisymmetricLaplacian& op, const MeridianField& u, const MeridianField& r, double q,
               SparseMatrix& jac, Eigen::VectorXd& weak) {
  const MeridianGrid& g = *op.grid();
  const int np = g.nphi();
  const int ni = op.interior_size();
  const Eigen::VectorXd& mass = op.mass();
  jac = op.interior_stiffness();
  weak.resize(ni);
  for (int k = 0; k < ni; ++k) {
    const int i = k / np + 1, j = k % np;
    const double w = mass(k + np) / (2.0 * g.r(i));
    jac.coeffRef(k, k) -= w * nonlinearity_derivative(u(i, j), q);
    weak(k) = mass(k + np) * r(i, j);
  }
}

bool factor_and_solve(Eigen::SparseLU<SparseMatrix>& lu, bool& analysed, const SparseMatrix& jac,
                      const Eigen::VectorXd& rhs, Eigen::VectorXd& x) {
  if (!analysed) {
    lu.analyzePattern(jac);
    analysed = true;
  }
  lu.factorize(jac);
  if (lu.info() != Eigen::Success) return false;
  x = lu.solve(rhs);
  return x.allFinite() && (jac * x - rhs).norm() <= 1e-6 * std::max(rhs.norm(), 1e-300);
}

[[noreturn]] void singular(const SparseMatrix& jac, const MeridianGrid& g, double eps, int it) {
  const double s = smallest_singular_estimate(jac);
  std::ostringstream os;
  os << "Newton Jacobian is singular at iteration " << it << " (smallest singular value estimate " << s
     << ", grid " << g.nr() << "x" << g.nphi() << ", eps " << eps << ")";
  throw JacobianSingular(os.str(), s);
}

}  // namespace

MeridianField residual(const MeridianField& u, double eps) {
  double scale = 0.0;
  return residual_with_scale(u, eps, scale);
}

double residual_inf(const MeridianField& u, double eps) {
  double scale = 0.0;
  const MeridianField r = residual_with_scale(u, eps, scale);
  return relative(r, scale);
}

BlowupFit blowup_fit(const MeridianField& u, double eps, double floor) {
  if (u.empty()) throw ValidationError("blow-up fit of an empty field");
  if (!(eps > 0.0)) throw ValidationError("blow-up fit needs eps > 0");
  const MeridianGrid& g = u.grid();
  const int n = g.n();
  const double p = critical_exponent(n);
  const double alpha = bubble_alpha(n);
  const double cut = floor * u.max_abs();
  BlowupFit fit;
  if (!(u.max_abs() > 0.0)) return fit;
  for (int j : {0, g.nphi() - 1}) {
    const double side = j == 0 ? 1.0 : -1.0;
    for (int i = 1; i + 1 < g.nr(); ++i) {
      const double a = std::abs(u(i - 1, j)), b = std::abs(u(i, j)), c = std::abs(u(i + 1, j));
      if (!(b > a && b >= c && b >= cut)) continue;
      const double x0 = g.r(i - 1), x1 = g.r(i), x2 = g.r(i + 1);
      const double d01 = (b - a) / (x1 - x0), d12 = (c - b) / (x2 - x1);
      const double curv = (d12 - d01) / (x2 - x0);
      double xs = x1, ys = b;
      if (curv < 0.0) {
        xs = std::clamp(0.5 * (x0 + x1) - d01 / (2.0 * curv), x0, x2);
        ys = a + d01 * (xs - x0) + curv * (xs - x0) * (xs - x1);
      }
      Peak pk;
      pk.z = side * xs;
      pk.amplitude = (u(i, j) < 0.0 ? -1.0 : 1.0) * ys;
      const double kappa = std::pow(2.0 * xs, 1.0 / (p - 1.0 - eps));
      pk.delta_fit = std::pow(kappa * alpha / ys, 2.0 / (n - 2));
      pk.delta_fit_plain = std::pow(alpha / ys, 2.0 / (n - 2));
      pk.d_fit = pk.delta_fit * std::pow(eps, -(n - 1.0) / (n - 2.0));
      pk.t_fit = (xs - g.geometry().r_inner) / eps;
      fit.peaks.push_back(pk);
    }
  }
  std::sort(fit.peaks.begin(), fit.peaks.end(), [](const Peak& x, const Peak& y) { return x.z < y.z; });
  return fit;
}

int nodal_domains(const MeridianField& u, double floor) {
  if (u.empty()) throw ValidationError("nodal_domains of an empty field");
  const MeridianGrid& g = u.grid();
  const double f = floor * u.max_abs();
  auto sign_at = [&](int i, int j) { return u(i, j) > f ? 1 : (u(i, j) < -f ? -1 : 0); };
  std::vector<char> seen(g.size(), 0);
  std::vector<std::pair<int, int>> stack;
  int count = 0;
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.nphi(); ++j) {
      const int sg = sign_at(i, j);
      if (sg == 0 || seen[g.index(i, j)]) continue;
      ++count;
      stack.push_back({i, j});
      seen[g.index(i, j)] = 1;
      while (!stack.empty()) {
        const auto [a, b] = stack.back();
        stack.pop_back();
        const int nb[4][2] = {{a - 1, b}, {a + 1, b}, {a, b - 1}, {a, b + 1}};
        for (const auto& q : nb) {
          if (q[0] < 0 || q[0] >= g.nr() || q[1] < 0 || q[1] >= g.nphi()) continue;
          if (seen[g.index(q[0], q[1])] || sign_at(q[0], q[1]) != sg) continue;
          seen[g.index(q[0], q[1])] = 1;
          stack.push_back({q[0], q[1]});
        }
      }
    }
  return count;
}

SolveResult newton_solve(const MeridianField& initial, double eps, const BranchSpec& spec,
                         const NewtonOptions& opts) {
  spec.validate();
  if (initial.empty()) throw ValidationError("Newton needs an initial field");
  if (!(opts.tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("eps must lie in [0, 1)");
  if (opts.max_iterations < 1 || !(opts.min_step > 0.0 && opts.min_step <= 1.0))
    throw ValidationError("invalid Newton options");
  if (spec.symmetry != Symmetry::none && initial.symmetry_defect(spec.symmetry) > 0.0)
    throw ValidationError("initial field does not have the branch symmetry " + to_string(spec.symmetry));
  const double bscale = std::max(1.0, initial.max_abs());
  if (initial.dirichlet_defect() > 1e-12 * bscale)
    throw ValidationError("initial field must vanish on the Dirichlet rows");

  const GridPtr& grid = initial.grid_ptr();
  const auto op = AxisymmetricLaplacian::for_grid(grid);
  const double q = exponent_for(grid->n(), eps);

  MeridianField u = initial;
  u.zero_dirichlet_rows();
  u.project(spec.symmetry);

  SolveResult res;
  res.eps = eps;
  double scale = 0.0;
  MeridianField r = residual_with_scale(u, eps, scale);
  double rel = relative(r, scale);
  double abs_res = r.max_abs();
  res.history.push_back(rel);

  auto finish = [&](const MeridianField& f, double rr, int iters) {
    res.field = f;
    res.residual_inf = rr;
    res.newton_iters = iters;
    res.diagnostics = blowup_fit(f, eps > 0.0 ? eps : 1e-300);
    return res;
  };

  Eigen::SparseLU<SparseMatrix> lu;
  bool analysed = false;
  int growth = 0;
  SparseMatrix jac;
  Eigen::VectorXd f, step;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    linearize(*op, u, r, q, jac, f);
    if (!factor_and_solve(lu, analysed, jac, -f, step)) singular(jac, *grid, eps, it);

    MeridianField delta(grid, Symmetry::none);
    op->scatter_interior(step, delta);
    delta.project(spec.symmetry);

    double lambda = 1.0;
    MeridianField trial;
    MeridianField trial_r;
    double trial_scale = 0.0, trial_abs = 0.0;
    for (;;) {
      trial = u;
      MeridianField s = delta;
      s *= lambda;
      trial += s;
      trial.project(spec.symmetry);
      trial_r = residual_with_scale(trial, eps, trial_scale);
      trial_abs = trial_r.max_abs();
      if (trial_abs <= (1.0 - 1e-4 * lambda) * abs_res || lambda <= opts.min_step) break;
      lambda *= 0.5;
    }
    const double trial_rel = relative(trial_r, trial_scale);
    if (rel <= opts.tol && trial_rel > rel) return finish(u, rel, it);
    growth = trial_abs > abs_res ? growth + 1 : 0;
    u = std::move(trial);
    r = std::move(trial_r);
    scale = trial_scale;
    abs_res = trial_abs;
    rel = trial_rel;
    res.history.push_back(rel);
    if (rel <= opts.tol) return finish(u, rel, it);
    if (growth >= opts.divergence_window) {
      std::ostringstream os;
      os << "Newton diverged: residual grew over " << growth << " consecutive damped steps (relative residual "
         << rel << " at eps " << eps << ")";
      finish(u, rel, it);
      throw NewtonDivergence(os.str(), res);
    }
  }
  std::ostringstream os;
  os << "Newton did not reach tolerance " << opts.tol << " within " << opts.max_iterations
     << " iterations (relative residual " << rel << " at eps " << eps << ")";
  finish(u, rel, opts.max_iterations);
  throw NewtonDivergence(os.str(), res);
}

namespace {

class ReducedProblem {
 public:
  struct State {
    std::vector<BubblePair> pairs;
    MeridianField v, u;
    Eigen::MatrixXd w;  // K_II Z_j on interior unknowns
    Eigen::VectorXd c;
    Eigen::VectorXd scaled;  // c_j max|K Z_j / M| / max|f(u)/2r|
  };

  ReducedProblem(const GridPtr& grid, const BranchSpec& spec, double eps, AmplitudeMode amplitude,
                 const PresolveOptions& opts)
      : grid_(grid),
        op_(AxisymmetricLaplacian::for_grid(grid)),
        spec_(spec),
        eps_(eps),
        amplitude_(amplitude),
        opts_(opts),
        q_(exponent_for(grid->n(), eps)) {}

  int inner_iterations() const { return inner_; }

  State evaluate(const std::vector<BubblePair>& pairs, const State* warm) {
    const int n = grid_->n();
    const int np = grid_->nphi();
    const int ni = op_->interior_size();
    const Eigen::VectorXd& mass = op_->mass();
    State st;
    st.pairs = pairs;
    st.v = assemble_ansatz(branch_ansatz(spec_, n, eps_, pairs, amplitude_), grid_projector(grid_));

    const int m = 2 * static_cast<int>(pairs.size());
    st.w.resize(ni, m);
    Eigen::MatrixXd strong(ni, m);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const Bubble b = bubble_from_reduced(n, eps_, pairs[k].d, pairs[k].t);
      for (int a = 0; a < 2; ++a) {
        MeridianField z = project_kernel(grid_, b, KernelIndex(a == 0 ? 0 : n, n));
        z.project(spec_.symmetry);
        const int col = 2 * static_cast<int>(k) + a;
        st.w.col(col) = op_->interior_stiffness() * op_->interior_values(z);
        for (int i = 0; i < ni; ++i) strong(i, col) = st.w(i, col) / mass(i + np);
      }
    }

    st.u = st.v;
    st.c = Eigen::VectorXd::Zero(m);
    if (warm) {
      st.u += warm->u;
      st.u -= warm->v;
      st.u.project(spec_.symmetry);
      st.c = warm->c;
    }
    const Eigen::VectorXd v_int = op_->interior_values(st.v);

    double scale = 0.0;
    auto projected_residual = [&](const MeridianField& u, const Eigen::VectorXd& c, MeridianField& r) {
      r = residual_with_scale(u, eps_, scale);
      Eigen::VectorXd rp = op_->interior_values(r) - strong * c;
      return rp;
    };

    MeridianField r;
    Eigen::VectorXd rp = projected_residual(st.u, st.c, r);
    double merit = rp.lpNorm<Eigen::Infinity>();
    SparseMatrix jac;
    Eigen::VectorXd weak, a;
    for (int it = 1;; ++it) {
      const Eigen::VectorXd h = st.w.transpose() * (op_->interior_values(st.u) - v_int);
      const bool constrained = it > 1 || h.norm() <= 1e-12 * st.w.norm() * std::max(1.0, v_int.norm());
      if (constrained && merit <= opts_.inner_tol * scale) break;
      if (it > opts_.max_inner) {
        if (constrained && merit <= 1e3 * opts_.inner_tol * scale) break;
        std::ostringstream os;
        os << "projected problem did not converge (relative residual " << merit / scale << ")";
        throw NumericalError(os.str());
      }
      ++inner_;
      linearize(*op_, st.u, r, q_, jac, weak);
      const Eigen::VectorXd g = weak - st.w * st.c;
      if (!factor_and_solve(lu_, analysed_, jac, -g, a)) singular(jac, *grid_, eps_, it);
      const Eigen::MatrixXd x = lu_.solve(st.w);
      const Eigen::MatrixXd schur = st.w.transpose() * x;
      const Eigen::VectorXd dc = schur.fullPivLu().solve(-h - st.w.transpose() * a);
      const Eigen::VectorXd du_int = a + x * dc;
      MeridianField du(grid_, Symmetry::none);
      op_->scatter_interior(du_int, du);
      du.project(spec_.symmetry);

      double lambda = 1.0;
      MeridianField trial, trial_r;
      Eigen::VectorXd trial_c, trial_rp;
      double trial_merit = 0.0;
      for (;;) {
        trial = st.u;
        MeridianField step = du;
        step *= lambda;
        trial += step;
        trial.project(spec_.symmetry);
        trial_c = st.c + lambda * dc;
        trial_rp = projected_residual(trial, trial_c, trial_r);
        trial_merit = trial_rp.lpNorm<Eigen::Infinity>();
        if (trial_merit <= (1.0 - 1e-4 * lambda) * merit || lambda <= 1.0 / 1024.0) break;
        lambda *= 0.5;
      }
      if (trial_merit >= merit && constrained) {
        if (merit <= 1e3 * opts_.inner_tol * scale) break;
        std::ostringstream os;
        os << "projected problem stalled (relative residual " << merit / scale << ")";
        throw NumericalError(os.str());
      }
      st.u = std::move(trial);
      st.c = trial_c;
      r = std::move(trial_r);
      merit = trial_merit;
    }
    residual_with_scale(st.u, eps_, scale);
    st.scaled.resize(m);
    for (int j = 0; j < m; ++j) st.scaled(j) = st.c(j) * strong.col(j).lpNorm<Eigen::Infinity>() / scale;
    return st;
  }

 private:
  GridPtr grid_;
  std::shared_ptr<const AxisymmetricLaplacian> op_;
  const BranchSpec& spec_;
  double eps_;
  AmplitudeMode amplitude_;
  const PresolveOptions& opts_;
  double q_;
  Eigen::SparseLU<SparseMatrix> lu_;
  bool analysed_ = false;
  int inner_ = 0;
};

std::vector<BubblePair> pairs_from(const Eigen::VectorXd& x, const std::vector<BubblePair>& like) {
  std::vector<BubblePair> out = like;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].d = std::exp(x(2 * k));
    out[k].t = x(2 * k + 1);
  }
  return out;
}

bool admissible(const std::vector<BubblePair>& pairs, const MeridianGrid& g, double eps) {
  const AnnulusGeometry& geo = g.geometry();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!(pairs[k].t > 0.0) || !(geo.r_inner + eps * pairs[k].t < geo.r_outer)) return false;
    if (k > 0 && !(pairs[k - 1].t < pairs[k].t)) return false;
  }
  return true;
}

}  // namespace

GridPtr focused_grid(const AnnulusGeometry& geo, const AnsatzConfig& cfg, int nr, int nphi,
                     double cells_per_delta) {
  if (!(cells_per_delta > 0.0)) throw ValidationError("cells_per_delta must be positive");
  const auto terms = ansatz_terms(cfg);
  GridSpec spec;
  spec.nr = nr;
  spec.nphi = nphi;
  double tau = geo.width(), pole = std::numbers::pi;
  for (const auto& t : terms) {
    double z = 0.0;
    t.bubble.axis_position(z);
    const double a = std::abs(z);
    if (!(a > geo.r_inner && a < geo.r_outer)) throw ValidationError("bubble centre outside the annulus");
    tau = std::min(tau, a - geo.r_inner);
    spec.radial_foci.push_back({a, t.bubble.delta / cells_per_delta});
    pole = std::min(pole, t.bubble.delta / (cells_per_delta * a));
  }
  spec.radial_foci.push_back({geo.r_inner, tau / 8.0});
  spec.pole_spacing = pole;
  return MeridianGrid::make(geo, spec);
}

std::vector<double> reduced_multipliers(const AnnulusGeometry& geo, const BranchSpec& spec, double eps,
                                        const std::vector<BubblePair>& pairs, AmplitudeMode amplitude,
                                        const PresolveOptions& opts) {
  spec.validate();
  if (static_cast<int>(pairs.size()) != spec.pairs) throw ValidationError("wrong number of bubble pairs");
  const GridPtr grid = focused_grid(geo, branch_ansatz(spec, geo.n, eps, pairs, amplitude), opts.nr, opts.nphi,
                                    opts.cells_per_delta);
  if (!admissible(pairs, *grid, eps)) throw ValidationError("bubble parameters outside the admissible set");
  ReducedProblem problem(grid, spec, eps, amplitude, opts);
  const auto st = problem.evaluate(pairs, nullptr);
  return {st.scaled.data(), st.scaled.data() + st.scaled.size()};
}

PresolveResult reduced_presolve(const AnnulusGeometry& geo, const BranchSpec& spec, double eps,
                                std::vector<BubblePair> pairs, AmplitudeMode amplitude, const PresolveOptions& opts) {
  spec.validate();
  geo.validate();
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
  if (!(opts.tol > 0.0 && opts.inner_tol > 0.0 && opts.fd_step > 0.0 && opts.cells_per_delta > 0.0))
    throw ValidationError("invalid presolve options");
  if (static_cast<int>(pairs.size()) != spec.pairs) throw ValidationError("wrong number of bubble pairs");

  // One evaluation of the reduced map: a grid focused at (d, t) and the
  // projected problem solved on it.
  struct Evaluation {
    GridPtr grid;
    ReducedProblem::State state;
    double norm = 0.0;
    int inner = 0;
  };
  auto evaluate = [&](const std::vector<BubblePair>& pr) {
    Evaluation e;
    e.grid = focused_grid(geo, branch_ansatz(spec, geo.n, eps, pr, amplitude), opts.nr, opts.nphi,
                          opts.cells_per_delta);
    ReducedProblem problem(e.grid, spec, eps, amplitude, opts);
    e.state = problem.evaluate(pr, nullptr);
    e.norm = e.state.scaled.lpNorm<1>();
    e.inner = problem.inner_iterations();
    return e;
  };
  {
    const GridPtr g = focused_grid(geo, branch_ansatz(spec, geo.n, eps, pairs, amplitude), opts.nr, opts.nphi,
                                   opts.cells_per_delta);
    if (!admissible(pairs, *g, eps)) throw ValidationError("bubble parameters outside the admissible set");
  }

  const int dim = 2 * spec.pairs;
  Eigen::VectorXd x(dim);
  for (int k = 0; k < spec.pairs; ++k) {
    x(2 * k) = std::log(pairs[k].d);
    x(2 * k + 1) = pairs[k].t;
  }

  PresolveResult out;
  Evaluation cur = evaluate(pairs);
  out.inner_iterations += cur.inner;
  out.evaluations = 1;
  double last_polish = std::numeric_limits<double>::infinity();

  auto finish = [&](MeridianField u) {
    out.pairs = cur.state.pairs;
    out.multipliers.assign(cur.state.scaled.data(), cur.state.scaled.data() + cur.state.scaled.size());
    out.residual = residual_inf(u, eps);
    out.solved = out.residual <= opts.newton.tol;
    out.field = std::move(u);
    return out;
  };

  for (;;) {
    if (cur.norm <= opts.polish_below && cur.norm < 0.1 * last_polish) {
      last_polish = cur.norm;
      NewtonOptions no = opts.newton;
      no.max_iterations = opts.polish_iterations;
      try {
        SolveResult r = newton_solve(cur.state.u, eps, spec, no);
        return finish(std::move(r.field));
      } catch (const NumericalError&) {
      }
    }
    if (cur.norm <= opts.tol) return finish(cur.state.u);
    if (++out.outer_iterations > opts.max_outer) {
      std::ostringstream os;
      os << "reduced iteration did not converge (multiplier size " << cur.norm << ")";
      throw NumericalError(os.str());
    }

    Eigen::MatrixXd jac(dim, dim);
    std::vector<Evaluation> columns(dim);
    std::vector<double> steps(dim);
    detail::parallel_for(dim, opts.threads, [&](int i) {
      Eigen::VectorXd xp = x;
      steps[i] = opts.fd_step * std::max(1.0, std::abs(x(i)));
      xp(i) += steps[i];
      columns[i] = evaluate(pairs_from(xp, pairs));
    });
    for (int i = 0; i < dim; ++i) {
      jac.col(i) = (columns[i].state.scaled - cur.state.scaled) / steps[i];
      out.inner_iterations += columns[i].inner;
      ++out.evaluations;
    }
    const auto lu = jac.fullPivLu();
    if (!lu.isInvertible()) throw NumericalError("reduced Jacobian is singular");
    Eigen::VectorXd dx = lu.solve(-cur.state.scaled);
    double shrink = 1.0;
    for (int k = 0; k < spec.pairs; ++k) {
      shrink = std::min(shrink, 0.5 / std::max(std::abs(dx(2 * k)), 1e-300));
      shrink = std::min(shrink, 0.5 * x(2 * k + 1) / std::max(std::abs(dx(2 * k + 1)), 1e-300));
    }
    dx *= std::min(1.0, shrink);

    bool accepted = false;
    for (double mu = 1.0; mu >= 1.0 / 64.0; mu *= 0.5) {
      const Eigen::VectorXd xt = x + mu * dx;
      const auto trial_pairs = pairs_from(xt, pairs);
      Evaluation trial;
      try {
        const GridPtr g = focused_grid(geo, branch_ansatz(spec, geo.n, eps, trial_pairs, amplitude), opts.nr,
                                       opts.nphi, opts.cells_per_delta);
        if (!admissible(trial_pairs, *g, eps)) continue;
        trial = evaluate(trial_pairs);
      } catch (const ValidationError&) {
        continue;
      } catch (const NumericalError&) {
        continue;
      }
      out.inner_iterations += trial.inner;
      ++out.evaluations;
      if (trial.norm < cur.norm) {
        x = xt;
        cur = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "reduced iteration stalled (multiplier size " << cur.norm << ")";
      throw NumericalError(os.str());
    }
  }
}

AnsatzConfig branch_ansatz(const BranchSpec& spec, int n, double eps, const std::vector<BubblePair>& pairs,
                           AmplitudeMode amplitude) {
  spec.validate();
  if (static_cast<int>(pairs.size()) != spec.pairs)
    throw ValidationError("case " + to_string(spec.theorem_case) + " needs " + std::to_string(spec.pairs) +
                          " bubble pair(s)");
  AnsatzConfig cfg;
  cfg.n = n;
  cfg.eps = eps;
  cfg.lambda = spec.lambda;
  cfg.pairs = pairs;
  cfg.amplitude = amplitude;
  cfg.validate();
  return cfg;
}

std::vector<BubblePair> fitted_pairs(const BlowupFit& fit, const BranchSpec& spec) {
  std::vector<BubblePair> out;
  for (const Peak& pk : fit.peaks) {
    if (pk.z < 0.0) continue;
    out.push_back({pk.amplitude < 0.0 ? -1 : 1, pk.d_fit, pk.t_fit});
  }
  std::sort(out.begin(), out.end(), [](const BubblePair& a, const BubblePair& b) { return a.t < b.t; });
  if (static_cast<int>(out.size()) != spec.pairs) {
    std::ostringstream os;
    os << "blow-up fit found " << out.size() << " peak(s) on the x_n > 0 axis, case "
       << to_string(spec.theorem_case) << " expects " << spec.pairs;
    throw NumericalError(os.str());
  }
  return out;
}

std::vector<double> kernel_projection_diagnostic(const SolveResult& result, const BranchSpec& spec,
                                                 Symmetry elements) {
  const GridPtr& grid = result.field.grid_ptr();
  const int n = grid->n();
  const auto pairs = fitted_pairs(result.diagnostics, spec);
  const AnsatzConfig cfg = branch_ansatz(spec, n, result.eps, pairs);
  MeridianField diff = result.field;
  diff.project(Symmetry::none);
  diff -= assemble_ansatz(cfg, grid_projector(grid));
  diff.project(spec.symmetry);
  const auto op = AxisymmetricLaplacian::for_grid(grid);
  const double dn = std::sqrt(std::max(0.0, op->form(diff, diff)));
  std::vector<double> out;
  for (const auto& pr : pairs) {
    const Bubble b = bubble_from_reduced(n, result.eps, pr.d, pr.t);
    for (int j : {0, n}) {
      MeridianField e = project_kernel(grid, b, KernelIndex(j, n));
      e.project(elements);
      const double en = std::sqrt(std::max(0.0, op->form(e, e)));
      out.push_back(dn > 0.0 && en > 0.0 ? op->form(diff, e) / (dn * en) : 0.0);
    }
  }
  return out;
}

std::vector<double> kernel_projection_diagnostic(const SolveResult& result, const BranchSpec& spec) {
  return kernel_projection_diagnostic(result, spec, spec.symmetry);
}

}  // namespace lanemden
