#include "sphericity/flag.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "sphericity/optim.hpp"
#include "sphericity/parallel.hpp"

namespace sphericity {

MatQ exp_nilpotent(const MatQ& x) {
  const int n = static_cast<int>(x.rows());
  MatQ acc = MatQ::Identity(n, n);
  MatQ pw = MatQ::Identity(n, n);
  Rational fact = 1;
  for (int k = 1; k < n; ++k) {
    pw = MatQ(pw * x);
    bool zero = true;
    for (int i = 0; i < n && zero; ++i)
      for (int j = 0; j < n && zero; ++j)
        if (pw(i, j) != 0) zero = false;
    if (zero) break;
    fact *= k;
    acc += pw / fact;
  }
  return acc;
}

MatD exp_nilpotent_f(const MatD& x) {
  const int n = static_cast<int>(x.rows());
  MatD acc = MatD::Identity(n, n);
  MatD pw = MatD::Identity(n, n);
  double fact = 1.0;
  for (int k = 1; k < n; ++k) {
    pw = pw * x;
    fact *= k;
    acc += pw / fact;
  }
  return acc;
}

MatQ big_cell_rep(const AlgebraContext& ctx, const VecQ& w) {
  if (w.size() != ctx.u_minus_mat().cols())
    throw std::invalid_argument("big-cell coordinate count mismatch");
  MatQ z = unvec_q(VecQ(ctx.u_minus_mat() * w), ctx.n());
  return exp_nilpotent(z);
}

MatD big_cell_rep_f(const AlgebraContext& ctx, const VecD& w) {
  MatD z = unvec_d(ctx.u_minus_f() * w, ctx.n());
  return exp_nilpotent_f(z);
}

MatQ adjoint_image(const MatQ& g, const MatQ& basis_cols) {
  const int n = static_cast<int>(g.rows());
  MatQ gi = inverse_exact(g);
  MatQ out(basis_cols.rows(), basis_cols.cols());
  for (Eigen::Index c = 0; c < basis_cols.cols(); ++c)
    out.col(c) = vec_q(MatQ(g * unvec_q(basis_cols.col(c), n) * gi));
  return out;
}

MatD adjoint_image_f(const MatD& g, const MatD& basis_cols) {
  const int n = static_cast<int>(g.rows());
  MatD gi = g.inverse();
  MatD out(basis_cols.rows(), basis_cols.cols());
  for (Eigen::Index c = 0; c < basis_cols.cols(); ++c)
    out.col(c) = vec_d(g * unvec_d(basis_cols.col(c), n) * gi);
  return out;
}

MatQ stabilizer_subalgebra_exact(const AlgebraContext& ctx, const MatQ& g) {
  return intersect_exact(ctx.h_mat(), adjoint_image(g, ctx.p_mat()));
}

MatD stabilizer_subalgebra_float(const AlgebraContext& ctx, const MatD& g,
                                 double rel_tol) {
  return intersect_float(ctx.h_mat_f(), adjoint_image_f(g, ctx.p_mat_f()),
                         rel_tol);
}

long h_orbit_dim_exact(const AlgebraContext& ctx, const MatQ& g) {
  MatQ adp = adjoint_image(g, ctx.p_mat());
  MatQ joint(adp.rows(), ctx.h_mat().cols() + adp.cols());
  joint.leftCols(ctx.h_mat().cols()) = ctx.h_mat();
  joint.rightCols(adp.cols()) = adp;
  // dim(h) - dim(h ∩ Ad_g p) = rank[h | Ad_g p] - dim p
  return rank_exact(joint) - adp.cols();
}

long h_orbit_dim_float(const AlgebraContext& ctx, const MatD& g,
                       double rel_tol, bool* unstable) {
  MatD adp = adjoint_image_f(g, ctx.p_mat_f());
  MatD joint(adp.rows(), ctx.h_mat_f().cols() + adp.cols());
  joint.leftCols(ctx.h_mat_f().cols()) = ctx.h_mat_f();
  joint.rightCols(adp.cols()) = adp;
  RankDecision d = rank_float(joint, rel_tol);
  if (unstable) *unstable = d.unstable;
  return d.rank - adp.cols();
}

bool y_membership_exact(const AlgebraContext& ctx, const MatQ& g) {
  MatQ stab = stabilizer_subalgebra_exact(ctx, g);
  for (Eigen::Index c = 0; c < stab.cols(); ++c)
    if (trace_pair(ctx.lambda(), unvec_q(stab.col(c), ctx.n())) != 0)
      return false;
  return true;
}

bool y_membership_float(const AlgebraContext& ctx, const MatD& g, double tol,
                        double rank_tol) {
  MatD stab = stabilizer_subalgebra_float(ctx, g, rank_tol);
  for (Eigen::Index c = 0; c < stab.cols(); ++c) {
    MatD s = unvec_d(stab.col(c), ctx.n());
    if (std::abs((ctx.lambda_f() * s).trace()) >= tol) return false;
  }
  return true;
}

namespace {

// [hperp | Ad_g u], whose column space is h⊥ + Ad_g u = (h ∩ Ad_g p)⊥.
MatD y_normal_matrix(const AlgebraContext& ctx, const MatD& g) {
  MatD adu = adjoint_image_f(g, ctx.u_mat_f());
  MatD out(adu.rows(), ctx.hperp_f().cols() + adu.cols());
  out.leftCols(ctx.hperp_f().cols()) = ctx.hperp_f();
  out.rightCols(adu.cols()) = adu;
  return out;
}

}  // namespace

double y_residual_float(const AlgebraContext& ctx, const MatD& g) {
  MatD u = colspace_float(y_normal_matrix(ctx, g));
  VecD v = vec_d(ctx.lambda_f());
  double r = (v - u * (u.transpose() * v)).norm();
  return r / std::max(1.0, v.norm());
}

std::string to_string(FiniteVerdict v) {
  switch (v) {
    case FiniteVerdict::Finite: return "finite";
    case FiniteVerdict::Infinite: return "infinite";
    case FiniteVerdict::Inconclusive: return "inconclusive";
    case FiniteVerdict::EmptyY: return "empty-y";
  }
  return "inconclusive";
}

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Membership defect with the kept rank pinned, so the map stays smooth on
// the sample's constant-stabilizer-dimension stratum.
VecD y_defect_fixed_rank(const AlgebraContext& ctx, const VecD& w,
                         Eigen::Index keep) {
  MatD nm = y_normal_matrix(ctx, big_cell_rep_f(ctx, w));
  Eigen::JacobiSVD<MatD> svd(nm, Eigen::ComputeThinU);
  Eigen::Index k = std::min<Eigen::Index>(keep, svd.matrixU().cols());
  MatD u = svd.matrixU().leftCols(k);
  VecD v = vec_d(ctx.lambda_f());
  return v - u * (u.transpose() * v);
}

constexpr double kFdStep = 1e-5;

// Central-difference Jacobian of the fixed-rank defect in the big-cell
// coordinates.
MatD y_defect_jacobian(const AlgebraContext& ctx, const VecD& w,
                       Eigen::Index keep) {
  const Eigen::Index m = w.size();
  const Eigen::Index n2 = ctx.ambient_dim();
  MatD jac(n2, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double step = kFdStep * (1.0 + std::abs(w(i)));
    VecD wp = w, wm = w;
    wp(i) += step;
    wm(i) -= step;
    jac.col(i) =
        (y_defect_fixed_rank(ctx, wp, keep) - y_defect_fixed_rank(ctx, wm, keep)) /
        (2.0 * step);
  }
  return jac;
}

// Absolute rank floor for the difference Jacobian.  At a sample interior to
// Y the defect vanishes identically nearby and every Jacobian entry is pure
// differencing noise, of order step^2 + eps/step; a relative cutoff would
// read that noise as full rank.  Genuine constraints differentiate to O(1)
// times the scale of lambda, decades above this floor.
double y_jacobian_floor(const AlgebraContext& ctx, const VecD& w) {
  const double eps = std::numeric_limits<double>::epsilon();
  double hmax = kFdStep;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    hmax = std::max(hmax, kFdStep * (1.0 + std::abs(w(i))));
  return 100.0 * (hmax * hmax + eps / kFdStep) *
         std::max(1.0, vec_d(ctx.lambda_f()).norm());
}

// Relative least-squares residual of lambda against h⊥ + Ad_g u; the descent
// objective for finding Y points when chi != 0.
double y_objective(const AlgebraContext& ctx, const VecD& w) {
  MatD nm = y_normal_matrix(ctx, big_cell_rep_f(ctx, w));
  VecD v = vec_d(ctx.lambda_f());
  Eigen::ColPivHouseholderQR<MatD> qr(nm);
  VecD r = v - nm * qr.solve(v);
  return r.squaredNorm() / std::max(1.0, v.squaredNorm());
}

struct SampleEval {
  YSample sample;
  bool ok = false;
};

// Dimensions and stability for one Y point, at the working rank tolerance
// and at a decade either side for the persistence check.
YSample evaluate_sample_float(const AlgebraContext& ctx, const VecD& w,
                              const FinitenessParams& prm, double residual) {
  YSample s;
  s.w.reserve(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) s.w.push_back(format_double(w(i)));
  s.residual = residual;

  MatD g = big_cell_rep_f(ctx, w);
  // The difference Jacobian is only trustworthy when the sample sits deep on
  // Y: leftover membership residual shows up in the differences scaled by
  // 1/step and must stay clear of the rank floor.
  const bool jac_trustworthy =
      residual * (10.0 / kFdStep) <= y_jacobian_floor(ctx, w);
  const std::array<double, 3> tols{prm.rank_tol, prm.rank_tol * 0.1,
                                   prm.rank_tol * 10.0};
  std::map<long, MatD> jac_by_keep;
  int gap_rounds = 0;
  for (std::size_t t = 0; t < tols.size(); ++t) {
    bool orbit_unstable = false;
    long od = h_orbit_dim_float(ctx, g, tols[t], &orbit_unstable);
    long ld;
    bool local_unstable = false;
    if (ctx.chi_is_zero()) {
      ld = ctx.flag_dim();  // Y = G/P identically; no defect equations
    } else {
      MatD nm = y_normal_matrix(ctx, g);
      RankDecision dn = rank_float(nm, tols[t]);
      local_unstable = dn.unstable || !jac_trustworthy;
      auto it = jac_by_keep.find(dn.rank);
      if (it == jac_by_keep.end())
        it = jac_by_keep.emplace(dn.rank, y_defect_jacobian(ctx, w, dn.rank))
                 .first;
      RankDecision dj = rank_float(it->second, tols[t], y_jacobian_floor(ctx, w));
      local_unstable = local_unstable || dj.unstable;
      ld = ctx.flag_dim() - dj.rank;
    }
    if (t == 0) {
      s.orbit_dim = od;
      s.local_dim = ld;
      s.rank_stable = !orbit_unstable && !local_unstable;
    }
    if (ld - od >= 1) ++gap_rounds;
  }
  s.gap_persistent = gap_rounds == static_cast<int>(tols.size());
  return s;
}

// Exact-mode variant: orbit dimension and (for chi = 0) the local dimension
// are exact; rank tolerances only enter through the defect Jacobian.
YSample evaluate_sample_exact(const AlgebraContext& ctx, const VecQ& w,
                              const FinitenessParams& prm) {
  YSample s;
  s.w.reserve(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    s.w.push_back(rational_to_string(w(i)));
  MatQ g = big_cell_rep(ctx, w);
  s.orbit_dim = h_orbit_dim_exact(ctx, g);
  s.residual = 0.0;
  if (ctx.chi_is_zero()) {
    s.local_dim = ctx.flag_dim();
    s.exact = true;
    s.gap_persistent = s.local_dim - s.orbit_dim >= 1;
    return s;
  }
  // chi != 0: the stratum-local dimension still comes from the numerical
  // Jacobian; the orbit dimension stays exact.
  VecD wf = to_float_vec(w);
  const std::array<double, 3> tols{prm.rank_tol, prm.rank_tol * 0.1,
                                   prm.rank_tol * 10.0};
  std::map<long, MatD> jac_by_keep;
  int gap_rounds = 0;
  for (std::size_t t = 0; t < tols.size(); ++t) {
    MatD nm = y_normal_matrix(ctx, big_cell_rep_f(ctx, wf));
    RankDecision dn = rank_float(nm, tols[t]);
    auto it = jac_by_keep.find(dn.rank);
    if (it == jac_by_keep.end())
      it = jac_by_keep.emplace(dn.rank, y_defect_jacobian(ctx, wf, dn.rank))
               .first;
    RankDecision dj = rank_float(it->second, tols[t], y_jacobian_floor(ctx, wf));
    long ld = ctx.flag_dim() - dj.rank;
    if (t == 0) {
      s.local_dim = ld;
      s.rank_stable = !dn.unstable && !dj.unstable;
    }
    if (ld - s.orbit_dim >= 1) ++gap_rounds;
  }
  s.gap_persistent = gap_rounds == static_cast<int>(tols.size());
  return s;
}

}  // namespace

FinitenessReport finiteness_check(const AlgebraContext& ctx,
                                  const FinitenessParams& prm) {
  FinitenessReport rep;
  rep.flag_dim = ctx.flag_dim();
  rep.samples_requested = prm.samples;
  rep.exact_mode = prm.exact;

  // Every stabilizer contains the identity when h does, so a nonzero
  // tr(lambda) = chi(identity) empties Y outright.
  if (in_colspace_exact(ctx.h_mat(), vec_q(MatQ::Identity(ctx.n(), ctx.n())))) {
    Rational tr = 0;
    for (int i = 0; i < ctx.n(); ++i) tr += ctx.lambda()(i, i);
    if (tr != 0) {
      rep.verdict = FiniteVerdict::EmptyY;
      rep.note =
          "Y is empty (certified): the identity lies in h and chi(identity) = " +
          rational_to_string(tr) + " != 0, and every stabilizer contains it";
      return rep;
    }
  }

  const Eigen::Index m = ctx.flag_dim();
  std::vector<YSample> samples;

  if (ctx.chi_is_zero()) {
    // Y = G/P; every big-cell point qualifies.
    if (prm.exact) {
      auto evals = parallel_map<YSample>(
          static_cast<std::size_t>(prm.samples),
          [&](std::size_t i) {
            Rng rng(derive_seed(prm.seed, fnv1a64("y-sample"), i));
            VecQ w(m);
            for (Eigen::Index j = 0; j < m; ++j) {
              long num = 0;
              while (num == 0)
                num = static_cast<long>(rng.below(2001)) - 1000;
              long den = static_cast<long>(rng.below(49)) + 1;
              w(j) = Rational(num) / den;
            }
            return evaluate_sample_exact(ctx, w, prm);
          },
          prm.threads);
      samples = std::move(evals);
    } else {
      auto evals = parallel_map<YSample>(
          static_cast<std::size_t>(prm.samples),
          [&](std::size_t i) {
            Rng rng(derive_seed(prm.seed, fnv1a64("y-sample"), i));
            VecD w(m);
            for (Eigen::Index j = 0; j < m; ++j) w(j) = rng.gaussian();
            return evaluate_sample_float(ctx, w, prm, 0.0);
          },
          prm.threads);
      samples = std::move(evals);
    }
  } else {
    // Descend onto Y from random starts; keep the first `samples` successes.
    auto attempts = parallel_map<SampleEval>(
        static_cast<std::size_t>(prm.restarts),
        [&](std::size_t i) {
          SampleEval out;
          Rng rng(derive_seed(prm.seed, fnv1a64("y-descent"), i));
          VecD w0(m);
          for (Eigen::Index j = 0; j < m; ++j) w0(j) = rng.gaussian();
          Objective fn = [&](const VecD& w, VecD& grad) {
            double f0 = y_objective(ctx, w);
            grad.resize(m);
            for (Eigen::Index k = 0; k < m; ++k) {
              double step = 1e-6 * (1.0 + std::abs(w(k)));
              VecD wp = w, wm = w;
              wp(k) += step;
              wm(k) -= step;
              grad(k) = (y_objective(ctx, wp) - y_objective(ctx, wm)) /
                        (2.0 * step);
            }
            return f0;
          };
          OptimOptions opt;
          opt.max_iters = 200;
          opt.grad_tol = 1e-13;
          opt.value_tol = 1e-4 * prm.residual_tol * prm.residual_tol;
          OptimResult res = minimize_lbfgs(fn, w0, opt);
          double resid = std::sqrt(std::max(0.0, res.value));
          if (resid > 1e-12 && resid < 1e3 * prm.residual_tol) {
            // Push deep onto Y: differencing the defect later amplifies any
            // leftover membership residual by 1/step, so near-tolerance
            // samples make poor Jacobian base points.  A fresh start often
            // gains several orders.
            OptimResult res2 = minimize_lbfgs(fn, res.x, opt);
            double r2 = std::sqrt(std::max(0.0, res2.value));
            if (r2 < resid) {
              res = std::move(res2);
              resid = r2;
            }
          }
          if (!(resid <= prm.residual_tol)) return out;
          if (!y_membership_float(ctx, big_cell_rep_f(ctx, res.x),
                                  prm.residual_tol, prm.rank_tol))
            return out;
          out.sample = evaluate_sample_float(ctx, res.x, prm, resid);
          out.ok = true;
          return out;
        },
        prm.threads);
    for (auto& a : attempts) {
      if (!a.ok) continue;
      if (static_cast<int>(samples.size()) >= prm.samples) break;
      samples.push_back(std::move(a.sample));
    }
  }

  rep.samples_found = static_cast<int>(samples.size());
  rep.samples = samples;
  if (samples.empty()) {
    rep.verdict = FiniteVerdict::EmptyY;
    rep.note = "Y empty at this sampling budget (no descent run reached the "
               "membership tolerance)";
    return rep;
  }

  int stable_count = 0;
  for (const auto& s : samples) {
    if (s.rank_stable) {
      ++stable_count;
      rep.y_dim = std::max(rep.y_dim, s.local_dim);
      rep.generic_orbit_dim = std::max(rep.generic_orbit_dim, s.orbit_dim);
    }
  }

  // A gap certifies infinitude only at a generic witness: among stable
  // samples with the same local dimension, the witness must realize the
  // largest orbit dimension (a special point's orbit can be small even when
  // a dense orbit exists).
  std::map<long, long> max_orbit_by_local;
  for (const auto& s : samples)
    if (s.rank_stable) {
      auto it = max_orbit_by_local.find(s.local_dim);
      if (it == max_orbit_by_local.end())
        max_orbit_by_local[s.local_dim] = s.orbit_dim;
      else
        it->second = std::max(it->second, s.orbit_dim);
    }
  bool generic_gap = false;
  for (const auto& s : samples)
    if (s.rank_stable && s.gap_persistent &&
        s.orbit_dim == max_orbit_by_local[s.local_dim] &&
        s.local_dim - s.orbit_dim >= 1)
      generic_gap = true;

  // Finiteness evidence: in every sampled stratum the largest orbit fills
  // the stratum.  A sample whose own orbit is smaller sits on a special
  // locus inside the dense orbit's closure and is no obstruction.
  bool dense_in_class = !max_orbit_by_local.empty();
  for (const auto& [ld, od] : max_orbit_by_local)
    dense_in_class = dense_in_class && od == ld;

  // Unstable samples are set aside rather than allowed to veto; a majority
  // of clean samples must remain for a positive verdict.
  const bool quorum = 2 * stable_count >= static_cast<int>(samples.size());

  if (generic_gap) {
    rep.verdict = FiniteVerdict::Infinite;
    std::ostringstream os;
    os << "persistent dimension gap at generic samples: orbit dimension "
       << rep.generic_orbit_dim << " < local Y dimension " << rep.y_dim;
    rep.note = os.str();
  } else if (dense_in_class && quorum) {
    rep.verdict = FiniteVerdict::Finite;
    std::ostringstream os;
    os << "orbit dimension reaches the local Y dimension in every sampled "
          "stratum";
    const int set_aside = static_cast<int>(samples.size()) - stable_count;
    if (set_aside == 1)
      os << " (1 numerically unstable sample set aside)";
    else if (set_aside > 1)
      os << " (" << set_aside << " numerically unstable samples set aside)";
    rep.note = os.str();
  } else {
    rep.verdict = FiniteVerdict::Inconclusive;
    rep.note = quorum ? "dimension gaps appear only at non-generic samples"
                      : "rank decisions unstable at most samples";
  }
  return rep;
}

}  // namespace sphericity
