#pragma once

#include <Eigen/Dense>
#include <deque>
#include <functional>

namespace sphericity {

struct OptimOptions {
  int max_iters = 400;
  double grad_tol = 1e-12;    // stop when ||g||_inf falls below this
  double value_tol = 0.0;     // stop when f falls below this (0 disables)
  int memory = 8;             // history pairs kept for the two-loop recursion
};

struct OptimResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iters = 0;
  bool converged = false;
};

// Objective: returns f(x) and fills grad (same size as x).
using Objective =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Limited-memory BFGS with Armijo backtracking. Enough for the smooth
// penalty landscapes here; no bells attached.
inline OptimResult minimize_lbfgs(const Objective& fn, Eigen::VectorXd x0,
                                  const OptimOptions& opt = {}) {
  OptimResult res;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd g(x.size()), g_new(x.size());
  double f = fn(x, g);
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  for (int iter = 0; iter < opt.max_iters; ++iter) {
    res.iters = iter;
    double gnorm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
    if (gnorm < opt.grad_tol || (opt.value_tol > 0 && f < opt.value_tol)) {
      res.converged = true;
      break;
    }

    // Two-loop recursion for the search direction.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const Eigen::VectorXd& s = s_hist.back();
      const Eigen::VectorXd& y = y_hist.back();
      double yy = y.dot(y);
      if (yy > 0) q *= s.dot(y) / yy;
    }
    for (size_t i = 0; i < s_hist.size(); ++i) {
      double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd dir = -q;
    double slope = g.dot(dir);
    if (slope >= 0) {  // history went bad; fall back to steepest descent
      dir = -g;
      slope = -g.squaredNorm();
      s_hist.clear(); y_hist.clear(); rho_hist.clear();
    }

    // Armijo backtracking.
    double step = 1.0;
    const double c1 = 1e-4;
    double f_new = f;
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      x_new = x + step * dir;
      f_new = fn(x_new, g_new);
      if (f_new <= f + c1 * step * slope) { accepted = true; break; }
      step *= 0.5;
    }
    if (!accepted) break;  // line search stalled; x is as good as it gets

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opt.memory) {
        s_hist.pop_front(); y_hist.pop_front(); rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g = g_new;
    f = f_new;
  }

  res.x = std::move(x);
  res.value = f;
  res.grad_norm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
  if (opt.value_tol > 0 && res.value < opt.value_tol) res.converged = true;
  return res;
}

}  // namespace sphericity
