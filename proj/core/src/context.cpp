#include "sphericity/context.hpp"

#include <sstream>

namespace sphericity {

VecQ vec_q(const MatQ& m) {
  int n = static_cast<int>(m.rows());
  VecQ v(static_cast<Eigen::Index>(n) * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

MatQ unvec_q(const VecQ& v, int n) {
  MatQ m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v(static_cast<Eigen::Index>(i) * n + j);
  return m;
}

VecD vec_d(const MatD& m) {
  VecD v(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

MatD unvec_d(const VecD& v, int n) {
  MatD m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v(static_cast<Eigen::Index>(i) * n + j);
  return m;
}

MatQ bracket(const MatQ& a, const MatQ& b) { return a * b - b * a; }
MatD bracket_f(const MatD& a, const MatD& b) { return a * b - b * a; }

Rational trace_pair(const MatQ& a, const MatQ& b) {
  Rational t = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  return t;
}

MatQ unit_matrix(int n, int i, int j) {
  MatQ m = MatQ::Zero(n, n);
  m(i, j) = 1;
  return m;
}

namespace {

// Stacks vectorized basis elements as columns of an n^2 x m matrix.
MatQ basis_matrix(int n, const std::vector<MatQ>& basis) {
  MatQ out(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(basis.size()));
  for (size_t k = 0; k < basis.size(); ++k) out.col(k) = vec_q(basis[k]);
  return out;
}

// Rows are vec(b^T), so that (constraints * vec(x))_i = tr(x b_i).
MatQ trace_constraints(int n, const std::vector<MatQ>& basis) {
  MatQ out(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(n) * n);
  for (size_t k = 0; k < basis.size(); ++k)
    out.row(k) = vec_q(basis[k].transpose()).transpose();
  return out;
}

int block_of(const Composition& c, int row) {
  int acc = 0;
  for (size_t b = 0; b < c.blocks().size(); ++b) {
    acc += c.blocks()[b];
    if (row < acc) return static_cast<int>(b);
  }
  return -1;
}

}  // namespace

void check_subalgebra(int n, const std::vector<MatQ>& basis) {
  if (basis.empty()) throw std::invalid_argument("subalgebra basis is empty");
  for (size_t k = 0; k < basis.size(); ++k)
    if (basis[k].rows() != n || basis[k].cols() != n)
      throw std::invalid_argument("subalgebra basis element " + std::to_string(k) +
                                  " is not " + std::to_string(n) + "x" + std::to_string(n));
  MatQ bm = basis_matrix(n, basis);
  if (rank_exact(bm) != static_cast<long>(basis.size()))
    throw std::invalid_argument("subalgebra basis is linearly dependent");
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j) {
      MatQ br = bracket(basis[i], basis[j]);
      if (!solve_exact(bm, vec_q(br))) {
        std::ostringstream os;
        os << "not a subalgebra: [b_" << i << ", b_" << j
           << "] falls outside the span";
        throw std::invalid_argument(os.str());
      }
    }
}

void check_character(int n, const std::vector<MatQ>& basis,
                     const std::vector<Rational>& chi) {
  if (chi.size() != basis.size())
    throw std::invalid_argument("character values must match the basis length");
  MatQ bm = basis_matrix(n, basis);
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j) {
      MatQ br = bracket(basis[i], basis[j]);
      auto coords = solve_exact(bm, vec_q(br));
      if (!coords)
        throw std::invalid_argument("not a subalgebra: bracket leaves the span");
      Rational val = 0;
      for (size_t k = 0; k < basis.size(); ++k) val += (*coords)(k)*chi[k];
      if (val != 0) {
        std::ostringstream os;
        os << "not a character: chi([b_" << i << ", b_" << j << "]) = "
           << rational_to_string(val) << ", expected 0";
        throw std::invalid_argument(os.str());
      }
    }
}

AlgebraContext::AlgebraContext(ContextInput in)
    : n_(in.n),
      name_(std::move(in.name)),
      h_basis_(std::move(in.h_basis)),
      chi_(std::move(in.chi)),
      parabolic_(std::move(in.parabolic)) {
  if (n_ < 1) throw std::invalid_argument("n must be at least 1");
  if (parabolic_.n() != n_)
    throw std::invalid_argument("parabolic blocks sum to " +
                                std::to_string(parabolic_.n()) + ", expected " +
                                std::to_string(n_));
  check_subalgebra(n_, h_basis_);
  check_character(n_, h_basis_, chi_);
  for (const Rational& c : chi_)
    if (c != 0) chi_zero_ = false;

  h_mat_ = basis_matrix(n_, h_basis_);
  MatQ constraints = trace_constraints(n_, h_basis_);
  hperp_ = nullspace_exact(constraints);

  VecQ chi_vec(static_cast<Eigen::Index>(chi_.size()));
  for (size_t k = 0; k < chi_.size(); ++k) chi_vec(k) = chi_[k];
  // The constraint rows are independent (the basis is), so this never fails.
  auto lam = least_norm_exact(constraints, chi_vec);
  if (!lam) throw std::logic_error("character extension system inconsistent");
  lambda_ = unvec_q(*lam, n_);

  // Parabolic data from the block pattern.
  std::vector<MatQ> u_cols, um_cols, p_cols;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      int bi = block_of(parabolic_, i), bj = block_of(parabolic_, j);
      if (bi < bj) u_cols.push_back(unit_matrix(n_, i, j));
      if (bi > bj) um_cols.push_back(unit_matrix(n_, i, j));
      if (bi <= bj) p_cols.push_back(unit_matrix(n_, i, j));
    }
  u_mat_ = basis_matrix(n_, u_cols);
  u_minus_ = basis_matrix(n_, um_cols);
  p_mat_ = basis_matrix(n_, p_cols);

  richardson_ = richardson_type(parabolic_);
  flag_dim_ = u_mat_.cols();

  h_mat_f_ = to_float(h_mat_);
  hperp_f_ = to_float(hperp_);
  u_mat_f_ = to_float(u_mat_);
  u_minus_f_ = to_float(u_minus_);
  p_mat_f_ = to_float(p_mat_);
  lambda_f_ = to_float(lambda_);
}

MatQ AlgebraContext::slice_point(const VecQ& coeffs) const {
  if (coeffs.size() != hperp_.cols())
    throw std::invalid_argument("slice coefficient count mismatch");
  VecQ v = vec_q(lambda_);
  v += hperp_ * coeffs;
  return unvec_q(v, n_);
}

MatD AlgebraContext::slice_point_f(const VecD& coeffs) const {
  VecD v = vec_d(lambda_f_);
  v += hperp_f_ * coeffs;
  return unvec_d(v, n_);
}

AlgebraContext AlgebraContext::with_lambda_shift(const VecQ& hperp_coeffs) const {
  AlgebraContext shifted = *this;
  shifted.lambda_ = shifted.slice_point(hperp_coeffs);
  shifted.lambda_f_ = to_float(shifted.lambda_);
  return shifted;
}

AlgebraContext build_gl6_example() {
  const int n = 6;
  ContextInput in;
  in.n = n;
  in.name = "gl6 block example";

  // Upper-triangular 2x2 repeated down the diagonal: three basis elements.
  auto diag_rep = [&](int i, int j) {
    MatQ m = MatQ::Zero(n, n);
    m(i, j) = 1;
    m(i + 2, j + 2) = 1;
    m(i + 4, j + 4) = 1;
    return m;
  };
  in.h_basis.push_back(diag_rep(0, 0));
  in.h_basis.push_back(diag_rep(0, 1));
  in.h_basis.push_back(diag_rep(1, 1));
  in.chi.assign(3, Rational(0));

  // Free 2x2 blocks strictly above the diagonal of the 3x3 block grid.
  // chi picks out the traces of the two superdiagonal blocks.
  auto add_block = [&](int bi, int bj, bool traced) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        in.h_basis.push_back(unit_matrix(n, 2 * bi + r, 2 * bj + c));
        in.chi.push_back((traced && r == c) ? Rational(1) : Rational(0));
      }
  };
  add_block(0, 1, true);   // X, just above the diagonal; its trace feeds chi
  add_block(1, 2, true);   // Y, just above the diagonal; its trace feeds chi
  add_block(0, 2, false);  // the corner block; chi ignores it

  in.parabolic = Composition({2, 1, 1, 1, 1});
  return AlgebraContext(std::move(in));
}

}  // namespace sphericity
