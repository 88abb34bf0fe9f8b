#pragma once

#include <string>
#include <vector>

#include "sphericity/linalg.hpp"
#include "sphericity/partition.hpp"

namespace sphericity {

// Row-major flattening: entry (i,j) lands at index i*n + j.
VecQ vec_q(const MatQ& m);
MatQ unvec_q(const VecQ& v, int n);
VecD vec_d(const MatD& m);
MatD unvec_d(const VecD& v, int n);

MatQ bracket(const MatQ& a, const MatQ& b);
MatD bracket_f(const MatD& a, const MatD& b);

// tr(ab); this pairing identifies gl_n with its dual throughout.
Rational trace_pair(const MatQ& a, const MatQ& b);

// Elementary matrix with a single 1 at (i, j), zero-indexed.
MatQ unit_matrix(int n, int i, int j);

// Throws when the given matrices are not an independent basis of a Lie
// subalgebra of gl_n (each bracket must land back in the span).
void check_subalgebra(int n, const std::vector<MatQ>& basis);

// Throws when chi fails to vanish on brackets, i.e. when it is not a Lie
// algebra character of the span.
void check_character(int n, const std::vector<MatQ>& basis,
                     const std::vector<Rational>& chi);

struct ContextInput {
  int n = 0;
  std::vector<MatQ> h_basis;
  std::vector<Rational> chi;  // chi(h_basis[i]), same length as h_basis
  Composition parabolic;
  std::string name;  // label carried into reports
};

// Validated, fully precomputed data for one (H, chi, P) problem instance
// inside GL_n. Both exact and floating copies of every subspace are kept so
// the two arithmetic modes share one source of truth.
class AlgebraContext {
 public:
  explicit AlgebraContext(ContextInput in);

  int n() const { return n_; }
  long ambient_dim() const { return static_cast<long>(n_) * n_; }
  const std::string& name() const { return name_; }

  const std::vector<MatQ>& h_basis() const { return h_basis_; }
  const std::vector<Rational>& chi() const { return chi_; }
  const Composition& parabolic() const { return parabolic_; }

  long dim_h() const { return static_cast<long>(h_basis_.size()); }
  bool chi_is_zero() const { return chi_zero_; }

  // n^2 x k matrices whose columns are vectorized basis elements.
  const MatQ& h_mat() const { return h_mat_; }
  const MatQ& hperp() const { return hperp_; }          // trace-form annihilator of h
  const MatQ& u_mat() const { return u_mat_; }          // nilradical of P
  const MatQ& u_minus_mat() const { return u_minus_; }  // opposite nilradical
  const MatQ& p_mat() const { return p_mat_; }

  // The minimum-norm matrix with tr(lambda b) = chi(b) for all b in h. The
  // affine slice attached to chi is lambda + span(hperp()); lambda is the
  // zero matrix exactly when chi = 0.
  const MatQ& lambda() const { return lambda_; }

  long slice_dim() const { return hperp_.cols(); }
  MatQ slice_point(const VecQ& coeffs) const;
  MatD slice_point_f(const VecD& coeffs) const;

  Partition richardson() const { return richardson_; }
  long flag_dim() const { return flag_dim_; }  // dim G/P = dim of nilradical

  /// Copy of this context with the character extension moved to another
  /// representative of the same slice: lambda + hperp * coeffs.
  AlgebraContext with_lambda_shift(const VecQ& hperp_coeffs) const;

  // Floating mirrors.
  const MatD& h_mat_f() const { return h_mat_f_; }
  const MatD& hperp_f() const { return hperp_f_; }
  const MatD& u_mat_f() const { return u_mat_f_; }
  const MatD& u_minus_f() const { return u_minus_f_; }
  const MatD& p_mat_f() const { return p_mat_f_; }
  const MatD& lambda_f() const { return lambda_f_; }

 private:
  int n_ = 0;
  std::string name_;
  std::vector<MatQ> h_basis_;
  std::vector<Rational> chi_;
  Composition parabolic_;
  bool chi_zero_ = true;

  MatQ h_mat_, hperp_, u_mat_, u_minus_, p_mat_, lambda_;
  MatD h_mat_f_, hperp_f_, u_mat_f_, u_minus_f_, p_mat_f_, lambda_f_;
  Partition richardson_;
  long flag_dim_ = 0;
};

/// The worked GL_6 instance: H is the group of block upper-triangular
/// matrices [[B,X,C],[0,B,Y],[0,0,B]] with B a free 2x2 upper-triangular
/// block repeated on the diagonal, chi(log h) = tr(X) + tr(Y) the sum of
/// the traces of the two superdiagonal blocks, and P of type (2,1,1,1,1).
AlgebraContext build_gl6_example();

}  // namespace sphericity
