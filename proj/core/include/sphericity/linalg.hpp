#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <optional>
#include <vector>

#include "sphericity/numeric.hpp"

namespace sphericity {

using MatQ = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using VecQ = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using MatD = Eigen::MatrixXd;
using VecD = Eigen::VectorXd;

MatD to_float(const MatQ& m);
VecD to_float_vec(const VecQ& v);

// Relative singular value cutoff for every floating rank decision.
inline constexpr double kRankRelTol = 1e-9;
// A rank call is flagged unstable when some singular value sits within this
// factor of the cutoff, on either side.
inline constexpr double kRankGapFactor = 10.0;

// ---- exact (rational) ----

// Row-reduces in place over Q. Returns the pivot column indices.
std::vector<int> rref_exact(MatQ& m);

long rank_exact(const MatQ& m);

// Columns form a basis of the kernel. Shape cols(m) x nullity.
MatQ nullspace_exact(const MatQ& m);

// Any one solution of m x = b, or nullopt when inconsistent.
std::optional<VecQ> solve_exact(const MatQ& m, const VecQ& b);

// The minimum-norm solution of m x = b, i.e. the unique solution lying in the
// row space. nullopt when the system is inconsistent.
std::optional<VecQ> least_norm_exact(const MatQ& m, const VecQ& b);

bool in_colspace_exact(const MatQ& basis, const VecQ& v);

// Exact inverse of a square matrix. Throws std::invalid_argument if singular.
MatQ inverse_exact(const MatQ& m);

// Basis of col(a) ∩ col(b), as columns.
MatQ intersect_exact(const MatQ& a, const MatQ& b);

// Basis of col(a) + col(b), as columns.
MatQ sum_exact(const MatQ& a, const MatQ& b);

// ---- floating (SVD-backed) ----

struct RankDecision {
  long rank = 0;
  // Set when a singular value falls within kRankGapFactor of the cutoff, so
  // the rank could plausibly be off by one.
  bool unstable = false;
  double sigma_max = 0.0;
  double smallest_kept = 0.0;
  double largest_dropped = 0.0;
};

// The cutoff is rel_tol * sigma_max, raised to abs_floor when that is larger.
// The floor matters for matrices that are themselves products: a numerically
// zero product still has a generic profile relative to its own tiny scale.
RankDecision rank_float(const MatD& m, double rel_tol = kRankRelTol,
                        double abs_floor = 0.0);

// Orthonormal kernel basis as columns. Shape cols(m) x nullity.
MatD nullspace_float(const MatD& m, double rel_tol = kRankRelTol);

// Orthonormal basis of the column space.
MatD colspace_float(const MatD& m, double rel_tol = kRankRelTol);

// Minimum-norm least-squares solution of m x = b.
VecD least_norm_float(const MatD& m, const VecD& b);

// Basis of col(a) ∩ col(b) (orthonormal), via the kernel of [a | -b].
MatD intersect_float(const MatD& a, const MatD& b, double rel_tol = kRankRelTol);

// Distance from v to col(basis), assuming basis has orthonormal columns.
double residual_to_colspace(const MatD& basis, const VecD& v);

}  // namespace sphericity
