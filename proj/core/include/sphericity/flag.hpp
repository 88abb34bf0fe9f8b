#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sphericity/context.hpp"
#include "sphericity/linalg.hpp"
#include "sphericity/numeric.hpp"

namespace sphericity {

/// exp of a nilpotent matrix; the series is a finite polynomial, so this is
/// exact over the rationals.
MatQ exp_nilpotent(const MatQ& x);
MatD exp_nilpotent_f(const MatD& x);

/// Coset representative for the big-cell point with coordinates w:
/// g = exp(sum_i w_i * (opposite-nilradical basis vector i)).
MatQ big_cell_rep(const AlgebraContext& ctx, const VecQ& w);
MatD big_cell_rep_f(const AlgebraContext& ctx, const VecD& w);

/// Column-wise Ad_g of a vectorized basis: column i becomes vec(g B_i g^-1).
MatQ adjoint_image(const MatQ& g, const MatQ& basis_cols);
MatD adjoint_image_f(const MatD& g, const MatD& basis_cols);

/// Basis of the isotropy subalgebra h ∩ Ad_g(p) of h at the coset gP.
MatQ stabilizer_subalgebra_exact(const AlgebraContext& ctx, const MatQ& g);
/// Orthonormal float counterpart.
MatD stabilizer_subalgebra_float(const AlgebraContext& ctx, const MatD& g,
                                 double rel_tol = kRankRelTol);

/// dim of the H-orbit through gP: dim h - dim (h ∩ Ad_g p).
long h_orbit_dim_exact(const AlgebraContext& ctx, const MatQ& g);
long h_orbit_dim_float(const AlgebraContext& ctx, const MatD& g,
                       double rel_tol = kRankRelTol, bool* unstable = nullptr);

/// Membership of gP in Y: chi vanishes on the isotropy subalgebra.
bool y_membership_exact(const AlgebraContext& ctx, const MatQ& g);
bool y_membership_float(const AlgebraContext& ctx, const MatD& g, double tol,
                        double rank_tol = kRankRelTol);

/// Relative distance of vec(lambda) to h⊥ + Ad_g(u). Zero exactly on Y;
/// smooth enough to descend on.
double y_residual_float(const AlgebraContext& ctx, const MatD& g);

struct FinitenessParams {
  int samples = 12;    // Y points to analyze
  int restarts = 48;   // descent attempts when chi != 0
  std::uint64_t seed = 0;
  bool exact = false;
  double rank_tol = 1e-8;
  double residual_tol = 1e-8;
  unsigned threads = 0;  // 0 = hardware concurrency
};

enum class FiniteVerdict { Finite, Infinite, Inconclusive, EmptyY };
std::string to_string(FiniteVerdict v);

struct YSample {
  std::vector<std::string> w;  // big-cell coordinates (exact strings or decimals)
  long orbit_dim = -1;
  long local_dim = -1;   // local dimension of Y within the sample's stratum
  double residual = 0.0; // Y-membership residual at the sample
  bool rank_stable = true;
  bool gap_persistent = false;  // orbit_dim < local_dim across all rank tolerances
  bool exact = false;
};

struct FinitenessReport {
  FiniteVerdict verdict = FiniteVerdict::Inconclusive;
  long flag_dim = 0;
  long y_dim = -1;             // max stratum-local dim over stable samples
  long generic_orbit_dim = -1; // max orbit dim over stable samples
  int samples_found = 0;
  int samples_requested = 0;
  bool exact_mode = false;
  std::string note;
  std::vector<YSample> samples;
};

/// Samples Y inside the big cell and compares H-orbit dimensions against
/// stratum-local dimensions of Y. Finite requires the largest orbit in every
/// sampled stratum to fill that stratum; Infinite requires a persistent gap
/// at a generic sample.
FinitenessReport finiteness_check(const AlgebraContext& ctx,
                                  const FinitenessParams& prm);

}  // namespace sphericity
