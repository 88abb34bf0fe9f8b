#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sphericity/context.hpp"

namespace sphericity {

// ad_x as an n^2 x n^2 matrix: column (i*n+j) holds vec([x, E_ij]). Its
// image is the tangent space of the orbit through x; its kernel is the
// centralizer of x.
MatQ ad_matrix(const MatQ& x);
MatD ad_matrix_f(const MatD& x);

long centralizer_dim_exact(const MatQ& x);

// Jordan type via the rank profile of powers; nullopt when not nilpotent.
std::optional<Partition> jordan_type_exact(const MatQ& x);

struct FloatJordan {
  Partition type;
  // false when any of the power-rank calls sat near its cutoff.
  bool rank_stable = true;
};
// contamination is an absolute bound on how far x may sit from the exact
// stratum (e.g. a descent residual tolerance); powers whose entire spectrum
// is explained by that distance plus rounding are treated as zero.  Leave it
// at 0 for exactly-known inputs.
std::optional<FloatJordan> jordan_type_float(const MatD& x,
                                             double rel_tol = kRankRelTol,
                                             double contamination = 0.0);

// Jordan blocks of the given sizes laid down the diagonal.
MatQ jordan_matrix(const Partition& p);

// g J_p g^{-1} for seeded random unit-triangular g (determinant 1, so the
// inverse is exact). Stays in the orbit by construction.
MatQ sample_orbit_point(const Partition& p, Rng& rng);

// dim( Im(ad_x) ∩ span(hperp) ): the tangent-space bound for the local
// dimension of (orbit ∩ slice) at x.
long tangent_meet_slice_exact(const AlgebraContext& ctx, const MatQ& x);
long tangent_meet_slice_float(const AlgebraContext& ctx, const MatD& x,
                              bool* unstable = nullptr);

struct SliceSearchParams {
  int restarts = 32;    // penalty-minimization starts per orbit
  int samples = 64;     // direct random slice probes per orbit
  std::uint64_t seed = 0;
  bool exact = false;   // certify witnesses and dimensions in rational arithmetic
  double rank_tol = 1e-8;       // rank tolerance for typing found points
  double residual_tol = 1e-10;  // accept a found point when sqrt(penalty) < this
  int stabilization_rounds = 2;
  long rational_max_den = 1000000;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct DimEstimate {
  Partition type;
  long orbit_dimension = 0;
  long bound = 0;  // orbit_dimension / 2
  bool empty = true;
  bool empty_certified = false;  // emptiness proven, not merely unfound
  long value = -1;               // estimated dim of (orbit ∩ slice); -1 when empty
  int points_found = 0;
  int samples_used = 0;
  bool exact_witness = false;
  bool rank_stable = true;
  bool genericity_stable = true;
  double best_residual = 0.0;
  std::string note;
  // Rational slice coefficients of a certified witness, when one exists.
  std::vector<std::string> witness;
};

// One point of (orbit ∩ slice) found numerically.
struct SlicePoint {
  VecD coeffs;           // slice coordinates: x = lambda + hperp * coeffs
  double residual = 0.0; // sqrt of the final penalty value
  Partition type;
  bool rank_stable = true;
};

// Penalty whose zero set is closure(O_p) ∩ slice: sum over k of the squared
// singular values of x(v)^k past the rank profile of p. Fills grad when
// non-null.
double slice_penalty(const AlgebraContext& ctx, const Partition& p,
                     const VecD& v, VecD* grad);

// One seeded minimization attempt. Accepts only when the residual clears
// residual_tol and the rank profile matches p exactly at rank_tol.
std::optional<SlicePoint> find_slice_point(const AlgebraContext& ctx,
                                           const Partition& p,
                                           std::uint64_t seed,
                                           const SliceSearchParams& params);

// Full per-orbit dimension estimate: exact special cases, direct random
// probes, then penalty search with genericity stabilization.
DimEstimate estimate_slice_dim(const AlgebraContext& ctx, const Partition& p,
                               const SliceSearchParams& params);

}  // namespace sphericity
