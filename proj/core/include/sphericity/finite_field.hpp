#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sphericity/context.hpp"
#include "sphericity/partition.hpp"

namespace sphericity {

/// Relative variation of counts/q^d across primes below which a degree fit
/// is considered clean.
inline constexpr double kFfSpreadTol = 0.20;

/// Exhaustive point count of the affine slice reduced mod a prime q,
/// bucketed by Jordan type over F_q.
struct FfScanResult {
  long q = 0;
  long slice_dim = 0;
  unsigned long long total_points = 0;  // q^slice_dim
  std::vector<Partition> types;         // all partitions of n, fixed order
  std::vector<unsigned long long> counts;  // nilpotent points per type
  unsigned long long nilpotent_points = 0;
};

/// Brute-force scan of the slice over F_q. Requires every denominator in the
/// slice data to be invertible mod q and q^slice_dim to fit in the budget;
/// throws std::runtime_error("slice too large...") otherwise.
FfScanResult ff_count_slice(const AlgebraContext& ctx, long q,
                            unsigned long long budget = 100000000ULL,
                            unsigned threads = 0);

/// Count for one orbit type in a scan (0 if the type is not a partition of n).
unsigned long long ff_count_orbit(const FfScanResult& r, const Partition& p);

/// Degree fitted to the growth of per-prime counts: the d minimizing the
/// relative variation of count/q^d.
struct FfFit {
  bool any_points = false;         // at least one prime saw the type
  bool all_primes_nonzero = false; // every prime saw the type
  long exponent = -1;              // best-fit degree; -1 without enough data
  double spread = 0.0;             // relative variation at the chosen degree
  bool accepted = false;           // all primes nonzero and spread < kFfSpreadTol
  std::vector<double> normalized;  // count_i / q_i^exponent
};

FfFit fit_ff_exponent(const std::vector<FfScanResult>& scans,
                      const Partition& p);

}  // namespace sphericity
