#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sphericity/context.hpp"
#include "sphericity/orbit.hpp"

namespace sphericity {

enum class OrbitVerdict { Holds, Fails, Empty };
std::string to_string(OrbitVerdict v);

struct OrbitResult {
  Partition type;
  long dim = 0;
  long bound = 0;  // dim / 2; orbit dimensions are always even
  DimEstimate estimate;
  OrbitVerdict verdict = OrbitVerdict::Empty;
  // The estimate sits within one of the bound and its rank or genericity
  // diagnostics are shaky, so the verdict could flip by one.
  bool borderline_unstable = false;
};

struct SphericityReport {
  Partition richardson;
  long richardson_dim = 0;
  std::vector<OrbitResult> orbits;  // descending dimension order
  bool overall = true;              // every orbit holds or is empty
  bool conclusive = true;           // no deciding estimate was borderline
  std::string note;
};

/// Hook for supplying per-orbit estimates, e.g. from a result cache. The
/// default provider is estimate_slice_dim itself.
using EstimateProvider = std::function<DimEstimate(
    const AlgebraContext&, const Partition&, const SliceSearchParams&)>;

/// Estimates dim(O ∩ (h⊥+λ)) for every orbit O in the closure of the
/// Richardson orbit of the parabolic and compares with dim(O)/2.
SphericityReport check_sphericity(const AlgebraContext& ctx,
                                  const SliceSearchParams& params);
SphericityReport check_sphericity(const AlgebraContext& ctx,
                                  const SliceSearchParams& params,
                                  const EstimateProvider& provider);

/// The chi = 0 specialization: asserts the slice degenerates to h⊥ itself
/// (lambda = 0) and returns the overall verdict of the same check.
bool check_untwisted_reduction(const AlgebraContext& ctx,
                               const SliceSearchParams& params);

}  // namespace sphericity
