#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sphericity/checker.hpp"

#include "support.hpp"

using namespace sphericity;

namespace {

// Provider returning canned estimates, to exercise the verdict rules
// without any numerics.
EstimateProvider canned(long value, bool rank_stable, bool genericity_stable,
                        bool empty = false) {
  return [=](const AlgebraContext&, const Partition& p,
             const SliceSearchParams&) {
    DimEstimate e;
    e.type = p;
    e.orbit_dimension = orbit_dim(p);
    e.bound = e.orbit_dimension / 2;
    if (empty) return e;
    e.empty = false;
    e.value = value < 0 ? e.bound : value;
    e.points_found = 1;
    e.rank_stable = rank_stable;
    e.genericity_stable = genericity_stable;
    return e;
  };
}

}  // namespace

TEST_CASE("verdict rules on injected estimates") {
  AlgebraContext b2 = testsupport::borel_context(2);
  SliceSearchParams prm;

  // estimates exactly at the bound, fully stable: holds conclusively
  SphericityReport at_bound = check_sphericity(b2, prm, canned(-1, true, true));
  CHECK(at_bound.overall);
  CHECK(at_bound.conclusive);
  for (const auto& r : at_bound.orbits) {
    CHECK(r.verdict == OrbitVerdict::Holds);
    CHECK(!r.borderline_unstable);
  }

  // at the bound but rank-unstable: holds, flagged borderline, inconclusive
  SphericityReport shaky = check_sphericity(b2, prm, canned(-1, false, true));
  CHECK(shaky.overall);
  CHECK(!shaky.conclusive);
  CHECK(shaky.note.find("borderline") != std::string::npos);

  // genericity slippage alone cannot lower a Holds verdict at the bound
  SphericityReport generic_only =
      check_sphericity(b2, prm, canned(-1, true, false));
  CHECK(generic_only.overall);
  CHECK(generic_only.conclusive);

  // every orbit empty: vacuously spherical
  SphericityReport vac = check_sphericity(b2, prm, canned(0, true, true, true));
  CHECK(vac.overall);
  CHECK(vac.conclusive);
  for (const auto& r : vac.orbits) CHECK(r.verdict == OrbitVerdict::Empty);
}

TEST_CASE("failures: confident and borderline") {
  AlgebraContext b2 = testsupport::borel_context(2);
  SliceSearchParams prm;

  // exceeding the bound by one with shaky diagnostics: inconclusive
  EstimateProvider over_by_one = [](const AlgebraContext&, const Partition& p,
                                    const SliceSearchParams&) {
    DimEstimate e;
    e.type = p;
    e.orbit_dimension = orbit_dim(p);
    e.bound = e.orbit_dimension / 2;
    e.empty = false;
    e.value = e.bound + 1;
    e.points_found = 1;
    e.rank_stable = false;
    e.genericity_stable = true;
    return e;
  };
  SphericityReport borderline = check_sphericity(b2, prm, over_by_one);
  CHECK(!borderline.overall);
  CHECK(!borderline.conclusive);

  // exceeding by two with clean diagnostics: conclusive failure
  EstimateProvider over_by_two = [](const AlgebraContext&, const Partition& p,
                                    const SliceSearchParams&) {
    DimEstimate e;
    e.type = p;
    e.orbit_dimension = orbit_dim(p);
    e.bound = e.orbit_dimension / 2;
    e.empty = false;
    e.value = e.bound + 2;
    e.points_found = 1;
    return e;
  };
  SphericityReport fail = check_sphericity(b2, prm, over_by_two);
  CHECK(!fail.overall);
  CHECK(fail.conclusive);
  CHECK(fail.note.find("exceeds the bound") != std::string::npos);

  // one confident failure decides the run even if another orbit is borderline
  EstimateProvider mixed = [](const AlgebraContext&, const Partition& p,
                              const SliceSearchParams&) {
    DimEstimate e;
    e.type = p;
    e.orbit_dimension = orbit_dim(p);
    e.bound = e.orbit_dimension / 2;
    e.empty = false;
    e.points_found = 1;
    if (p == Partition({2})) {
      e.value = e.bound + 2;  // confident failure
    } else {
      e.value = e.bound;
      e.rank_stable = false;  // borderline hold
    }
    return e;
  };
  SphericityReport decided = check_sphericity(b2, prm, mixed);
  CHECK(!decided.overall);
  CHECK(decided.conclusive);
}

TEST_CASE("orbit rows come back in descending dimension order") {
  AlgebraContext ctx = build_gl6_example();
  SliceSearchParams prm;
  SphericityReport rep = check_sphericity(ctx, prm, canned(0, true, true, true));
  CHECK(rep.richardson == Partition({5, 1}));
  CHECK(rep.richardson_dim == 28);
  CHECK(rep.orbits.size() == 10);
  for (std::size_t i = 1; i < rep.orbits.size(); ++i)
    CHECK(rep.orbits[i - 1].dim >= rep.orbits[i].dim);
  CHECK(rep.orbits.front().type == Partition({5, 1}));
  CHECK(rep.orbits.back().type == Partition({1, 1, 1, 1, 1, 1}));
}

TEST_CASE("gl2 borel end to end in exact mode") {
  AlgebraContext b2 = testsupport::borel_context(2);
  SliceSearchParams prm;
  prm.exact = true;
  prm.seed = 5;
  SphericityReport rep = check_sphericity(b2, prm);
  CHECK(rep.overall);
  CHECK(rep.conclusive);
  REQUIRE(rep.orbits.size() == 2);
  CHECK(rep.orbits[0].type == Partition({2}));
  CHECK(rep.orbits[0].estimate.value == 1);
  CHECK(rep.orbits[0].bound == 1);
  CHECK(rep.orbits[1].type == Partition({1, 1}));
  CHECK(rep.orbits[1].estimate.value == 0);
  CHECK(rep.orbits[1].bound == 0);
}

TEST_CASE("gl3 torus with chi = 0 fails the bound conclusively") {
  AlgebraContext t3 = testsupport::torus_context(
      3, {Rational(0), Rational(0), Rational(0)});
  SliceSearchParams prm;
  prm.seed = 21;
  prm.restarts = 24;
  prm.samples = 24;
  SphericityReport rep = check_sphericity(t3, prm);
  CHECK(!rep.overall);
  // the regular orbit meets the zero-diagonal slice in dimension 4 > 3
  REQUIRE(!rep.orbits.empty());
  CHECK(rep.orbits[0].type == Partition({3}));
  CHECK(rep.orbits[0].estimate.value == 4);
  CHECK(rep.orbits[0].verdict == OrbitVerdict::Fails);
}

TEST_CASE("untwisted reduction guards its precondition") {
  SliceSearchParams prm;
  prm.exact = true;
  AlgebraContext b2 = testsupport::borel_context(2);
  CHECK(check_untwisted_reduction(b2, prm));

  AlgebraContext tw =
      testsupport::torus_context(2, {Rational(1), Rational(-1)});
  CHECK_THROWS_AS(check_untwisted_reduction(tw, prm), std::invalid_argument);
}
