#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "sphericity/context.hpp"
#include "sphericity/linalg.hpp"

#include "support.hpp"

using namespace sphericity;

TEST_CASE("vectorization round trips") {
  Rng rng(1);
  MatQ m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m(i, j) = Rational(static_cast<long>(rng.below(9)) - 4);
  CHECK(unvec_q(vec_q(m), 3) == m);
  MatD mf = to_float(m);
  CHECK(unvec_d(vec_d(mf), 3) == mf);
  // row-major layout: entry (i,j) at index i*n+j
  CHECK(vec_q(m)(1 * 3 + 2) == m(1, 2));
}

TEST_CASE("bracket and trace pairing") {
  MatQ a = unit_matrix(2, 0, 1), b = unit_matrix(2, 1, 0);
  MatQ c = bracket(a, b);  // [E01, E10] = E00 - E11
  CHECK(c(0, 0) == 1);
  CHECK(c(1, 1) == -1);
  CHECK(c(0, 1) == 0);
  CHECK(trace_pair(a, b) == 1);
  CHECK(trace_pair(a, a) == 0);
  // tr(x [y,z]) = tr([x,y] z): invariance of the trace form
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    MatQ x(3, 3), y(3, 3), z(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        x(i, j) = Rational(static_cast<long>(rng.below(7)) - 3);
        y(i, j) = Rational(static_cast<long>(rng.below(7)) - 3);
        z(i, j) = Rational(static_cast<long>(rng.below(7)) - 3);
      }
    CHECK(trace_pair(x, bracket(y, z)) == trace_pair(bracket(x, y), z));
  }
}

TEST_CASE("subalgebra validation names the offending pair") {
  // span{E00, E01+E10} is not closed: [b_0, b_1] = E01 - E10 leaves the span
  std::vector<MatQ> bad = {unit_matrix(2, 0, 0),
                           MatQ(unit_matrix(2, 0, 1) + unit_matrix(2, 1, 0))};
  CHECK_THROWS_WITH_AS(check_subalgebra(2, bad),
                       doctest::Contains("[b_0, b_1]"), std::invalid_argument);

  // dependent list is rejected too
  std::vector<MatQ> dep = {unit_matrix(2, 0, 0), unit_matrix(2, 0, 0)};
  CHECK_THROWS_AS(check_subalgebra(2, dep), std::invalid_argument);

  // a genuine subalgebra passes
  std::vector<MatQ> borel = {unit_matrix(2, 0, 0), unit_matrix(2, 1, 1),
                             unit_matrix(2, 0, 1)};
  CHECK_NOTHROW(check_subalgebra(2, borel));
}

TEST_CASE("character validation names the bracket pair") {
  std::vector<MatQ> borel = {unit_matrix(2, 0, 0), unit_matrix(2, 1, 1),
                             unit_matrix(2, 0, 1)};
  // chi(E01) = 1 contradicts [E00, E01] = E01
  std::vector<Rational> bad_chi = {0, 0, 1};
  CHECK_THROWS_WITH_AS(check_character(2, borel, bad_chi),
                       doctest::Contains("chi([b_"), std::invalid_argument);
  std::vector<Rational> good_chi = {3, Rational(-1) / 2, 0};
  CHECK_NOTHROW(check_character(2, borel, good_chi));
}

TEST_CASE("gl6 example context invariants") {
  AlgebraContext ctx = build_gl6_example();
  CHECK(ctx.n() == 6);
  CHECK(ctx.dim_h() == 15);
  CHECK(ctx.slice_dim() == 36 - 15);
  CHECK(ctx.flag_dim() == 14);  // (36 - (4+1+1+1+1)) / 2
  CHECK(ctx.richardson() == Partition({5, 1}));
  CHECK(!ctx.chi_is_zero());

  // lambda restricts to chi on h under the trace form
  for (std::size_t i = 0; i < ctx.h_basis().size(); ++i)
    CHECK(trace_pair(ctx.lambda(), ctx.h_basis()[i]) == ctx.chi()[i]);

  // hperp annihilates h, and dimensions complement
  for (Eigen::Index c = 0; c < ctx.hperp().cols(); ++c)
    for (const auto& b : ctx.h_basis())
      CHECK(trace_pair(unvec_q(ctx.hperp().col(c), 6), b) == 0);
  CHECK(ctx.dim_h() + ctx.hperp().cols() == 36);

  // u = p⊥: pairing vanishes and dimensions add up
  for (Eigen::Index cu = 0; cu < ctx.u_mat().cols(); ++cu)
    for (Eigen::Index cp = 0; cp < ctx.p_mat().cols(); ++cp)
      CHECK(trace_pair(unvec_q(ctx.u_mat().col(cu), 6),
                       unvec_q(ctx.p_mat().col(cp), 6)) == 0);
  CHECK(ctx.u_mat().cols() + ctx.p_mat().cols() == 36);
  CHECK(ctx.u_mat().cols() == ctx.flag_dim());
}

TEST_CASE("lambda shift stays inside the slice and keeps the restriction") {
  AlgebraContext ctx = build_gl6_example();
  Rng rng(9);
  VecQ coeffs(ctx.slice_dim());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    coeffs(i) = Rational(static_cast<long>(rng.below(7)) - 3);
  AlgebraContext shifted = ctx.with_lambda_shift(coeffs);
  CHECK(shifted.lambda() != ctx.lambda());
  for (std::size_t i = 0; i < ctx.h_basis().size(); ++i)
    CHECK(trace_pair(shifted.lambda(), ctx.h_basis()[i]) == ctx.chi()[i]);
  // the slice itself is unchanged
  CHECK(shifted.hperp() == ctx.hperp());
}

TEST_CASE("small contexts: borel and torus shapes") {
  AlgebraContext b2 = testsupport::borel_context(2);
  CHECK(b2.slice_dim() == 1);
  // annihilator of the upper triangle is the strictly upper triangle
  MatQ sl = b2.slice_point(VecQ::Constant(1, Rational(1)));
  CHECK(sl(0, 0) == 0);
  CHECK(sl(1, 0) == 0);
  CHECK(sl(1, 1) == 0);
  CHECK(sl(0, 1) != 0);
  CHECK(b2.chi_is_zero());
  CHECK(b2.lambda() == MatQ::Zero(2, 2));
  CHECK(b2.richardson() == Partition({2}));
  CHECK(b2.flag_dim() == 1);

  AlgebraContext t2 = testsupport::torus_context(2, {Rational(1), Rational(-1)});
  CHECK(t2.slice_dim() == 2);
  CHECK(!t2.chi_is_zero());
  CHECK(t2.lambda()(0, 0) == 1);
  CHECK(t2.lambda()(1, 1) == -1);
  CHECK(t2.lambda()(0, 1) == 0);
}

TEST_CASE("context input validation") {
  ContextInput in;
  in.n = 2;
  in.h_basis = {unit_matrix(2, 0, 0)};
  in.chi = {Rational(0)};
  in.parabolic = Composition({1, 1, 1});  // sums to 3, not 2
  CHECK_THROWS_AS(AlgebraContext{in}, std::invalid_argument);

  in.parabolic = Composition({1, 1});
  in.chi = {Rational(0), Rational(1)};  // wrong length
  CHECK_THROWS_AS(AlgebraContext{in}, std::invalid_argument);
}
