#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sphericity/context.hpp"
#include "sphericity/flag.hpp"
#include "sphericity/linalg.hpp"
#include "sphericity/numeric.hpp"

#include "support.hpp"

using namespace sphericity;

namespace {

MatQ random_int_matrix(int rows, int cols, Rng& rng) {
  MatQ m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = Rational(static_cast<long>(rng.below(11)) - 5);
  return m;
}

// Annihilator of the column span under the trace form: tr(x b_c) = 0 for
// every column c. Independent of the construction inside AlgebraContext.
MatQ trace_perp(const MatQ& cols, int n) {
  MatQ pairing(cols.cols(), n * n);
  for (Eigen::Index c = 0; c < cols.cols(); ++c)
    pairing.row(c) = vec_q(MatQ(unvec_q(cols.col(c), n).transpose())).transpose();
  return nullspace_exact(pairing);
}

bool same_colspace(const MatQ& a, const MatQ& b) {
  if (rank_exact(a) != rank_exact(b)) return false;
  MatQ joint(a.rows(), a.cols() + b.cols());
  joint.leftCols(a.cols()) = a;
  joint.rightCols(b.cols()) = b;
  return rank_exact(joint) == rank_exact(a);
}

}  // namespace

TEST_CASE("exact rank, rref, nullspace on crafted matrices") {
  MatQ m(3, 3);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9;  // rank 2
  CHECK(rank_exact(m) == 2);
  MatQ ns = nullspace_exact(m);
  CHECK(ns.cols() == 1);
  VecQ prod = m * ns.col(0);
  for (int i = 0; i < 3; ++i) CHECK(prod(i) == 0);

  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    MatQ a = random_int_matrix(5, 3, rng);
    MatQ b = random_int_matrix(3, 4, rng);
    MatQ prod2 = a * b;
    CHECK(rank_exact(prod2) <= 3);
    MatQ ns2 = nullspace_exact(prod2);
    CHECK(rank_exact(prod2) + ns2.cols() == 4);
  }
}

TEST_CASE("solve and least-norm solutions") {
  MatQ m(2, 3);
  m << 1, 0, 1, 0, 1, 1;
  VecQ b(2);
  b << 2, 3;
  auto x = solve_exact(m, b);
  REQUIRE(x.has_value());
  VecQ r = m * *x - b;
  CHECK(r(0) == 0);
  CHECK(r(1) == 0);

  auto ln = least_norm_exact(m, b);
  REQUIRE(ln.has_value());
  VecQ r2 = m * *ln - b;
  CHECK(r2(0) == 0);
  CHECK(r2(1) == 0);
  // least-norm solution lies in the row space: orthogonal to the kernel
  MatQ ker = nullspace_exact(m);
  for (Eigen::Index c = 0; c < ker.cols(); ++c) {
    Rational dot = 0;
    for (int i = 0; i < 3; ++i) dot += (*ln)(i)*ker(i, c);
    CHECK(dot == 0);
  }

  // inconsistent system
  MatQ s(2, 1);
  s << 1, 2;
  VecQ c(2);
  c << 1, 1;
  CHECK(!solve_exact(s, c).has_value());
  CHECK(!least_norm_exact(s, c).has_value());
}

TEST_CASE("inverse, colspace membership, intersections, sums") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    // unit upper triangular keeps the inverse integral
    MatQ g = MatQ::Identity(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        g(i, j) = Rational(static_cast<long>(rng.below(7)) - 3);
    MatQ gi = inverse_exact(g);
    MatQ prod = g * gi;
    CHECK(prod == MatQ::Identity(4, 4));
  }

  MatQ a(3, 2), b(3, 2);
  a << 1, 0, 0, 1, 0, 0;
  b << 0, 1, 0, 0, 1, 1;
  CHECK(in_colspace_exact(a, VecQ(a.col(0) + a.col(1) * 2)));
  VecQ outside(3);
  outside << 0, 0, 1;
  CHECK(!in_colspace_exact(a, outside));
  MatQ inter = intersect_exact(a, b);
  // span{e1,e2} ∩ span{e2, e1+e3} = span{e2}
  CHECK(inter.cols() == 1);
  CHECK(inter(2, 0) == 0);
  CHECK(rank_exact(sum_exact(a, b)) == 3);

  // dim(A) + dim(B) = dim(A∩B) + dim(A+B) on random spans
  for (int trial = 0; trial < 15; ++trial) {
    MatQ x = random_int_matrix(6, 3, rng);
    MatQ y = random_int_matrix(6, 4, rng);
    long da = rank_exact(x), db = rank_exact(y);
    long meet = intersect_exact(x, y).cols();
    long join = rank_exact(sum_exact(x, y));
    CHECK(da + db == meet + join);
  }
}

TEST_CASE("trace-form annihilators: dimension count and involution") {
  Rng rng(77);
  for (int n = 2; n <= 4; ++n) {
    MatQ cols = random_int_matrix(n * n, n, rng);
    MatQ perp = trace_perp(cols, n);
    CHECK(rank_exact(cols) + perp.cols() == n * n);
    // the pairing is nondegenerate, so applying it twice returns the span
    CHECK(same_colspace(trace_perp(perp, n), cols));
  }
}

TEST_CASE("(q ∩ h)⊥ = h⊥ + q⊥ for conjugated parabolics") {
  auto check_identity = [](const AlgebraContext& ctx, std::uint64_t seed) {
    const int n = ctx.n();
    Rng rng(seed);
    MatQ g = MatQ::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) g(i, j) = Rational(static_cast<long>(rng.below(5)) - 2);
    if (rank_exact(g) < n) return;  // rare singular draw, skip
    MatQ q = adjoint_image(g, ctx.p_mat());
    MatQ qu = adjoint_image(g, ctx.u_mat());
    MatQ meet = intersect_exact(ctx.h_mat(), q);
    MatQ lhs = trace_perp(meet, n);
    MatQ rhs = sum_exact(ctx.hperp(), qu);
    CHECK(same_colspace(lhs, rhs));
  };
  check_identity(testsupport::borel_context(2), 1);
  check_identity(testsupport::borel_context(3), 2);
  check_identity(testsupport::torus_context(3, {Rational(0), Rational(0), Rational(0)}), 3);
  check_identity(build_gl6_example(), 4);
}

TEST_CASE("float rank decisions flag near-deficient matrices") {
  MatD m(3, 3);
  m << 1, 0, 0, 0, 1, 0, 0, 0, 1e-30;
  RankDecision d = rank_float(m);
  CHECK(d.rank == 2);
  CHECK(!d.unstable);

  MatD borderline(2, 2);
  borderline << 1, 0, 0, 1.0000000005e-9;  // right at the default cutoff
  RankDecision d2 = rank_float(borderline, 1e-9);
  CHECK(d2.unstable);

  MatD full = MatD::Identity(4, 4);
  RankDecision d3 = rank_float(full);
  CHECK(d3.rank == 4);
  CHECK(!d3.unstable);

  CHECK(nullspace_float(m).cols() == 1);
  CHECK(colspace_float(m).cols() == 2);
  // residual of a vector already inside the column space
  MatD basis = colspace_float(m);
  CHECK(residual_to_colspace(basis, basis.col(0)) < 1e-12);
}
