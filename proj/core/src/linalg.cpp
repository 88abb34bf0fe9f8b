#include "sphericity/linalg.hpp"

#include <Eigen/SVD>

namespace sphericity {

MatD to_float(const MatQ& m) {
  MatD out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

VecD to_float_vec(const VecQ& v) {
  VecD out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_double(v(i));
  return out;
}

std::vector<int> rref_exact(MatQ& m) {
  std::vector<int> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = row; r < m.rows(); ++r)
      if (m(r, col) != 0) { piv = r; break; }
    if (piv < 0) continue;
    if (piv != row) m.row(piv).swap(m.row(row));
    Rational inv = Rational(1) / m(row, col);
    m.row(row) *= inv;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rational f = m(r, col);
      m.row(r) -= f * m.row(row);
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  return pivots;
}

long rank_exact(const MatQ& m) {
  MatQ copy = m;
  return static_cast<long>(rref_exact(copy).size());
}

MatQ nullspace_exact(const MatQ& m) {
  MatQ r = m;
  std::vector<int> pivots = rref_exact(r);
  Eigen::Index n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (int p : pivots) is_pivot[p] = true;
  Eigen::Index nullity = n - static_cast<Eigen::Index>(pivots.size());
  MatQ basis = MatQ::Zero(n, nullity);
  Eigen::Index k = 0;
  for (Eigen::Index free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    basis(free_col, k) = 1;
    for (Eigen::Index pr = 0; pr < static_cast<Eigen::Index>(pivots.size()); ++pr)
      basis(pivots[pr], k) = -r(pr, free_col);
    ++k;
  }
  return basis;
}

std::optional<VecQ> solve_exact(const MatQ& m, const VecQ& b) {
  MatQ aug(m.rows(), m.cols() + 1);
  aug.leftCols(m.cols()) = m;
  aug.col(m.cols()) = b;
  std::vector<int> pivots = rref_exact(aug);
  if (!pivots.empty() && pivots.back() == static_cast<int>(m.cols()))
    return std::nullopt;  // pivot in the augmented column: inconsistent
  VecQ x = VecQ::Zero(m.cols());
  for (Eigen::Index pr = 0; pr < static_cast<Eigen::Index>(pivots.size()); ++pr)
    x(pivots[pr]) = aug(pr, m.cols());
  return x;
}

std::optional<VecQ> least_norm_exact(const MatQ& m, const VecQ& b) {
  // The solution in the row space is m^T y with (m m^T) y = b. Over Q,
  // col(m m^T) = col(m), so the reduced system is consistent exactly when the
  // original one is.
  MatQ gram = m * m.transpose();
  auto y = solve_exact(gram, b);
  if (!y) return std::nullopt;
  return VecQ(m.transpose() * *y);
}

bool in_colspace_exact(const MatQ& basis, const VecQ& v) {
  return solve_exact(basis, v).has_value();
}

MatQ inverse_exact(const MatQ& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  MatQ aug(m.rows(), 2 * m.cols());
  aug.leftCols(m.cols()) = m;
  aug.rightCols(m.cols()) = MatQ::Identity(m.rows(), m.cols());
  std::vector<int> pivots = rref_exact(aug);
  if (static_cast<Eigen::Index>(pivots.size()) != m.rows())
    throw std::invalid_argument("matrix is singular");
  return aug.rightCols(m.cols());
}

MatQ intersect_exact(const MatQ& a, const MatQ& b) {
  if (a.cols() == 0 || b.cols() == 0) return MatQ(a.rows(), 0);
  MatQ joint(a.rows(), a.cols() + b.cols());
  joint.leftCols(a.cols()) = a;
  joint.rightCols(b.cols()) = -b;
  MatQ ker = nullspace_exact(joint);
  // a * (top part of each kernel vector) spans the intersection.
  MatQ raw = a * ker.topRows(a.cols());
  // The columns can be dependent; keep an independent subset.
  MatQ r = raw;
  std::vector<int> pivots = rref_exact(r);
  MatQ out(a.rows(), static_cast<Eigen::Index>(pivots.size()));
  for (Eigen::Index k = 0; k < out.cols(); ++k) out.col(k) = raw.col(pivots[k]);
  return out;
}

MatQ sum_exact(const MatQ& a, const MatQ& b) {
  MatQ joint(a.rows(), a.cols() + b.cols());
  joint.leftCols(a.cols()) = a;
  joint.rightCols(b.cols()) = b;
  MatQ r = joint;
  std::vector<int> pivots = rref_exact(r);
  MatQ out(a.rows(), static_cast<Eigen::Index>(pivots.size()));
  for (Eigen::Index k = 0; k < out.cols(); ++k) out.col(k) = joint.col(pivots[k]);
  return out;
}

RankDecision rank_float(const MatD& m, double rel_tol, double abs_floor) {
  RankDecision d;
  if (m.rows() == 0 || m.cols() == 0) return d;
  Eigen::JacobiSVD<MatD> svd(m);
  const VecD& sv = svd.singularValues();
  d.sigma_max = sv.size() ? sv(0) : 0.0;
  if (d.sigma_max == 0.0) return d;
  double cut = std::max(rel_tol * d.sigma_max, abs_floor);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) {
      d.rank = i + 1;
      d.smallest_kept = sv(i);
    } else {
      d.largest_dropped = sv(i);
      break;
    }
  }
  if (d.rank > 0 && d.smallest_kept <= kRankGapFactor * cut) d.unstable = true;
  if (d.largest_dropped >= cut / kRankGapFactor) d.unstable = true;
  return d;
}

MatD nullspace_float(const MatD& m, double rel_tol) {
  if (m.cols() == 0) return MatD(0, 0);
  if (m.rows() == 0) return MatD::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<MatD> svd(m, Eigen::ComputeFullV);
  const VecD& sv = svd.singularValues();
  double cut = sv.size() ? rel_tol * sv(0) : 0.0;
  long rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

MatD colspace_float(const MatD& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return MatD(m.rows(), 0);
  Eigen::JacobiSVD<MatD> svd(m, Eigen::ComputeThinU);
  const VecD& sv = svd.singularValues();
  double cut = sv.size() ? rel_tol * sv(0) : 0.0;
  long rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

VecD least_norm_float(const MatD& m, const VecD& b) {
  Eigen::JacobiSVD<MatD> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankRelTol);
  return svd.solve(b);
}

MatD intersect_float(const MatD& a, const MatD& b, double rel_tol) {
  if (a.cols() == 0 || b.cols() == 0) return MatD(a.rows(), 0);
  MatD joint(a.rows(), a.cols() + b.cols());
  joint.leftCols(a.cols()) = a;
  joint.rightCols(b.cols()) = -b;
  MatD ker = nullspace_float(joint, rel_tol);
  if (ker.cols() == 0) return MatD(a.rows(), 0);
  return colspace_float(a * ker.topRows(a.cols()), rel_tol);
}

double residual_to_colspace(const MatD& basis, const VecD& v) {
  if (basis.cols() == 0) return v.norm();
  return (v - basis * (basis.transpose() * v)).norm();
}

}  // namespace sphericity
