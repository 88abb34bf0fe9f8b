#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphericity {

/// Jordan type of a nilpotent GL_n orbit: a weakly decreasing list of
/// positive parts summing to n. The empty partition is the partition of 0.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  /// Sorts the given parts into weakly decreasing order first.
  static Partition from_unsorted(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int n() const { return n_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int part(int i) const { return i < length() ? parts_[i] : 0; }

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }
  /// Lexicographic; on partitions of equal n this refines the dominance order.
  std::strong_ordering operator<=>(const Partition& o) const {
    return parts_ <=> o.parts_;
  }

  std::string to_string() const;  // "(5,1)"
  std::string key() const;        // "5-1", filesystem-safe

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

/// Ordered block sizes of a parabolic; order matters for the subalgebra,
/// not for the Richardson type.
class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<int> blocks);

  const std::vector<int>& blocks() const { return blocks_; }
  int n() const { return n_; }
  std::string to_string() const;  // "2,1,1,1,1"

  bool operator==(const Composition& o) const { return blocks_ == o.blocks_; }

 private:
  std::vector<int> blocks_;
  int n_ = 0;
};

/// Conjugate partition (column counts of the Young diagram). Involutive.
Partition transpose(const Partition& p);

/// Dominance order: every prefix sum of p >= the one of q. Requires equal n;
/// true iff q's orbit lies in the closure of p's.
bool dominates(const Partition& p, const Partition& q);

/// dim O_p = n^2 - sum of squared transpose parts. Always even.
long orbit_dim(const Partition& p);

/// Jordan type of the dense orbit in the nilradical of P_c: the transpose of
/// the block sizes sorted decreasingly.
Partition richardson_type(const Composition& c);

/// All partitions of n in descending lexicographic order.
std::vector<Partition> partitions_of(int n);

/// All compositions of n (2^(n-1) of them), lexicographic by block list.
std::vector<Composition> compositions_of(int n);

/// Partitions q with dominates(p, q), descending lexicographic. Contains p
/// itself and the all-ones partition.
std::vector<Partition> orbits_in_closure(const Partition& p);

/// r_k = rank(J_p^k) = sum_i max(p_i - k, 0), for k = 1..n. Determines p.
std::vector<int> rank_profile(const Partition& p);

/// Inverse of rank_profile: differences r_{k-1} - r_k give the conjugate.
/// Throws if the profile is not weakly convex/nonincreasing to zero.
Partition partition_from_rank_profile(int n, const std::vector<int>& profile);

}  // namespace sphericity
