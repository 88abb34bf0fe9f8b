#include "sphericity/partition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace sphericity {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw std::invalid_argument("partition parts must be >= 1");
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw std::invalid_argument("partition parts must be weakly decreasing");
  }
  n_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition Partition::from_unsorted(std::vector<int> parts) {
  std::sort(parts.begin(), parts.end(), std::greater<int>());
  return Partition(std::move(parts));
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << ',';
    os << parts_[i];
  }
  os << ')';
  return os.str();
}

std::string Partition::key() const {
  std::ostringstream os;
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << '-';
    os << parts_[i];
  }
  return parts_.empty() ? "0" : os.str();
}

Composition::Composition(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  for (int b : blocks_)
    if (b < 1) throw std::invalid_argument("composition blocks must be >= 1");
  n_ = std::accumulate(blocks_.begin(), blocks_.end(), 0);
}

std::string Composition::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    if (i) os << ',';
    os << blocks_[i];
  }
  return os.str();
}

Partition transpose(const Partition& p) {
  if (p.length() == 0) return Partition{};
  std::vector<int> cols(p.parts()[0], 0);
  for (int part : p.parts())
    for (int j = 0; j < part; ++j) ++cols[j];
  return Partition(std::move(cols));
}

bool dominates(const Partition& p, const Partition& q) {
  if (p.n() != q.n())
    throw std::invalid_argument("dominance compares partitions of the same n");
  int sp = 0, sq = 0;
  int len = std::max(p.length(), q.length());
  for (int i = 0; i < len; ++i) {
    sp += p.part(i);
    sq += q.part(i);
    if (sp < sq) return false;
  }
  return true;
}

long orbit_dim(const Partition& p) {
  long n = p.n();
  long s = 0;
  const Partition tp = transpose(p);
  for (int t : tp.parts()) s += static_cast<long>(t) * t;
  return n * n - s;
}

Partition richardson_type(const Composition& c) {
  return transpose(Partition::from_unsorted(c.blocks()));
}

std::vector<Partition> partitions_of(int n) {
  if (n < 0) throw std::invalid_argument("partitions_of: n must be >= 0");
  std::vector<Partition> out;
  std::vector<int> cur;
  // Descending lexicographic order falls out of choosing the largest first
  // part first.
  std::function<void(int, int)> rec = [&](int rest, int maxpart) {
    if (rest == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int k = std::min(rest, maxpart); k >= 1; --k) {
      cur.push_back(k);
      rec(rest - k, k);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

std::vector<Composition> compositions_of(int n) {
  if (n < 1) throw std::invalid_argument("compositions_of: n must be >= 1");
  std::vector<Composition> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int rest) {
    if (rest == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int k = 1; k <= rest; ++k) {
      cur.push_back(k);
      rec(rest - k);
      cur.pop_back();
    }
  };
  rec(n);
  return out;
}

std::vector<Partition> orbits_in_closure(const Partition& p) {
  std::vector<Partition> out;
  for (auto& q : partitions_of(p.n()))
    if (dominates(p, q)) out.push_back(std::move(q));
  return out;  // partitions_of is already descending lexicographic
}

std::vector<int> rank_profile(const Partition& p) {
  std::vector<int> r(p.n(), 0);
  for (int k = 1; k <= p.n(); ++k) {
    int s = 0;
    for (int part : p.parts()) s += std::max(part - k, 0);
    r[k - 1] = s;
  }
  return r;
}

Partition partition_from_rank_profile(int n, const std::vector<int>& profile) {
  if (static_cast<int>(profile.size()) < n)
    throw std::invalid_argument("rank profile must have n entries");
  std::vector<int> conj;
  int prev = n;
  for (int k = 0; k < n; ++k) {
    int diff = prev - profile[k];
    if (diff < 0) throw std::invalid_argument("rank profile must be nonincreasing");
    conj.push_back(diff);
    prev = profile[k];
  }
  if (prev != 0) throw std::invalid_argument("rank profile must reach zero");
  // conj counts columns; it must itself be weakly decreasing.
  std::vector<int> trimmed;
  for (int v : conj) {
    if (!trimmed.empty() && v > trimmed.back())
      throw std::invalid_argument("rank profile is not convex");
    if (v > 0) trimmed.push_back(v);
  }
  return transpose(Partition(std::move(trimmed)));
}

}  // namespace sphericity
