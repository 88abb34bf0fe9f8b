#include "sphericity/finite_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "sphericity/parallel.hpp"

namespace sphericity {

namespace {

long mod_inverse(long a, long q) {
  // Extended Euclid; q prime and a nonzero mod q.
  long t = 0, new_t = 1, r = q, new_r = a % q;
  while (new_r != 0) {
    long quot = r / new_r;
    long tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::domain_error("element not invertible mod q");
  return ((t % q) + q) % q;
}

long reduce_mod(const Rational& x, long q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  long den = static_cast<long>(denominator(x) % q);
  if (den == 0)
    throw std::domain_error("slice data has a denominator divisible by q=" +
                            std::to_string(q));
  long num = static_cast<long>(numerator(x) % q);
  num = ((num % q) + q) % q;
  den = ((den % q) + q) % q;
  return num * mod_inverse(den, q) % q;
}

// Row-reduce an n x n matrix over F_q in place and return its rank.
// inv_table[a] is the inverse of a mod q for a = 1..q-1.
int rank_mod(std::vector<long>& m, int n, long q, const std::vector<long>& inv_table) {
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (m[r * n + col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int c = 0; c < n; ++c) std::swap(m[piv * n + c], m[rank * n + c]);
    long inv = inv_table[m[rank * n + col]];
    for (int c = 0; c < n; ++c) m[rank * n + c] = m[rank * n + c] * inv % q;
    for (int r = 0; r < n; ++r) {
      if (r == rank) continue;
      long f = m[r * n + col];
      if (f == 0) continue;
      for (int c = 0; c < n; ++c)
        m[r * n + c] = ((m[r * n + c] - f * m[rank * n + c]) % q + q) % q;
    }
    ++rank;
  }
  return rank;
}

long profile_code(const std::vector<int>& profile, int n) {
  long code = 0, base = 1;
  for (int v : profile) {
    code += v * base;
    base *= n + 1;
  }
  return code;
}

}  // namespace

FfScanResult ff_count_slice(const AlgebraContext& ctx, long q,
                            unsigned long long budget, unsigned threads) {
  const int n = ctx.n();
  const int m = static_cast<int>(ctx.slice_dim());

  FfScanResult out;
  out.q = q;
  out.slice_dim = m;
  out.types = partitions_of(n);
  out.counts.assign(out.types.size(), 0);

  unsigned long long total = 1;
  for (int i = 0; i < m; ++i) {
    if (total > budget / static_cast<unsigned long long>(q)) {
      std::ostringstream os;
      os << "slice too large: q^dim = " << q << "^" << m
         << " exceeds the scan budget " << budget;
      throw std::runtime_error(os.str());
    }
    total *= static_cast<unsigned long long>(q);
  }
  out.total_points = total;

  // Slice data mod q: the base point and one n x n table per free direction.
  std::vector<long> base(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) base[i * n + j] = reduce_mod(ctx.lambda()(i, j), q);
  std::vector<std::vector<long>> dirs(m, std::vector<long>(n * n));
  for (int d = 0; d < m; ++d)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dirs[d][i * n + j] = reduce_mod(ctx.hperp()(i * n + j, d), q);

  // Rank profile -> bucket index, for the nilpotent types only.
  std::unordered_map<long, int> bucket;
  for (std::size_t t = 0; t < out.types.size(); ++t)
    bucket.emplace(profile_code(rank_profile(out.types[t]), n), static_cast<int>(t));

  std::vector<long> inv_table(q, 0);
  for (long a = 1; a < q; ++a) inv_table[a] = mod_inverse(a, q);

  auto scan_range = [&](const std::vector<long>& start,
                        int digits) -> std::vector<unsigned long long> {
    std::vector<unsigned long long> counts(out.types.size(), 0);
    std::vector<long> x = start;
    std::vector<int> digit(std::max(digits, 1), 0);
    std::vector<long> power(n * n), scratch(n * n), next(n * n);
    std::vector<int> profile(n);
    unsigned long long span = 1;
    for (int i = 0; i < digits; ++i) span *= static_cast<unsigned long long>(q);
    for (unsigned long long step = 0;; ++step) {
      // Jordan profile of x over F_q.
      power = x;
      bool nilpotent = true;
      for (int k = 1; k <= n; ++k) {
        scratch = power;
        profile[k - 1] = rank_mod(scratch, n, q, inv_table);
        if (k == n && profile[k - 1] != 0) nilpotent = false;
        if (k < n) {
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              long acc = 0;
              for (int l = 0; l < n; ++l) acc += power[i * n + l] * x[l * n + j];
              next[i * n + j] = acc % q;
            }
          power.swap(next);
        }
      }
      if (nilpotent) {
        auto it = bucket.find(profile_code(profile, n));
        if (it != bucket.end()) ++counts[it->second];
      }
      if (step + 1 == span) break;
      // Odometer increment: each carried digit contributes one more copy of
      // its direction, and q copies cancel mod q, so rolling over is free.
      for (int d = 0;; ++d) {
        for (int e = 0; e < n * n; ++e) x[e] = (x[e] + dirs[d][e]) % q;
        if (++digit[d] < q) break;
        digit[d] = 0;
      }
    }
    return counts;
  };

  std::vector<std::vector<unsigned long long>> partial;
  if (m == 0) {
    partial.push_back(scan_range(base, 0));
  } else {
    // Split on the top digit; each task walks its own q^(m-1) block.
    partial = parallel_map<std::vector<unsigned long long>>(
        static_cast<std::size_t>(q),
        [&](std::size_t top) {
          std::vector<long> start = base;
          for (int e = 0; e < n * n; ++e)
            start[e] = (start[e] + static_cast<long>(top) * dirs[m - 1][e]) % q;
          return scan_range(start, m - 1);
        },
        threads);
  }
  for (const auto& c : partial)
    for (std::size_t t = 0; t < c.size(); ++t) out.counts[t] += c[t];
  for (auto c : out.counts) out.nilpotent_points += c;
  return out;
}

unsigned long long ff_count_orbit(const FfScanResult& r, const Partition& p) {
  for (std::size_t t = 0; t < r.types.size(); ++t)
    if (r.types[t] == p) return r.counts[t];
  return 0;
}

FfFit fit_ff_exponent(const std::vector<FfScanResult>& scans,
                      const Partition& p) {
  FfFit fit;
  if (scans.empty()) return fit;
  std::vector<unsigned long long> counts;
  counts.reserve(scans.size());
  for (const auto& s : scans) counts.push_back(ff_count_orbit(s, p));
  unsigned long long mx = *std::max_element(counts.begin(), counts.end());
  unsigned long long mn = *std::min_element(counts.begin(), counts.end());
  fit.any_points = mx > 0;
  fit.all_primes_nonzero = mn > 0;
  if (!fit.all_primes_nonzero) return fit;  // no growth data to fit

  long dim = scans[0].slice_dim;
  double best_spread = -1.0;
  long best_d = -1;
  for (long d = 0; d <= dim; ++d) {
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i < scans.size(); ++i) {
      double r = static_cast<double>(counts[i]) /
                 std::pow(static_cast<double>(scans[i].q), static_cast<double>(d));
      if (i == 0 || r < lo) lo = r;
      if (i == 0 || r > hi) hi = r;
    }
    double spread = hi > 0 ? (hi - lo) / hi : 0.0;
    if (best_d < 0 || spread < best_spread) {
      best_spread = spread;
      best_d = d;
    }
  }
  fit.exponent = best_d;
  fit.spread = best_spread;
  fit.accepted = best_spread < kFfSpreadTol;
  for (std::size_t i = 0; i < scans.size(); ++i)
    fit.normalized.push_back(
        static_cast<double>(counts[i]) /
        std::pow(static_cast<double>(scans[i].q), static_cast<double>(best_d)));
  return fit;
}

}  // namespace sphericity
