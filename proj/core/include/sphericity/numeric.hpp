#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace sphericity {

// Exact scalar used everywhere the answer must be certain. GMP-backed so
// Bareiss elimination on moderate matrices stays fast.
using Rational = boost::multiprecision::mpq_rational;

// Parses "3", "-3/7", "0". Throws std::invalid_argument on anything else.
Rational parse_rational(const std::string& s);

// Canonical form "p/q" with q > 0, or just "p" when q == 1.
std::string rational_to_string(const Rational& r);

double to_double(const Rational& r);

// Best rational approximation with denominator <= max_den, via continued
// fractions. Returns nullopt when |x| is too large to make sense of or the
// reconstruction drifts more than `tol` from x.
std::optional<Rational> rationalize(double x, long max_den, double tol);

// splitmix64: the standard seed-spreading step. Used to derive independent
// per-task streams from one user seed, so results do not depend on how work
// is split across threads.
std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a over bytes; used for config hashing and seed salting.
std::uint64_t fnv1a64(const std::string& data);

// Seed for subtask `index` of the stream identified by `salt`.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t salt,
                          std::uint64_t index);

// Thin wrapper: one mt19937_64 plus the handful of draw shapes we need.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double gaussian(double stddev = 1.0) {
    return std::normal_distribution<double>(0.0, stddev)(gen_);
  }
  // Uniform integer in [0, m).
  std::uint64_t below(std::uint64_t m) {
    return std::uniform_int_distribution<std::uint64_t>(0, m - 1)(gen_);
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace sphericity
