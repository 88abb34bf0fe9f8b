#include "sphericity/numeric.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sphericity {

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(boost::multiprecision::mpz_int(s));
    }
    boost::multiprecision::mpz_int num(s.substr(0, slash));
    boost::multiprecision::mpz_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num) / Rational(den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: '" + s + "'");
  }
}

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::optional<Rational> rationalize(double x, long max_den, double tol) {
  if (!std::isfinite(x) || std::abs(x) > 1e15) return std::nullopt;
  // Continued fraction expansion, tracking convergents p/q.
  long long p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
  long long p1 = 0, q1 = 1;  // p_0/q_0 before the first term
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(v);
    if (fl > 9e17 || fl < -9e17) break;
    long long a = static_cast<long long>(fl);
    long long p2 = a * p1 + p0;
    long long q2 = a * q1 + q0;
    if (q2 > max_den || q2 < 0) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double frac = v - fl;
    if (q1 > 0 && std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol)
      break;
    if (frac < 1e-18) break;
    v = 1.0 / frac;
  }
  if (q1 <= 0) return std::nullopt;
  double approx = static_cast<double>(p1) / static_cast<double>(q1);
  if (std::abs(approx - x) > tol) return std::nullopt;
  return Rational(p1) / Rational(q1);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t salt,
                          std::uint64_t index) {
  std::uint64_t s = base_seed;
  std::uint64_t a = splitmix64(s);
  s ^= salt * 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64(s);
  s ^= index + 0x632be59bd9b4e019ULL;
  std::uint64_t c = splitmix64(s);
  return a ^ (b << 1) ^ c;
}

}  // namespace sphericity
