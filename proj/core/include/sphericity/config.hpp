#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphericity/context.hpp"
#include "sphericity/flag.hpp"
#include "sphericity/orbit.hpp"

namespace sphericity {

/// Configuration file or schema problem; the CLI maps this to its own exit
/// code, distinct from mathematical verdicts.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string name;
  int n = 0;
  std::string mode = "float";  // "exact" or "float"
  std::vector<MatQ> h_basis;
  std::vector<Rational> chi;
  Composition composition;
  std::uint64_t seed = 0;
  int samples = 64;
  int restarts = 32;
  double rank_tol = 1e-8;
  double residual_tol = 1e-10;
  std::vector<long> ff_primes;  // empty = no finite-field scan configured
  unsigned long long ff_budget = 100000000ULL;
  int finiteness_samples = 12;
  int finiteness_restarts = 48;
  double finiteness_residual_tol = 1e-8;
};

/// Parses and fully validates a JSON config. Matrix entries must be JSON
/// integers or rational strings like "3/7"; floats are rejected so configs
/// stay exact. Bracket-closure and character validity are checked here with
/// the offending basis indices in the message.
RunConfig load_config(const std::string& path);

/// Canonical serialization: every field materialized, rationals as strings,
/// keys sorted. The hash of this form stamps every report.
nlohmann::json config_to_json(const RunConfig& cfg);

/// 16 hex digits over the canonical serialization.
std::string config_hash(const RunConfig& cfg);

AlgebraContext make_context(const RunConfig& cfg);
SliceSearchParams slice_params(const RunConfig& cfg);
FinitenessParams finiteness_params(const RunConfig& cfg);

}  // namespace sphericity
