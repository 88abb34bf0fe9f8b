#include "sphericity/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sphericity {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("config is missing required key \"") + key + "\"");
  return *it;
}

Rational rational_entry(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
      fail(where + ": cannot parse \"" + v.get<std::string>() +
           "\" as a rational (" + e.what() + ")");
    }
  }
  if (v.is_number_float())
    fail(where + ": JSON floats are not accepted for exact data; write the "
                 "value as a rational string like \"3/7\"");
  fail(where + ": expected an integer or a rational string");
}

bool is_prime(long q) {
  if (q < 2) return false;
  for (long d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

std::string rational_matrix_entry_str(const Rational& r) {
  return rational_to_string(r);
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("config is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) fail("config root must be a JSON object");

  RunConfig cfg;
  cfg.name = j.value("name", std::string{});

  const json& jn = require(j, "n");
  if (!jn.is_number_integer() || jn.get<int>() < 1)
    fail("\"n\" must be a positive integer");
  cfg.n = jn.get<int>();

  cfg.mode = require(j, "mode").get<std::string>();
  if (cfg.mode != "exact" && cfg.mode != "float")
    fail("\"mode\" must be \"exact\" or \"float\", got \"" + cfg.mode + "\"");

  const json& jcomp = require(j, "composition");
  if (!jcomp.is_array() || jcomp.empty())
    fail("\"composition\" must be a nonempty array of positive integers");
  std::vector<int> blocks;
  int total = 0;
  for (const auto& b : jcomp) {
    if (!b.is_number_integer() || b.get<int>() < 1)
      fail("\"composition\" entries must be positive integers");
    blocks.push_back(b.get<int>());
    total += blocks.back();
  }
  if (total != cfg.n)
    fail("\"composition\" sums to " + std::to_string(total) + " but n = " +
         std::to_string(cfg.n));
  cfg.composition = Composition(blocks);

  const json& jh = require(j, "h_basis");
  if (!jh.is_array() || jh.empty())
    fail("\"h_basis\" must be a nonempty array of n x n matrices");
  for (std::size_t k = 0; k < jh.size(); ++k) {
    const json& jm = jh[k];
    std::string where = "h_basis[" + std::to_string(k) + "]";
    if (!jm.is_array() || static_cast<int>(jm.size()) != cfg.n)
      fail(where + " must be an array of " + std::to_string(cfg.n) + " rows");
    MatQ m(cfg.n, cfg.n);
    for (int r = 0; r < cfg.n; ++r) {
      const json& jr = jm[r];
      if (!jr.is_array() || static_cast<int>(jr.size()) != cfg.n)
        fail(where + " row " + std::to_string(r) + " must have " +
             std::to_string(cfg.n) + " entries");
      for (int c = 0; c < cfg.n; ++c)
        m(r, c) = rational_entry(jr[c], where + " entry (" + std::to_string(r) +
                                            "," + std::to_string(c) + ")");
    }
    cfg.h_basis.push_back(std::move(m));
  }

  const json& jchi = require(j, "chi");
  if (!jchi.is_array() || jchi.size() != cfg.h_basis.size())
    fail("\"chi\" must be an array with one value per h_basis element (" +
         std::to_string(cfg.h_basis.size()) + " expected)");
  for (std::size_t k = 0; k < jchi.size(); ++k)
    cfg.chi.push_back(rational_entry(jchi[k], "chi[" + std::to_string(k) + "]"));

  if (j.contains("seed")) {
    const json& js = j["seed"];
    if (!js.is_number_unsigned() && !js.is_number_integer())
      fail("\"seed\" must be a nonnegative integer");
    cfg.seed = js.get<std::uint64_t>();
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer() || j["samples"].get<int>() < 0)
      fail("\"samples\" must be a nonnegative integer");
    cfg.samples = j["samples"].get<int>();
  }
  if (j.contains("restarts")) {
    if (!j["restarts"].is_number_integer() || j["restarts"].get<int>() < 0)
      fail("\"restarts\" must be a nonnegative integer");
    cfg.restarts = j["restarts"].get<int>();
  }
  if (j.contains("tolerances")) {
    const json& jt = j["tolerances"];
    if (!jt.is_object()) fail("\"tolerances\" must be an object");
    if (jt.contains("rank_tol")) {
      cfg.rank_tol = jt["rank_tol"].get<double>();
      if (!(cfg.rank_tol > 0)) fail("\"tolerances.rank_tol\" must be positive");
    }
    if (jt.contains("residual_tol")) {
      cfg.residual_tol = jt["residual_tol"].get<double>();
      if (!(cfg.residual_tol > 0))
        fail("\"tolerances.residual_tol\" must be positive");
    }
  }
  if (j.contains("ff_primes")) {
    const json& jp = j["ff_primes"];
    if (!jp.is_array()) fail("\"ff_primes\" must be an array of primes");
    for (const auto& q : jp) {
      if (!q.is_number_integer() || !is_prime(q.get<long>()))
        fail("\"ff_primes\" entries must be prime numbers; got " + q.dump());
      cfg.ff_primes.push_back(q.get<long>());
    }
  }
  if (j.contains("ff_budget")) {
    if (!j["ff_budget"].is_number_integer() || j["ff_budget"].get<long long>() < 1)
      fail("\"ff_budget\" must be a positive integer");
    cfg.ff_budget = j["ff_budget"].get<unsigned long long>();
  }
  if (j.contains("finiteness")) {
    const json& jf = j["finiteness"];
    if (!jf.is_object()) fail("\"finiteness\" must be an object");
    if (jf.contains("samples")) {
      cfg.finiteness_samples = jf["samples"].get<int>();
      if (cfg.finiteness_samples < 1)
        fail("\"finiteness.samples\" must be positive");
    }
    if (jf.contains("restarts")) {
      cfg.finiteness_restarts = jf["restarts"].get<int>();
      if (cfg.finiteness_restarts < 1)
        fail("\"finiteness.restarts\" must be positive");
    }
    if (jf.contains("residual_tol")) {
      cfg.finiteness_residual_tol = jf["residual_tol"].get<double>();
      if (!(cfg.finiteness_residual_tol > 0))
        fail("\"finiteness.residual_tol\" must be positive");
    }
  }

  // Structural validation with the offending indices in the message.
  try {
    check_subalgebra(cfg.n, cfg.h_basis);
    check_character(cfg.n, cfg.h_basis, cfg.chi);
  } catch (const std::invalid_argument& e) {
    fail(std::string("config invalid: ") + e.what());
  }
  return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["n"] = cfg.n;
  j["mode"] = cfg.mode;
  j["composition"] = cfg.composition.blocks();
  json basis = json::array();
  for (const auto& m : cfg.h_basis) {
    json jm = json::array();
    for (int r = 0; r < cfg.n; ++r) {
      json jr = json::array();
      for (int c = 0; c < cfg.n; ++c)
        jr.push_back(rational_matrix_entry_str(m(r, c)));
      jm.push_back(std::move(jr));
    }
    basis.push_back(std::move(jm));
  }
  j["h_basis"] = std::move(basis);
  json jchi = json::array();
  for (const auto& x : cfg.chi) jchi.push_back(rational_matrix_entry_str(x));
  j["chi"] = std::move(jchi);
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["restarts"] = cfg.restarts;
  j["tolerances"] = {{"rank_tol", cfg.rank_tol},
                     {"residual_tol", cfg.residual_tol}};
  j["ff_primes"] = cfg.ff_primes;
  j["ff_budget"] = cfg.ff_budget;
  j["finiteness"] = {{"samples", cfg.finiteness_samples},
                     {"restarts", cfg.finiteness_restarts},
                     {"residual_tol", cfg.finiteness_residual_tol}};
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = fnv1a64(config_to_json(cfg).dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

AlgebraContext make_context(const RunConfig& cfg) {
  ContextInput in;
  in.n = cfg.n;
  in.h_basis = cfg.h_basis;
  in.chi = cfg.chi;
  in.parabolic = cfg.composition;
  in.name = cfg.name;
  return AlgebraContext(in);
}

SliceSearchParams slice_params(const RunConfig& cfg) {
  SliceSearchParams p;
  p.restarts = cfg.restarts;
  p.samples = cfg.samples;
  p.seed = cfg.seed;
  p.exact = cfg.mode == "exact";
  p.rank_tol = cfg.rank_tol;
  p.residual_tol = cfg.residual_tol;
  return p;
}

FinitenessParams finiteness_params(const RunConfig& cfg) {
  FinitenessParams p;
  p.samples = cfg.finiteness_samples;
  p.restarts = cfg.finiteness_restarts;
  p.seed = cfg.seed;
  p.exact = cfg.mode == "exact";
  p.rank_tol = cfg.rank_tol;
  p.residual_tol = cfg.finiteness_residual_tol;
  return p;
}

}  // namespace sphericity
