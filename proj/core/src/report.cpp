#include "sphericity/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sphericity {

namespace {

using nlohmann::json;

json partition_json(const Partition& p) { return json(p.parts()); }

Partition partition_from_json(const json& j) {
  return Partition(j.get<std::vector<int>>());
}

std::string verdict_key(FiniteVerdict v) { return to_string(v); }

FiniteVerdict verdict_from_key(const std::string& s) {
  if (s == "finite") return FiniteVerdict::Finite;
  if (s == "infinite") return FiniteVerdict::Infinite;
  if (s == "empty-y") return FiniteVerdict::EmptyY;
  return FiniteVerdict::Inconclusive;
}

}  // namespace

json estimate_to_json(const DimEstimate& e) {
  json j;
  j["type"] = partition_json(e.type);
  j["orbit_dimension"] = e.orbit_dimension;
  j["bound"] = e.bound;
  j["empty"] = e.empty;
  j["empty_certified"] = e.empty_certified;
  j["value"] = e.value;
  j["points_found"] = e.points_found;
  j["samples_used"] = e.samples_used;
  j["exact_witness"] = e.exact_witness;
  j["rank_stable"] = e.rank_stable;
  j["genericity_stable"] = e.genericity_stable;
  j["best_residual"] = e.best_residual;
  j["note"] = e.note;
  j["witness"] = e.witness;
  return j;
}

DimEstimate estimate_from_json(const json& j) {
  DimEstimate e;
  e.type = partition_from_json(j.at("type"));
  e.orbit_dimension = j.at("orbit_dimension").get<long>();
  e.bound = j.at("bound").get<long>();
  e.empty = j.at("empty").get<bool>();
  e.empty_certified = j.at("empty_certified").get<bool>();
  e.value = j.at("value").get<long>();
  e.points_found = j.at("points_found").get<int>();
  e.samples_used = j.at("samples_used").get<int>();
  e.exact_witness = j.at("exact_witness").get<bool>();
  e.rank_stable = j.at("rank_stable").get<bool>();
  e.genericity_stable = j.at("genericity_stable").get<bool>();
  e.best_residual = j.at("best_residual").get<double>();
  e.note = j.at("note").get<std::string>();
  e.witness = j.at("witness").get<std::vector<std::string>>();
  return e;
}

json finiteness_to_json(const FinitenessReport& rep) {
  json j;
  j["verdict"] = verdict_key(rep.verdict);
  j["flag_dim"] = rep.flag_dim;
  j["y_dim"] = rep.y_dim;
  j["generic_orbit_dim"] = rep.generic_orbit_dim;
  j["samples_found"] = rep.samples_found;
  j["samples_requested"] = rep.samples_requested;
  j["exact_mode"] = rep.exact_mode;
  j["note"] = rep.note;
  json samples = json::array();
  for (const auto& s : rep.samples) {
    json js;
    js["w"] = s.w;
    js["orbit_dim"] = s.orbit_dim;
    js["local_dim"] = s.local_dim;
    js["residual"] = s.residual;
    js["rank_stable"] = s.rank_stable;
    js["gap_persistent"] = s.gap_persistent;
    js["exact"] = s.exact;
    samples.push_back(std::move(js));
  }
  j["samples"] = std::move(samples);
  return j;
}

FinitenessReport finiteness_from_json(const json& j) {
  FinitenessReport rep;
  rep.verdict = verdict_from_key(j.at("verdict").get<std::string>());
  rep.flag_dim = j.at("flag_dim").get<long>();
  rep.y_dim = j.at("y_dim").get<long>();
  rep.generic_orbit_dim = j.at("generic_orbit_dim").get<long>();
  rep.samples_found = j.at("samples_found").get<int>();
  rep.samples_requested = j.at("samples_requested").get<int>();
  rep.exact_mode = j.at("exact_mode").get<bool>();
  rep.note = j.at("note").get<std::string>();
  for (const auto& js : j.at("samples")) {
    YSample s;
    s.w = js.at("w").get<std::vector<std::string>>();
    s.orbit_dim = js.at("orbit_dim").get<long>();
    s.local_dim = js.at("local_dim").get<long>();
    s.residual = js.at("residual").get<double>();
    s.rank_stable = js.at("rank_stable").get<bool>();
    s.gap_persistent = js.at("gap_persistent").get<bool>();
    s.exact = js.at("exact").get<bool>();
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

json sphericity_report_to_json(const RunConfig& cfg, const SphericityReport& rep,
                               const std::string& label) {
  json j;
  j["kind"] = "sphericity-check";
  j["config"] = config_to_json(cfg);
  j["config_hash"] = config_hash(cfg);
  j["label"] = label;
  j["richardson"] = {{"type", partition_json(rep.richardson)},
                     {"type_str", rep.richardson.to_string()},
                     {"dim", rep.richardson_dim}};
  json orbits = json::array();
  for (const auto& r : rep.orbits) {
    json jo;
    jo["type"] = partition_json(r.type);
    jo["type_str"] = r.type.to_string();
    jo["dim"] = r.dim;
    jo["bound"] = r.bound;
    jo["verdict"] = to_string(r.verdict);
    jo["borderline_unstable"] = r.borderline_unstable;
    jo["estimate"] = estimate_to_json(r.estimate);
    orbits.push_back(std::move(jo));
  }
  j["orbits"] = std::move(orbits);
  j["overall"] = rep.overall;
  j["conclusive"] = rep.conclusive;
  j["note"] = rep.note;
  return j;
}

std::string sphericity_report_to_text(const RunConfig& cfg,
                                      const SphericityReport& rep,
                                      const std::string& label) {
  std::ostringstream os;
  os << "sphericity check: " << (cfg.name.empty() ? "(unnamed)" : cfg.name)
     << "\n";
  os << "config hash: " << config_hash(cfg) << "\n";
  os << "mode: " << cfg.mode << "  seed: " << cfg.seed << "\n";
  os << "richardson orbit: " << rep.richardson.to_string() << "  dim "
     << rep.richardson_dim << "\n";
  if (!label.empty()) os << "label: " << label << "\n";
  os << "\n";

  std::size_t w = 5;  // "orbit"
  for (const auto& r : rep.orbits) w = std::max(w, r.type.to_string().size());
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-*s  %6s  %6s  %9s  %s\n",
                static_cast<int>(w), "orbit", "dim O", "bound", "estimate",
                "verdict");
  os << buf;
  for (const auto& r : rep.orbits) {
    std::string est = r.estimate.empty ? std::string("-")
                                       : std::to_string(r.estimate.value);
    std::snprintf(buf, sizeof(buf), "%-*s  %6ld  %6ld  %9s  %s\n",
                  static_cast<int>(w), r.type.to_string().c_str(), r.dim,
                  r.bound, est.c_str(), to_string(r.verdict).c_str());
    os << buf;
    if (r.borderline_unstable) {
      std::snprintf(buf, sizeof(buf), "%-*s  (borderline: unstable within one of the bound)\n",
                    static_cast<int>(w), "");
      os << buf;
    }
  }
  os << "\n";
  std::string overall = !rep.conclusive ? "inconclusive"
                        : rep.overall   ? "spherical"
                                        : "not spherical";
  os << "overall: " << overall << "\n";
  os << "note: " << rep.note << "\n";
  return os.str();
}

json finiteness_report_to_json(const RunConfig& cfg,
                               const FinitenessReport& rep) {
  json j = finiteness_to_json(rep);
  j["kind"] = "finiteness-check";
  j["config"] = config_to_json(cfg);
  j["config_hash"] = config_hash(cfg);
  return j;
}

ResultCache::ResultCache(std::string config_hash) : hash_(std::move(config_hash)) {
  const char* env = std::getenv("SPHERICITY_CACHE_DIR");
  dir_ = env && *env ? env : ".sphericity-cache";
}

std::string ResultCache::record_path(const std::string& key) const {
  return dir_ + "/" + hash_ + "-" + key + ".json";
}

std::optional<nlohmann::json> ResultCache::load(const std::string& key) const {
  std::ifstream in(record_path(key));
  if (!in) return std::nullopt;
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::parse_error&) {
    return std::nullopt;
  }
}

void ResultCache::store(const std::string& key, const nlohmann::json& value) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  const std::string path = record_path(key);
  if (std::filesystem::exists(path)) return;  // records are append-only
  std::ofstream out(path);
  out << value.dump(2) << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sphericity
