#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sphericity/checker.hpp"
#include "sphericity/config.hpp"
#include "sphericity/flag.hpp"

namespace sphericity {

/// Lossless round trip for per-orbit estimates, used both in reports and in
/// the result cache.
nlohmann::json estimate_to_json(const DimEstimate& e);
DimEstimate estimate_from_json(const nlohmann::json& j);

/// Finiteness report core, same deal.
nlohmann::json finiteness_to_json(const FinitenessReport& rep);
FinitenessReport finiteness_from_json(const nlohmann::json& j);

/// Machine report for a sphericity check. An optional label line marks
/// special runs (the bundled example adds its reproduction disclaimer here).
nlohmann::json sphericity_report_to_json(const RunConfig& cfg,
                                         const SphericityReport& rep,
                                         const std::string& label = "");

/// Human report: header plus an aligned table of orbit, dim O, bound,
/// estimate, verdict. No timestamps anywhere; identical runs give identical
/// bytes.
std::string sphericity_report_to_text(const RunConfig& cfg,
                                      const SphericityReport& rep,
                                      const std::string& label = "");

nlohmann::json finiteness_report_to_json(const RunConfig& cfg,
                                         const FinitenessReport& rep);

/// Append-only store of per-(config hash, key) JSON records under
/// $SPHERICITY_CACHE_DIR, defaulting to ./.sphericity-cache.
class ResultCache {
 public:
  explicit ResultCache(std::string config_hash);

  std::optional<nlohmann::json> load(const std::string& key) const;
  /// Writes the record unless one already exists (records are append-only).
  void store(const std::string& key, const nlohmann::json& value) const;
  const std::string& directory() const { return dir_; }

 private:
  std::string record_path(const std::string& key) const;

  std::string dir_;
  std::string hash_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sphericity
