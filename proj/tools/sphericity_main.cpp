// Command-line driver: sphericity checks, Y-finiteness checks, orbit
// tables, and the bundled GL6 example run end to end.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sphericity/checker.hpp"
#include "sphericity/config.hpp"
#include "sphericity/finite_field.hpp"
#include "sphericity/flag.hpp"
#include "sphericity/report.hpp"

namespace {

using namespace sphericity;

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitConfigError = 3;

struct CliOverrides {
  std::string mode;  // empty = keep config value
  long long seed = -1;
  int samples = -1;
};

RunConfig load_with_overrides(const std::string& path, const CliOverrides& ov) {
  RunConfig cfg = load_config(path);
  if (!ov.mode.empty()) cfg.mode = ov.mode;
  if (ov.seed >= 0) cfg.seed = static_cast<std::uint64_t>(ov.seed);
  if (ov.samples >= 0) cfg.samples = ov.samples;
  return cfg;
}

// Per-orbit estimates go through the append-only cache so a re-run with the
// same config reproduces the report byte for byte without recomputing.
SphericityReport run_check_cached(const AlgebraContext& ctx, const RunConfig& cfg) {
  ResultCache cache(config_hash(cfg));
  EstimateProvider provider = [&cache](const AlgebraContext& c, const Partition& p,
                                       const SliceSearchParams& prm) {
    if (auto hit = cache.load(p.key())) return estimate_from_json(*hit);
    DimEstimate e = estimate_slice_dim(c, p, prm);
    cache.store(p.key(), estimate_to_json(e));
    return e;
  };
  return check_sphericity(ctx, slice_params(cfg), provider);
}

FinitenessReport run_finiteness_cached(const AlgebraContext& ctx,
                                       const RunConfig& cfg) {
  ResultCache cache(config_hash(cfg));
  if (auto hit = cache.load("y")) return finiteness_from_json(*hit);
  FinitenessReport rep = finiteness_check(ctx, finiteness_params(cfg));
  cache.store("y", finiteness_to_json(rep));
  return rep;
}

int sphericity_exit_code(const SphericityReport& rep) {
  if (!rep.conclusive) return kExitInconclusive;
  return rep.overall ? kExitHolds : kExitFails;
}

int finiteness_exit_code(const FinitenessReport& rep) {
  switch (rep.verdict) {
    case FiniteVerdict::Finite:
    case FiniteVerdict::EmptyY:  // no orbits at all is finitely many orbits
      return kExitHolds;
    case FiniteVerdict::Infinite:
      return kExitFails;
    case FiniteVerdict::Inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

int cmd_check(const std::string& config_path, const CliOverrides& ov,
              const std::string& label = "") {
  RunConfig cfg = load_with_overrides(config_path, ov);
  AlgebraContext ctx = make_context(cfg);
  SphericityReport rep = run_check_cached(ctx, cfg);
  write_text_file("report.json",
                  sphericity_report_to_json(cfg, rep, label).dump(2) + "\n");
  std::string text = sphericity_report_to_text(cfg, rep, label);
  write_text_file("report.txt", text);
  std::cout << text;
  return sphericity_exit_code(rep);
}

int cmd_finiteness(const std::string& config_path, const CliOverrides& ov) {
  RunConfig cfg = load_with_overrides(config_path, ov);
  AlgebraContext ctx = make_context(cfg);
  FinitenessReport rep = run_finiteness_cached(ctx, cfg);
  write_text_file("finiteness.json",
                  finiteness_report_to_json(cfg, rep).dump(2) + "\n");
  std::cout << "finiteness check: " << (cfg.name.empty() ? "(unnamed)" : cfg.name)
            << "\n"
            << "config hash: " << config_hash(cfg) << "\n"
            << "flag dim: " << rep.flag_dim << "  Y dim: " << rep.y_dim
            << "  generic orbit dim: " << rep.generic_orbit_dim << "\n"
            << "samples: " << rep.samples_found << "/" << rep.samples_requested
            << "\n"
            << "verdict: " << to_string(rep.verdict) << "\n"
            << "note: " << rep.note << "\n";
  return finiteness_exit_code(rep);
}

int cmd_orbits(const std::string& composition_arg) {
  std::vector<int> blocks;
  std::stringstream ss(composition_arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      blocks.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError("composition entries must be integers, got \"" + tok +
                        "\"");
    }
  }
  if (blocks.empty()) throw ConfigError("composition must be nonempty");
  for (int b : blocks)
    if (b < 1) throw ConfigError("composition entries must be positive");
  Composition comp(blocks);
  Partition rich = richardson_type(comp);
  std::cout << "composition: " << comp.to_string() << "\n";
  std::cout << "richardson orbit: " << rich.to_string() << "  dim "
            << orbit_dim(rich) << "\n\n";
  std::vector<Partition> orbits = orbits_in_closure(rich);
  std::sort(orbits.begin(), orbits.end(),
            [](const Partition& a, const Partition& b) {
              long da = orbit_dim(a), db = orbit_dim(b);
              if (da != db) return da > db;
              return b < a;
            });
  std::size_t w = 5;
  for (const auto& p : orbits) w = std::max(w, p.to_string().size());
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%-*s  %6s  %6s\n", static_cast<int>(w),
                "orbit", "dim O", "bound");
  std::cout << buf;
  for (const auto& p : orbits) {
    std::snprintf(buf, sizeof(buf), "%-*s  %6ld  %6ld\n", static_cast<int>(w),
                  p.to_string().c_str(), orbit_dim(p), orbit_dim(p) / 2);
    std::cout << buf;
  }
  return 0;
}

// RunConfig equivalent of the built-in GL6 example, so the report carries
// the same provenance fields as a config-file run.
RunConfig gl6_run_config(std::uint64_t seed) {
  AlgebraContext ctx = build_gl6_example();
  RunConfig cfg;
  cfg.name = ctx.name();
  cfg.n = ctx.n();
  cfg.mode = "float";
  cfg.h_basis = ctx.h_basis();
  cfg.chi = ctx.chi();
  cfg.composition = ctx.parabolic();
  cfg.seed = seed;
  return cfg;
}

int cmd_example_gl6(long long seed_arg) {
  const std::uint64_t seed = seed_arg >= 0 ? static_cast<std::uint64_t>(seed_arg) : 42;
  const std::string label =
      "numerical reproduction under the tr(X)+tr(Y) block-trace reading; "
      "not a certificate";
  RunConfig cfg = gl6_run_config(seed);
  AlgebraContext ctx = make_context(cfg);

  SphericityReport srep = run_check_cached(ctx, cfg);
  write_text_file("report.json",
                  sphericity_report_to_json(cfg, srep, label).dump(2) + "\n");
  std::string text = sphericity_report_to_text(cfg, srep, label);
  write_text_file("report.txt", text);
  std::cout << text << "\n";

  FinitenessReport frep = run_finiteness_cached(ctx, cfg);
  write_text_file("finiteness.json",
                  finiteness_report_to_json(cfg, frep).dump(2) + "\n");
  std::cout << "finiteness verdict: " << to_string(frep.verdict) << " ("
            << frep.note << ")\n";

  int se = sphericity_exit_code(srep);
  int fe = finiteness_exit_code(frep);
  bool spherical = se == kExitHolds;
  bool finite = fe == kExitHolds;
  std::cout << "\nconsistency: ";
  if (se == kExitInconclusive || fe == kExitInconclusive) {
    std::cout << "inconclusive on at least one side\n";
    return kExitInconclusive;
  }
  if (spherical == finite) {
    std::cout << "both sides agree ("
              << (spherical ? "spherical and finitely many orbits"
                            : "not spherical and infinitely many orbits")
              << ")\n";
    return spherical ? kExitHolds : kExitFails;
  }
  std::cout << "DISAGREEMENT between the slice side and the flag side\n";
  return kExitFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted sphericity and flag-variety finiteness checker"};
  app.require_subcommand(1);

  std::string config_path;
  CliOverrides ov;
  long long seed_arg = -1;
  std::string composition_arg;

  CLI::App* check = app.add_subcommand("check", "run the slice-dimension sphericity check");
  check->add_option("--config", config_path, "JSON config path")->required();
  check->add_option("--seed", ov.seed, "override the config seed");
  check->add_option("--samples", ov.samples, "override the per-orbit probe count");
  check->add_option("--mode", ov.mode, "override the mode (exact|float)")
      ->check(CLI::IsMember({"exact", "float"}));

  CLI::App* fin = app.add_subcommand("finiteness", "run the Y orbit-finiteness check");
  fin->add_option("--config", config_path, "JSON config path")->required();
  fin->add_option("--seed", ov.seed, "override the config seed");
  fin->add_option("--mode", ov.mode, "override the mode (exact|float)")
      ->check(CLI::IsMember({"exact", "float"}));

  CLI::App* orb = app.add_subcommand("orbits", "list orbits in a Richardson closure");
  orb->add_option("--composition", composition_arg,
                  "parabolic block sizes, e.g. 2,1,1,1,1")
      ->required();

  CLI::App* ex = app.add_subcommand(
      "example-gl6", "run both sides of the bundled GL6 example");
  ex->add_option("--seed", seed_arg, "override the fixed seed (default 42)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (app.got_subcommand(check)) return cmd_check(config_path, ov);
    if (app.got_subcommand(fin)) return cmd_finiteness(config_path, ov);
    if (app.got_subcommand(orb)) return cmd_orbits(composition_arg);
    if (app.got_subcommand(ex)) return cmd_example_gl6(seed_arg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
