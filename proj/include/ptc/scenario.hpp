#pragma once

// Design-point plumbing shared by the CLI: scenario parsing, combined
// evaluation, and the ablation / sweep tables.

#include <cstdlib>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "area_model.hpp"
#include "catalog.hpp"
#include "geometry.hpp"
#include "link_budget.hpp"
#include "power_model.hpp"
#include "report.hpp"
#include "workload.hpp"

namespace ptc {

inline constexpr const char* kCatalogEnvVar = "PTCSIM_CATALOG";

/// Peak throughput of the reference 144x256 core at its power-performance
/// knee, in TOPS. The pareto profile clocks every core at this frequency.
inline constexpr double kParetoPeakTops = 342.1;

inline double pareto_frequency() { return kParetoPeakTops * 1e12 / (2.0 * 144.0 * 256.0); }

struct FrequencyProfile {
  enum class Kind { nominal, pareto, custom };
  Kind kind = Kind::nominal;
  double custom_hz = 0.0;

  double frequency(const DeviceCatalog& cat) const {
    switch (kind) {
      case Kind::nominal: return cat.modulator().max_rate;
      case Kind::pareto: return pareto_frequency();
      case Kind::custom: return custom_hz;
    }
    return 0.0;
  }

  bool implies_overclock() const { return kind == Kind::pareto; }

  std::string name() const {
    switch (kind) {
      case Kind::nominal: return "default";
      case Kind::pareto: return "pareto";
      case Kind::custom: return "custom:" + format_g(custom_hz);
    }
    return "";
  }
};

/// "default", "pareto", "custom:<Hz>" or a bare frequency in Hz.
inline FrequencyProfile parse_profile(const std::string& text) {
  FrequencyProfile p;
  if (text == "default") return p;
  if (text == "pareto") {
    p.kind = FrequencyProfile::Kind::pareto;
    return p;
  }
  std::string num = text.rfind("custom:", 0) == 0 ? text.substr(7) : text;
  try {
    std::size_t used = 0;
    p.custom_hz = std::stod(num, &used);
    if (used != num.size()) throw std::invalid_argument(num);
  } catch (const std::exception&) {
    throw validation_error("profile", "expected default, pareto or custom:<Hz>, got '" + text + "'");
  }
  if (!(p.custom_hz > 0.0) || !std::isfinite(p.custom_hz))
    throw validation_error("profile", "custom frequency must be > 0");
  p.kind = FrequencyProfile::Kind::custom;
  return p;
}

struct Scenario {
  CoreGeometry geometry;
  ArchitectureVariant variant = Baseline3D{};
  std::string catalog_path;  // empty: env var, then built-in defaults
  PrecisionSpec precision;
  FrequencyProfile profile;
  std::string workload = "resnet50";  // builtin name or JSON path
  NoiseSpec noise;
  bool allow_overclock = false;
  bool wall_plug = false;
  AreaOptions area;
  K1Mapping k1 = K1Mapping::packed;

  double frequency(const DeviceCatalog& cat) const { return profile.frequency(cat); }

  void validate(const DeviceCatalog& cat) const {
    geometry.validate();
    validate_variant(variant);
    precision.validate();
    noise.validate();
    const double f = frequency(cat);
    if (!(f > 0.0)) throw validation_error("profile", "frequency must be > 0");
    if (f > cat.modulator().max_rate && !allow_overclock && !profile.implies_overclock())
      throw validation_error("profile", "frequency " + format_g(f) + " Hz exceeds modulator max_rate " +
                                            format_g(cat.modulator().max_rate) +
                                            " Hz (pass --allow-overclock)");
  }
};

inline DeviceCatalog resolve_catalog(const std::string& path) {
  if (!path.empty()) return load_catalog(path);
  if (const char* env = std::getenv(kCatalogEnvVar); env && *env) return load_catalog(env);
  return DeviceCatalog{};
}

inline std::vector<ConvLayerSpec> resolve_workload(const std::string& ref) {
  if (ref == "resnet50") return resnet50_workload();
  if (ref == "resnet50_224") return resnet50_workload(224);
  if (!std::filesystem::exists(ref))
    throw validation_error("workload", "'" + ref + "' is neither a builtin (resnet50, resnet50_224) nor a file");
  return load_workload(ref);
}

/// Reads a scenario object; absent fields keep their defaults. Relative
/// paths resolve against `base_dir`.
inline Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw validation_error("scenario", "expected a JSON object");
  Scenario s;
  static const std::vector<std::string> known = {"core", "variant", "catalog", "precision", "profile",
                                                 "workload", "noise", "allow_overclock", "wall_plug",
                                                 "compact_cell", "k1_mapping"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw validation_error("scenario." + it.key(), "unknown field");

  auto str = [&](const char* k) -> std::optional<std::string> {
    auto it = j.find(k);
    if (it == j.end()) return std::nullopt;
    if (!it->is_string()) throw validation_error(std::string("scenario.") + k, "expected a string");
    return it->get<std::string>();
  };
  auto boolean = [&](const char* k, bool& out) {
    auto it = j.find(k);
    if (it == j.end()) return;
    if (!it->is_boolean()) throw validation_error(std::string("scenario.") + k, "expected true or false");
    out = it->get<bool>();
  };
  auto path = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_relative() && !base_dir.empty() ? (base_dir / fp).string() : p;
  };

  if (auto v = str("core")) s.geometry = parse_core(*v);
  if (auto v = str("variant")) s.variant = parse_variant(*v);
  if (auto v = str("catalog")) s.catalog_path = path(*v);
  if (auto v = str("profile")) s.profile = parse_profile(*v);
  if (auto v = str("workload")) s.workload = *v == "resnet50" || *v == "resnet50_224" ? *v : path(*v);
  if (auto v = str("k1_mapping")) {
    if (*v == "packed") s.k1 = K1Mapping::packed;
    else if (*v == "one_tap_per_group") s.k1 = K1Mapping::one_tap_per_group;
    else throw validation_error("scenario.k1_mapping", "expected packed or one_tap_per_group");
  }
  boolean("allow_overclock", s.allow_overclock);
  boolean("wall_plug", s.wall_plug);
  boolean("compact_cell", s.area.compact_cell);

  auto sub_int = [](const nlohmann::json& o, const char* k, const std::string& at, int& out) {
    auto it = o.find(k);
    if (it == o.end()) return;
    if (!it->is_number_integer()) throw validation_error(at + "." + k, "expected an integer");
    out = it->get<int>();
  };
  auto sub_num = [](const nlohmann::json& o, const char* k, const std::string& at, double& out) {
    auto it = o.find(k);
    if (it == o.end()) return;
    if (!it->is_number()) throw validation_error(at + "." + k, "expected a number");
    out = it->get<double>();
  };
  if (auto it = j.find("precision"); it != j.end()) {
    if (!it->is_object()) throw validation_error("scenario.precision", "expected an object");
    sub_int(*it, "b_in", "scenario.precision", s.precision.b_in);
    sub_int(*it, "b_w", "scenario.precision", s.precision.b_w);
    sub_int(*it, "b_out", "scenario.precision", s.precision.b_out);
  }
  if (auto it = j.find("noise"); it != j.end()) {
    if (!it->is_object()) throw validation_error("scenario.noise", "expected an object");
    sub_num(*it, "sigma_in", "scenario.noise", s.noise.sigma_in);
    sub_num(*it, "sigma_w", "scenario.noise", s.noise.sigma_w);
    sub_num(*it, "sigma_out", "scenario.noise", s.noise.sigma_out);
    if (auto seed = it->find("seed"); seed != it->end()) {
      if (!seed->is_number_unsigned()) throw validation_error("scenario.noise.seed", "expected an unsigned integer");
      s.noise.seed = seed->get<std::uint64_t>();
    }
  }
  return s;
}

inline Scenario load_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw validation_error("scenario", "cannot open " + file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error("scenario", std::string("parse failure: ") + e.what());
  }
  return scenario_from_json(j, std::filesystem::path(file).parent_path());
}

inline ojson scenario_to_json(const Scenario& s, const DeviceCatalog& cat) {
  return {{"core", s.geometry.label()},
          {"variant", variant_to_json(s.variant)},
          {"profile", s.profile.name()},
          {"frequency_hz", num(s.frequency(cat))},
          {"precision", {{"b_in", s.precision.b_in}, {"b_w", s.precision.b_w}, {"b_out", s.precision.b_out}}},
          {"workload", s.workload},
          {"k1_mapping", s.k1 == K1Mapping::packed ? "packed" : "one_tap_per_group"}};
}

struct Evaluation {
  double frequency = 0.0;
  LinkBudgetReport link;
  Feasibility feasibility;
  PowerReport power;
  AreaReport area;
  TileSchedule schedule;
  PerfReport perf;
};

inline Evaluation evaluate(const Scenario& s, const DeviceCatalog& cat,
                           const std::vector<ConvLayerSpec>& workload) {
  s.validate(cat);
  Evaluation e;
  e.frequency = s.frequency(cat);
  e.link = critical_path_il(s.geometry, cat, s.variant);
  e.feasibility = variant_feasibility(e.link, cat.laser(), cat.pd());
  e.power = total_power(s.geometry, cat, s.variant, s.precision, e.frequency, {s.wall_plug});
  e.area = crossbar_area(s.geometry, cat, s.area);
  e.schedule = schedule(workload, s.geometry, cat.pcm(), s.k1);
  e.perf = estimate_perf(e.schedule, e.power, e.frequency, cat,
                         {s.allow_overclock || s.profile.implies_overclock()});
  return e;
}

inline Evaluation evaluate(const Scenario& s, const DeviceCatalog& cat) {
  return evaluate(s, cat, resolve_workload(s.workload));
}

inline ojson to_json(const Evaluation& e, const Scenario& s, const DeviceCatalog& cat) {
  return {{"scenario", scenario_to_json(s, cat)},
          {"verdict", e.feasibility.feasible ? "feasible" : "infeasible"},
          {"feasibility", to_json(e.feasibility)},
          {"link_budget", to_json(e.link)},
          {"power", to_json(e.power)},
          {"area", to_json(e.area)},
          {"performance", to_json(e.perf)},
          {"schedule", to_json(e.schedule)}};
}

/// Runs `fn` on every point concurrently and returns results in input
/// order. The first failing point (lowest index) is rethrown with its index.
template <class T, class Fn>
std::vector<T> evaluate_points(std::size_t n, Fn fn) {
  if (n == 0) throw validation_error("scenarios", "empty design-point list");
  std::vector<std::future<T>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) futures.push_back(std::async(std::launch::async, fn, i));
  std::vector<T> out;
  out.reserve(n);
  std::optional<validation_error> first;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out.push_back(futures[i].get());
    } catch (const validation_error& e) {
      if (!first) first.emplace("point[" + std::to_string(i) + "]." + e.field(), e.message());
    } catch (const std::exception& e) {
      if (!first) first.emplace("point[" + std::to_string(i) + "]", e.what());
    }
  }
  if (first) throw *first;
  return out;
}

struct AblationRow {
  std::string variant;
  double il_db = 0.0;
  double total_w = 0.0;
  std::string dominant;
  double dominant_fraction = 0.0;
  bool feasible = false;
};

/// One row per scenario, same order; each scenario normally differs only in
/// its variant.
inline std::vector<AblationRow> ablate(const std::vector<Scenario>& points, const DeviceCatalog& cat) {
  return evaluate_points<AblationRow>(points.size(), [&](std::size_t i) {
    const Scenario& s = points[i];
    s.validate(cat);
    const double f = s.frequency(cat);
    const auto link = critical_path_il(s.geometry, cat, s.variant);
    const auto power = total_power(s.geometry, cat, s.variant, s.precision, f, {s.wall_plug});
    const auto& top = power.dominant();
    return AblationRow{variant_name(s.variant), link.total(), power.total, top.label, top.fraction,
                       variant_feasibility(link, cat.laser(), cat.pd()).feasible};
  });
}

inline Table ablation_table(const std::vector<AblationRow>& rows) {
  Table t{{"variant", "il_db", "total_w", "top_contributor", "top_fraction", "feasible"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.variant, format_g(r.il_db), format_g(r.total_w), r.dominant,
                      format_g(r.dominant_fraction), r.feasible ? "yes" : "no"});
  return t;
}

struct SweepRow {
  std::string core;
  double fps = 0.0;
  double mj_per_inference = 0.0;
  double total_w = 0.0;
  std::int64_t tile_loads = 0;
  double tops_per_w = 0.0;
};

inline std::vector<SweepRow> sweep(const std::vector<Scenario>& points, const DeviceCatalog& cat,
                                   const std::vector<ConvLayerSpec>& workload) {
  return evaluate_points<SweepRow>(points.size(), [&](std::size_t i) {
    const auto e = evaluate(points[i], cat, workload);
    return SweepRow{points[i].geometry.label(), e.perf.fps, e.perf.energy_per_inference * 1e3,
                    e.power.total, e.perf.tile_loads, e.perf.tops_per_w};
  });
}

inline Table sweep_table(const std::vector<SweepRow>& rows) {
  Table t{{"core", "fps", "mj_per_inference", "total_w", "tile_loads", "tops_per_w"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.core, format_g(r.fps), format_g(r.mj_per_inference), format_g(r.total_w),
                      std::to_string(r.tile_loads), format_g(r.tops_per_w)});
  return t;
}

inline std::vector<std::string> default_sweep_cores() {
  return {"9x8", "18x16", "36x32", "72x64", "144x128", "144x256"};
}

}  // namespace ptc
