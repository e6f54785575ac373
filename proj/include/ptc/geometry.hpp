#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "units.hpp"

namespace ptc {

/// Rows carry WDM wavelengths (grouped per comb), columns are weight banks
/// fed through 1x8 MMIs.
struct CoreGeometry {
  int rows = 144;
  int cols = 256;
  int wavelengths_per_group = 9;
  int cols_per_mmi = 8;

  int groups() const { return (rows + wavelengths_per_group - 1) / wavelengths_per_group; }
  int mmi_groups() const { return (cols + cols_per_mmi - 1) / cols_per_mmi; }
  std::int64_t cells() const { return std::int64_t(rows) * cols; }

  // A single partial group (rows < group size, cols < MMI width) is accepted
  // so degenerate cores remain expressible.
  void validate() const {
    if (wavelengths_per_group < 1)
      throw validation_error("geometry.wavelengths_per_group", "must be >= 1");
    if (cols_per_mmi < 1) throw validation_error("geometry.cols_per_mmi", "must be >= 1");
    if (rows < 1) throw validation_error("geometry.rows", "must be >= 1");
    if (cols < 1) throw validation_error("geometry.cols", "must be >= 1");
    if (rows >= wavelengths_per_group && rows % wavelengths_per_group != 0)
      throw validation_error("geometry.rows", "must be a multiple of wavelengths_per_group");
    if (cols >= cols_per_mmi && cols % cols_per_mmi != 0)
      throw validation_error("geometry.cols", "must be a multiple of cols_per_mmi");
  }

  std::string label() const { return std::to_string(rows) + "x" + std::to_string(cols); }

  friend bool operator==(const CoreGeometry&, const CoreGeometry&) = default;
};

/// Parses "HxW" (e.g. "144x256") and validates the result.
inline CoreGeometry parse_core(std::string_view text) {
  auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) throw validation_error("core", "expected HxW, got '" + std::string(text) + "'");
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw validation_error("core", "expected HxW, got '" + std::string(text) + "'");
    return v;
  };
  CoreGeometry g;
  g.rows = parse_int(text.substr(0, x));
  g.cols = parse_int(text.substr(x + 1));
  g.validate();
  return g;
}

struct Baseline3D {};
struct SoaAssisted {
  int fanout_before_amp = 128;
};
struct Planar2D {
  // Negative means "use the topology default" (W + 8 crossings, W Y-branches).
  int crossings = -1;
  int ybranches = -1;
};
struct MrrAccumulation {
  double ring_loss = 0.9222;
};
struct KclOnly {};
struct CoherentCombining {
  double stage_loss = 3.0;
};
struct ThermoOpticWeights {};

using ArchitectureVariant = std::variant<Baseline3D, SoaAssisted, Planar2D, MrrAccumulation,
                                         KclOnly, CoherentCombining, ThermoOpticWeights>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::string variant_name(const ArchitectureVariant& v) {
  return std::visit(overloaded{[](const Baseline3D&) { return "baseline"; },
                               [](const SoaAssisted&) { return "soa"; },
                               [](const Planar2D&) { return "planar2d"; },
                               [](const MrrAccumulation&) { return "mrr"; },
                               [](const KclOnly&) { return "kcl"; },
                               [](const CoherentCombining&) { return "coherent"; },
                               [](const ThermoOpticWeights&) { return "thermo"; }},
                    v);
}

inline nlohmann::ordered_json variant_to_json(const ArchitectureVariant& v) {
  nlohmann::ordered_json j;
  j["name"] = variant_name(v);
  std::visit(overloaded{[&](const SoaAssisted& s) { j["fanout_before_amp"] = s.fanout_before_amp; },
                        [&](const Planar2D& p) {
                          if (p.crossings >= 0) j["crossings"] = p.crossings;
                          if (p.ybranches >= 0) j["ybranches"] = p.ybranches;
                        },
                        [&](const MrrAccumulation& m) { j["ring_loss"] = m.ring_loss; },
                        [&](const CoherentCombining& c) { j["stage_loss"] = c.stage_loss; },
                        [](const auto&) {}},
             v);
  return j;
}

inline void validate_variant(const ArchitectureVariant& v) {
  std::visit(overloaded{[](const SoaAssisted& s) {
                          if (s.fanout_before_amp < 1)
                            throw validation_error("variant.fanout_before_amp", "must be >= 1");
                        },
                        [](const MrrAccumulation& m) {
                          if (!(m.ring_loss > 0.0))
                            throw validation_error("variant.ring_loss", "must be > 0");
                        },
                        [](const CoherentCombining& c) {
                          if (!(c.stage_loss > 0.0))
                            throw validation_error("variant.stage_loss", "must be > 0");
                        },
                        [](const auto&) {}},
             v);
}

/// The seven ablation configurations in presentation order, baseline first.
inline std::vector<ArchitectureVariant> all_variants() {
  return {Baseline3D{}, SoaAssisted{}, Planar2D{}, ThermoOpticWeights{},
          MrrAccumulation{}, KclOnly{}, CoherentCombining{}};
}

/// Parses "NAME[:k=v,...]", e.g. "mrr:ring_loss=0.9" or "soa:fanout_before_amp=64".
inline ArchitectureVariant parse_variant(std::string_view text) {
  std::string name(text.substr(0, text.find(':')));
  std::map<std::string, std::string> params;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      std::string_view kv = rest.substr(0, comma);
      auto eq = kv.find('=');
      if (eq == std::string_view::npos)
        throw validation_error("variant", "expected key=value in '" + std::string(kv) + "'");
      params[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  auto take_double = [&](const char* key, double& out) {
    auto it = params.find(key);
    if (it == params.end()) return;
    try {
      std::size_t used = 0;
      out = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw validation_error(std::string("variant.") + key, "expected a number");
    }
    params.erase(it);
  };
  auto take_int = [&](const char* key, int& out) {
    double d = out;
    take_double(key, d);
    if (d != static_cast<int>(d)) throw validation_error(std::string("variant.") + key, "expected an integer");
    out = static_cast<int>(d);
  };

  ArchitectureVariant v;
  if (name == "baseline") {
    v = Baseline3D{};
  } else if (name == "soa") {
    SoaAssisted s;
    take_int("fanout_before_amp", s.fanout_before_amp);
    v = s;
  } else if (name == "planar2d") {
    Planar2D p;
    take_int("crossings", p.crossings);
    take_int("ybranches", p.ybranches);
    v = p;
  } else if (name == "mrr") {
    MrrAccumulation m;
    take_double("ring_loss", m.ring_loss);
    v = m;
  } else if (name == "kcl") {
    v = KclOnly{};
  } else if (name == "coherent") {
    CoherentCombining c;
    take_double("stage_loss", c.stage_loss);
    v = c;
  } else if (name == "thermo") {
    v = ThermoOpticWeights{};
  } else {
    throw validation_error("variant", "unknown variant '" + name + "'");
  }
  if (!params.empty())
    throw validation_error("variant." + params.begin()->first, "unknown parameter for " + name);
  validate_variant(v);
  return v;
}

}  // namespace ptc
