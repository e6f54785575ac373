#pragma once

// JSON / CSV / table emission. JSON keys keep insertion order and floats are
// rounded to 9 significant digits so identical inputs give identical bytes.

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "analog_mvm.hpp"
#include "area_model.hpp"
#include "catalog.hpp"
#include "link_budget.hpp"
#include "power_model.hpp"
#include "tinycnn.hpp"
#include "workload.hpp"

namespace ptc {

inline constexpr const char* kToolName = "ptcsim";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

using ojson = nlohmann::ordered_json;

inline double round9(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

/// Rounds every float in `j` in place.
inline void round_floats(ojson& j) {
  if (j.is_number_float()) {
    j = round9(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& e : j) round_floats(e);
  }
}

/// Non-finite values (e.g. the laser power of a hopeless variant) have no
/// JSON literal; they are emitted as strings.
inline ojson num(double x) {
  if (std::isfinite(x)) return round9(x);
  return x > 0 ? "inf" : x < 0 ? "-inf" : "nan";
}

inline std::string format_g(double x, int digits = 9) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

inline ojson report_header(const DeviceCatalog& cat, const std::string& command) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"schema_version", kReportSchemaVersion},
          {"command", command},
          {"catalog_hash", cat.hash()}};
}

inline ojson to_json(const CoreGeometry& g) {
  return {{"rows", g.rows},
          {"cols", g.cols},
          {"wavelengths_per_group", g.wavelengths_per_group},
          {"cols_per_mmi", g.cols_per_mmi}};
}

inline ojson to_json(const LinkBudgetReport& r) {
  ojson terms = ojson::array();
  for (const auto& t : r.terms) terms.push_back({{"label", t.label}, {"db", num(t.db)}});
  return {{"core", r.geometry.label()},
          {"variant", variant_to_json(r.variant)},
          {"terms", terms},
          {"total_db", num(r.total())}};
}

inline ojson to_json(const Feasibility& f) {
  return {{"feasible", f.feasible}, {"margin_db", num(f.margin_db)}};
}

inline ojson to_json(const PowerReport& r) {
  ojson b = ojson::array();
  for (const auto& e : r.breakdown)
    b.push_back({{"label", e.label}, {"watts", num(e.watts)}, {"fraction", num(e.fraction)}});
  return {{"variant", variant_name(r.variant)},
          {"frequency_hz", num(r.frequency)},
          {"precision", {{"b_in", r.precision.b_in}, {"b_w", r.precision.b_w}, {"b_out", r.precision.b_out}}},
          {"wall_plug_applied", r.wall_plug_applied},
          {"breakdown", b},
          {"total_w", num(r.total)}};
}

inline ojson to_json(const AreaReport& r) {
  ojson strips = ojson::object();
  for (const auto& [k, v] : r.strips) strips[k] = num(v);
  return {{"width_mm", num(r.crossbar_w)},
          {"height_mm", num(r.crossbar_h)},
          {"area_mm2", num(r.total_area)},
          {"cell_um", {num(r.cell_w), num(r.cell_h)}},
          {"strips_mm", strips},
          {"reticle_mm", {num(r.reticle.width), num(r.reticle.height)}},
          {"fits_reticle", r.verdict.fits},
          {"rotated", r.verdict.rotated},
          {"residual_mm2", num(r.verdict.residual_area)},
          {"shortfall_mm", {num(r.verdict.shortfall_w), num(r.verdict.shortfall_h)}}};
}

inline ojson to_json(const PerfReport& p) {
  return {{"latency_s", num(p.latency)},
          {"fps", num(p.fps)},
          {"peak_tops", num(p.peak_tops)},
          {"effective_tops", num(p.effective_tops)},
          {"total_power_w", num(p.total_power)},
          {"tops_per_w", num(p.tops_per_w)},
          {"fps_per_w", num(p.fps_per_w)},
          {"energy_steady_mj", num(p.energy_steady * 1e3)},
          {"energy_programming_mj", num(p.energy_programming * 1e3)},
          {"energy_per_inference_mj", num(p.energy_per_inference * 1e3)},
          {"tile_loads", p.tile_loads},
          {"programmed_cells", p.programmed_cells}};
}

inline ojson to_json(const TileSchedule& s) {
  ojson layers = ojson::array();
  for (const auto& l : s.layers) {
    if (l.unmapped) {
      layers.push_back({{"name", l.name}, {"mapped", false}});
      continue;
    }
    layers.push_back({{"name", l.name},
                      {"mapped", true},
                      {"rows", l.lowered.rows},
                      {"cols", l.lowered.cols},
                      {"tiles", {l.lowered.tiles_row, l.lowered.tiles_col}},
                      {"utilization", num(l.lowered.utilization)},
                      {"tile_loads", l.tile_loads},
                      {"stream_cycles", l.stream_cycles}});
  }
  return {{"tile_load_time_ns", num(s.tile_load_time_ns)},
          {"tile_loads", s.tile_loads()},
          {"stream_cycles", s.stream_cycles()},
          {"unmapped", s.unmapped_layers()},
          {"layers", layers}};
}

inline ojson to_json(const tinycnn::SimulationReport& r) {
  ojson layers = ojson::array();
  for (const auto& l : r.layers)
    layers.push_back({{"name", l.name},
                      {"mean", num(l.mean)},
                      {"stddev", num(l.stddev)},
                      {"relative_rms_error", num(l.relative_rms_error)}});
  return {{"samples", r.samples},
          {"float_accuracy", num(r.float_accuracy)},
          {"photonic_accuracy", num(r.photonic_accuracy)},
          {"layers", layers}};
}

inline std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// CSV

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
      os << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }

  std::string text() const {
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& r : rows)
      for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        os << (i ? "  " : "") << std::left << std::setw(int(width[i])) << r[i];
      }
      os << "\n";
    };
    line(header);
    std::vector<std::string> rule;
    for (auto w : width) rule.push_back(std::string(w, '-'));
    line(rule);
    for (const auto& r : rows) line(r);
    return os.str();
  }

  ojson json() const {
    ojson out = ojson::array();
    for (const auto& r : rows) {
      ojson o = ojson::object();
      for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) {
        char* end = nullptr;
        const double v = std::strtod(r[i].c_str(), &end);
        if (!r[i].empty() && end && *end == '\0') o[header[i]] = round9(v);
        else o[header[i]] = r[i];
      }
      out.push_back(std::move(o));
    }
    return out;
  }
};

inline Table link_budget_table(const LinkBudgetReport& r) {
  Table t{{"term", "db"}, {}};
  for (const auto& e : r.terms) t.rows.push_back({e.label, format_g(e.db)});
  t.rows.push_back({"total", format_g(r.total())});
  return t;
}

inline Table power_table(const PowerReport& r) {
  Table t{{"contributor", "watts", "fraction"}, {}};
  for (const auto& e : r.breakdown) t.rows.push_back({e.label, format_g(e.watts), format_g(e.fraction)});
  t.rows.push_back({"total", format_g(r.total), "1"});
  return t;
}

inline Table simulation_table(const tinycnn::SimulationReport& r) {
  Table t{{"layer", "mean", "stddev", "relative_rms_error"}, {}};
  for (const auto& l : r.layers)
    t.rows.push_back({l.name, format_g(l.mean), format_g(l.stddev), format_g(l.relative_rms_error)});
  return t;
}

}  // namespace ptc
