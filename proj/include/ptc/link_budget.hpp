#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "geometry.hpp"

namespace ptc {

struct LossTerm {
  std::string label;
  double db = 0.0;
};

/// Worst-case laser-to-PD insertion loss, broken down term by term.
struct LinkBudgetReport {
  std::vector<LossTerm> terms;
  CoreGeometry geometry;
  ArchitectureVariant variant;

  double total() const {
    double sum = 0.0;
    for (const auto& t : terms) sum += t.db;
    return sum;
  }

  double term(const std::string& label) const {
    for (const auto& t : terms)
      if (t.label == label) return t.db;
    return 0.0;
  }

  bool has_term(const std::string& label) const {
    for (const auto& t : terms)
      if (t.label == label) return true;
    return false;
  }
};

/// Ideal 1:W power-division loss.
inline double fanout_loss(int width) {
  if (width < 1) throw validation_error("width", "must be >= 1");
  return 10.0 * std::log10(double(width));
}

namespace detail {

inline int splitter_stages(int width, int cols_per_mmi) {
  int groups = (width + cols_per_mmi - 1) / cols_per_mmi;
  return std::max(0, groups - 1);
}

}  // namespace detail

/// Critical path is the farthest column: it crosses the most cascaded
/// splitters in the row distribution network.
inline LinkBudgetReport critical_path_il(const CoreGeometry& geom, const DeviceCatalog& cat,
                                         const ArchitectureVariant& variant) {
  geom.validate();
  validate_variant(variant);
  const int W = geom.cols;
  const int H = geom.rows;

  LinkBudgetReport r{{}, geom, variant};
  auto& t = r.terms;
  t.push_back({"awg", cat.loss("awg")});
  t.push_back({"escalator x5", 5.0 * cat.loss("escalator")});
  t.push_back({"mmi_1x8", cat.loss("mmi_1x8")});
  t.push_back({"sl_mzm", cat.loss("sl_mzm")});

  int fanout_cols = W;
  if (auto* soa = std::get_if<SoaAssisted>(&variant)) fanout_cols = std::min(W, soa->fanout_before_amp);

  t.push_back({"splitter_1x2 excess",
               cat.loss("splitter_1x2") * detail::splitter_stages(fanout_cols, geom.cols_per_mmi)});

  const bool optical_accumulation_on_wsc =
      !std::holds_alternative<MrrAccumulation>(variant) && !std::holds_alternative<KclOnly>(variant) &&
      !std::holds_alternative<CoherentCombining>(variant);
  if (optical_accumulation_on_wsc) t.push_back({"wsc x8", 8.0 * cat.loss("wsc")});

  t.push_back({"pcm_cell", cat.loss("pcm_cell")});
  t.push_back({"voa", cat.loss("voa")});
  t.push_back({"fanout", fanout_loss(fanout_cols)});

  std::visit(
      overloaded{
          [&](const SoaAssisted&) {
            const auto& s = cat.soa();
            t.push_back({"soa facets net of gain", std::max(0.0, 2.0 * s.facet_loss - s.gain)});
          },
          [&](const Planar2D& p) {
            int crossings = p.crossings >= 0 ? p.crossings : W + 8;
            int ybranches = p.ybranches >= 0 ? p.ybranches : W;
            t.push_back({"crossings", crossings * cat.loss("crossing")});
            t.push_back({"ybranches", ybranches * cat.loss("ybranch")});
          },
          [&](const MrrAccumulation& m) { t.push_back({"mrr rings", 2.0 * H * m.ring_loss}); },
          [&](const KclOnly&) { t.push_back({"per-site detection split", 10.0 * std::log10(double(H))}); },
          [&](const CoherentCombining& c) {
            int stages = int(std::ceil(std::log2(double(H))));
            t.push_back({"coherent combiner stages", stages * c.stage_loss});
          },
          [](const auto&) {}},
      variant);
  return r;
}

struct Feasibility {
  bool feasible = false;
  double margin_db = 0.0;  // negative: shortfall
};

/// Compares one launched comb channel, attenuated by the critical path,
/// against PD sensitivity.
inline Feasibility variant_feasibility(const LinkBudgetReport& report, const LaserSpec& laser,
                                       const PdSpec& pd) {
  double margin = laser.channel_power - report.total() - pd.sensitivity;
  return {margin >= 0.0, margin};
}

}  // namespace ptc
