#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "geometry.hpp"

namespace ptc {

struct AreaOptions {
  bool compact_cell = false;  // ~75 um cell with a compact absorber
};

struct Reticle {
  double width = 26.0;   // mm
  double height = 33.0;  // mm
  double area() const { return width * height; }
};

struct ReticleVerdict {
  bool fits = false;
  bool rotated = false;
  double residual_area = 0.0;  // mm^2, only meaningful when fits
  double shortfall_w = 0.0;    // mm beyond the reticle, best orientation
  double shortfall_h = 0.0;
};

struct AreaReport {
  double crossbar_w = 0.0;  // mm
  double crossbar_h = 0.0;
  double total_area = 0.0;  // mm^2
  double cell_w = 0.0;      // um
  double cell_h = 0.0;
  std::vector<std::pair<std::string, double>> strips;  // mm
  Reticle reticle;
  ReticleVerdict verdict;
};

/// Allows a 90-degree rotation of the die.
inline ReticleVerdict reticle_check(double w_mm, double h_mm, const Reticle& reticle = {}) {
  ReticleVerdict v;
  const bool upright = w_mm <= reticle.width && h_mm <= reticle.height;
  const bool rotated = h_mm <= reticle.width && w_mm <= reticle.height;
  v.fits = upright || rotated;
  v.rotated = !upright && rotated;
  if (v.fits) {
    v.residual_area = reticle.area() - w_mm * h_mm;
  } else {
    double up_w = std::max(0.0, w_mm - reticle.width), up_h = std::max(0.0, h_mm - reticle.height);
    double rot_w = std::max(0.0, h_mm - reticle.width), rot_h = std::max(0.0, w_mm - reticle.height);
    if (up_w + up_h <= rot_w + rot_h) {
      v.shortfall_w = up_w;
      v.shortfall_h = up_h;
    } else {
      v.shortfall_w = rot_w;
      v.shortfall_h = rot_h;
    }
  }
  return v;
}

inline ReticleVerdict reticle_check(const AreaReport& report, const Reticle& reticle = {}) {
  return reticle_check(report.crossbar_w, report.crossbar_h, reticle);
}

/// Width: input strip (comb, AWG, VOA, SL-MZM) plus one pitch per 8-column
/// MMI group. Height: one cell row per WDM row plus the PD strip.
inline AreaReport crossbar_area(const CoreGeometry& geom, const DeviceCatalog& cat,
                                const AreaOptions& opts = {}) {
  geom.validate();
  const auto& l = cat.layout();
  AreaReport r;
  r.cell_w = opts.compact_cell ? l.compact_cell_width : l.cell_width;
  r.cell_h = l.cell_height;
  const double pitch_um = l.group_pitch - (l.cell_width - r.cell_w) * geom.cols_per_mmi;

  // Sum in um so the published dimensions come out exact.
  const double input_um = l.comb_strip + l.awg_strip + l.voa_strip + l.mzm_strip;
  const double array_um = geom.mmi_groups() * pitch_um;
  const double rows_um = geom.rows * r.cell_h;
  r.crossbar_w = (input_um + array_um) / 1000.0;
  r.crossbar_h = (rows_um + l.pd_strip) / 1000.0;
  r.total_area = r.crossbar_w * r.crossbar_h;
  r.strips = {{"comb", l.comb_strip / 1000.0},       {"awg", l.awg_strip / 1000.0},
              {"voa", l.voa_strip / 1000.0},         {"sl_mzm", l.mzm_strip / 1000.0},
              {"column groups", array_um / 1000.0},  {"cell rows", rows_um / 1000.0},
              {"pd", l.pd_strip / 1000.0}};
  r.reticle = Reticle{l.reticle_width, l.reticle_height};
  r.verdict = reticle_check(r, r.reticle);
  return r;
}

}  // namespace ptc
