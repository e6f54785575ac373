#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "geometry.hpp"
#include "link_budget.hpp"

namespace ptc {

struct PrecisionSpec {
  int b_in = 6;
  int b_w = 7;
  int b_out = 8;

  void validate() const {
    auto check = [](int b, const char* f) {
      if (b < 1 || b > 16) throw validation_error(f, "bit width must be in [1, 16]");
    };
    check(b_in, "precision.b_in");
    check(b_w, "precision.b_w");
    check(b_out, "precision.b_out");
  }
};

struct PowerOptions {
  // Off reproduces the ablation numbers (laser optical power taken as
  // electrical); on divides by the catalog wall-plug efficiency.
  bool apply_wall_plug = false;
};

struct PowerEntry {
  std::string label;
  double watts = 0.0;
  double fraction = 0.0;
};

inline constexpr const char* kPcmProgrammingLabel = "pcm_programming";

struct PowerReport {
  double total = 0.0;  // W
  std::vector<PowerEntry> breakdown;
  PrecisionSpec precision;
  double frequency = 0.0;
  ArchitectureVariant variant;
  bool wall_plug_applied = false;

  double watts(const std::string& label) const {
    for (const auto& e : breakdown)
      if (e.label == label) return e.watts;
    return 0.0;
  }

  double fraction(const std::string& label) const {
    for (const auto& e : breakdown)
      if (e.label == label) return e.fraction;
    return 0.0;
  }

  const PowerEntry& dominant() const {
    return *std::max_element(breakdown.begin(), breakdown.end(),
                             [](const auto& a, const auto& b) { return a.watts < b.watts; });
  }
};

/// Electrical laser power (W) needed to land `S` dBm at the PD through `il` dB
/// with 2^b_out levels of swing and a finite modulator extinction ratio.
inline double laser_power(double sensitivity_dbm, double il_db, int b_out, double er_db, double wpe) {
  if (!(wpe > 0.0 && wpe <= 1.0)) throw validation_error("wpe", "must be in (0, 1]");
  if (!(er_db > 0.0)) throw validation_error("extinction_ratio", "must be > 0 (unusable modulator)");
  if (b_out < 0) throw validation_error("b_out", "must be >= 0");
  const double launched_mw = dbm_to_mw(sensitivity_dbm + il_db);
  const double swing = std::ldexp(1.0, b_out);
  const double depth = 1.0 - std::pow(10.0, -er_db / 10.0);
  return launched_mw * swing / wpe / depth * 1e-3;
}

/// Resolution-rate converter law: p0 * 2^b / (b + 1) * f. `p0` in J.
inline double dac_power(int bits, double f, double p0) {
  if (bits < 1) throw validation_error("bits", "must be >= 1");
  if (!(f > 0.0)) throw validation_error("frequency", "must be > 0");
  return p0 * std::ldexp(1.0, bits) / (bits + 1) * f;
}

inline double adc_power(int bits, double f, double p0) { return dac_power(bits, f, p0); }

/// Electrical VCSEL energy (pJ) to deliver `e_opt` pJ to a PCM cell through a
/// grating coupler of `l_gc` dB.
inline double vcsel_program_energy(double e_opt_pj, double l_gc_db, double eta_vcsel) {
  if (!(eta_vcsel > 0.0 && eta_vcsel <= 1.0)) throw validation_error("eta_vcsel", "must be in (0, 1]");
  return e_opt_pj * db_to_linear(l_gc_db) / eta_vcsel;
}

/// Electrical energy (pJ) of one erase + program cycle of one PCM cell,
/// including the weight DAC conversion.
inline double pcm_cycle_energy(const DeviceCatalog& cat, int b_w) {
  const double gc = cat.loss("grating_coupler");
  const double eta = cat.vcsel().efficiency;
  const double dac_pj = cat.converters().p0_dac * std::ldexp(1.0, b_w) / (b_w + 1);
  return vcsel_program_energy(cat.pcm().program_energy_optical, gc, eta) +
         vcsel_program_energy(cat.pcm().erase_energy_optical, gc, eta) + dac_pj;
}

inline PowerReport total_power(const CoreGeometry& geom, const DeviceCatalog& cat,
                               const ArchitectureVariant& variant, const PrecisionSpec& precision,
                               double f, const PowerOptions& opts = {}) {
  precision.validate();
  if (!(f > 0.0)) throw validation_error("frequency", "must be > 0");
  const auto link = critical_path_il(geom, cat, variant);
  const double H = geom.rows;
  const double W = geom.cols;
  const double wpe = opts.apply_wall_plug ? cat.laser().wpe : 1.0;

  PowerReport r;
  r.precision = precision;
  r.frequency = f;
  r.variant = variant;
  r.wall_plug_applied = opts.apply_wall_plug;
  auto& b = r.breakdown;

  b.push_back({"laser", laser_power(cat.pd().sensitivity, link.total(), precision.b_out,
                                    cat.modulator().extinction_ratio, wpe)});
  b.push_back({"input_dac", H * dac_power(precision.b_in, f, cat.converters().p0_dac * 1e-12)});
  b.push_back({"modulator_driver", H * cat.modulator().switch_energy(precision.b_in) * 1e-15 * f});
  const double voa_mw = cat.component("voa").static_power.value_or(0.0) *
                        cat.calibration().voa_equalization / 6.0;
  b.push_back({"voa", H * voa_mw * 1e-3});
  b.push_back({"pd_tia", W * cat.pd().tia_power * 1e-3});
  b.push_back({"output_adc", W * adc_power(precision.b_out, f, cat.converters().p0_adc * 1e-12)});

  if (std::holds_alternative<ThermoOpticWeights>(variant)) {
    b.push_back({"thermo_optic_hold", H * W * cat.thermo_optic().hold_power * 1e-3});
  } else {
    b.push_back({kPcmProgrammingLabel, H * W * pcm_cycle_energy(cat, precision.b_w) * 1e-12 *
                                           cat.calibration().weight_refresh_rate});
  }
  if (std::holds_alternative<SoaAssisted>(variant))
    b.push_back({"soa_drive", H * cat.soa().drive_power * 1e-3});

  for (const auto& e : b) r.total += e.watts;
  for (auto& e : b) e.fraction = r.total > 0.0 ? e.watts / r.total : 0.0;
  return r;
}

}  // namespace ptc
