#pragma once

// Device catalog: every photonic and electronic component parameter the
// analytical models consume. Units follow the on-disk schema: losses in dB,
// powers in mW, energies in pJ, times in ns, lengths in um, currents in A,
// frequencies in Hz.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "units.hpp"

namespace ptc {

inline constexpr int kCatalogSchemaVersion = 1;

struct ComponentSpec {
  std::string name;
  double insertion_loss = 0.0;
  std::optional<double> area_width;
  std::optional<double> area_height;
  std::optional<double> static_power;
  std::string notes;
};

struct LaserSpec {
  double channel_power = 10.0;  // dBm
  int channels_per_comb = 9;
  double wpe = 0.2;
};

struct PdSpec {
  double responsivity = 0.82;  // A/W
  double dark_current = 43e-9;
  double bandwidth = 11.8e9;
  double sensitivity = -25.0;  // dBm
  int max_ports = 16;
  double tia_power = 0.5;  // mW per readout channel
};

struct ModulatorSpec {
  double extinction_ratio = 1.17;
  std::map<int, double> energy_per_switch{{4, 131.6}, {6, 119.8}, {8, 117.1}};  // fJ
  double max_rate = 1e9;

  /// Per-switch energy in fJ for `bits`, linearly interpolated between the
  /// tabulated widths and clamped outside them.
  double switch_energy(int bits) const {
    if (energy_per_switch.empty()) return 0.0;
    auto hi = energy_per_switch.lower_bound(bits);
    if (hi == energy_per_switch.end()) return std::prev(hi)->second;
    if (hi->first == bits || hi == energy_per_switch.begin()) return hi->second;
    auto lo = std::prev(hi);
    double t = double(bits - lo->first) / double(hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  }
};

struct PcmSpec {
  double program_energy_optical = 135.0;  // pJ
  double erase_energy_optical = 193.0;    // pJ
  double program_time = 50.0;             // ns
  double erase_time = 250.0;
  double stabilize_program = 200.0;
  double stabilize_erase = 500.0;
  int levels_bits = 7;
  double program_std = 0.01;

  double cycle_time() const {
    return program_time + stabilize_program + erase_time + stabilize_erase;
  }
};

struct ConverterCoeffs {
  double p0_dac = 0.0075;  // pJ
  double p0_adc = 0.0075;
};

struct VcselSpec {
  double efficiency = 0.548;
};

struct SoaSpec {
  double gain = 24.7;           // dB
  double drive_power = 410.0;   // mW
  double facet_loss = 1.0;      // dB per facet
};

struct ThermoOpticSpec {
  double hold_power = 6.55;  // mW per weight
};

struct LayoutSpec {
  double comb_strip = 500.0;
  double awg_strip = 1000.0;
  double voa_strip = 150.0;
  double mzm_strip = 250.0;
  double group_pitch = 700.0;
  double cell_width = 100.0;
  double cell_height = 200.0;
  double compact_cell_width = 75.0;
  double pd_strip = 100.0;
  double reticle_width = 26.0;   // mm
  double reticle_height = 33.0;  // mm
};

struct CalibrationSpec {
  double voa_equalization = 1.0;        // dB of equalizing attenuation per channel
  double weight_refresh_rate = 190e3;   // Hz, amortized full-array PCM rewrite
};

/// Names of the passive components in the catalog, in schema order.
inline const std::vector<std::string>& component_names() {
  static const std::vector<std::string> names{
      "awg", "escalator", "mmi_1x8", "sl_mzm", "splitter_1x2", "wsc", "pcm_cell", "voa",
      "crossing", "ybranch", "grating_coupler"};
  return names;
}

/// Plain, mutable catalog contents. DeviceCatalog wraps a validated copy.
struct CatalogData {
  std::map<std::string, ComponentSpec> components;
  LaserSpec laser;
  PdSpec pd;
  ModulatorSpec modulator;
  PcmSpec pcm;
  ConverterCoeffs converters;
  VcselSpec vcsel;
  SoaSpec soa;
  ThermoOpticSpec thermo_optic;
  LayoutSpec layout;
  CalibrationSpec calibration;

  static CatalogData defaults() {
    CatalogData d;
    auto add = [&](std::string name, double il, std::optional<double> w, std::optional<double> h,
                   std::optional<double> p, std::string notes) {
      d.components[name] = ComponentSpec{name, il, w, h, p, std::move(notes)};
    };
    add("awg", 1.5, 600.0, 1800.0, std::nullopt, "crosstalk -24 dB");
    add("escalator", 0.1, std::nullopt, std::nullopt, std::nullopt,
        "Si/SiN transition; not tabulated, calibrated default");
    add("mmi_1x8", 0.14, 27.8, 11.3, std::nullopt, "");
    add("sl_mzm", 3.0, 250.0, 25.0, std::nullopt, "foreseeable loss");
    add("splitter_1x2", 0.02, 80.0, 10.0, std::nullopt, "excess loss per stage");
    add("wsc", 0.25, 100.0, 10.0, std::nullopt, "crosstalk -20 dB");
    add("pcm_cell", 0.68, 2.5, 3.0, std::nullopt,
        "amorphous on-path loss, 2.5 um x 0.27 dB/um");
    add("voa", 0.18, 116.0, 20.0, 70.0, "70 mW at 6 dB attenuation");
    add("crossing", 0.23, 8.0, 8.0, std::nullopt, "");
    add("ybranch", 0.1, std::nullopt, std::nullopt, std::nullopt, "calibrated default");
    add("grating_coupler", 1.43, 8.0, 8.0, std::nullopt, "vertical VCSEL coupler");
    return d;
  }
};

namespace detail {

// Reads one JSON object, remembering which keys were consumed so unknown keys
// can be rejected and missing ones reported as defaulted.
class section_reader {
 public:
  section_reader(const nlohmann::json* obj, std::string path, std::vector<std::string>& defaulted)
      : obj_(obj), path_(std::move(path)), defaulted_(defaulted) {
    if (obj_ && !obj_->is_object()) throw validation_error(path_, "expected an object");
  }

  double number(const char* key, double fallback) {
    seen_.insert(key);
    const nlohmann::json* v = find(key);
    if (!v) {
      defaulted_.push_back(path_ + "." + key);
      return fallback;
    }
    if (!v->is_number()) throw validation_error(path_ + "." + key, "expected a number");
    double x = v->get<double>();
    if (!std::isfinite(x)) throw validation_error(path_ + "." + key, "must be finite");
    return x;
  }

  int integer(const char* key, int fallback) {
    seen_.insert(key);
    const nlohmann::json* v = find(key);
    if (!v) {
      defaulted_.push_back(path_ + "." + key);
      return fallback;
    }
    if (!v->is_number_integer()) throw validation_error(path_ + "." + key, "expected an integer");
    return v->get<int>();
  }

  std::optional<double> optional_number(const char* key, std::optional<double> fallback) {
    seen_.insert(key);
    const nlohmann::json* v = find(key);
    if (!v) return fallback;
    if (v->is_null()) return std::nullopt;
    if (!v->is_number()) throw validation_error(path_ + "." + key, "expected a number");
    return v->get<double>();
  }

  std::string text(const char* key, const std::string& fallback) {
    seen_.insert(key);
    const nlohmann::json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw validation_error(path_ + "." + key, "expected a string");
    return v->get<std::string>();
  }

  const nlohmann::json* raw(const char* key) {
    seen_.insert(key);
    return find(key);
  }

  void reject_unknown() const {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (!seen_.count(it.key())) throw validation_error(path_ + "." + it.key(), "unknown field");
    }
  }

 private:
  const nlohmann::json* find(const char* key) const {
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  const nlohmann::json* obj_;
  std::string path_;
  std::vector<std::string>& defaulted_;
  std::set<std::string> seen_;
};

inline void check(bool ok, const std::string& field, const char* what) {
  if (!ok) throw validation_error(field, what);
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Immutable, validated component parameter set. Safe to share across threads.
class DeviceCatalog {
 public:
  DeviceCatalog() : DeviceCatalog(CatalogData::defaults()) {}

  explicit DeviceCatalog(CatalogData data, std::vector<std::string> defaulted = {})
      : data_(std::move(data)), defaulted_(std::move(defaulted)) {
    validate(data_);
  }

  const CatalogData& data() const noexcept { return data_; }
  const LaserSpec& laser() const noexcept { return data_.laser; }
  const PdSpec& pd() const noexcept { return data_.pd; }
  const ModulatorSpec& modulator() const noexcept { return data_.modulator; }
  const PcmSpec& pcm() const noexcept { return data_.pcm; }
  const ConverterCoeffs& converters() const noexcept { return data_.converters; }
  const VcselSpec& vcsel() const noexcept { return data_.vcsel; }
  const SoaSpec& soa() const noexcept { return data_.soa; }
  const ThermoOpticSpec& thermo_optic() const noexcept { return data_.thermo_optic; }
  const LayoutSpec& layout() const noexcept { return data_.layout; }
  const CalibrationSpec& calibration() const noexcept { return data_.calibration; }

  const ComponentSpec& component(const std::string& name) const {
    auto it = data_.components.find(name);
    if (it == data_.components.end()) throw validation_error(name, "unknown component");
    return it->second;
  }

  double loss(const std::string& name) const { return component(name).insertion_loss; }

  /// Dotted field paths that were absent from the source file and filled in
  /// from the shipped defaults.
  const std::vector<std::string>& defaulted() const noexcept { return defaulted_; }

  bool is_defaulted(const std::string& path) const {
    return std::find(defaulted_.begin(), defaulted_.end(), path) != defaulted_.end();
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = kCatalogSchemaVersion;
    for (const auto& name : component_names()) {
      const auto& c = data_.components.at(name);
      nlohmann::ordered_json cj;
      cj["insertion_loss"] = c.insertion_loss;
      if (c.area_width) cj["area_width"] = *c.area_width;
      if (c.area_height) cj["area_height"] = *c.area_height;
      if (c.static_power) cj["static_power"] = *c.static_power;
      if (!c.notes.empty()) cj["notes"] = c.notes;
      j[name] = cj;
    }
    const auto& d = data_;
    j["laser"] = {{"channel_power", d.laser.channel_power},
                  {"channels_per_comb", d.laser.channels_per_comb},
                  {"wpe", d.laser.wpe}};
    j["pd"] = {{"responsivity", d.pd.responsivity}, {"dark_current", d.pd.dark_current},
               {"bandwidth", d.pd.bandwidth},       {"sensitivity", d.pd.sensitivity},
               {"max_ports", d.pd.max_ports},       {"tia_power", d.pd.tia_power}};
    nlohmann::ordered_json eps;
    for (const auto& [bits, fj] : d.modulator.energy_per_switch) eps[std::to_string(bits)] = fj;
    j["modulator"] = {{"extinction_ratio", d.modulator.extinction_ratio},
                      {"energy_per_switch", eps},
                      {"max_rate", d.modulator.max_rate}};
    j["pcm"] = {{"program_energy_optical", d.pcm.program_energy_optical},
                {"erase_energy_optical", d.pcm.erase_energy_optical},
                {"program_time", d.pcm.program_time},
                {"erase_time", d.pcm.erase_time},
                {"stabilize_program", d.pcm.stabilize_program},
                {"stabilize_erase", d.pcm.stabilize_erase},
                {"levels_bits", d.pcm.levels_bits},
                {"program_std", d.pcm.program_std}};
    j["converters"] = {{"p0_dac", d.converters.p0_dac}, {"p0_adc", d.converters.p0_adc}};
    j["vcsel"] = {{"efficiency", d.vcsel.efficiency}};
    j["soa"] = {{"gain", d.soa.gain},
                {"drive_power", d.soa.drive_power},
                {"facet_loss", d.soa.facet_loss}};
    j["thermo_optic"] = {{"hold_power", d.thermo_optic.hold_power}};
    const auto& l = d.layout;
    j["layout"] = {{"comb_strip", l.comb_strip},
                   {"awg_strip", l.awg_strip},
                   {"voa_strip", l.voa_strip},
                   {"mzm_strip", l.mzm_strip},
                   {"group_pitch", l.group_pitch},
                   {"cell_width", l.cell_width},
                   {"cell_height", l.cell_height},
                   {"compact_cell_width", l.compact_cell_width},
                   {"pd_strip", l.pd_strip},
                   {"reticle_width", l.reticle_width},
                   {"reticle_height", l.reticle_height}};
    j["calibration"] = {{"voa_equalization", d.calibration.voa_equalization},
                        {"weight_refresh_rate", d.calibration.weight_refresh_rate}};
    return j;
  }

  /// Stable 64-bit FNV-1a digest of the canonical JSON form, as 16 hex digits.
  std::string hash() const {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << detail::fnv1a64(to_json().dump());
    return os.str();
  }

  static DeviceCatalog from_json(const nlohmann::json& j) {
    using detail::section_reader;
    if (!j.is_object()) throw validation_error("catalog", "top level must be an object");
    auto sv = j.find("schema_version");
    if (sv == j.end()) throw validation_error("schema_version", "required field missing");
    if (!sv->is_number_integer() || sv->get<int>() != kCatalogSchemaVersion)
      throw validation_error("schema_version", "unsupported schema version");

    CatalogData d = CatalogData::defaults();
    std::vector<std::string> defaulted;
    std::set<std::string> known{"schema_version", "laser",        "pd",     "modulator",
                                "pcm",            "converters",   "vcsel",  "soa",
                                "thermo_optic",   "layout",       "calibration"};
    for (const auto& n : component_names()) known.insert(n);
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!known.count(it.key())) throw validation_error(it.key(), "unknown component");

    auto section = [&](const char* key) -> const nlohmann::json* {
      auto it = j.find(key);
      return it == j.end() ? nullptr : &*it;
    };

    for (const auto& name : component_names()) {
      auto& c = d.components.at(name);
      const nlohmann::json* obj = section(name.c_str());
      if (!obj) {
        defaulted.push_back(name + ".insertion_loss");
        continue;
      }
      section_reader r(obj, name, defaulted);
      c.insertion_loss = r.number("insertion_loss", c.insertion_loss);
      c.area_width = r.optional_number("area_width", c.area_width);
      c.area_height = r.optional_number("area_height", c.area_height);
      c.static_power = r.optional_number("static_power", c.static_power);
      c.notes = r.text("notes", c.notes);
      r.reject_unknown();
    }

    {
      section_reader r(section("laser"), "laser", defaulted);
      d.laser.channel_power = r.number("channel_power", d.laser.channel_power);
      d.laser.channels_per_comb = r.integer("channels_per_comb", d.laser.channels_per_comb);
      d.laser.wpe = r.number("wpe", d.laser.wpe);
      r.reject_unknown();
    }
    {
      section_reader r(section("pd"), "pd", defaulted);
      d.pd.responsivity = r.number("responsivity", d.pd.responsivity);
      d.pd.dark_current = r.number("dark_current", d.pd.dark_current);
      d.pd.bandwidth = r.number("bandwidth", d.pd.bandwidth);
      d.pd.sensitivity = r.number("sensitivity", d.pd.sensitivity);
      d.pd.max_ports = r.integer("max_ports", d.pd.max_ports);
      d.pd.tia_power = r.number("tia_power", d.pd.tia_power);
      r.reject_unknown();
    }
    {
      section_reader r(section("modulator"), "modulator", defaulted);
      d.modulator.extinction_ratio = r.number("extinction_ratio", d.modulator.extinction_ratio);
      if (const nlohmann::json* eps = r.raw("energy_per_switch")) {
        if (!eps->is_object()) throw validation_error("modulator.energy_per_switch", "expected an object");
        d.modulator.energy_per_switch.clear();
        for (auto it = eps->begin(); it != eps->end(); ++it) {
          int bits = 0;
          try {
            std::size_t used = 0;
            bits = std::stoi(it.key(), &used);
            if (used != it.key().size()) throw std::invalid_argument(it.key());
          } catch (const std::exception&) {
            throw validation_error("modulator.energy_per_switch." + it.key(), "key must be a bit width");
          }
          if (!it->is_number())
            throw validation_error("modulator.energy_per_switch." + it.key(), "expected a number");
          d.modulator.energy_per_switch[bits] = it->get<double>();
        }
      } else {
        defaulted.push_back("modulator.energy_per_switch");
      }
      d.modulator.max_rate = r.number("max_rate", d.modulator.max_rate);
      r.reject_unknown();
    }
    {
      section_reader r(section("pcm"), "pcm", defaulted);
      auto& p = d.pcm;
      p.program_energy_optical = r.number("program_energy_optical", p.program_energy_optical);
      p.erase_energy_optical = r.number("erase_energy_optical", p.erase_energy_optical);
      p.program_time = r.number("program_time", p.program_time);
      p.erase_time = r.number("erase_time", p.erase_time);
      p.stabilize_program = r.number("stabilize_program", p.stabilize_program);
      p.stabilize_erase = r.number("stabilize_erase", p.stabilize_erase);
      p.levels_bits = r.integer("levels_bits", p.levels_bits);
      p.program_std = r.number("program_std", p.program_std);
      r.reject_unknown();
    }
    {
      section_reader r(section("converters"), "converters", defaulted);
      d.converters.p0_dac = r.number("p0_dac", d.converters.p0_dac);
      d.converters.p0_adc = r.number("p0_adc", d.converters.p0_adc);
      r.reject_unknown();
    }
    {
      section_reader r(section("vcsel"), "vcsel", defaulted);
      d.vcsel.efficiency = r.number("efficiency", d.vcsel.efficiency);
      r.reject_unknown();
    }
    {
      section_reader r(section("soa"), "soa", defaulted);
      d.soa.gain = r.number("gain", d.soa.gain);
      d.soa.drive_power = r.number("drive_power", d.soa.drive_power);
      d.soa.facet_loss = r.number("facet_loss", d.soa.facet_loss);
      r.reject_unknown();
    }
    {
      section_reader r(section("thermo_optic"), "thermo_optic", defaulted);
      d.thermo_optic.hold_power = r.number("hold_power", d.thermo_optic.hold_power);
      r.reject_unknown();
    }
    {
      section_reader r(section("layout"), "layout", defaulted);
      auto& l = d.layout;
      l.comb_strip = r.number("comb_strip", l.comb_strip);
      l.awg_strip = r.number("awg_strip", l.awg_strip);
      l.voa_strip = r.number("voa_strip", l.voa_strip);
      l.mzm_strip = r.number("mzm_strip", l.mzm_strip);
      l.group_pitch = r.number("group_pitch", l.group_pitch);
      l.cell_width = r.number("cell_width", l.cell_width);
      l.cell_height = r.number("cell_height", l.cell_height);
      l.compact_cell_width = r.number("compact_cell_width", l.compact_cell_width);
      l.pd_strip = r.number("pd_strip", l.pd_strip);
      l.reticle_width = r.number("reticle_width", l.reticle_width);
      l.reticle_height = r.number("reticle_height", l.reticle_height);
      r.reject_unknown();
    }
    {
      section_reader r(section("calibration"), "calibration", defaulted);
      auto& c = d.calibration;
      c.voa_equalization = r.number("voa_equalization", c.voa_equalization);
      c.weight_refresh_rate = r.number("weight_refresh_rate", c.weight_refresh_rate);
      r.reject_unknown();
    }
    return DeviceCatalog(std::move(d), std::move(defaulted));
  }

 private:
  static void validate(const CatalogData& d) {
    using detail::check;
    for (const auto& name : component_names())
      if (!d.components.count(name)) throw validation_error(name, "component missing");
    for (const auto& [name, c] : d.components) {
      check(std::isfinite(c.insertion_loss) && c.insertion_loss >= 0.0, name + ".insertion_loss",
            "must be finite and >= 0");
      if (c.area_width) check(*c.area_width > 0.0, name + ".area_width", "must be > 0");
      if (c.area_height) check(*c.area_height > 0.0, name + ".area_height", "must be > 0");
      if (c.static_power) check(*c.static_power >= 0.0, name + ".static_power", "must be >= 0");
    }
    check(d.laser.channels_per_comb >= 1, "laser.channels_per_comb", "must be >= 1");
    check(d.laser.wpe > 0.0 && d.laser.wpe <= 1.0, "laser.wpe", "must be in (0, 1]");
    check(d.pd.responsivity > 0.0 && d.pd.responsivity <= 1.2, "pd.responsivity",
          "must be in (0, 1.2]");
    check(d.pd.dark_current >= 0.0, "pd.dark_current", "must be >= 0");
    check(d.pd.bandwidth > 0.0, "pd.bandwidth", "must be > 0");
    check(d.pd.sensitivity < 0.0, "pd.sensitivity", "must be < 0 dBm");
    check(d.pd.max_ports >= 1, "pd.max_ports", "must be >= 1");
    check(d.pd.tia_power >= 0.0, "pd.tia_power", "must be >= 0");
    check(d.modulator.extinction_ratio > 0.0, "modulator.extinction_ratio", "must be > 0");
    check(d.modulator.max_rate > 0.0, "modulator.max_rate", "must be > 0");
    for (const auto& [bits, fj] : d.modulator.energy_per_switch) {
      check(bits >= 1, "modulator.energy_per_switch", "bit width must be >= 1");
      check(fj >= 0.0, "modulator.energy_per_switch", "energy must be >= 0");
    }
    const auto& p = d.pcm;
    check(p.program_energy_optical >= 0.0, "pcm.program_energy_optical", "must be >= 0");
    check(p.erase_energy_optical >= 0.0, "pcm.erase_energy_optical", "must be >= 0");
    check(p.program_time > 0.0, "pcm.program_time", "must be > 0");
    check(p.erase_time > 0.0, "pcm.erase_time", "must be > 0");
    check(p.stabilize_program >= 0.0, "pcm.stabilize_program", "must be >= 0");
    check(p.stabilize_erase >= 0.0, "pcm.stabilize_erase", "must be >= 0");
    check(p.levels_bits == 5 || p.levels_bits == 7, "pcm.levels_bits", "must be 5 or 7");
    check(p.program_std >= 0.0, "pcm.program_std", "must be >= 0");
    check(d.converters.p0_dac > 0.0, "converters.p0_dac", "must be > 0");
    check(d.converters.p0_adc > 0.0, "converters.p0_adc", "must be > 0");
    check(d.vcsel.efficiency > 0.0 && d.vcsel.efficiency <= 1.0, "vcsel.efficiency",
          "must be in (0, 1]");
    check(d.soa.drive_power >= 0.0, "soa.drive_power", "must be >= 0");
    check(d.soa.facet_loss >= 0.0, "soa.facet_loss", "must be >= 0");
    check(d.soa.gain >= 0.0, "soa.gain", "must be >= 0");
    check(d.thermo_optic.hold_power >= 0.0, "thermo_optic.hold_power", "must be >= 0");
    const auto& l = d.layout;
    for (auto [v, n] : {std::pair{l.comb_strip, "comb_strip"}, {l.awg_strip, "awg_strip"},
                        {l.voa_strip, "voa_strip"}, {l.mzm_strip, "mzm_strip"},
                        {l.group_pitch, "group_pitch"}, {l.cell_width, "cell_width"},
                        {l.cell_height, "cell_height"}, {l.compact_cell_width, "compact_cell_width"},
                        {l.pd_strip, "pd_strip"}, {l.reticle_width, "reticle_width"},
                        {l.reticle_height, "reticle_height"}})
      check(v > 0.0, std::string("layout.") + n, "must be > 0");
    check(d.calibration.voa_equalization >= 0.0, "calibration.voa_equalization", "must be >= 0");
    check(d.calibration.weight_refresh_rate >= 0.0, "calibration.weight_refresh_rate",
          "must be >= 0");
  }

  CatalogData data_;
  std::vector<std::string> defaulted_;
};

inline DeviceCatalog parse_catalog(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error("catalog", std::string("parse failure: ") + e.what());
  }
  return DeviceCatalog::from_json(j);
}

inline DeviceCatalog load_catalog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("catalog", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str());
}

/// Solves I^2 = snr * 2q(I + I_d)B for the photocurrent and returns the
/// optical power (W) that produces it.
inline double pd_min_power(const PdSpec& pd, double snr_db) {
  detail::require_finite(snr_db, "snr_db");
  if (snr_db < 0.0) throw validation_error("snr_db", "must be >= 0");
  const double a = db_to_linear(snr_db) * 2.0 * kElementaryCharge * pd.bandwidth;
  const double disc = a * a + 4.0 * a * pd.dark_current;
  const double i_ph = 0.5 * (a + std::sqrt(disc));
  if (!(i_ph > 0.0)) throw error("pd_min_power: no positive photocurrent root");
  return i_ph / pd.responsivity;
}

/// Quantization-noise-limited SNR (dB) of an ideal N-bit converter.
inline double snr_required(int bits) {
  if (bits < 1) throw validation_error("bits", "must be >= 1");
  return 6.02 * bits + 1.76;
}

}  // namespace ptc
