#pragma once

// Convolution lowering, weight-stationary tile scheduling and the
// latency/throughput/energy roll-up.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalog.hpp"
#include "geometry.hpp"
#include "power_model.hpp"

namespace ptc {

enum class LayerKind { conv, unmapped };

struct ConvLayerSpec {
  std::string name;
  LayerKind kind = LayerKind::conv;
  int c_in = 1;
  int c_out = 1;
  int kernel = 3;
  int h_out = 1;
  int w_out = 1;
  int stride = 1;

  void validate() const {
    if (kind == LayerKind::unmapped) return;
    auto pos = [&](int v, const char* f) {
      if (v < 1) throw validation_error(name + "." + f, "must be >= 1");
    };
    pos(c_in, "c_in");
    pos(c_out, "c_out");
    pos(h_out, "h_out");
    pos(w_out, "w_out");
    pos(stride, "stride");
    if (kernel != 1 && kernel != 3) throw validation_error(name + ".kernel", "unsupported kernel size");
  }
};

/// How 1x1 layers occupy the 9-wavelength groups.
enum class K1Mapping {
  packed,             // one input channel per row, every row used
  one_tap_per_group,  // one row per 9-wavelength group, 1/9 utilization
};

struct LoweredLayer {
  std::int64_t rows = 0;       // k^2 * c_in
  std::int64_t cols = 0;       // c_out
  std::int64_t positions = 0;  // h_out * w_out
  int rows_per_tile = 0;       // usable rows H'
  std::int64_t tiles_row = 0;
  std::int64_t tiles_col = 0;
  double utilization = 0.0;    // programmed cells / occupied tile cells
};

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

inline LoweredLayer lower_conv(const ConvLayerSpec& layer, const CoreGeometry& geom,
                               K1Mapping k1 = K1Mapping::packed) {
  layer.validate();
  geom.validate();
  if (layer.kind != LayerKind::conv) throw validation_error(layer.name, "layer is not a convolution");
  LoweredLayer l;
  l.rows = std::int64_t(layer.kernel) * layer.kernel * layer.c_in;
  l.cols = layer.c_out;
  l.positions = std::int64_t(layer.h_out) * layer.w_out;
  if (layer.kernel == 3) {
    if (geom.rows < geom.wavelengths_per_group)
      throw validation_error(layer.name, "3x3 kernel needs at least one full wavelength group");
    l.rows_per_tile = geom.rows;
  } else {
    l.rows_per_tile = k1 == K1Mapping::packed ? geom.rows : geom.groups();
  }
  l.tiles_row = ceil_div(l.rows, l.rows_per_tile);
  l.tiles_col = ceil_div(l.cols, geom.cols);
  const double occupied = double(l.tiles_row) * l.tiles_col * geom.cells();
  l.utilization = double(l.rows) * double(l.cols) / occupied;
  return l;
}

struct ScheduledLayer {
  std::string name;
  bool unmapped = false;
  LoweredLayer lowered;
  std::int64_t tile_loads = 0;
  std::int64_t stream_cycles = 0;
  std::int64_t programmed_cells = 0;
  std::int64_t macs = 0;
};

struct TileSchedule {
  CoreGeometry geometry;
  std::vector<ScheduledLayer> layers;
  double tile_load_time_ns = 0.0;

  std::int64_t tile_loads() const {
    std::int64_t n = 0;
    for (const auto& l : layers) n += l.tile_loads;
    return n;
  }
  std::int64_t stream_cycles() const {
    std::int64_t n = 0;
    for (const auto& l : layers) n += l.stream_cycles;
    return n;
  }
  std::int64_t programmed_cells() const {
    std::int64_t n = 0;
    for (const auto& l : layers) n += l.programmed_cells;
    return n;
  }
  std::int64_t macs() const {
    std::int64_t n = 0;
    for (const auto& l : layers) n += l.macs;
    return n;
  }
  std::vector<std::string> unmapped_layers() const {
    std::vector<std::string> out;
    for (const auto& l : layers)
      if (l.unmapped) out.push_back(l.name);
    return out;
  }
};

/// Weight-stationary: every (row-tile, col-tile) pair is programmed once per
/// inference (whole tile in parallel, one PCM cycle), then all output
/// positions stream through it at one vector per clock.
inline TileSchedule schedule(const std::vector<ConvLayerSpec>& workload, const CoreGeometry& geom,
                             const PcmSpec& pcm, K1Mapping k1 = K1Mapping::packed) {
  geom.validate();
  TileSchedule s{geom, {}, pcm.cycle_time()};
  for (const auto& layer : workload) {
    ScheduledLayer sl;
    sl.name = layer.name;
    if (layer.kind == LayerKind::unmapped) {
      sl.unmapped = true;
      s.layers.push_back(std::move(sl));
      continue;
    }
    sl.lowered = lower_conv(layer, geom, k1);
    const auto& l = sl.lowered;
    sl.tile_loads = l.tiles_row * l.tiles_col;
    sl.stream_cycles = sl.tile_loads * l.positions;
    sl.programmed_cells = l.rows * l.cols;
    sl.macs = l.rows * l.cols * l.positions;
    s.layers.push_back(std::move(sl));
  }
  return s;
}

/// 2 ops (multiply + add) per cell per clock, in TOPS.
inline double peak_tops(const CoreGeometry& geom, double f) {
  if (!(f > 0.0)) throw validation_error("frequency", "must be > 0");
  return 2.0 * double(geom.rows) * double(geom.cols) * f / 1e12;
}

struct PerfReport {
  double latency = 0.0;  // s per inference
  double fps = 0.0;
  double peak_tops = 0.0;
  double effective_tops = 0.0;
  double total_power = 0.0;  // W
  double tops_per_w = 0.0;
  double fps_per_w = 0.0;
  double energy_steady = 0.0;       // J, non-programming power x latency
  double energy_programming = 0.0;  // J, per-event PCM rewrites of this inference
  double energy_per_inference = 0.0;
  std::int64_t tile_loads = 0;
  std::int64_t programmed_cells = 0;
};

struct PerfOptions {
  bool allow_overclock = false;
};

inline PerfReport estimate_perf(const TileSchedule& sched, const PowerReport& power, double f,
                                const DeviceCatalog& cat, const PerfOptions& opts = {}) {
  if (!(f > 0.0)) throw validation_error("frequency", "must be > 0");
  if (!opts.allow_overclock && f > cat.modulator().max_rate)
    throw validation_error("frequency", "exceeds modulator max_rate (use allow_overclock)");
  bool any_mapped = false;
  for (const auto& l : sched.layers) any_mapped |= !l.unmapped;
  if (!any_mapped) throw validation_error("workload", "no mappable layers");

  PerfReport p;
  p.tile_loads = sched.tile_loads();
  p.programmed_cells = sched.programmed_cells();
  p.latency = double(p.tile_loads) * sched.tile_load_time_ns * 1e-9 + double(sched.stream_cycles()) / f;
  p.fps = 1.0 / p.latency;
  p.peak_tops = peak_tops(sched.geometry, f);
  p.effective_tops = 2.0 * double(sched.macs()) / p.latency / 1e12;
  p.total_power = power.total;
  p.tops_per_w = p.peak_tops / power.total;
  p.fps_per_w = p.fps / power.total;
  const double steady_w = power.total - power.watts(kPcmProgrammingLabel);
  p.energy_steady = steady_w * p.latency;
  p.energy_programming = double(p.programmed_cells) * pcm_cycle_energy(cat, power.precision.b_w) * 1e-12;
  p.energy_per_inference = p.energy_steady + p.energy_programming;
  return p;
}

/// ResNet-50 (v1.5, stride on the 3x3) layer shapes for a square input.
/// The 7x7 stem and the classifier are carried as unmapped layers.
inline std::vector<ConvLayerSpec> resnet50_workload(int input = 256) {
  std::vector<ConvLayerSpec> w;
  int s = input / 2;
  w.push_back({"conv1_7x7", LayerKind::unmapped, 3, 64, 7, s, s, 2});
  s /= 2;  // max pool
  int c_in = 64;
  struct Stage {
    int blocks, mid, stride;
  };
  int stage_no = 2;
  for (Stage st : {Stage{3, 64, 1}, Stage{4, 128, 2}, Stage{6, 256, 2}, Stage{3, 512, 2}}) {
    for (int b = 0; b < st.blocks; ++b) {
      const int stride = b == 0 ? st.stride : 1;
      const int so = s / stride;
      const std::string p = "conv" + std::to_string(stage_no) + "_" + std::to_string(b + 1) + "_";
      w.push_back({p + "a", LayerKind::conv, c_in, st.mid, 1, s, s, 1});
      w.push_back({p + "b", LayerKind::conv, st.mid, st.mid, 3, so, so, stride});
      w.push_back({p + "c", LayerKind::conv, st.mid, 4 * st.mid, 1, so, so, 1});
      if (b == 0) w.push_back({p + "proj", LayerKind::conv, c_in, 4 * st.mid, 1, so, so, stride});
      c_in = 4 * st.mid;
      s = so;
    }
    ++stage_no;
  }
  w.push_back({"fc", LayerKind::unmapped, 2048, 1000, 1, 1, 1, 1});
  return w;
}

inline nlohmann::ordered_json workload_to_json(const std::vector<ConvLayerSpec>& layers) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& l : layers) {
    j.push_back({{"name", l.name},
                 {"kind", l.kind == LayerKind::conv ? "conv" : "unmapped"},
                 {"c_in", l.c_in},
                 {"c_out", l.c_out},
                 {"kernel", l.kernel},
                 {"h_out", l.h_out},
                 {"w_out", l.w_out},
                 {"stride", l.stride}});
  }
  return j;
}

inline std::vector<ConvLayerSpec> workload_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw validation_error("workload", "expected a JSON list of layers");
  std::vector<ConvLayerSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string at = "workload[" + std::to_string(i) + "]";
    if (!e.is_object()) throw validation_error(at, "expected an object");
    ConvLayerSpec l;
    l.name = e.value("name", at);
    const std::string kind = e.value("kind", std::string("conv"));
    if (kind == "conv") l.kind = LayerKind::conv;
    else if (kind == "unmapped") l.kind = LayerKind::unmapped;
    else throw validation_error(at + ".kind", "expected conv or unmapped");
    auto get = [&](const char* k, int def) {
      auto it = e.find(k);
      if (it == e.end()) {
        if (l.kind == LayerKind::conv && std::string(k) != "stride")
          throw validation_error(at + "." + k, "required field missing");
        return def;
      }
      if (!it->is_number_integer()) throw validation_error(at + "." + k, "expected an integer");
      return it->get<int>();
    };
    l.c_in = get("c_in", 1);
    l.c_out = get("c_out", 1);
    l.kernel = get("kernel", 1);
    l.h_out = get("h_out", 1);
    l.w_out = get("w_out", 1);
    l.stride = get("stride", 1);
    l.validate();
    out.push_back(std::move(l));
  }
  if (out.empty()) throw validation_error("workload", "empty workload");
  return out;
}

inline std::vector<ConvLayerSpec> load_workload(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("workload", "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error("workload", std::string("parse failure: ") + e.what());
  }
  return workload_from_json(j);
}

}  // namespace ptc
