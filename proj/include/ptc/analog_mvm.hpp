#pragma once

// Functional model of the analog datapath: uniform quantization, PCM level
// discretization, signal-proportional Gaussian noise and hierarchical
// (wavelength bus -> multi-port PD -> digital) accumulation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "catalog.hpp"
#include "power_model.hpp"
#include "rng.hpp"

namespace ptc {

struct QuantSpec {
  int bits = 8;
  double lo = 0.0;
  double hi = 1.0;

  std::int64_t levels() const { return std::int64_t(1) << bits; }
  double step() const { return (hi - lo) / double(levels() - 1); }

  void validate() const {
    if (bits < 1 || bits > 30) throw validation_error("quant.bits", "must be in [1, 30]");
    if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo))
      throw validation_error("quant.range", "requires finite lo < hi");
  }
};

struct Quantized {
  std::int64_t level = 0;
  double value = 0.0;
};

/// Nearest of 2^bits levels spaced uniformly with endpoints at lo and hi.
/// Out-of-range inputs clamp; ties round half away from zero.
inline Quantized quantize(double x, const QuantSpec& q) {
  q.validate();
  detail::require_finite(x, "x");
  const std::int64_t top = q.levels() - 1;
  const double t = (x - q.lo) * double(top) / (q.hi - q.lo);
  std::int64_t level = t <= 0.0 ? 0 : t >= double(top) ? top : std::int64_t(std::round(t));
  return {level, q.lo + double(level) * (q.hi - q.lo) / double(top)};
}

/// Signal-proportional noise: q + z * sigma * |q| for a standard normal z.
inline double inject_noise(double q_value, double sigma, double z) {
  if (sigma < 0.0) throw validation_error("sigma", "must be >= 0");
  return q_value + z * sigma * std::abs(q_value);
}

inline double inject_noise(double q_value, double sigma, const NoiseStream& stream, std::uint32_t index) {
  if (sigma == 0.0 || q_value == 0.0) return inject_noise(q_value, sigma, 0.0);
  return inject_noise(q_value, sigma, stream.normal(index));
}

struct NoiseSpec {
  double sigma_in = 0.0031;
  double sigma_w = 0.01;
  double sigma_out = 0.01;
  std::uint64_t seed = 0;

  void validate() const {
    if (sigma_in < 0.0) throw validation_error("noise.sigma_in", "must be >= 0");
    if (sigma_w < 0.0) throw validation_error("noise.sigma_w", "must be >= 0");
    if (sigma_out < 0.0) throw validation_error("noise.sigma_out", "must be >= 0");
  }

  static NoiseSpec none(std::uint64_t seed = 0) { return {0.0, 0.0, 0.0, seed}; }
};

/// Level 1: `group_size` wavelengths summed on one bus. Level 2: up to
/// `pd_fan_in` buses summed on one multi-port PD. Level 3: digital.
struct AccumulationTree {
  int group_size = 9;
  int pd_fan_in = 16;

  int rows_per_pd() const { return group_size * pd_fan_in; }

  void validate(const PdSpec* pd = nullptr) const {
    if (group_size < 1) throw validation_error("tree.group_size", "must be >= 1");
    if (pd_fan_in < 1) throw validation_error("tree.pd_fan_in", "must be >= 1");
    if (pd && pd_fan_in > pd->max_ports)
      throw validation_error("tree.pd_fan_in", "exceeds PD max_ports");
  }
};

/// Sums `products` hierarchically and returns one analog sum per PD.
inline std::vector<double> accumulate_pd_sums(std::span<const double> products, const AccumulationTree& tree) {
  tree.validate();
  std::vector<double> pds;
  const std::size_t per_pd = std::size_t(tree.rows_per_pd());
  for (std::size_t start = 0; start < products.size(); start += per_pd) {
    const std::size_t end = std::min(products.size(), start + per_pd);
    double pd = 0.0;
    for (std::size_t g = start; g < end; g += std::size_t(tree.group_size)) {
      double bus = 0.0;
      const std::size_t gend = std::min(end, g + std::size_t(tree.group_size));
      for (std::size_t i = g; i < gend; ++i) bus += products[i];
      pd += bus;
    }
    pds.push_back(pd);
  }
  return pds;
}

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(std::size_t(r) * c, fill) {}

  double& operator()(int r, int c) { return data[std::size_t(r) * cols + c]; }
  double operator()(int r, int c) const { return data[std::size_t(r) * cols + c]; }
};

enum class SignedMode {
  non_negative,     // weights already non-negative transmissions
  differential_pair // w = w+ - w- on two physical columns, subtracted digitally
};

struct MvmConfig {
  QuantSpec input{6, 0.0, 1.0};
  QuantSpec weight{7, -1.0, 1.0};
  SignedMode mode = SignedMode::differential_pair;
  int out_bits = 8;             // 0: ideal readout, no ADC quantization
  double out_full_scale = 0.0;  // ADC full scale in level units; 0: largest noise-free PD sum
  NoiseSpec noise;
  AccumulationTree tree;
  std::uint32_t layer = 0;
  std::uint32_t tile = 0;    // keys weight noise
  std::uint32_t sample = 0;  // keys input and output noise
  std::uint32_t batch = 0;   // keys input and output noise across inputs

  std::uint64_t sample_seed() const { return noise.seed + 0x9E3779B97F4A7C15ULL * batch; }

  static MvmConfig from_precision(const PrecisionSpec& p) {
    MvmConfig c;
    c.input.bits = p.b_in;
    c.weight.bits = p.b_w;
    c.out_bits = p.b_out;
    return c;
  }
};

/// Weights after level discretization and per-cell variability, laid out on
/// physical columns (two per logical column in differential mode).
struct ProgrammedWeights {
  int rows = 0;
  int logical_cols = 0;
  int physical_cols = 0;
  SignedMode mode = SignedMode::differential_pair;
  double step = 1.0;                  // real units per level
  std::vector<std::int64_t> levels;   // rows x physical_cols
  std::vector<double> effective;      // noisy levels, rows x physical_cols

  std::int64_t level(int r, int pc) const { return levels[std::size_t(r) * physical_cols + pc]; }
  double value(int r, int pc) const { return effective[std::size_t(r) * physical_cols + pc]; }
};

inline ProgrammedWeights prepare_weights(const Matrix& w, const MvmConfig& cfg) {
  cfg.weight.validate();
  cfg.noise.validate();
  ProgrammedWeights pw;
  pw.rows = w.rows;
  pw.logical_cols = w.cols;
  pw.mode = cfg.mode;
  QuantSpec grid = cfg.weight;
  if (cfg.mode == SignedMode::non_negative) {
    if (cfg.weight.lo != 0.0)
      throw validation_error("weight.range", "non-negative mode needs lo = 0");
    pw.physical_cols = w.cols;
  } else {
    grid.lo = 0.0;
    grid.hi = std::max(std::abs(cfg.weight.lo), std::abs(cfg.weight.hi));
    pw.physical_cols = 2 * w.cols;
  }
  pw.step = grid.step();
  pw.levels.assign(std::size_t(w.rows) * pw.physical_cols, 0);
  pw.effective.assign(pw.levels.size(), 0.0);
  const NoiseStream stream(cfg.noise.seed, cfg.layer, cfg.tile, NoiseChannel::weight);
  for (int r = 0; r < w.rows; ++r) {
    for (int c = 0; c < w.cols; ++c) {
      const double v = w(r, c);
      if (cfg.mode == SignedMode::non_negative) {
        pw.levels[std::size_t(r) * pw.physical_cols + c] = quantize(v, grid).level;
      } else {
        pw.levels[std::size_t(r) * pw.physical_cols + 2 * c] = quantize(std::max(v, 0.0), grid).level;
        pw.levels[std::size_t(r) * pw.physical_cols + 2 * c + 1] = quantize(std::max(-v, 0.0), grid).level;
      }
    }
  }
  for (std::size_t i = 0; i < pw.levels.size(); ++i)
    pw.effective[i] = inject_noise(double(pw.levels[i]), cfg.noise.sigma_w, stream, std::uint32_t(i));
  return pw;
}

struct QuantizedInput {
  std::vector<std::int64_t> levels;
  std::vector<double> effective;  // noisy levels
  double step = 1.0;
};

inline QuantizedInput prepare_input(std::span<const double> x, const MvmConfig& cfg) {
  cfg.input.validate();
  if (cfg.input.lo != 0.0)
    throw validation_error("input.range", "optical intensities need lo = 0");
  QuantizedInput qi;
  qi.step = cfg.input.step();
  const NoiseStream stream(cfg.sample_seed(), cfg.layer, cfg.sample, NoiseChannel::input);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto q = quantize(x[i], cfg.input);
    qi.levels.push_back(q.level);
    qi.effective.push_back(inject_noise(double(q.level), cfg.noise.sigma_in, stream, std::uint32_t(i)));
  }
  return qi;
}

/// Largest noise-free PD sum (level units) this input produces on these weights.
inline double noise_free_pd_max(const QuantizedInput& qi, const ProgrammedWeights& pw,
                                const AccumulationTree& tree) {
  std::int64_t best = 0;
  const int per_pd = tree.rows_per_pd();
  for (int pc = 0; pc < pw.physical_cols; ++pc) {
    for (int start = 0; start < pw.rows; start += per_pd) {
      std::int64_t s = 0;
      for (int r = start; r < std::min(pw.rows, start + per_pd); ++r) s += qi.levels[r] * pw.level(r, pc);
      best = std::max(best, s);
    }
  }
  return double(best);
}

struct MvmResult {
  std::vector<double> y;            // real-valued outputs, one per logical column
  std::vector<double> accumulated;  // digital sum in level units (x-level * w-level)
  std::vector<std::vector<double>> pd_sums;         // [physical col][pd], noisy, pre-ADC
  std::vector<std::vector<std::int64_t>> adc_codes; // [physical col][pd]; empty for ideal readout
  double full_scale = 0.0;
};

/// y = W^T x_eq with per-entry w_eq. Output noise is added to each PD
/// photocurrent before its ADC.
inline MvmResult noisy_mvm(const QuantizedInput& qi, const ProgrammedWeights& pw, const MvmConfig& cfg) {
  cfg.tree.validate();
  if (int(qi.levels.size()) != pw.rows)
    throw validation_error("mvm", "dimension mismatch: x has " + std::to_string(qi.levels.size()) +
                                      " entries, W has " + std::to_string(pw.rows) + " rows");
  if (cfg.out_bits < 0 || cfg.out_bits > 30) throw validation_error("out_bits", "must be in [0, 30]");

  MvmResult res;
  res.full_scale = cfg.out_full_scale > 0.0 ? cfg.out_full_scale : noise_free_pd_max(qi, pw, cfg.tree);
  const NoiseStream out_noise(cfg.sample_seed(), cfg.layer, cfg.sample, NoiseChannel::output);
  const int n_pd = (pw.rows + cfg.tree.rows_per_pd() - 1) / cfg.tree.rows_per_pd();
  std::vector<double> col_sum(pw.physical_cols, 0.0);
  std::vector<double> products(pw.rows);
  res.pd_sums.resize(pw.physical_cols);
  if (cfg.out_bits > 0) res.adc_codes.resize(pw.physical_cols);

  for (int pc = 0; pc < pw.physical_cols; ++pc) {
    for (int r = 0; r < pw.rows; ++r) products[r] = qi.effective[r] * pw.value(r, pc);
    auto pds = accumulate_pd_sums(products, cfg.tree);
    for (int k = 0; k < n_pd; ++k) {
      double s = inject_noise(pds[k], cfg.noise.sigma_out, out_noise,
                              std::uint32_t(k * pw.physical_cols + pc));
      res.pd_sums[pc].push_back(s);
      double readout = s;
      if (cfg.out_bits > 0) {
        std::int64_t code = 0;
        if (res.full_scale > 0.0) code = quantize(s, QuantSpec{cfg.out_bits, 0.0, res.full_scale}).level;
        res.adc_codes[pc].push_back(code);
        readout = res.full_scale > 0.0
                      ? double(code) * res.full_scale / double((std::int64_t(1) << cfg.out_bits) - 1)
                      : 0.0;
      }
      col_sum[pc] += readout;
    }
  }

  const double scale = qi.step * pw.step;
  for (int c = 0; c < pw.logical_cols; ++c) {
    const double acc = pw.mode == SignedMode::non_negative ? col_sum[c] : col_sum[2 * c] - col_sum[2 * c + 1];
    res.accumulated.push_back(acc);
    res.y.push_back(acc * scale);
  }
  return res;
}

inline MvmResult noisy_mvm(std::span<const double> x, const Matrix& w, const MvmConfig& cfg) {
  if (int(x.size()) != w.rows)
    throw validation_error("mvm", "dimension mismatch: x has " + std::to_string(x.size()) +
                                      " entries, W has " + std::to_string(w.rows) + " rows");
  return noisy_mvm(prepare_input(x, cfg), prepare_weights(w, cfg), cfg);
}

// ---------------------------------------------------------------------------
// PCM programming

class refresh_violation : public error {
 public:
  using error::error;
};

struct PcmEvent {
  std::int64_t cell = 0;
  double t_ns = 0.0;
  double program_pj = 0.0;  // optical
  double erase_pj = 0.0;    // optical
};

struct ProgramResult {
  std::vector<std::int64_t> levels;
  std::vector<double> transmission;  // realized, in [0, 1]
  std::vector<PcmEvent> events;

  double optical_energy() const {
    double e = 0.0;
    for (const auto& ev : events) e += ev.program_pj + ev.erase_pj;
    return e;
  }

  /// Electrical VCSEL energy (pJ) through the programming grating coupler.
  double electrical_energy(double l_gc_db, double eta_vcsel) const {
    return vcsel_program_energy(optical_energy(), l_gc_db, eta_vcsel);
  }
};

/// A PCM weight bank that enforces the erase/program cycle time per cell.
class PcmArray {
 public:
  PcmArray(int rows, int cols, PcmSpec spec)
      : rows_(rows), cols_(cols), spec_(spec),
        last_ns_(std::size_t(rows) * cols, -std::numeric_limits<double>::infinity()) {
    if (rows < 1 || cols < 1) throw validation_error("pcm_array", "dimensions must be >= 1");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const PcmSpec& spec() const { return spec_; }

  /// Programs every cell at time `t_ns` with transmissions in [0, 1].
  ProgramResult program(const Matrix& weights, double t_ns, std::uint64_t seed, std::uint32_t tile = 0) {
    if (weights.rows != rows_ || weights.cols != cols_)
      throw validation_error("pcm_program", "weight matrix does not match array dimensions");
    for (double w : weights.data)
      if (!(w >= 0.0 && w <= 1.0)) throw validation_error("pcm_program", "weights must lie in [0, 1]");
    for (std::size_t i = 0; i < last_ns_.size(); ++i) check_interval(std::int64_t(i), t_ns);

    ProgramResult out;
    const QuantSpec grid{spec_.levels_bits, 0.0, 1.0};
    const NoiseStream stream(seed, 0, tile, NoiseChannel::program);
    for (std::size_t i = 0; i < weights.data.size(); ++i) {
      const auto q = quantize(weights.data[i], grid);
      const double t = std::clamp(inject_noise(q.value, spec_.program_std, stream, std::uint32_t(i)), 0.0, 1.0);
      out.levels.push_back(q.level);
      out.transmission.push_back(t);
      out.events.push_back({std::int64_t(i), t_ns, spec_.program_energy_optical, spec_.erase_energy_optical});
      last_ns_[i] = t_ns;
    }
    return out;
  }

  /// Reprograms a single cell; same refresh-rate rule as `program`.
  PcmEvent program_cell(int r, int c, double t_ns) {
    const std::int64_t i = std::int64_t(r) * cols_ + c;
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw validation_error("pcm_program", "cell out of range");
    check_interval(i, t_ns);
    last_ns_[std::size_t(i)] = t_ns;
    return {i, t_ns, spec_.program_energy_optical, spec_.erase_energy_optical};
  }

 private:
  void check_interval(std::int64_t cell, double t_ns) const {
    const double dt = t_ns - last_ns_[std::size_t(cell)];
    if (dt < spec_.cycle_time())
      throw refresh_violation("cell " + std::to_string(cell) + " reprogrammed after " + std::to_string(dt) +
                              " ns; minimum cycle is " + std::to_string(spec_.cycle_time()) + " ns");
  }

  int rows_;
  int cols_;
  PcmSpec spec_;
  std::vector<double> last_ns_;
};

// ---------------------------------------------------------------------------
// Convolution lowering

struct Tensor3 {
  int c = 0, h = 0, w = 0;
  std::vector<double> data;  // [c][h][w]

  Tensor3() = default;
  Tensor3(int c_, int h_, int w_, double fill = 0.0) : c(c_), h(h_), w(w_), data(std::size_t(c_) * h_ * w_, fill) {}

  double& at(int ci, int y, int x) { return data[(std::size_t(ci) * h + y) * w + x]; }
  double at(int ci, int y, int x) const { return data[(std::size_t(ci) * h + y) * w + x]; }
};

struct ConvShape {
  int c_out = 1;
  int kernel = 3;
  int stride = 1;
  int pad = 1;

  int out_dim(int in) const { return (in + 2 * pad - kernel) / stride + 1; }
};

/// Receptive field at output (oy, ox), flattened as row = c*k*k + ky*k + kx so
/// each 9-wavelength group carries the taps of one input channel.
inline std::vector<double> lower_patch(const Tensor3& in, const ConvShape& s, int oy, int ox) {
  const int k = s.kernel;
  std::vector<double> x(std::size_t(in.c) * k * k, 0.0);
  for (int c = 0; c < in.c; ++c)
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        const int y = oy * s.stride + ky - s.pad, xx = ox * s.stride + kx - s.pad;
        if (y >= 0 && y < in.h && xx >= 0 && xx < in.w) x[(std::size_t(c) * k + ky) * k + kx] = in.at(c, y, xx);
      }
  return x;
}

/// Kernels laid out [c_out][c_in][k][k] become a (c_in*k*k) x c_out matrix,
/// one column per output channel.
inline Matrix conv_weight_matrix(std::span<const double> kernels, int c_out, int c_in, int k) {
  if (kernels.size() != std::size_t(c_out) * c_in * k * k)
    throw validation_error("kernels", "size does not match c_out * c_in * k * k");
  Matrix m(c_in * k * k, c_out);
  for (int o = 0; o < c_out; ++o)
    for (int r = 0; r < c_in * k * k; ++r) m(r, o) = kernels[std::size_t(o) * c_in * k * k + r];
  return m;
}

/// Executes a convolution as one lowered MVM per output position. Positions
/// are distributed over `threads` workers; results do not depend on it.
inline Tensor3 lowered_conv(const Tensor3& in, std::span<const double> kernels, const ConvShape& s,
                            MvmConfig cfg, int threads = 1) {
  const Matrix wm = conv_weight_matrix(kernels, s.c_out, in.c, s.kernel);
  const ProgrammedWeights pw = prepare_weights(wm, cfg);
  const int oh = s.out_dim(in.h), ow = s.out_dim(in.w);
  if (oh < 1 || ow < 1) throw validation_error("conv", "output is empty");
  Tensor3 out(s.c_out, oh, ow);

  if (cfg.out_bits > 0 && cfg.out_full_scale <= 0.0) {
    double fs = 0.0;
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox)
        fs = std::max(fs, noise_free_pd_max(prepare_input(lower_patch(in, s, oy, ox), cfg), pw, cfg.tree));
    cfg.out_full_scale = fs > 0.0 ? fs : 1.0;
  }

  auto work = [&](int first, int stride_n) {
    for (int p = first; p < oh * ow; p += stride_n) {
      MvmConfig local = cfg;
      local.sample = std::uint32_t(p);
      const auto x = lower_patch(in, s, p / ow, p % ow);
      const auto r = noisy_mvm(prepare_input(x, local), pw, local);
      for (int o = 0; o < s.c_out; ++o) out.at(o, p / ow, p % ow) = r.y[o];
    }
  };
  threads = std::max(1, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return out;
}

}  // namespace ptc
