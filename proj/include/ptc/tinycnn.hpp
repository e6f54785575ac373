#pragma once

// A two-layer matched-filter CNN and a synthetic oriented-bar dataset, used to
// compare float inference with the quantized, noise-injected photonic path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "analog_mvm.hpp"

namespace ptc::tinycnn {

inline constexpr int kImageSize = 8;
inline constexpr int kClasses = 4;  // horizontal, vertical, diagonal, anti-diagonal

struct Sample {
  Tensor3 image;
  int label = 0;
};

inline std::vector<Sample> make_dataset(int n, std::uint64_t seed) {
  const NoiseStream rng(seed, 0, 0, NoiseChannel::data);
  std::uint32_t idx = 0;
  auto u = [&] { return rng.uniform(idx++); };
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) {
    Sample s{Tensor3(1, kImageSize, kImageSize), i % kClasses};
    for (double& v : s.image.data) v = 0.35 * u();
    const double amp = 0.7 + 0.3 * u();
    const int off = int(u() * (kImageSize - 2)) + 1;
    for (int t = 0; t < kImageSize; ++t) {
      int y = 0, x = 0;
      switch (s.label) {
        case 0: y = off, x = t; break;
        case 1: y = t, x = off; break;
        case 2: y = t, x = t; break;
        default: y = t, x = kImageSize - 1 - t; break;
      }
      s.image.at(0, y, x) = amp;
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct Layer {
  std::string name;
  ConvShape shape;
  int c_in = 1;
  std::vector<double> kernels;  // [c_out][c_in][k][k]
};

/// Layer 1: zero-mean 3x3 line detectors. Layer 2: 1x1 lateral inhibition.
inline std::vector<Layer> model() {
  Layer l1{"conv3x3", {kClasses, 3, 1, 1}, 1, {}};
  const int taps[kClasses][3][2] = {{{1, 0}, {1, 1}, {1, 2}},
                                    {{0, 1}, {1, 1}, {2, 1}},
                                    {{0, 0}, {1, 1}, {2, 2}},
                                    {{0, 2}, {1, 1}, {2, 0}}};
  for (int o = 0; o < kClasses; ++o) {
    std::vector<double> k(9, -1.0 / 3.0);
    for (auto [y, x] : taps[o]) k[y * 3 + x] = 2.0 / 3.0;
    l1.kernels.insert(l1.kernels.end(), k.begin(), k.end());
  }
  Layer l2{"conv1x1", {kClasses, 1, 1, 0}, kClasses, {}};
  for (int o = 0; o < kClasses; ++o)
    for (int i = 0; i < kClasses; ++i) l2.kernels.push_back(o == i ? 1.0 : -0.2);
  return {l1, l2};
}

inline Tensor3 relu(Tensor3 t) {
  for (double& v : t.data) v = std::max(v, 0.0);
  return t;
}

inline Tensor3 float_conv(const Tensor3& in, const Layer& l) {
  const auto& s = l.shape;
  Tensor3 out(s.c_out, s.out_dim(in.h), s.out_dim(in.w));
  const int k = s.kernel;
  for (int o = 0; o < s.c_out; ++o)
    for (int oy = 0; oy < out.h; ++oy)
      for (int ox = 0; ox < out.w; ++ox) {
        double acc = 0.0;
        for (int c = 0; c < in.c; ++c)
          for (int ky = 0; ky < k; ++ky)
            for (int kx = 0; kx < k; ++kx) {
              const int y = oy * s.stride + ky - s.pad, x = ox * s.stride + kx - s.pad;
              if (y < 0 || y >= in.h || x < 0 || x >= in.w) continue;
              acc += in.at(c, y, x) * l.kernels[((std::size_t(o) * in.c + c) * k + ky) * k + kx];
            }
        out.at(o, oy, ox) = acc;
      }
  return out;
}

inline int classify(const Tensor3& t) {
  int best = 0;
  double best_v = -1e300;
  for (int c = 0; c < t.c; ++c) {
    double m = -1e300;
    for (int i = 0; i < t.h * t.w; ++i) m = std::max(m, t.data[std::size_t(c) * t.h * t.w + i]);
    if (m > best_v) best_v = m, best = c;
  }
  return best;
}

struct LayerStats {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;
  double relative_rms_error = 0.0;  // vs float reference
};

struct SimulationReport {
  int samples = 0;
  double float_accuracy = 0.0;
  double photonic_accuracy = 0.0;
  std::vector<LayerStats> layers;
};

struct SimulationOptions {
  int samples = 200;
  std::uint64_t dataset_seed = 7;
  PrecisionSpec precision;
  NoiseSpec noise;
  int threads = 1;
};

inline SimulationReport simulate(const SimulationOptions& opt) {
  const auto data = make_dataset(opt.samples, opt.dataset_seed);
  const auto layers = model();

  // Per-layer input full scale from the float reference.
  std::vector<double> in_range(layers.size(), 1.0);
  for (const auto& s : data) {
    Tensor3 a = s.image;
    for (std::size_t li = 0; li < layers.size(); ++li) {
      for (double v : a.data) in_range[li] = std::max(in_range[li], v);
      a = relu(float_conv(a, layers[li]));
    }
  }

  SimulationReport rep;
  rep.samples = opt.samples;
  std::vector<double> sum(layers.size()), sum2(layers.size()), err2(layers.size()), ref2(layers.size());
  std::vector<double> count(layers.size());
  int float_ok = 0, photonic_ok = 0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    Tensor3 ref = data[n].image, ph = data[n].image;
    for (std::size_t li = 0; li < layers.size(); ++li) {
      const auto& l = layers[li];
      double wmax = 0.0;
      for (double w : l.kernels) wmax = std::max(wmax, std::abs(w));
      MvmConfig cfg = MvmConfig::from_precision(opt.precision);
      cfg.input = {opt.precision.b_in, 0.0, in_range[li]};
      cfg.weight = {opt.precision.b_w, -wmax, wmax};
      cfg.noise = opt.noise;
      cfg.layer = std::uint32_t(li);
      cfg.batch = std::uint32_t(n);

      ref = float_conv(ref, l);
      ph = lowered_conv(ph, l.kernels, l.shape, cfg, opt.threads);
      for (std::size_t i = 0; i < ph.data.size(); ++i) {
        sum[li] += ph.data[i];
        sum2[li] += ph.data[i] * ph.data[i];
        err2[li] += (ph.data[i] - ref.data[i]) * (ph.data[i] - ref.data[i]);
        ref2[li] += ref.data[i] * ref.data[i];
      }
      count[li] += double(ph.data.size());
      ref = relu(std::move(ref));
      ph = relu(std::move(ph));
    }
    float_ok += classify(ref) == data[n].label;
    photonic_ok += classify(ph) == data[n].label;
  }
  for (std::size_t li = 0; li < layers.size(); ++li) {
    LayerStats st{layers[li].name};
    st.mean = sum[li] / count[li];
    st.stddev = std::sqrt(std::max(0.0, sum2[li] / count[li] - st.mean * st.mean));
    st.relative_rms_error = ref2[li] > 0.0 ? std::sqrt(err2[li] / ref2[li]) : 0.0;
    rep.layers.push_back(st);
  }
  rep.float_accuracy = double(float_ok) / opt.samples;
  rep.photonic_accuracy = double(photonic_ok) / opt.samples;
  return rep;
}

}  // namespace ptc::tinycnn
