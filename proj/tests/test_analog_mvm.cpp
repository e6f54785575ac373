#include <cmath>
#include <cstdint>
#include <cstdio>
#include <vector>

#include <gtest/gtest.h>

#include <ptc/analog_mvm.hpp>
#include <ptc/tinycnn.hpp>

namespace {

// Operands are drawn as integer levels so the oracle stays in the integer
// domain: x = ix / 63, w = iw / 127.
struct IntInstance {
  int rows = 0, cols = 0;
  std::vector<std::int64_t> ix;
  std::vector<std::int64_t> iw;  // rows x cols, signed
};

IntInstance random_instance(int rows, int cols, std::uint64_t seed) {
  const ptc::NoiseStream rng(seed, 0, 0, ptc::NoiseChannel::data);
  std::uint32_t k = 0;
  IntInstance t{rows, cols, {}, {}};
  for (int r = 0; r < rows; ++r) t.ix.push_back(std::int64_t(rng.uniform(k++) * 64));
  for (int i = 0; i < rows * cols; ++i) t.iw.push_back(std::int64_t(rng.uniform(k++) * 255) - 127);
  return t;
}

std::vector<double> x_of(const IntInstance& t) {
  std::vector<double> x;
  for (auto v : t.ix) x.push_back(double(v) / 63.0);
  return x;
}

ptc::Matrix w_of(const IntInstance& t) {
  ptc::Matrix w(t.rows, t.cols);
  for (std::size_t i = 0; i < t.iw.size(); ++i) w.data[i] = double(t.iw[i]) / 127.0;
  return w;
}

std::int64_t oracle_dot(const IntInstance& t, int c) {
  std::int64_t s = 0;
  for (int r = 0; r < t.rows; ++r) s += t.ix[r] * t.iw[std::size_t(r) * t.cols + c];
  return s;
}

ptc::MvmConfig ideal() {
  ptc::MvmConfig cfg;
  cfg.noise = ptc::NoiseSpec::none();
  cfg.out_bits = 0;
  return cfg;
}

double sample_std(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= double(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size() - 1));
}

}  // namespace

TEST(Quantize, Examples) {
  const ptc::QuantSpec q{6, 0.0, 1.0};
  EXPECT_EQ(ptc::quantize(0.0, q).level, 0);
  const auto mid = ptc::quantize(0.5, q);
  EXPECT_EQ(mid.level, 32);
  EXPECT_NEAR(mid.value, 32.0 / 63.0, 1e-15);
  EXPECT_NEAR(mid.value, 0.50794, 5e-6);
  EXPECT_EQ(ptc::quantize(1.7, q).level, 63);
  EXPECT_EQ(ptc::quantize(-3.0, q).level, 0);
  EXPECT_EQ(ptc::quantize(1.0, q).value, 1.0);
}

TEST(Quantize, SignedRangeEndpoints) {
  const ptc::QuantSpec q{7, -1.0, 1.0};
  EXPECT_EQ(ptc::quantize(-1.0, q).value, -1.0);
  EXPECT_EQ(ptc::quantize(1.0, q).value, 1.0);
  EXPECT_EQ(ptc::quantize(0.0, q).level, 64);  // 63.5 rounds away from zero
}

TEST(Quantize, ErrorBoundedByHalfStep) {
  const ptc::QuantSpec q{5, -2.0, 3.0};
  const ptc::NoiseStream rng(5, 0, 0, ptc::NoiseChannel::data);
  for (std::uint32_t i = 0; i < 10000; ++i) {
    const double x = -2.0 + 5.0 * rng.uniform(i);
    EXPECT_LE(std::abs(ptc::quantize(x, q).value - x), 0.5 * q.step() + 1e-12);
  }
}

TEST(InjectNoise, ZeroSigmaAndZeroSignal) {
  const ptc::NoiseStream s(1, 0, 0, ptc::NoiseChannel::input);
  for (std::uint32_t i = 0; i < 100; ++i) {
    EXPECT_EQ(ptc::inject_noise(0.731, 0.0, s, i), 0.731);
    EXPECT_EQ(ptc::inject_noise(0.0, 0.5, s, i), 0.0);
  }
  EXPECT_THROW(ptc::inject_noise(1.0, -0.1, 0.3), ptc::validation_error);
}

TEST(InjectNoise, MonteCarloStdMatchesSigmaTimesSignal) {
  const int n = 100000;
  for (double sigma : {0.0031, 0.01}) {
    for (double q : {1.0, 0.37, -2.5}) {
      const ptc::NoiseStream s(77, 0, 0, ptc::NoiseChannel::input);
      std::vector<double> v(n);
      for (int i = 0; i < n; ++i) v[i] = ptc::inject_noise(q, sigma, s, std::uint32_t(i));
      const double expected = sigma * std::abs(q);
      EXPECT_NEAR(sample_std(v), expected, 0.02 * expected) << sigma << " " << q;
    }
  }
}

TEST(InjectNoise, UnitSignalOnePercentBand) {
  const ptc::NoiseStream s(2024, 0, 0, ptc::NoiseChannel::weight);
  std::vector<double> v(100000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = ptc::inject_noise(1.0, 0.01, s, std::uint32_t(i));
  const double sd = sample_std(v);
  EXPECT_GE(sd, 0.0098);
  EXPECT_LE(sd, 0.0102);
}

TEST(NoisyMvm, IdentityOneHot) {
  ptc::Matrix eye(9, 9);
  for (int i = 0; i < 9; ++i) eye(i, i) = 1.0;
  for (int hot = 0; hot < 9; ++hot) {
    std::vector<double> x(9, 0.0);
    x[hot] = 0.6;
    const auto r = ptc::noisy_mvm(x, eye, ideal());
    const double q = ptc::quantize(0.6, {6, 0.0, 1.0}).value;
    for (int c = 0; c < 9; ++c) EXPECT_NEAR(r.y[c], c == hot ? q : 0.0, 1e-15);
  }
}

TEST(NoisyMvm, EighteenByFourMatchesIntegerOracle) {
  const auto t = random_instance(18, 4, 11);
  const auto r = ptc::noisy_mvm(x_of(t), w_of(t), ideal());
  for (int c = 0; c < 4; ++c) {
    EXPECT_EQ(r.accumulated[c], double(oracle_dot(t, c)));
    EXPECT_EQ(r.y[c], double(oracle_dot(t, c)) * ((1.0 / 63.0) * (1.0 / 127.0)));
  }
}

TEST(NoisyMvm, RandomInstancesMatchIntegerOracle) {
  const ptc::NoiseStream dims(3, 0, 0, ptc::NoiseChannel::data);
  for (std::uint32_t trial = 0; trial < 1000; ++trial) {
    const auto [a, b] = dims.uniform2(trial);
    const int rows = 1 + int(a * 32), cols = 1 + int(b * 32);
    const auto t = random_instance(rows, cols, 1000 + trial);
    for (auto mode : {ptc::SignedMode::differential_pair, ptc::SignedMode::non_negative}) {
      auto cfg = ideal();
      cfg.mode = mode;
      auto inst = t;
      if (mode == ptc::SignedMode::non_negative) {
        for (auto& w : inst.iw) w = std::abs(w);
        cfg.weight = {7, 0.0, 1.0};
      }
      const auto r = ptc::noisy_mvm(x_of(inst), w_of(inst), cfg);
      for (int c = 0; c < cols; ++c)
        ASSERT_EQ(r.accumulated[c], double(oracle_dot(inst, c))) << trial << " " << rows << "x" << cols;
    }
  }
}

TEST(NoisyMvm, AdcCodesQuantizeOraclePdSums) {
  const auto t = random_instance(300, 3, 21);
  auto cfg = ideal();
  cfg.out_bits = 8;
  const auto r = ptc::noisy_mvm(x_of(t), w_of(t), cfg);
  // Oracle PD sums on the differential columns: 144 rows per PD.
  std::vector<std::vector<std::int64_t>> pd(6);
  std::int64_t fs = 0;
  for (int pc = 0; pc < 6; ++pc) {
    for (int start = 0; start < 300; start += 144) {
      std::int64_t s = 0;
      for (int row = start; row < std::min(300, start + 144); ++row) {
        const std::int64_t w = t.iw[std::size_t(row) * 3 + pc / 2];
        s += t.ix[row] * (pc % 2 == 0 ? std::max<std::int64_t>(w, 0) : std::max<std::int64_t>(-w, 0));
      }
      pd[pc].push_back(s);
      fs = std::max(fs, s);
    }
  }
  EXPECT_EQ(r.full_scale, double(fs));
  for (int pc = 0; pc < 6; ++pc) {
    ASSERT_EQ(r.adc_codes[pc].size(), 3u);
    for (int k = 0; k < 3; ++k) {
      const auto expected = std::int64_t(std::llround(double(pd[pc][k]) * 255.0 / double(fs)));
      EXPECT_EQ(r.adc_codes[pc][k], expected);
    }
  }
}

TEST(NoisyMvm, DimensionMismatch) {
  std::vector<double> x(5, 0.5);
  EXPECT_THROW(ptc::noisy_mvm(x, ptc::Matrix(6, 2), ideal()), ptc::validation_error);
}

TEST(NoisyMvm, InputRangeMustStartAtZero) {
  auto cfg = ideal();
  cfg.input = {6, -1.0, 1.0};
  std::vector<double> x(4, 0.5);
  EXPECT_THROW(ptc::noisy_mvm(x, ptc::Matrix(4, 2), cfg), ptc::validation_error);
}

TEST(NoisyMvm, GroupingInvariantAtZeroNoise) {
  const auto t = random_instance(288, 5, 31);
  const auto ref = ptc::noisy_mvm(x_of(t), w_of(t), ideal());
  for (auto [g, fan] : {std::pair{1, 1}, {3, 2}, {9, 16}, {144, 1}, {5, 7}, {288, 1}, {1, 288}}) {
    auto cfg = ideal();
    cfg.tree = {g, fan};
    const auto r = ptc::noisy_mvm(x_of(t), w_of(t), cfg);
    EXPECT_EQ(r.accumulated, ref.accumulated) << g << "x" << fan;
  }
}

TEST(NoisyMvm, TiledPartialSumsEqualUntiled) {
  const auto t = random_instance(200, 6, 41);
  const auto whole = ptc::noisy_mvm(x_of(t), w_of(t), ideal());
  const ptc::NoiseStream cuts(41, 0, 0, ptc::NoiseChannel::data);
  for (std::uint32_t trial = 0; trial < 50; ++trial) {
    std::vector<int> bounds{0};
    while (bounds.back() < 200) bounds.push_back(std::min(200, bounds.back() + 1 + int(cuts.uniform(trial * 64 + std::uint32_t(bounds.size())) * 80)));
    std::vector<double> sum(6, 0.0);
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
      IntInstance part{bounds[b + 1] - bounds[b], 6, {}, {}};
      for (int r = bounds[b]; r < bounds[b + 1]; ++r) {
        part.ix.push_back(t.ix[r]);
        for (int c = 0; c < 6; ++c) part.iw.push_back(t.iw[std::size_t(r) * 6 + c]);
      }
      const auto pr = ptc::noisy_mvm(x_of(part), w_of(part), ideal());
      for (int c = 0; c < 6; ++c) sum[c] += pr.accumulated[c];
    }
    EXPECT_EQ(sum, whole.accumulated) << trial;
  }
}

TEST(NoisyMvm, OutputVarianceMonotoneInEachSigma) {
  const auto t = random_instance(18, 4, 51);
  const auto x = x_of(t);
  const auto w = w_of(t);
  auto spread = [&](double si, double sw, double so) {
    std::vector<double> v;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
      ptc::MvmConfig cfg;
      cfg.out_bits = 0;
      cfg.noise = {si, sw, so, seed};
      v.push_back(ptc::noisy_mvm(x, w, cfg).y[0]);
    }
    return sample_std(v);
  };
  const double grid[] = {0.0, 0.003, 0.01, 0.03};
  double prev[3] = {-1, -1, -1};
  for (double s : grid) {
    const double cur[3] = {spread(s, 0, 0), spread(0, s, 0), spread(0, 0, s)};
    for (int k = 0; k < 3; ++k) {
      EXPECT_GE(cur[k], prev[k]) << "channel " << k << " sigma " << s;
      prev[k] = cur[k];
    }
  }
}

TEST(NoisyMvm, FixedSeedIsBitIdentical) {
  const auto t = random_instance(18, 4, 18004);
  ptc::MvmConfig cfg;
  cfg.noise.seed = 42;
  const auto a = ptc::noisy_mvm(x_of(t), w_of(t), cfg);
  const auto b = ptc::noisy_mvm(x_of(t), w_of(t), cfg);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.pd_sums, b.pd_sums);
  // Frozen from the first run of this implementation.
  const std::vector<double> frozen = {0.95466007925479912, -1.6292865352615236, 1.0819480898221057,
                                      0.16547441373749827};
  ASSERT_EQ(a.y.size(), frozen.size());
  for (std::size_t c = 0; c < frozen.size(); ++c) EXPECT_EQ(a.y[c], frozen[c]) << c;
}

TEST(NoisyMvm, DifferentSeedsDiffer) {
  const auto t = random_instance(18, 4, 18004);
  ptc::MvmConfig a_cfg, b_cfg;
  a_cfg.noise.seed = 42;
  b_cfg.noise.seed = 43;
  EXPECT_NE(ptc::noisy_mvm(x_of(t), w_of(t), a_cfg).y, ptc::noisy_mvm(x_of(t), w_of(t), b_cfg).y);
}

TEST(LoweredConv, MatchesBruteForceOracle) {
  const ptc::NoiseStream rng(606, 0, 0, ptc::NoiseChannel::data);
  std::uint32_t k = 0;
  auto pick = [&](int lo, int hi) { return lo + int(rng.uniform(k++) * (hi - lo + 1)); };
  for (int trial = 0; trial < 1000; ++trial) {
    const int c_in = pick(1, 4), c_out = pick(1, 4), h = pick(1, 6), w = pick(1, 6);
    const int stride = pick(1, 2);
    const int pad = (h < 3 || w < 3) ? 1 : pick(0, 1);
    ptc::Tensor3 in(c_in, h, w);
    std::vector<std::int64_t> in_lv(in.data.size()), ker_lv(std::size_t(c_out) * c_in * 9);
    for (std::size_t i = 0; i < in.data.size(); ++i) {
      in_lv[i] = pick(0, 63);
      in.data[i] = double(in_lv[i]) / 63.0;
    }
    std::vector<double> kernels(ker_lv.size());
    for (std::size_t i = 0; i < ker_lv.size(); ++i) {
      ker_lv[i] = pick(-127, 127);
      kernels[i] = double(ker_lv[i]) / 127.0;
    }
    const ptc::ConvShape shape{c_out, 3, stride, pad};
    const auto out = ptc::lowered_conv(in, kernels, shape, ideal());
    const int oh = (h + 2 * pad - 3) / stride + 1, ow = (w + 2 * pad - 3) / stride + 1;
    ASSERT_EQ(out.h, oh);
    ASSERT_EQ(out.w, ow);
    for (int o = 0; o < c_out; ++o)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          std::int64_t acc = 0;
          for (int c = 0; c < c_in; ++c)
            for (int ky = 0; ky < 3; ++ky)
              for (int kx = 0; kx < 3; ++kx) {
                const int y = oy * stride + ky - pad, x = ox * stride + kx - pad;
                if (y < 0 || y >= h || x < 0 || x >= w) continue;
                acc += in_lv[(std::size_t(c) * h + y) * w + x] * ker_lv[((std::size_t(o) * c_in + c) * 3 + ky) * 3 + kx];
              }
          ASSERT_EQ(out.at(o, oy, ox), double(acc) * ((1.0 / 63.0) * (1.0 / 127.0)))
              << "trial " << trial << " o" << o << " (" << oy << "," << ox << ")";
        }
  }
}

TEST(LoweredConv, ThreadCountDoesNotChangeNoisyResult) {
  ptc::Tensor3 in(3, 12, 12);
  const ptc::NoiseStream rng(8, 0, 0, ptc::NoiseChannel::data);
  for (std::size_t i = 0; i < in.data.size(); ++i) in.data[i] = rng.uniform(std::uint32_t(i));
  std::vector<double> kernels(5 * 3 * 9);
  for (std::size_t i = 0; i < kernels.size(); ++i) kernels[i] = 2 * rng.uniform(std::uint32_t(10000 + i)) - 1;
  ptc::MvmConfig cfg;
  cfg.noise.seed = 99;
  const auto one = ptc::lowered_conv(in, kernels, {5, 3, 1, 1}, cfg, 1);
  for (int threads : {2, 3, 8}) EXPECT_EQ(ptc::lowered_conv(in, kernels, {5, 3, 1, 1}, cfg, threads).data, one.data);
}

TEST(PcmArray, ZeroStdLevelsExact) {
  auto spec = ptc::DeviceCatalog{}.pcm();
  spec.program_std = 0.0;
  ptc::PcmArray arr(4, 5, spec);
  ptc::Matrix w(4, 5);
  for (std::size_t i = 0; i < w.data.size(); ++i) w.data[i] = double(i * 6) / 127.0;
  const auto r = arr.program(w, 0.0, 1);
  for (std::size_t i = 0; i < w.data.size(); ++i) {
    EXPECT_EQ(r.levels[i], std::int64_t(i * 6));
    EXPECT_EQ(r.transmission[i], ptc::quantize(w.data[i], {7, 0.0, 1.0}).value);
  }
}

TEST(PcmArray, ProgrammingNoiseStaysInRange) {
  auto spec = ptc::DeviceCatalog{}.pcm();
  spec.program_std = 0.2;
  ptc::PcmArray arr(16, 16, spec);
  ptc::Matrix w(16, 16, 1.0);
  for (double t : arr.program(w, 0.0, 3).transmission) {
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 1.0);
  }
}

TEST(PcmArray, FullCoreEnergyTotals) {
  const ptc::DeviceCatalog cat;
  ptc::PcmArray arr(144, 256, cat.pcm());
  const auto r = arr.program(ptc::Matrix(144, 256, 0.5), 0.0, 7);
  EXPECT_EQ(r.events.size(), 36864u);
  EXPECT_DOUBLE_EQ(r.optical_energy(), 36864.0 * (135.0 + 193.0));
  EXPECT_NEAR(r.electrical_energy(1.43, 0.548), 36864.0 * (135.0 + 193.0) * std::pow(10.0, 0.143) / 0.548, 1e-3);
}

TEST(PcmArray, RefreshFasterThanOneMegahertzRejected) {
  const ptc::DeviceCatalog cat;
  ptc::PcmArray arr(2, 2, cat.pcm());
  arr.program_cell(0, 0, 0.0);
  EXPECT_THROW(arr.program_cell(0, 0, 500.0), ptc::refresh_violation);
  EXPECT_NO_THROW(arr.program_cell(0, 1, 500.0));
  EXPECT_NO_THROW(arr.program_cell(0, 0, 1000.0));
  EXPECT_THROW(arr.program(ptc::Matrix(2, 2, 0.1), 1500.0, 0), ptc::refresh_violation);
  EXPECT_NO_THROW(arr.program(ptc::Matrix(2, 2, 0.1), 2000.0, 0));
}

TEST(PcmArray, InvalidWeightsRejected) {
  ptc::PcmArray arr(2, 2, ptc::DeviceCatalog{}.pcm());
  EXPECT_THROW(arr.program(ptc::Matrix(2, 2, 1.5), 0.0, 0), ptc::validation_error);
  EXPECT_THROW(arr.program(ptc::Matrix(3, 2, 0.5), 0.0, 0), ptc::validation_error);
  EXPECT_THROW(arr.program_cell(2, 0, 0.0), ptc::validation_error);
}

TEST(TinyCnn, ZeroNoiseHighPrecisionTracksFloat) {
  ptc::tinycnn::SimulationOptions opt;
  opt.samples = 40;
  opt.noise = ptc::NoiseSpec::none();
  opt.precision = {12, 12, 0};
  const auto r = ptc::tinycnn::simulate(opt);
  EXPECT_EQ(r.photonic_accuracy, r.float_accuracy);
  for (const auto& l : r.layers) EXPECT_LT(l.relative_rms_error, 1e-3) << l.name;
}

TEST(TinyCnn, DefaultNoiseRunIsDeterministicAndAccurate) {
  ptc::tinycnn::SimulationOptions opt;
  opt.samples = 60;
  opt.noise.seed = 5;
  const auto a = ptc::tinycnn::simulate(opt);
  opt.threads = 4;
  const auto b = ptc::tinycnn::simulate(opt);
  EXPECT_EQ(a.photonic_accuracy, b.photonic_accuracy);
  for (std::size_t i = 0; i < a.layers.size(); ++i) EXPECT_EQ(a.layers[i].mean, b.layers[i].mean);
  EXPECT_GE(a.float_accuracy, 0.95);
  EXPECT_GE(a.photonic_accuracy, a.float_accuracy - 0.1);
}

TEST(TinyCnn, ErrorGrowsWithNoise) {
  ptc::tinycnn::SimulationOptions opt;
  opt.samples = 30;
  double prev = -1.0;
  for (double s : {0.0, 0.01, 0.05, 0.2}) {
    opt.noise = {s, s, s, 1};
    const double err = ptc::tinycnn::simulate(opt).layers[0].relative_rms_error;
    EXPECT_GT(err, prev) << s;
    prev = err;
  }
}
