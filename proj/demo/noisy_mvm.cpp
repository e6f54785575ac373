// One 144x8 matrix-vector product through the analog path, with and
// without noise.

#include <cstdio>
#include <vector>

#include <ptc/analog_mvm.hpp>

int main() {
  const int rows = 144, cols = 8;
  const ptc::NoiseStream data(1, 0, 0, ptc::NoiseChannel::data);
  ptc::Matrix w(rows, cols);
  for (std::size_t i = 0; i < w.data.size(); ++i) w.data[i] = 2.0 * data.uniform(std::uint32_t(i)) - 1.0;
  std::vector<double> x(rows);
  for (int r = 0; r < rows; ++r) x[r] = data.uniform(std::uint32_t(w.data.size() + r));

  ptc::MvmConfig clean;
  clean.noise = ptc::NoiseSpec::none();
  clean.out_bits = 0;
  ptc::MvmConfig noisy;
  noisy.noise.seed = 42;

  const auto a = ptc::noisy_mvm(x, w, clean);
  const auto b = ptc::noisy_mvm(x, w, noisy);
  std::printf("col      exact      noisy\n");
  for (int c = 0; c < cols; ++c) {
    double exact = 0.0;
    for (int r = 0; r < rows; ++r) exact += x[r] * w(r, c);
    std::printf("%3d  %9.4f  %9.4f   (quantized ideal %9.4f)\n", c, exact, b.y[c], a.y[c]);
  }
}
