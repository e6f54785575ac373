#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include <ptc/rng.hpp>

// Known-answer vectors from the Random123 distribution (kat_vectors).
TEST(Philox, KnownAnswerZero) {
  const auto r = ptc::philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r, (std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto r = ptc::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(r, (std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto r = ptc::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(r, (std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(NoiseStream, DrawDependsOnlyOnKeyAndIndex) {
  const ptc::NoiseStream a(42, 3, 7, ptc::NoiseChannel::weight);
  const ptc::NoiseStream b(42, 3, 7, ptc::NoiseChannel::weight);
  for (std::uint32_t i = 1000; i-- > 0;) EXPECT_EQ(a.normal(i), b.normal(i));
}

TEST(NoiseStream, KeysSeparateStreams) {
  const ptc::NoiseStream base(42, 3, 7, ptc::NoiseChannel::weight);
  const ptc::NoiseStream others[] = {
      {43, 3, 7, ptc::NoiseChannel::weight}, {42, 4, 7, ptc::NoiseChannel::weight},
      {42, 3, 8, ptc::NoiseChannel::weight}, {42, 3, 7, ptc::NoiseChannel::input},
      {42ULL << 32, 3, 7, ptc::NoiseChannel::weight}};
  for (const auto& o : others) EXPECT_NE(o.uniform(0), base.uniform(0));
}

TEST(NoiseStream, UniformsOpenIntervalAndDistinct) {
  const ptc::NoiseStream s(1, 0, 0, ptc::NoiseChannel::data);
  std::set<double> seen;
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto [u, v] = s.uniform2(std::uint32_t(i));
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    seen.insert(u);
    sum += u;
  }
  EXPECT_EQ(seen.size(), std::size_t(n));
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(NoiseStream, NormalMoments) {
  const ptc::NoiseStream s(9, 1, 2, ptc::NoiseChannel::output);
  const int n = 200000;
  double m = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal(std::uint32_t(i));
    m += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  m /= n;
  m2 /= n;
  m4 /= n;
  EXPECT_NEAR(m, 0.0, 0.01);
  EXPECT_NEAR(m2, 1.0, 0.01);
  EXPECT_NEAR(m4, 3.0, 0.06);
}
