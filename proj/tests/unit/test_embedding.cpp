#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "stochastid/embedding.hpp"
#include "stochastid/synth.hpp"

using namespace stochastid;
using embedding::EmbeddingParams;

namespace {

TimeSeries ramp(int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1.0);
  return TimeSeries(std::move(v), 1.0, "ramp");
}

TimeSeries white(std::size_t n, std::uint64_t seed) {
  synth::GeneratorSpec spec;
  spec.n = n;
  spec.seed = seed;
  return synth::generate(spec);
}

}  // namespace

TEST(Autocorrelation, LagZeroIsOne) {
  const auto acf = embedding::autocorrelation(white(1024, 1), 10);
  ASSERT_EQ(acf.size(), 11u);
  EXPECT_DOUBLE_EQ(acf[0], 1.0);
}

TEST(Autocorrelation, AlternatingSeries) {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 ? -1.0 : 1.0;
  const auto acf = embedding::autocorrelation(v, 2);
  EXPECT_NEAR(acf[1], -99.0 / 100.0, 1e-12);
  EXPECT_NEAR(acf[2], 98.0 / 100.0, 1e-12);
}

TEST(Autocorrelation, ConstantSeriesIsDegenerate) {
  const std::vector<double> v(50, 3.0);
  EXPECT_THROW(embedding::autocorrelation(v, 5), Error);
}

TEST(EstimateTau, WhiteNoiseGivesOne) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EXPECT_EQ(embedding::estimate_tau(white(4096, seed)), 1) << seed;
  }
}

TEST(EstimateTau, SineGivesQuarterPeriod) {
  std::vector<double> v(4000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 40.0);
  const int tau = embedding::estimate_tau(TimeSeries(v, 1.0, "sine"));
  EXPECT_TRUE(tau == 10 || tau == 11) << tau;
}

TEST(EstimateTau, AlternatingSeriesGivesOne) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 ? -1.0 : 1.0;
  EXPECT_EQ(embedding::estimate_tau(TimeSeries(v, 1.0, "alt")), 1);
}

TEST(EstimateTau, AffineInvariant) {
  for (auto kind : {SyntheticKind::Lorenz, SyntheticKind::PinkNoise, SyntheticKind::LogisticMap}) {
    synth::GeneratorSpec spec;
    spec.kind = kind;
    spec.n = 8192;
    spec.seed = 5;
    const auto s = synth::generate(spec);
    const int tau = embedding::estimate_tau(s);
    for (auto [a, b] : {std::pair{2.0, 0.0}, {-3.0, 7.0}, {0.5, -100.0}, {1e3, 1e3}}) {
      std::vector<double> t = s.samples();
      for (auto& x : t) x = a * x + b;
      EXPECT_EQ(embedding::estimate_tau(TimeSeries(t, 1.0, "t")), tau) << to_string(kind) << " a=" << a;
    }
  }
}

TEST(BuildDataMatrix, DirectIndexing) {
  const auto d = embedding::build_data_matrix(ramp(10), {.m = 3, .tau = 2, .k = 4});
  ASSERT_EQ(d.values.rows(), 3);
  ASSERT_EQ(d.values.cols(), 4);
  const double expected[3][4] = {{1, 2, 3, 4}, {3, 4, 5, 6}, {5, 6, 7, 8}};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) EXPECT_EQ(d.values(r, c), expected[r][c]);
  }
}

TEST(BuildDataMatrix, SingleRowIsPrefix) {
  const auto d = embedding::build_data_matrix(ramp(10), {.m = 1, .tau = 5, .k = 6});
  ASSERT_EQ(d.values.rows(), 1);
  for (int c = 0; c < 6; ++c) EXPECT_EQ(d.values(0, c), c + 1.0);
}

TEST(BuildDataMatrix, TooShort) {
  try {
    embedding::build_data_matrix(ramp(9), {.m = 3, .tau = 3, .k = 4});
    FAIL() << "expected SeriesTooShort";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SeriesTooShort);
  }
  EXPECT_NO_THROW(embedding::build_data_matrix(ramp(10), {.m = 3, .tau = 3, .k = 4}));
}

TEST(BuildDataMatrix, RejectsBadParams) {
  EXPECT_THROW(embedding::build_data_matrix(ramp(10), {.m = 0, .tau = 1, .k = 2}), Error);
  EXPECT_THROW(embedding::build_data_matrix(ramp(10), {.m = 2, .tau = 0, .k = 2}), Error);
  EXPECT_THROW(embedding::build_data_matrix(ramp(10), {.m = 2, .tau = 1, .k = 0}), Error);
}

TEST(BuildDataMatrix, EntriesComeFromTheSeries) {
  const auto s = white(3000, 4);
  const EmbeddingParams p{.m = 5, .tau = 7, .k = 2000};
  const auto d = embedding::build_data_matrix(s, p);
  for (int c = 0; c < p.k; ++c) ASSERT_EQ(d.values(0, c), s.samples()[static_cast<std::size_t>(c)]);
  for (int r = 0; r < p.m; ++r) {
    for (int c = 0; c < p.k; ++c) {
      ASSERT_EQ(d.values(r, c), s.samples()[static_cast<std::size_t>(c + r * p.tau)]);
    }
  }
}

TEST(ResolveParams, DefaultsForLongSeries) {
  const auto r = embedding::resolve_params(white(16384, 2), 4);
  EXPECT_EQ(r.params.m, 4);
  EXPECT_EQ(r.params.tau, 1);
  EXPECT_EQ(r.params.k, 5000);
  EXPECT_FALSE(r.tau_clamped);
}

TEST(ResolveParams, FixedKClampsTau) {
  const auto r = embedding::resolve_params(ramp(1000), 4, 400, 700);
  EXPECT_EQ(r.estimated_tau, 400);
  EXPECT_EQ(r.params.tau, 100);
  EXPECT_TRUE(r.tau_clamped);
  EXPECT_LE(r.params.span(), 1000u);
}

TEST(ResolveParams, ShortSeriesFails) {
  const auto full = white(2000, 1).samples();
  const TimeSeries shortened(std::vector<double>(full.begin(), full.begin() + 50), 1.0, "short");
  try {
    embedding::resolve_params(shortened, 4);
    FAIL() << "expected SeriesTooShort";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SeriesTooShort);
  }
}
