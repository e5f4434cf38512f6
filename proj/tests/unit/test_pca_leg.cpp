#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stochastid/pca_leg.hpp"
#include "stochastid/synth.hpp"

using namespace stochastid;
using pca::FeatureVector;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

FeatureVector at_log(double lx, double ly) { return {std::exp(lx), std::exp(ly), lx, ly}; }

}  // namespace

TEST(SymmetricEigenvalues, MatchGenericSolver) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> scale(-6, 6);
  for (int t = 0; t < 1000; ++t) {
    const double s = std::pow(10.0, scale(rng));
    const double a = u(rng) * s;
    const double b = u(rng) * s;
    const double c = u(rng) * s;
    Eigen::Matrix2d m;
    m << a, c, c, b;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(m);
    const auto ev = solver.eigenvalues();  // ascending
    const auto got = pca::symmetric_eigenvalues(a, b, c);
    const double norm = std::max(std::abs(ev[0]), std::abs(ev[1]));
    EXPECT_LE(std::abs(got.larger - ev[1]), 1e-12 * norm) << t;
    EXPECT_LE(std::abs(got.smaller - ev[0]), 1e-12 * norm) << t;
  }
}

TEST(EigenRatio, IdenticalHalvesHitTheCap) {
  auto v = gaussian(500, 1);
  v.insert(v.end(), v.begin(), v.end());
  EXPECT_EQ(pca::eigen_ratio(v), pca::kRatioCap);
}

TEST(EigenRatio, ConstantSegmentIsOne) {
  const std::vector<double> v(300, 4.2);
  EXPECT_EQ(pca::eigen_ratio(v), 1.0);
}

TEST(EigenRatio, WhiteNoiseNearOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double r = pca::eigen_ratio(gaussian(16384, seed));
    EXPECT_GE(r, 1.0);
    EXPECT_LE(r, 6.0);
  }
}

TEST(EigenRatio, AtLeastOne) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto v = gaussian(4 + static_cast<std::size_t>(t) * 3, 100 + t);
    EXPECT_GE(pca::eigen_ratio(v), 1.0);
  }
}

TEST(EigenRatio, AffineInvariant) {
  for (auto kind : {SyntheticKind::WhiteNoise, SyntheticKind::Lorenz, SyntheticKind::PinkNoise}) {
    synth::GeneratorSpec spec;
    spec.kind = kind;
    spec.n = 4096;
    spec.seed = 2;
    const auto s = synth::generate(spec).samples();
    const double base = pca::eigen_ratio(s);
    for (auto [a, b] : {std::pair{3.0, 1.0}, {-0.5, 10.0}, {1e4, -1e3}, {-7.0, 0.0}}) {
      auto t = s;
      for (auto& x : t) x = a * x + b;
      EXPECT_NEAR(pca::eigen_ratio(t), base, 1e-9 * base) << to_string(kind) << " a=" << a;
    }
  }
}

TEST(EigenRatio, TooShort) { EXPECT_THROW(pca::eigen_ratio(std::vector<double>{1, 2, 3}), Error); }

TEST(RatioCurve, RootAboveThresholdIsSingleLeaf) {
  std::vector<double> v(1024);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 16.0);
  const auto curve = pca::build_ratio_curve(v, 9.0, 100);
  ASSERT_EQ(curve.leaves.size(), 1u);
  EXPECT_EQ(curve.leaves[0].start, 0u);
  EXPECT_EQ(curve.leaves[0].end, 1024u);
}

TEST(RatioCurve, SplitArithmetic) {
  const auto curve = pca::build_ratio_curve(gaussian(256, 3), 1e9, 100);
  ASSERT_EQ(curve.leaves.size(), 2u);
  EXPECT_EQ(curve.leaves[0].length(), 128u);
  EXPECT_EQ(curve.leaves[1].length(), 128u);
}

TEST(RatioCurve, OddLengthDropsLastSample) {
  const auto curve = pca::build_ratio_curve(gaussian(1001, 3), 1e9, 100);
  EXPECT_EQ(curve.even_length, 1000u);
  EXPECT_EQ(curve.leaves.back().end, 1000u);
}

TEST(RatioCurve, LeavesPartitionTheSeries) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    synth::GeneratorSpec spec;
    spec.kind = seed % 2 ? SyntheticKind::Lorenz : SyntheticKind::PinkNoise;
    spec.n = 3000 + seed * 37;
    spec.seed = seed;
    const auto s = synth::generate(spec);
    for (double th : {1.5, 3.0, 9.0, 50.0}) {
      const auto curve = pca::build_ratio_curve(s, th, 50);
      std::size_t cursor = 0;
      for (const auto& leaf : curve.leaves) {
        ASSERT_EQ(leaf.start, cursor);
        ASSERT_GT(leaf.end, leaf.start);
        ASSERT_GE(leaf.ratio, 1.0);
        ASSERT_TRUE(leaf.ratio >= th || leaf.length() / 2 < 50u);
        cursor = leaf.end;
      }
      ASSERT_EQ(cursor, s.size() / 2 * 2);
    }
  }
}

TEST(RatioCurve, RejectsBadArguments) {
  const auto v = gaussian(512, 1);
  EXPECT_THROW(pca::build_ratio_curve(v, 1.0, 100), Error);
  EXPECT_THROW(pca::build_ratio_curve(v, 9.0, 3), Error);
  EXPECT_THROW(pca::build_ratio_curve(std::vector<double>{1, 2, 3}, 9.0, 100), Error);
}

TEST(Features, SingleLeaf) {
  pca::RatioCurve curve;
  curve.even_length = 100;
  curve.leaves = {{0, 100, 7.5}};
  const auto fv = pca::features(curve);
  EXPECT_EQ(fv.ver, 0.0);
  EXPECT_DOUBLE_EQ(fv.auer, 7.5);
  EXPECT_DOUBLE_EQ(fv.log_auer, std::log(7.5 + pca::kLogEpsilon));
}

TEST(Features, TwoEqualLeaves) {
  pca::RatioCurve curve;
  curve.even_length = 200;
  curve.leaves = {{0, 100, 2.0}, {100, 200, 4.0}};
  const auto fv = pca::features(curve);
  EXPECT_DOUBLE_EQ(fv.ver, 1.0);
  EXPECT_DOUBLE_EQ(fv.auer, 3.0);
}

TEST(Features, AuerUnchangedByRefiningALeaf) {
  pca::RatioCurve coarse;
  coarse.even_length = 400;
  coarse.leaves = {{0, 200, 2.5}, {200, 400, 11.0}};
  pca::RatioCurve fine = coarse;
  fine.leaves = {{0, 100, 2.5}, {100, 200, 2.5}, {200, 400, 11.0}};
  EXPECT_DOUBLE_EQ(pca::features(coarse).auer, pca::features(fine).auer);
}

TEST(Features, EmptyCurve) { EXPECT_THROW(pca::features(pca::RatioCurve{}), Error); }

TEST(KMeans, SeparatesTwoBlobs) {
  std::vector<pca::Point2> pts;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 0.1);
  for (int i = 0; i < 20; ++i) pts.push_back({g(rng), g(rng)});
  for (int i = 0; i < 15; ++i) pts.push_back({5 + g(rng), 5 + g(rng)});
  const auto km = pca::kmeans2(pts);
  for (int i = 1; i < 20; ++i) EXPECT_EQ(km.assignment[static_cast<std::size_t>(i)], km.assignment[0]);
  for (int i = 20; i < 35; ++i) EXPECT_NE(km.assignment[static_cast<std::size_t>(i)], km.assignment[0]);
  EXPECT_GT(pca::silhouette(pts, km.assignment), 0.95);
}

TEST(Silhouette, HandComputed) {
  const std::vector<pca::Point2> pts{{0, 0}, {1, 0}, {10, 0}};
  const std::vector<int> assignment{0, 0, 1};
  // s0 = 1 - 1/10, s1 = 1 - 1/9, s2 = 0 (singleton)
  EXPECT_NEAR(pca::silhouette(pts, assignment), (0.9 + 8.0 / 9.0) / 3.0, 1e-15);
  EXPECT_EQ(pca::silhouette(pts, std::vector<int>{0, 0, 0}), 0.0);
}

TEST(TuneThreshold, SeparableCorpus) {
  std::vector<TimeSeries> corpus;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    corpus.emplace_back(gaussian(8192, seed), 1.0, "noise");
    auto v = gaussian(8192, 50 + seed);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 16.0) + 1e-3 * v[i];
    }
    corpus.emplace_back(std::move(v), 1.0, "periodic");
  }
  const auto grid = pca::default_threshold_grid();
  ASSERT_EQ(grid.size(), 19u);
  EXPECT_EQ(grid.front(), 2.0);
  EXPECT_EQ(grid.back(), 20.0);
  const auto result = pca::tune_threshold(corpus, grid);
  ASSERT_EQ(result.scores.size(), grid.size());
  for (const auto& s : result.scores) EXPECT_GT(s.silhouette, 0.9) << s.threshold;
  const auto again = pca::tune_threshold(corpus, grid);
  EXPECT_EQ(again.best_threshold, result.best_threshold);
}

TEST(TrainLinear, TwoPoints) {
  const std::vector<pca::TrainingSample> samples{{at_log(0, 0), Label::Stochastic},
                                                 {at_log(10, 10), Label::NonStochastic}};
  const auto model = pca::train_linear(samples);
  EXPECT_EQ(pca::pca_label(model, at_log(0, 0)).label, Label::Stochastic);
  EXPECT_EQ(pca::pca_label(model, at_log(10, 10)).label, Label::NonStochastic);
  const double mid = model.decision(at_log(5, 5));
  EXPECT_GT(model.decision(at_log(10, 10)), mid);
  EXPECT_LT(model.decision(at_log(0, 0)), mid);
}

TEST(TrainLinear, RandomSeparableSets) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int t = 0; t < 40; ++t) {
    const double th = angle(rng);
    const double nx = std::cos(th);
    const double ny = std::sin(th);
    const double off = u(rng) * 0.3;
    std::vector<pca::TrainingSample> samples;
    while (samples.size() < 60) {
      const double x = u(rng);
      const double y = u(rng);
      const double d = nx * x + ny * y + off;
      if (std::abs(d) < 0.5) continue;
      samples.push_back({at_log(x, y), d > 0 ? Label::NonStochastic : Label::Stochastic});
    }
    bool both = false;
    for (const auto& s : samples) both |= s.label != samples[0].label;
    if (!both) continue;
    const auto model = pca::train_linear(samples);
    for (const auto& s : samples) ASSERT_EQ(pca::pca_label(model, s.features).label, s.label) << "set " << t;
  }
}

TEST(TrainLinear, NeedsBothClasses) {
  const std::vector<pca::TrainingSample> samples{{at_log(0, 0), Label::Stochastic},
                                                 {at_log(1, 1), Label::Stochastic}};
  EXPECT_THROW(pca::train_linear(samples), Error);
}

TEST(PcaLabel, BoundaryIsNonStochastic) {
  pca::LinearModel model;
  model.w = {1.0, 1.0};
  model.b = -2.0;
  const auto on = pca::pca_label(model, at_log(1.0, 1.0));
  EXPECT_EQ(on.label, Label::NonStochastic);
  EXPECT_EQ(on.margin, 0.0);
  const auto below = pca::pca_label(model, at_log(0.0, 0.0));
  EXPECT_EQ(below.label, Label::Stochastic);
  EXPECT_NEAR(below.margin, -2.0 / std::sqrt(2.0), 1e-15);
}

TEST(PcaLabel, ZeroNormalIsRejected) {
  pca::LinearModel model;
  EXPECT_THROW(pca::pca_label(model, at_log(0, 0)), Error);
}
