#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "stochastid/io.hpp"
#include "stochastid/pipeline.hpp"
#include "stochastid/synth.hpp"

using namespace stochastid;

namespace {

TimeSeries make(SyntheticKind kind, std::size_t n, std::uint64_t seed) {
  synth::GeneratorSpec spec;
  spec.kind = kind;
  spec.n = n;
  spec.seed = seed;
  return synth::generate(spec);
}

pca::LinearModel everything_ns() {
  pca::LinearModel m;
  m.w = {1.0, 0.0};
  m.b = 100.0;
  return m;
}

}  // namespace

TEST(Analyze, DisagreeingLegsAreUncertain) {
  const auto s = make(SyntheticKind::WhiteNoise, 16384, 3);
  const auto report = analyze(s, {}, everything_ns());
  EXPECT_EQ(report.svd_label, Label::Stochastic);
  EXPECT_EQ(report.svd.betti.norm(), 1);
  EXPECT_EQ(report.pca_label, Label::NonStochastic);
  EXPECT_EQ(report.final_label, Label::Uncertain);
}

TEST(Analyze, FinalLabelUncertainIffLegsDiffer) {
  for (auto kind : {SyntheticKind::WhiteNoise, SyntheticKind::Lorenz, SyntheticKind::LogisticMap}) {
    for (double b : {-100.0, 100.0}) {
      auto model = everything_ns();
      model.b = b;
      const auto r = analyze(make(kind, 8192, 1), {}, model);
      EXPECT_EQ(r.final_label == Label::Uncertain, r.svd_label != r.pca_label);
      if (r.svd_label == r.pca_label) EXPECT_EQ(r.final_label, r.svd_label);
    }
  }
}

TEST(Analyze, Deterministic) {
  const auto s = make(SyntheticKind::Lorenz, 8192, 4);
  const auto a = analyze(s, {}, everything_ns());
  const auto b = analyze(s, {}, everything_ns());
  EXPECT_EQ(io::report_to_json(a), io::report_to_json(b));
  EXPECT_EQ(a.svd.image.bits(), b.svd.image.bits());
}

TEST(Analyze, ReportsEmbeddingAndThreshold) {
  auto model = everything_ns();
  model.threshold = 7.0;
  const auto r = analyze(make(SyntheticKind::WhiteNoise, 16384, 2), {}, model);
  EXPECT_EQ(r.n, 16384u);
  EXPECT_EQ(r.svd.params.m, 4);
  EXPECT_EQ(r.svd.params.k, 5000);
  EXPECT_EQ(r.svd.params.tau, 1);
  EXPECT_EQ(r.pca.curve.threshold, 7.0);

  PipelineConfig cfg;
  cfg.pca.threshold = 12.0;
  EXPECT_EQ(analyze(make(SyntheticKind::WhiteNoise, 16384, 2), cfg, model).pca.curve.threshold, 12.0);
}

TEST(Analyze, ShortSeriesAbortsAtEmbedding) {
  const auto full = make(SyntheticKind::WhiteNoise, 1024, 1).samples();
  const TimeSeries s(std::vector<double>(full.begin(), full.begin() + 50), 1.0, "short");
  try {
    analyze(s, {}, everything_ns());
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), Stage::Embedding);
    EXPECT_EQ(e.kind(), ErrorKind::SeriesTooShort);
    EXPECT_NE(std::string(e.what()).find("embedding"), std::string::npos);
  }
}

TEST(Analyze, ConstantSeriesAborts) {
  const TimeSeries s(std::vector<double>(4096, 1.0), 1.0, "flat");
  try {
    analyze(s, {}, everything_ns());
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), Stage::Embedding);
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateSeries);
  }
}

TEST(Analyze, FixedTauAndResolution) {
  PipelineConfig cfg;
  cfg.embedding.tau = 3;
  cfg.embedding.k = 1000;
  cfg.raster.resolution = 32;
  const auto r = analyze(make(SyntheticKind::PinkNoise, 8192, 1), cfg, everything_ns());
  EXPECT_EQ(r.svd.params.tau, 3);
  EXPECT_EQ(r.svd.params.k, 1000);
  EXPECT_EQ(r.svd.image.resolution(), 32);
  EXPECT_EQ(r.svd.pair.e1.size(), 1000u);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsWorkerFailure) {
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::size_t i) {
                              if (i == 57) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(RunExperiment, OrderingIndependentOfJobs) {
  ExperimentOptions opts;
  opts.n = 2048;
  opts.grid = {3.0, 9.0};
  opts.jobs = 1;
  const auto serial = run_experiment({}, opts);
  opts.jobs = 3;
  const auto parallel = run_experiment({}, opts);
  EXPECT_EQ(io::experiment_to_json(serial), io::experiment_to_json(parallel));
  ASSERT_EQ(serial.rows.size(), 41u);
  for (std::size_t i = 1; i < serial.rows.size(); ++i) {
    EXPECT_LT(serial.rows[i - 1].report.series_name, serial.rows[i].report.series_name);
  }
}
