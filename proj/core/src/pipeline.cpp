#include "stochastid/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace stochastid {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Embedding:
      return "embedding";
    case Stage::Svd:
      return "svd";
    case Stage::Raster:
      return "raster";
    case Stage::Betti:
      return "betti";
    case Stage::Pca:
      return "pca";
    case Stage::Classify:
      return "classify";
  }
  return "unknown";
}

StageError::StageError(Stage stage, const Error& cause)
    : Error(cause.kind(), std::string(to_string(stage)) + ": " + cause.what()), stage_(stage) {}

namespace {

template <typename Fn>
auto in_stage(Stage stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

void check_singular_pair(const svd::SingularPair& pair) {
  double n1 = 0.0;
  double n2 = 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < pair.e1.size(); ++i) {
    n1 += pair.e1[i] * pair.e1[i];
    n2 += pair.e2[i] * pair.e2[i];
    dot += pair.e1[i] * pair.e2[i];
  }
  constexpr double kTol = 1e-9;
  if (std::abs(std::sqrt(n1) - 1.0) > kTol || std::abs(std::sqrt(n2) - 1.0) > kTol ||
      std::abs(dot) > kTol || pair.sigma1 < pair.sigma2 || pair.sigma2 < 0.0) {
    throw Error(ErrorKind::RankDeficient, "singular vectors failed the orthonormality check");
  }
}

}  // namespace

SvdLegResult run_svd_leg(const TimeSeries& series, const PipelineConfig& config) {
  SvdLegResult out;
  const auto resolved = in_stage(Stage::Embedding, [&] {
    return embedding::resolve_params(series, config.embedding.m, config.embedding.tau,
                                     config.embedding.k);
  });
  out.params = resolved.params;
  out.estimated_tau = resolved.estimated_tau;
  out.tau_clamped = resolved.tau_clamped;
  const auto matrix =
      in_stage(Stage::Embedding, [&] { return embedding::build_data_matrix(series, out.params); });

  out.pair = in_stage(Stage::Svd, [&] {
    auto pair = svd::top2_right_singular(matrix);
    check_singular_pair(pair);
    return pair;
  });

  out.resolution = config.raster.resolution > 0
                       ? config.raster.resolution
                       : svd::auto_resolution(static_cast<std::size_t>(out.params.k));
  out.image = in_stage(Stage::Raster, [&] {
    return svd::rasterize(out.pair, {.resolution = out.resolution,
                                     .dilation = config.raster.dilation,
                                     .normalization = config.raster.normalization});
  });
  out.betti = in_stage(Stage::Betti, [&] { return svd::betti(out.image); });
  out.label = in_stage(Stage::Betti, [&] { return svd::svd_label(out.betti); });
  return out;
}

PcaLegResult run_pca_leg(const TimeSeries& series, double threshold, int min_length) {
  return in_stage(Stage::Pca, [&] {
    PcaLegResult out;
    out.curve = pca::build_ratio_curve(series, threshold, min_length);
    out.features = pca::features(out.curve);
    return out;
  });
}

ClassificationReport analyze(const TimeSeries& series, const PipelineConfig& config,
                             const pca::LinearModel& model) {
  ClassificationReport report;
  report.series_name = series.name();
  report.n = series.size();
  report.svd = run_svd_leg(series, config);
  report.svd_label = report.svd.label;

  const double threshold = config.pca.threshold.value_or(model.threshold);
  report.pca = run_pca_leg(series, threshold, config.pca.min_length);
  const auto decision = in_stage(Stage::Classify, [&] { return pca::pca_label(model, report.pca.features); });
  report.pca_label = decision.label;
  report.svm_margin = decision.margin;
  report.final_label = combine_labels(report.svd_label, report.pca_label);
  return report;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::vector<TimeSeries> series_of(const std::vector<synth::LabeledSeries>& labeled) {
  std::vector<TimeSeries> out;
  out.reserve(labeled.size());
  for (const auto& l : labeled) out.push_back(l.series);
  return out;
}

std::uint64_t seed_of(const TimeSeries& s) {
  if (const auto* src = std::get_if<SyntheticSource>(&s.source())) return src->seed;
  return 0;
}

struct Fitted {
  pca::LinearModel model;
  double train_accuracy = 0.0;
};

Fitted fit(const std::vector<synth::LabeledSeries>& train, double threshold, int min_length,
           const pca::TrainingOptions& training, int jobs) {
  std::vector<pca::TrainingSample> samples(train.size());
  parallel_for(train.size(), jobs, [&](std::size_t i) {
    samples[i] = {run_pca_leg(train[i].series, threshold, min_length).features, train[i].truth};
  });
  Fitted out;
  out.model = pca::train_linear(samples, training);
  out.model.threshold = threshold;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    if (pca::pca_label(out.model, s.features).label == s.label) ++correct;
  }
  out.train_accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
  return out;
}

}  // namespace

TrainedModel train_default_model(const ExperimentOptions& options,
                                 std::optional<double> fixed_threshold, int min_length) {
  TrainedModel out;
  out.train_seeds = synth::default_train_seeds(options.seed_base);
  const auto corpus = synth::make_corpus(out.train_seeds,
                                         synth::default_validation_seeds(options.seed_base), options.n);
  if (fixed_threshold) {
    out.tuning.best_threshold = *fixed_threshold;
  } else {
    std::vector<TimeSeries> all = series_of(corpus.train);
    for (auto& s : series_of(corpus.validation)) all.push_back(std::move(s));
    out.tuning = pca::tune_threshold(all, options.grid, min_length);
  }
  const Fitted fitted =
      fit(corpus.train, out.tuning.best_threshold, min_length, options.training, options.jobs);
  out.model = fitted.model;
  out.train_accuracy = fitted.train_accuracy;
  return out;
}

ExperimentReport run_experiment(const PipelineConfig& config, const ExperimentOptions& options) {
  ExperimentReport report;
  report.train_seeds = synth::default_train_seeds(options.seed_base);
  report.validation_seeds = synth::default_validation_seeds(options.seed_base);
  const auto corpus = synth::make_corpus(report.train_seeds, report.validation_seeds, options.n);

  std::vector<TimeSeries> all = series_of(corpus.train);
  for (auto& s : series_of(corpus.validation)) all.push_back(std::move(s));
  report.tuning = pca::tune_threshold(all, options.grid, config.pca.min_length);

  const double threshold = config.pca.threshold.value_or(report.tuning.best_threshold);
  const Fitted fitted = fit(corpus.train, threshold, config.pca.min_length, options.training, options.jobs);
  report.model = fitted.model;
  report.pca_train_accuracy = fitted.train_accuracy;

  std::vector<ExperimentRow> rows;
  for (const auto& l : corpus.train) rows.push_back({{}, l.truth, "train", seed_of(l.series)});
  for (const auto& l : corpus.validation) rows.push_back({{}, l.truth, "val", seed_of(l.series)});

  PipelineConfig run_config = config;
  run_config.pca.threshold = threshold;
  parallel_for(rows.size(), options.jobs,
               [&](std::size_t i) { rows[i].report = analyze(all[i], run_config, report.model); });

  std::size_t svd_correct = 0;
  std::size_t val_total = 0;
  std::size_t val_correct = 0;
  for (const auto& row : rows) {
    if (row.report.svd_label == row.truth) ++svd_correct;
    if (row.report.final_label == Label::Uncertain) ++report.uncertain;
    if (row.split == "val") {
      ++val_total;
      if (row.report.pca_label == row.truth) ++val_correct;
    }
  }
  report.svd_accuracy = static_cast<double>(svd_correct) / static_cast<double>(rows.size());
  report.pca_validation_accuracy =
      val_total ? static_cast<double>(val_correct) / static_cast<double>(val_total) : 0.0;

  std::sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
    return a.report.series_name < b.report.series_name;
  });
  report.rows = std::move(rows);
  return report;
}

}  // namespace stochastid
