#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stochastid/embedding.hpp"
#include "stochastid/pca_leg.hpp"
#include "stochastid/svd_leg.hpp"
#include "stochastid/synth.hpp"
#include "stochastid/types.hpp"

namespace stochastid {

enum class Stage { Embedding, Svd, Raster, Betti, Pca, Classify };

std::string_view to_string(Stage stage);

/// Analysis failure tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(Stage stage, const Error& cause);

  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

struct PipelineConfig {
  struct Embedding {
    int m = embedding::kDefaultDimension;
    int tau = 0;  ///< 0: estimate from the autocorrelation
    int k = 0;    ///< 0: min(5000, N - (m-1) tau)
  } embedding;

  struct Raster {
    int resolution = 0;  ///< 0: svd::auto_resolution(k)
    int dilation = svd::kDefaultDilation;
    svd::Normalization normalization = svd::Normalization::Rank;
  } raster;

  struct Pca {
    std::optional<double> threshold;  ///< unset: the model's threshold
    int min_length = pca::kDefaultMinLength;
  } pca;

  std::string model_path;
  bool emit_plots = false;
};

struct SvdLegResult {
  embedding::EmbeddingParams params;
  int estimated_tau = 0;
  bool tau_clamped = false;
  svd::SingularPair pair;
  int resolution = 0;
  svd::BinaryImage image;
  svd::BettiDescriptor betti;
  Label label = Label::Stochastic;
};

struct PcaLegResult {
  pca::RatioCurve curve;
  pca::FeatureVector features;
};

/// Everything computed for one series. Intermediate artifacts are kept
/// for plotting and debugging.
struct ClassificationReport {
  std::string series_name;
  std::size_t n = 0;
  SvdLegResult svd;
  PcaLegResult pca;
  Label svd_label = Label::Stochastic;
  Label pca_label = Label::Stochastic;
  Label final_label = Label::Uncertain;
  double svm_margin = 0.0;
};

/// Embedding, SVD, rasterization and Betti counting. Throws StageError.
SvdLegResult run_svd_leg(const TimeSeries& series, const PipelineConfig& config = {});

/// Ratio curve and (VER, AUER) at `threshold`. Throws StageError.
PcaLegResult run_pca_leg(const TimeSeries& series, double threshold,
                         int min_length = pca::kDefaultMinLength);

/// Both legs plus the concurrence rule. Any failure aborts with a
/// StageError; no partial labels are returned.
ClassificationReport analyze(const TimeSeries& series, const PipelineConfig& config,
                             const pca::LinearModel& model);

/// Calls `fn(i)` for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

struct ExperimentOptions {
  std::size_t n = synth::kDefaultSamples;
  std::uint64_t seed_base = 0;
  std::vector<double> grid = pca::default_threshold_grid();
  pca::TrainingOptions training{};
  int jobs = 1;
};

struct ExperimentRow {
  ClassificationReport report;
  Label truth = Label::Stochastic;
  std::string split;  ///< "train" or "val"
  std::uint64_t seed = 0;
};

struct ExperimentReport {
  pca::TuningResult tuning;
  pca::LinearModel model;
  std::vector<std::uint64_t> train_seeds;
  std::vector<std::uint64_t> validation_seeds;
  std::vector<ExperimentRow> rows;  ///< sorted by series name

  double pca_train_accuracy = 0.0;
  double pca_validation_accuracy = 0.0;
  double svd_accuracy = 0.0;  ///< over every analyzed series
  std::size_t uncertain = 0;
};

/// Generates the 27/14 corpus, tunes the threshold over all 41 series,
/// trains on the training split and analyzes every series end to end.
ExperimentReport run_experiment(const PipelineConfig& config, const ExperimentOptions& options = {});

/// Tunes and trains on the default corpus without the end-to-end pass.
struct TrainedModel {
  pca::LinearModel model;
  pca::TuningResult tuning;
  std::vector<std::uint64_t> train_seeds;
  double train_accuracy = 0.0;
};

TrainedModel train_default_model(const ExperimentOptions& options = {},
                                 std::optional<double> fixed_threshold = std::nullopt,
                                 int min_length = pca::kDefaultMinLength);

}  // namespace stochastid
