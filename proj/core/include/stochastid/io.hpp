#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "stochastid/pca_leg.hpp"
#include "stochastid/pipeline.hpp"
#include "stochastid/svd_leg.hpp"
#include "stochastid/types.hpp"

namespace stochastid::io {

inline constexpr int kSchemaVersion = 1;

// --- CSV ------------------------------------------------------------------

/// One numeric column, an optional single header line, LF or CRLF.
std::vector<double> read_series_csv(std::istream& in, const std::string& source = "<stream>");
TimeSeries read_series_csv(const std::filesystem::path& path, double dt);

/// Header `value` then one sample per line, printed with 17 significant
/// digits so that reading it back is exact.
void write_series_csv(std::ostream& out, std::span<const double> samples);
void write_series_csv(const std::filesystem::path& path, std::span<const double> samples);

/// `index,e1,e2` rows for the scatter behind the E1-E2 raster.
void write_pair_csv(std::ostream& out, const svd::SingularPair& pair);

// --- JSON -----------------------------------------------------------------

struct ModelMetadata {
  std::vector<std::uint64_t> train_seeds;
  std::size_t samples_per_series = 0;
  double train_accuracy = 0.0;
};

std::string model_to_json(const pca::LinearModel& model, const ModelMetadata& meta = {});
pca::LinearModel model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const pca::LinearModel& model,
                const ModelMetadata& meta = {});
/// Throws UnreadableFile or ParseError.
pca::LinearModel load_model(const std::filesystem::path& path);

/// Single-series report document (`"schema":1`).
std::string report_to_json(const ClassificationReport& report, int indent = 2);

/// JSON array of per-series reports with `split`, `truth` and `seed` added.
std::string experiment_to_json(const ExperimentReport& report, int indent = 2);

/// Threshold/silhouette table.
std::string tuning_to_json(const pca::TuningResult& tuning, int indent = 2);

/// Human-readable table with the columns Betti Norm, SVD Label, VER, AUER,
/// PCA Label, Match and Final Label, followed by summary lines.
std::string experiment_table(const ExperimentReport& report);

// --- images and plots -----------------------------------------------------

/// Plain (P2) portable graymap, foreground 0 on a 255 background.
void write_pgm(std::ostream& out, const svd::BinaryImage& image);

std::string e1e2_svg(const svd::SingularPair& pair, const std::string& title);

/// Step curve of leaf ratios on top, the series itself in a lower panel.
std::string ratio_svg(const pca::RatioCurve& curve, std::span<const double> samples,
                      const std::string& title);

struct FeaturePoint {
  pca::FeatureVector features;
  Label label;
  std::string name;
};

/// Log-log (VER, AUER) scatter with the model's separating line.
std::string features_svg(std::span<const FeaturePoint> points, const pca::LinearModel& model,
                         const std::string& title);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace stochastid::io
