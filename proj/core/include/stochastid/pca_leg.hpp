#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "stochastid/types.hpp"

namespace stochastid::pca {

inline constexpr double kRatioCap = 1e6;
inline constexpr double kConstantEigenvalue = 1e-12;
inline constexpr int kDefaultMinLength = 100;
inline constexpr double kDefaultThreshold = 9.0;
inline constexpr double kLogEpsilon = 1e-9;

struct Eigenvalues2 {
  double larger = 0.0;
  double smaller = 0.0;
};

/// Closed-form eigenvalues of the symmetric matrix [[a, c], [c, b]].
Eigenvalues2 symmetric_eigenvalues(double a, double b, double c);

/// Ratio of the larger to the smaller eigenvalue of the 2x2 sample
/// covariance of the pairs (z_i, z_{i + floor(L/2)}), i < floor(L/2).
/// Odd-length segments drop their last sample. Capped at kRatioCap; a
/// constant segment yields 1. Throws SeriesTooShort for L < 4.
double eigen_ratio(std::span<const double> segment);

struct LeafInterval {
  std::size_t start = 0;  ///< inclusive
  std::size_t end = 0;    ///< exclusive
  double ratio = 1.0;

  std::size_t length() const noexcept { return end - start; }
};

/// Leaves of the recursive halving, in time order. They partition
/// [0, even_length) where even_length is the series length rounded down to
/// an even number.
struct RatioCurve {
  std::vector<LeafInterval> leaves;
  std::size_t even_length = 0;
  double threshold = kDefaultThreshold;

  double max_ratio() const;
};

/// An interval becomes a leaf when its ratio reaches `threshold` or when
/// half its length is below `min_length`; otherwise it is split into two
/// halves that are processed the same way.
RatioCurve build_ratio_curve(std::span<const double> samples, double threshold,
                             int min_length = kDefaultMinLength);
RatioCurve build_ratio_curve(const TimeSeries& series, double threshold,
                             int min_length = kDefaultMinLength);

struct FeatureVector {
  double ver = 0.0;   ///< population variance of leaf ratios
  double auer = 0.0;  ///< length-weighted mean ratio (area on normalized time)
  double log_ver = 0.0;
  double log_auer = 0.0;

  static FeatureVector from_raw(double ver, double auer);
  std::array<double, 2> log_point() const noexcept { return {log_ver, log_auer}; }
};

FeatureVector features(const RatioCurve& curve);

// --- threshold tuning -----------------------------------------------------

using Point2 = std::array<double, 2>;

struct KMeansResult {
  std::vector<int> assignment;
  std::array<Point2, 2> centers{};
  int iterations = 0;
};

/// Two-means, seeded at the component-wise minimum and maximum of the
/// points; at most 100 iterations, stops when no center moves more than
/// 1e-9.
KMeansResult kmeans2(std::span<const Point2> points);

/// Mean silhouette coefficient. Singleton clusters contribute 0; returns 0
/// when fewer than two clusters are populated.
double silhouette(std::span<const Point2> points, std::span<const int> assignment);

struct ThresholdScore {
  double threshold = 0.0;
  double silhouette = 0.0;
};

struct TuningResult {
  double best_threshold = kDefaultThreshold;
  std::vector<ThresholdScore> scores;
};

std::vector<double> default_threshold_grid();

/// Silhouette of a 2-means clustering of the log features at each grid
/// threshold; the argmax wins, ties go to the smaller threshold. Needs at
/// least 4 series and grid values > 1.
TuningResult tune_threshold(std::span<const TimeSeries> corpus, std::span<const double> grid,
                            int min_length = kDefaultMinLength);

// --- linear classifier ----------------------------------------------------

/// Separating line in (log_ver, log_auer) space; NonStochastic lies on the
/// positive side of w.x + b.
struct LinearModel {
  Point2 w{0.0, 0.0};
  double b = 0.0;
  double threshold = kDefaultThreshold;

  double decision(const FeatureVector& fv) const noexcept;
  double margin(const FeatureVector& fv) const;
};

struct TrainingOptions {
  int epochs = 2000;
  double regularization = 1e-2;
  std::uint64_t shuffle_seed = 0x5eed;
};

struct TrainingSample {
  FeatureVector features;
  Label label;
};

/// Soft-margin linear SVM trained with Pegasos-style hinge-loss
/// subgradient steps (step 1/(lambda t)); the bias is unregularized.
/// Throws InvalidArgument for single-class or Uncertain-labelled input.
LinearModel train_linear(std::span<const TrainingSample> samples, const TrainingOptions& options = {});

struct PcaDecision {
  Label label;
  double margin;  ///< signed distance to the boundary, positive on the NS side
};

/// Points exactly on the boundary are NonStochastic.
PcaDecision pca_label(const LinearModel& model, const FeatureVector& fv);

}  // namespace stochastid::pca
