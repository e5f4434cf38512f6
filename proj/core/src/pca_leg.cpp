#include "stochastid/pca_leg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace stochastid::pca {

Eigenvalues2 symmetric_eigenvalues(double a, double b, double c) {
  const double mean = 0.5 * (a + b);
  const double radius = std::hypot(0.5 * (a - b), c);
  const double det = a * b - c * c;
  // Take the eigenvalue of larger magnitude directly and recover the other
  // from the determinant to avoid cancellation.
  if (mean >= 0.0) {
    const double larger = mean + radius;
    return {larger, larger != 0.0 ? det / larger : mean - radius};
  }
  const double smaller = mean - radius;
  return {smaller != 0.0 ? det / smaller : mean + radius, smaller};
}

double eigen_ratio(std::span<const double> segment) {
  if (segment.size() < 4) {
    throw Error(ErrorKind::SeriesTooShort, "eigen_ratio needs a segment of at least 4 samples");
  }
  const std::size_t half = segment.size() / 2;
  const auto first = segment.subspan(0, half);
  const auto second = segment.subspan(half, half);

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    mx += first[i];
    my += second[i];
  }
  mx /= static_cast<double>(half);
  my /= static_cast<double>(half);

  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    const double dx = first[i] - mx;
    const double dy = second[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double denom = static_cast<double>(half - 1);
  const Eigenvalues2 eig = symmetric_eigenvalues(sxx / denom, syy / denom, sxy / denom);

  if (eig.larger <= kConstantEigenvalue) return 1.0;
  if (eig.smaller <= eig.larger / kRatioCap) return kRatioCap;
  return eig.larger / eig.smaller;
}

double RatioCurve::max_ratio() const {
  double best = 0.0;
  for (const auto& leaf : leaves) best = std::max(best, leaf.ratio);
  return best;
}

RatioCurve build_ratio_curve(std::span<const double> samples, double threshold, int min_length) {
  if (!(threshold > 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "eigenvalue-ratio threshold must exceed 1");
  }
  if (min_length < 4) throw Error(ErrorKind::InvalidArgument, "minimum leaf length must be >= 4");
  const std::size_t even = samples.size() / 2 * 2;
  if (even < 4) throw Error(ErrorKind::SeriesTooShort, "ratio curve needs at least 4 samples");

  RatioCurve curve;
  curve.even_length = even;
  curve.threshold = threshold;

  // Depth-first, left child first, so leaves come out in time order.
  std::vector<std::pair<std::size_t, std::size_t>> pending{{0, even}};
  while (!pending.empty()) {
    const auto [start, end] = pending.back();
    pending.pop_back();
    const std::size_t length = end - start;
    const double ratio = eigen_ratio(samples.subspan(start, length));
    const std::size_t half = length / 2;
    if (ratio >= threshold || half < static_cast<std::size_t>(min_length)) {
      curve.leaves.push_back({start, end, ratio});
      continue;
    }
    pending.emplace_back(start + half, end);
    pending.emplace_back(start, start + half);
  }

  std::size_t cursor = 0;
  for (const auto& leaf : curve.leaves) {
    if (leaf.start != cursor || leaf.end <= leaf.start || leaf.ratio < 1.0) {
      throw std::logic_error("ratio curve leaves do not partition the series");
    }
    cursor = leaf.end;
  }
  if (cursor != even) throw std::logic_error("ratio curve leaves do not partition the series");
  return curve;
}

RatioCurve build_ratio_curve(const TimeSeries& series, double threshold, int min_length) {
  return build_ratio_curve(series.samples(), threshold, min_length);
}

FeatureVector FeatureVector::from_raw(double ver, double auer) {
  return {ver, auer, std::log(ver + kLogEpsilon), std::log(auer + kLogEpsilon)};
}

FeatureVector features(const RatioCurve& curve) {
  if (curve.leaves.empty() || curve.even_length == 0) {
    throw Error(ErrorKind::InvalidArgument, "features need a nonempty ratio curve");
  }
  const double count = static_cast<double>(curve.leaves.size());
  double mean = 0.0;
  double area = 0.0;
  for (const auto& leaf : curve.leaves) {
    mean += leaf.ratio;
    area += leaf.ratio * static_cast<double>(leaf.length());
  }
  mean /= count;
  double var = 0.0;
  for (const auto& leaf : curve.leaves) var += (leaf.ratio - mean) * (leaf.ratio - mean);
  var /= count;
  return FeatureVector::from_raw(var, area / static_cast<double>(curve.even_length));
}

namespace {

double squared_distance(const Point2& p, const Point2& q) {
  const double dx = p[0] - q[0];
  const double dy = p[1] - q[1];
  return dx * dx + dy * dy;
}

std::vector<int> assign(std::span<const Point2> points, const std::array<Point2, 2>& centers) {
  std::vector<int> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = squared_distance(points[i], centers[1]) < squared_distance(points[i], centers[0]) ? 1 : 0;
  }
  return out;
}

}  // namespace

KMeansResult kmeans2(std::span<const Point2> points) {
  KMeansResult result;
  if (points.empty()) return result;
  Point2 lo = points[0];
  Point2 hi = points[0];
  for (const auto& p : points) {
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  result.centers = {lo, hi};
  constexpr int kMaxIterations = 100;
  constexpr double kTolerance = 1e-9;
  for (int it = 0; it < kMaxIterations; ++it) {
    result.iterations = it + 1;
    result.assignment = assign(points, result.centers);
    std::array<Point2, 2> sums{};
    std::array<std::size_t, 2> counts{};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const int c = result.assignment[i];
      sums[c][0] += points[i][0];
      sums[c][1] += points[i][1];
      ++counts[c];
    }
    double moved = 0.0;
    for (int c = 0; c < 2; ++c) {
      if (counts[c] == 0) continue;
      const Point2 next{sums[c][0] / static_cast<double>(counts[c]),
                        sums[c][1] / static_cast<double>(counts[c])};
      moved = std::max(moved, std::sqrt(squared_distance(next, result.centers[c])));
      result.centers[c] = next;
    }
    if (moved <= kTolerance) break;
  }
  result.assignment = assign(points, result.centers);
  return result;
}

double silhouette(std::span<const Point2> points, std::span<const int> assignment) {
  if (points.size() != assignment.size()) {
    throw Error(ErrorKind::InvalidArgument, "silhouette: assignment size mismatch");
  }
  std::array<std::size_t, 2> counts{};
  for (int c : assignment) ++counts[static_cast<std::size_t>(c)];
  if (counts[0] == 0 || counts[1] == 0) return 0.0;

  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int own = assignment[i];
    if (counts[static_cast<std::size_t>(own)] == 1) continue;
    std::array<double, 2> sum{};
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      sum[static_cast<std::size_t>(assignment[j])] += std::sqrt(squared_distance(points[i], points[j]));
    }
    const double a = sum[static_cast<std::size_t>(own)] /
                     static_cast<double>(counts[static_cast<std::size_t>(own)] - 1);
    const double b = sum[static_cast<std::size_t>(1 - own)] /
                     static_cast<double>(counts[static_cast<std::size_t>(1 - own)]);
    const double scale = std::max(a, b);
    if (scale > 0.0) total += (b - a) / scale;
  }
  return total / static_cast<double>(points.size());
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int th = 2; th <= 20; ++th) grid.push_back(th);
  return grid;
}

TuningResult tune_threshold(std::span<const TimeSeries> corpus, std::span<const double> grid,
                            int min_length) {
  if (corpus.size() < 4) throw Error(ErrorKind::InvalidArgument, "tuning needs at least 4 series");
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "tuning grid is empty");
  for (double th : grid) {
    if (!(th > 1.0)) throw Error(ErrorKind::InvalidArgument, "tuning grid values must exceed 1");
  }
  TuningResult result;
  double best = -std::numeric_limits<double>::infinity();
  for (double th : grid) {
    std::vector<Point2> points;
    points.reserve(corpus.size());
    for (const auto& series : corpus) {
      points.push_back(features(build_ratio_curve(series, th, min_length)).log_point());
    }
    const KMeansResult clusters = kmeans2(points);
    const double score = silhouette(points, clusters.assignment);
    result.scores.push_back({th, score});
    if (score > best || (score == best && th < result.best_threshold)) {
      best = score;
      result.best_threshold = th;
    }
  }
  return result;
}

double LinearModel::decision(const FeatureVector& fv) const noexcept {
  return w[0] * fv.log_ver + w[1] * fv.log_auer + b;
}

double LinearModel::margin(const FeatureVector& fv) const {
  const double norm = std::hypot(w[0], w[1]);
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidArgument, "linear model has zero weight vector");
  return decision(fv) / norm;
}

LinearModel train_linear(std::span<const TrainingSample> samples, const TrainingOptions& options) {
  bool has_s = false;
  bool has_ns = false;
  for (const auto& s : samples) {
    if (s.label == Label::Uncertain) {
      throw Error(ErrorKind::InvalidArgument, "training labels must be Stochastic or NonStochastic");
    }
    (s.label == Label::NonStochastic ? has_ns : has_s) = true;
  }
  if (!has_s || !has_ns) {
    throw Error(ErrorKind::InvalidArgument, "training needs both Stochastic and NonStochastic samples");
  }
  if (options.epochs < 1 || !(options.regularization > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "training needs epochs >= 1 and regularization > 0");
  }

  const double lambda = options.regularization;
  const double radius = 1.0 / std::sqrt(lambda);
  std::mt19937_64 rng(options.shuffle_seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  LinearModel model;
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const auto& s = samples[idx];
      const double y = s.label == Label::NonStochastic ? 1.0 : -1.0;
      const Point2 x = s.features.log_point();
      const bool violated = y * (model.w[0] * x[0] + model.w[1] * x[1] + model.b) < 1.0;
      const double shrink = 1.0 - eta * lambda;
      model.w[0] *= shrink;
      model.w[1] *= shrink;
      if (violated) {
        model.w[0] += eta * y * x[0];
        model.w[1] += eta * y * x[1];
        model.b += eta * y;
      }
      const double norm = std::hypot(model.w[0], model.w[1]);
      if (norm > radius) {
        model.w[0] *= radius / norm;
        model.w[1] *= radius / norm;
      }
    }
  }
  if (!(std::hypot(model.w[0], model.w[1]) > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "training collapsed to a zero weight vector");
  }
  return model;
}

PcaDecision pca_label(const LinearModel& model, const FeatureVector& fv) {
  const double m = model.margin(fv);
  return {m >= 0.0 ? Label::NonStochastic : Label::Stochastic, m};
}

}  // namespace stochastid::pca
