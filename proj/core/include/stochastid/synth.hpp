#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stochastid/types.hpp"

namespace stochastid::synth {

inline constexpr std::size_t kMinSamples = 256;
inline constexpr std::size_t kDefaultSamples = 16384;

struct LogisticParams {
  double growth_rate = 4.0;
  /// Initial condition; drawn uniformly from (0.01, 0.99) when unset.
  std::optional<double> x0;
  int transient = 100;
};

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double step = 0.01;
  int transient = 1000;
};

struct GeneratorSpec {
  SyntheticKind kind = SyntheticKind::WhiteNoise;
  std::size_t n = kDefaultSamples;
  std::uint64_t seed = 0;
  LogisticParams logistic{};
  LorenzParams lorenz{};
};

/// Deterministic for a given spec. Throws `Error(InvalidArgument)` for
/// `n < kMinSamples` or a logistic x0 on a degenerate orbit
/// (0, 1/4, 1/2, 3/4, 1) or outside (0, 1).
TimeSeries generate(const GeneratorSpec& spec);

struct LabeledSeries {
  TimeSeries series;
  Label truth;
};

struct Corpus {
  std::vector<LabeledSeries> train;
  std::vector<LabeledSeries> validation;
};

inline constexpr std::size_t kTrainCount = 27;
inline constexpr std::size_t kValidationCount = 14;

/// Training: first half (rounded up) of `train_seeds` white noise (S), the
/// rest logistic map (NS). Validation: first half pink noise (S), the rest
/// Lorenz (NS). Counts other than 27/14 need `allow_custom_counts`.
Corpus make_corpus(const std::vector<std::uint64_t>& train_seeds,
                   const std::vector<std::uint64_t>& val_seeds,
                   std::size_t n = kDefaultSamples, bool allow_custom_counts = false);

/// Seeds 1..27 for training and 101..114 for validation, offset by `base`.
std::vector<std::uint64_t> default_train_seeds(std::uint64_t base = 0);
std::vector<std::uint64_t> default_validation_seeds(std::uint64_t base = 0);

Label ground_truth(SyntheticKind kind);

}  // namespace stochastid::synth
