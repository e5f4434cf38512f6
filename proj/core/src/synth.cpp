#include "stochastid/synth.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <random>
#include <string>

namespace stochastid::synth {
namespace {

// FFTW's planner is not re-entrant.
std::mutex fftw_planner_mutex;

std::vector<double> white_noise(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = normal(rng);
  return out;
}

void standardize(std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double& v : x) {
    v -= mean;
    ss += v * v;
  }
  const double sd = std::sqrt(ss / n);
  if (sd > 0.0) {
    for (double& v : x) v /= sd;
  }
}

// Spectral shaping: white Gaussian noise, amplitudes scaled by 1/sqrt(f),
// DC removed, back to the time domain, unit variance.
std::vector<double> pink_noise(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> x = white_noise(n, rng);
  const std::size_t bins = n / 2 + 1;
  std::vector<std::complex<double>> spectrum(bins);
  auto* freq = reinterpret_cast<fftw_complex*>(spectrum.data());

  fftw_plan forward;
  fftw_plan inverse;
  {
    std::lock_guard lock(fftw_planner_mutex);
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(), freq, FFTW_ESTIMATE);
    inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), freq, x.data(), FFTW_ESTIMATE);
  }
  fftw_execute(forward);
  spectrum[0] = 0.0;
  for (std::size_t j = 1; j < bins; ++j) {
    const double f = static_cast<double>(j) / static_cast<double>(n);
    spectrum[j] /= std::sqrt(f);
  }
  fftw_execute(inverse);
  {
    std::lock_guard lock(fftw_planner_mutex);
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  standardize(x);
  return x;
}

bool degenerate_logistic_seed(double x0) {
  for (double bad : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    if (x0 == bad) return true;
  }
  return false;
}

std::vector<double> logistic_map(std::size_t n, const LogisticParams& p, std::mt19937_64& rng) {
  double x = p.x0 ? *p.x0 : std::uniform_real_distribution<double>(0.01, 0.99)(rng);
  if (!(x > 0.0 && x < 1.0) || degenerate_logistic_seed(x)) {
    throw Error(ErrorKind::InvalidArgument,
                "logistic x0=" + std::to_string(x) + " is outside (0,1) or on a degenerate orbit");
  }
  const double r = p.growth_rate;
  for (int i = 0; i < p.transient; ++i) x = r * x * (1.0 - x);
  std::vector<double> out(n);
  for (auto& v : out) {
    x = r * x * (1.0 - x);
    v = x;
  }
  return out;
}

using State = std::array<double, 3>;

State lorenz_rhs(const State& s, const LorenzParams& p) {
  return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

State axpy(const State& s, double h, const State& k) {
  return {s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
}

std::vector<double> lorenz_x(std::size_t n, const LorenzParams& p, std::mt19937_64& rng) {
  const double delta = std::uniform_real_distribution<double>(-0.1, 0.1)(rng);
  State s{1.0 + delta, 1.0, 1.0};
  const double h = p.step;
  auto step = [&] {
    const State k1 = lorenz_rhs(s, p);
    const State k2 = lorenz_rhs(axpy(s, h / 2, k1), p);
    const State k3 = lorenz_rhs(axpy(s, h / 2, k2), p);
    const State k4 = lorenz_rhs(axpy(s, h, k3), p);
    for (int c = 0; c < 3; ++c) s[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
  };
  for (int i = 0; i < p.transient; ++i) step();
  std::vector<double> out(n);
  for (auto& v : out) {
    step();
    v = s[0];
  }
  return out;
}

std::string series_name(const GeneratorSpec& spec) {
  return std::string(to_string(spec.kind)) + "-" + std::to_string(spec.seed);
}

}  // namespace

TimeSeries generate(const GeneratorSpec& spec) {
  if (spec.n < kMinSamples) {
    throw Error(ErrorKind::InvalidArgument, "synthetic series need n >= " +
                                                std::to_string(kMinSamples) + " (got " +
                                                std::to_string(spec.n) + ")");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<double> samples;
  double dt = 1.0;
  switch (spec.kind) {
    case SyntheticKind::WhiteNoise:
      samples = white_noise(spec.n, rng);
      break;
    case SyntheticKind::PinkNoise:
      samples = pink_noise(spec.n, rng);
      break;
    case SyntheticKind::LogisticMap:
      samples = logistic_map(spec.n, spec.logistic, rng);
      break;
    case SyntheticKind::Lorenz:
      samples = lorenz_x(spec.n, spec.lorenz, rng);
      dt = spec.lorenz.step;
      break;
  }
  return TimeSeries(std::move(samples), dt, series_name(spec),
                    SyntheticSource{spec.kind, spec.seed});
}

Label ground_truth(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::WhiteNoise:
    case SyntheticKind::PinkNoise:
      return Label::Stochastic;
    case SyntheticKind::LogisticMap:
    case SyntheticKind::Lorenz:
      return Label::NonStochastic;
  }
  return Label::Stochastic;
}

namespace {

std::vector<LabeledSeries> make_split(const std::vector<std::uint64_t>& seeds, std::size_t n,
                                      SyntheticKind first, SyntheticKind second,
                                      std::string_view prefix) {
  const std::size_t first_count = (seeds.size() + 1) / 2;
  std::vector<LabeledSeries> out;
  out.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const SyntheticKind kind = i < first_count ? first : second;
    const std::size_t index = i < first_count ? i : i - first_count;
    TimeSeries s = generate({.kind = kind, .n = n, .seed = seeds[i]});
    char suffix[8];
    std::snprintf(suffix, sizeof suffix, "%02zu", index);
    std::string name = std::string(prefix) + "-" + std::string(to_string(kind)) + "-" + suffix;
    out.push_back({TimeSeries(s.samples(), s.dt(), std::move(name), s.source()), ground_truth(kind)});
  }
  return out;
}

}  // namespace

Corpus make_corpus(const std::vector<std::uint64_t>& train_seeds,
                   const std::vector<std::uint64_t>& val_seeds, std::size_t n,
                   bool allow_custom_counts) {
  if (!allow_custom_counts &&
      (train_seeds.size() != kTrainCount || val_seeds.size() != kValidationCount)) {
    throw Error(ErrorKind::InvalidArgument,
                "corpus must have 27 training and 14 validation seeds (got " +
                    std::to_string(train_seeds.size()) + "/" + std::to_string(val_seeds.size()) +
                    "); pass allow_custom_counts to override");
  }
  if (train_seeds.size() < 2 || val_seeds.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "each split needs at least one series per family");
  }
  return {make_split(train_seeds, n, SyntheticKind::WhiteNoise, SyntheticKind::LogisticMap, "train"),
          make_split(val_seeds, n, SyntheticKind::PinkNoise, SyntheticKind::Lorenz, "val")};
}

std::vector<std::uint64_t> default_train_seeds(std::uint64_t base) {
  std::vector<std::uint64_t> seeds(kTrainCount);
  std::iota(seeds.begin(), seeds.end(), base + 1);
  return seeds;
}

std::vector<std::uint64_t> default_validation_seeds(std::uint64_t base) {
  std::vector<std::uint64_t> seeds(kValidationCount);
  std::iota(seeds.begin(), seeds.end(), base + 101);
  return seeds;
}

}  // namespace stochastid::synth
