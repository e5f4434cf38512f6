#include "stochastid/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stochastid::embedding {
namespace {

// Incremental autocorrelation so estimate_tau only pays for the lags it
// inspects.
class AutocorrelationCursor {
 public:
  explicit AutocorrelationCursor(std::span<const double> samples)
      : centered_(samples.begin(), samples.end()) {
    const double n = static_cast<double>(centered_.size());
    const double mean = std::accumulate(centered_.begin(), centered_.end(), 0.0) / n;
    double ss = 0.0;
    for (double& v : centered_) {
      v -= mean;
      ss += v * v;
    }
    // Relative test: rounding leaves ~1e-30 of "variance" in a constant series.
    double scale = 0.0;
    for (double v : samples) scale = std::max(scale, std::abs(v));
    if (ss <= 1e-24 * scale * scale * n) {
      throw Error(ErrorKind::DegenerateSeries, "series has zero variance");
    }
    denominator_ = ss;
  }

  std::size_t size() const noexcept { return centered_.size(); }

  double at(std::size_t lag) const {
    if (lag == 0) return 1.0;
    double acc = 0.0;
    const std::size_t n = centered_.size();
    for (std::size_t i = 0; i + lag < n; ++i) acc += centered_[i] * centered_[i + lag];
    return acc / denominator_;
  }

 private:
  std::vector<double> centered_;
  double denominator_ = 1.0;
};

}  // namespace

std::size_t EmbeddingParams::span() const noexcept {
  return static_cast<std::size_t>(k) + static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(tau);
}

std::vector<double> autocorrelation(std::span<const double> samples, int max_lag) {
  if (max_lag < 1 || static_cast<std::size_t>(max_lag) >= samples.size()) {
    throw Error(ErrorKind::InvalidArgument, "autocorrelation needs 1 <= max_lag < N");
  }
  const AutocorrelationCursor acf(samples);
  std::vector<double> rho(static_cast<std::size_t>(max_lag) + 1);
  for (std::size_t lag = 0; lag < rho.size(); ++lag) rho[lag] = acf.at(lag);
  return rho;
}

std::vector<double> autocorrelation(const TimeSeries& series, int max_lag) {
  return autocorrelation(series.samples(), max_lag);
}

int estimate_tau(const TimeSeries& series) {
  const AutocorrelationCursor acf(series.samples());
  const std::size_t n = acf.size();
  const std::size_t window =
      std::max<std::size_t>(1, std::min<std::size_t>(n / 4, kMaxTauSearch));
  const double zero_band = 4.0 / std::sqrt(static_cast<double>(n));

  double prev = 1.0;
  double current = acf.at(1);
  std::size_t best_lag = 1;
  double best_abs = std::abs(current);
  for (std::size_t lag = 1; lag <= window; ++lag) {
    if (current <= zero_band) return static_cast<int>(lag);
    if (lag + 1 >= n) break;
    const double next = acf.at(lag + 1);
    if (current < prev && current < next) return static_cast<int>(lag);
    if (lag + 1 <= window && std::abs(next) < best_abs) {
      best_abs = std::abs(next);
      best_lag = lag + 1;
    }
    prev = current;
    current = next;
  }
  return static_cast<int>(best_lag);
}

DataMatrix build_data_matrix(const TimeSeries& series, const EmbeddingParams& params) {
  if (params.m < 1 || params.tau < 1 || params.k < 1) {
    throw Error(ErrorKind::InvalidArgument, "embedding needs m >= 1, tau >= 1 and k >= 1");
  }
  if (params.span() > series.size()) {
    throw Error(ErrorKind::SeriesTooShort,
                "embedding with m=" + std::to_string(params.m) + ", tau=" +
                    std::to_string(params.tau) + ", k=" + std::to_string(params.k) + " needs " +
                    std::to_string(params.span()) + " samples, series '" + series.name() +
                    "' has " + std::to_string(series.size()));
  }
  const auto& z = series.samples();
  Eigen::MatrixXd values(params.m, params.k);
  for (int r = 0; r < params.m; ++r) {
    const std::size_t offset = static_cast<std::size_t>(r) * static_cast<std::size_t>(params.tau);
    for (int c = 0; c < params.k; ++c) values(r, c) = z[offset + static_cast<std::size_t>(c)];
  }
  return {std::move(values), params, series.name()};
}

ResolvedEmbedding resolve_params(const TimeSeries& series, int m, int fixed_tau, int fixed_k) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "embedding dimension must be >= 1");
  const auto n = static_cast<long long>(series.size());
  ResolvedEmbedding out;
  out.params.m = m;
  out.estimated_tau = fixed_tau > 0 ? fixed_tau : estimate_tau(series);
  out.params.tau = out.estimated_tau;

  if (fixed_k > 0) {
    out.params.k = fixed_k;
    if (fixed_k > n) {
      throw Error(ErrorKind::SeriesTooShort, "k=" + std::to_string(fixed_k) +
                                                 " exceeds series length " + std::to_string(n));
    }
    if (m > 1 && static_cast<long long>(out.params.span()) > n) {
      const long long clamped = (n - fixed_k) / (m - 1);
      if (clamped < 1) {
        throw Error(ErrorKind::SeriesTooShort,
                    "no lag >= 1 fits k=" + std::to_string(fixed_k) + ", m=" + std::to_string(m) +
                        " in " + std::to_string(n) + " samples");
      }
      out.params.tau = static_cast<int>(clamped);
      out.tau_clamped = true;
    }
    return out;
  }

  long long feasible = n - static_cast<long long>(m - 1) * out.params.tau;
  if (feasible < kMinAutoColumns && m > 1 && n - kMinAutoColumns >= m - 1) {
    out.params.tau = static_cast<int>((n - kMinAutoColumns) / (m - 1));
    out.tau_clamped = true;
    feasible = n - static_cast<long long>(m - 1) * out.params.tau;
  }
  const long long k = std::min<long long>(kDefaultMaxColumns, feasible);
  if (k < kMinAutoColumns) {
    throw Error(ErrorKind::SeriesTooShort,
                "series '" + series.name() + "' (" + std::to_string(n) + " samples) leaves only " +
                    std::to_string(std::max(0LL, k)) + " columns at m=" + std::to_string(m) +
                    ", tau=" + std::to_string(out.params.tau) + "; need at least " +
                    std::to_string(kMinAutoColumns));
  }
  out.params.k = static_cast<int>(k);
  return out;
}

}  // namespace stochastid::embedding
