#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stochastid/types.hpp"

namespace stochastid::embedding {

inline constexpr int kDefaultDimension = 4;
inline constexpr int kDefaultMaxColumns = 5000;
inline constexpr int kMinAutoColumns = 256;
inline constexpr int kMaxTauSearch = 1000;

struct EmbeddingParams {
  int m = kDefaultDimension;  ///< rows (lagged copies)
  int tau = 1;                ///< lag in samples
  int k = 2;                  ///< columns (observation vectors)

  /// Number of source samples the matrix touches: k + (m-1)*tau.
  std::size_t span() const noexcept;
};

/// Delay-embedded matrix: entry (r, c) is sample c + r*tau of the source.
struct DataMatrix {
  Eigen::MatrixXd values;
  EmbeddingParams params;
  std::string source_name;
};

/// Normalized, mean-removed autocorrelation for lags 0..max_lag using the
/// biased estimator (divide by N at every lag). Throws DegenerateSeries for
/// a constant series.
std::vector<double> autocorrelation(std::span<const double> samples, int max_lag);
std::vector<double> autocorrelation(const TimeSeries& series, int max_lag);

/// Lag at which the autocorrelation first reaches zero (taken as within
/// 4/sqrt(N) of it) or first has a strict local minimum, whichever comes
/// first, searching lags 1..min(N/4, 1000). Falls back to the lag of
/// smallest |rho| in the window. Always >= 1.
int estimate_tau(const TimeSeries& series);

/// Throws SeriesTooShort when `params.span()` exceeds the series length and
/// InvalidArgument for m < 1, tau < 1 or k < 1.
DataMatrix build_data_matrix(const TimeSeries& series, const EmbeddingParams& params);

struct ResolvedEmbedding {
  EmbeddingParams params;
  int estimated_tau = 0;  ///< before any clamping
  bool tau_clamped = false;
};

/// Fills in tau and k for a series.
///
/// * `fixed_tau` > 0 overrides the autocorrelation estimate.
/// * `fixed_k` > 0 pins the column count; if the lag then overruns the
///   series, tau is clamped to floor((N-k)/(m-1)).
/// * Otherwise k = min(kDefaultMaxColumns, N - (m-1)*tau) and must be at
///   least kMinAutoColumns.
///
/// Throws SeriesTooShort when no valid matrix fits.
ResolvedEmbedding resolve_params(const TimeSeries& series, int m, int fixed_tau = 0,
                                 int fixed_k = 0);

}  // namespace stochastid::embedding
