#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "stochastid/types.hpp"

namespace stochastid::ingest {

inline constexpr double kDefaultBinWidth = 0.1;  // seconds
inline constexpr int kMaxGapBins = 10;

struct LightCurveRow {
  double time = 0.0;  ///< seconds
  double rate = 0.0;  ///< counts per second
};

struct LightCurveFile {
  std::vector<LightCurveRow> rows;
  std::string source_path;
};

/// ASCII light curve: whitespace- or comma-separated columns, the first
/// two numeric columns are (time, rate). Lines starting with '#' or '!'
/// and blank lines are skipped. Requires >= 2 rows, strictly increasing
/// times and finite, non-negative rates.
LightCurveFile parse_lightcurve(std::istream& in, const std::string& source_path = "<stream>");
LightCurveFile parse_lightcurve(const std::filesystem::path& path);

/// Mean-bins the rates onto a uniform grid starting at the first timestamp
/// (bin i covers [t0 + i*dt, t0 + (i+1)*dt)), then fills empty bins by
/// linear interpolation. A run of more than kMaxGapBins empty bins throws
/// GapTooLarge; a span shorter than 2 bins throws SeriesTooShort.
TimeSeries resample(const LightCurveFile& lc, double dt = kDefaultBinWidth);

}  // namespace stochastid::ingest
