#include "stochastid/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stochastid::ingest {
namespace {

// Tolerance, in bins, for timestamps that sit on a bin edge up to rounding.
constexpr double kEdgeSlack = 1e-6;

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
      if (!current.empty()) fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) fields.push_back(std::move(current));
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

LightCurveFile parse_lightcurve(std::istream& in, const std::string& source_path) {
  LightCurveFile lc;
  lc.source_path = source_path;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == '!') continue;

    std::vector<double> numbers;
    for (const auto& field : split_fields(line)) {
      double v = 0.0;
      if (parse_double(field, v)) {
        numbers.push_back(v);
        if (numbers.size() == 2) break;
      }
    }
    if (numbers.size() < 2) {
      throw Error(ErrorKind::ParseError, source_path + ":" + std::to_string(line_no) +
                                             ": expected two numeric columns (time, rate)");
    }
    const LightCurveRow row{numbers[0], numbers[1]};
    if (!std::isfinite(row.time) || !std::isfinite(row.rate) || row.rate < 0.0) {
      throw Error(ErrorKind::InvalidRate, source_path + ":" + std::to_string(line_no) +
                                              ": time and rate must be finite, rate >= 0");
    }
    if (!lc.rows.empty() && !(row.time > lc.rows.back().time)) {
      throw Error(ErrorKind::NonMonotoneTime, source_path + ":" + std::to_string(line_no) +
                                                  ": time does not increase");
    }
    lc.rows.push_back(row);
  }
  if (lc.rows.size() < 2) {
    throw Error(ErrorKind::SeriesTooShort, source_path + ": light curve needs at least 2 rows");
  }
  return lc;
}

LightCurveFile parse_lightcurve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UnreadableFile, "cannot open " + path.string());
  return parse_lightcurve(in, path.string());
}

TimeSeries resample(const LightCurveFile& lc, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::InvalidArgument, "bin width must be positive");
  }
  if (lc.rows.size() < 2) throw Error(ErrorKind::SeriesTooShort, "light curve needs at least 2 rows");
  const double t0 = lc.rows.front().time;
  const double span = lc.rows.back().time - t0;
  const auto bins = static_cast<std::size_t>(std::floor(span / dt + kEdgeSlack)) + 1;
  if (bins < 2) {
    throw Error(ErrorKind::SeriesTooShort, lc.source_path + ": span shorter than 2 bins");
  }

  std::vector<double> sum(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);
  for (const auto& row : lc.rows) {
    auto idx = static_cast<std::size_t>(std::floor((row.time - t0) / dt + kEdgeSlack));
    if (idx >= bins) idx = bins - 1;
    sum[idx] += row.rate;
    ++count[idx];
  }

  std::vector<double> values(bins, 0.0);
  std::size_t last_filled = 0;
  for (std::size_t i = 0; i < bins; ++i) {
    if (count[i] == 0) continue;
    values[i] = sum[i] / static_cast<double>(count[i]);
    const std::size_t gap = i - last_filled - 1;
    if (i > 0 && gap > 0) {
      if (gap > static_cast<std::size_t>(kMaxGapBins)) {
        throw Error(ErrorKind::GapTooLarge,
                    lc.source_path + ": " + std::to_string(gap) + " consecutive empty bins at t=" +
                        std::to_string(t0 + static_cast<double>(last_filled + 1) * dt));
      }
      const double left = values[last_filled];
      for (std::size_t j = last_filled + 1; j < i; ++j) {
        const double frac = static_cast<double>(j - last_filled) / static_cast<double>(i - last_filled);
        values[j] = left + frac * (values[i] - left);
      }
    }
    last_filled = i;
  }

  std::string name = std::filesystem::path(lc.source_path).stem().string();
  if (name.empty()) name = "lightcurve";
  return TimeSeries(std::move(values), dt, std::move(name),
                    FileSource{std::filesystem::path(lc.source_path)});
}

}  // namespace stochastid::ingest
