#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stochastid {

/// Classification outcome. The two analysis legs only ever emit
/// `Stochastic` or `NonStochastic`; `Uncertain` is produced by
/// `combine_labels` when they disagree.
enum class Label { Stochastic, NonStochastic, Uncertain };

std::string_view to_string(Label label);
Label label_from_string(std::string_view text);

/// Short form used in tables: "S", "NS", "U".
std::string_view short_name(Label label);

enum class SyntheticKind { WhiteNoise, PinkNoise, LogisticMap, Lorenz };

std::string_view to_string(SyntheticKind kind);
SyntheticKind synthetic_kind_from_string(std::string_view text);

struct SyntheticSource {
  SyntheticKind kind;
  std::uint64_t seed;
};

struct FileSource {
  std::filesystem::path path;
};

using SeriesSource = std::variant<SyntheticSource, FileSource>;

enum class ErrorKind {
  InvalidArgument,
  DegenerateSeries,
  SeriesTooShort,
  RankDeficient,
  ZeroRange,
  UnreadableFile,
  ParseError,
  NonMonotoneTime,
  InvalidRate,
  GapTooLarge,
};

std::string_view to_string(ErrorKind kind);

/// Every recoverable failure in the library is reported as an `Error`
/// carrying a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Uniformly sampled scalar series. Construction validates that there are
/// at least two samples, every sample is finite and `dt > 0`.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> samples, double dt, std::string name,
             SeriesSource source = FileSource{});

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double dt() const noexcept { return dt_; }
  const std::string& name() const noexcept { return name_; }
  const SeriesSource& source() const noexcept { return source_; }

 private:
  std::vector<double> samples_;
  double dt_;
  std::string name_;
  SeriesSource source_;
};

/// Concurrence rule: the common label when both legs agree, `Uncertain`
/// otherwise. Throws `std::invalid_argument` if either input is already
/// `Uncertain`.
Label combine_labels(Label svd_label, Label pca_label);

}  // namespace stochastid
