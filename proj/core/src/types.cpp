#include "stochastid/types.hpp"

#include <cmath>

namespace stochastid {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Stochastic:
      return "Stochastic";
    case Label::NonStochastic:
      return "NonStochastic";
    case Label::Uncertain:
      return "Uncertain";
  }
  return "Uncertain";
}

std::string_view short_name(Label label) {
  switch (label) {
    case Label::Stochastic:
      return "S";
    case Label::NonStochastic:
      return "NS";
    case Label::Uncertain:
      return "U";
  }
  return "U";
}

Label label_from_string(std::string_view text) {
  if (text == "Stochastic" || text == "S") return Label::Stochastic;
  if (text == "NonStochastic" || text == "NS") return Label::NonStochastic;
  if (text == "Uncertain" || text == "U") return Label::Uncertain;
  throw Error(ErrorKind::InvalidArgument, "unknown label '" + std::string(text) + "'");
}

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::WhiteNoise:
      return "white";
    case SyntheticKind::PinkNoise:
      return "pink";
    case SyntheticKind::LogisticMap:
      return "logistic";
    case SyntheticKind::Lorenz:
      return "lorenz";
  }
  return "white";
}

SyntheticKind synthetic_kind_from_string(std::string_view text) {
  if (text == "white") return SyntheticKind::WhiteNoise;
  if (text == "pink") return SyntheticKind::PinkNoise;
  if (text == "logistic") return SyntheticKind::LogisticMap;
  if (text == "lorenz") return SyntheticKind::Lorenz;
  throw Error(ErrorKind::InvalidArgument, "unknown generator kind '" + std::string(text) + "'");
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return "InvalidArgument";
    case ErrorKind::DegenerateSeries:
      return "DegenerateSeries";
    case ErrorKind::SeriesTooShort:
      return "SeriesTooShort";
    case ErrorKind::RankDeficient:
      return "RankDeficient";
    case ErrorKind::ZeroRange:
      return "ZeroRange";
    case ErrorKind::UnreadableFile:
      return "UnreadableFile";
    case ErrorKind::ParseError:
      return "ParseError";
    case ErrorKind::NonMonotoneTime:
      return "NonMonotoneTime";
    case ErrorKind::InvalidRate:
      return "InvalidRate";
    case ErrorKind::GapTooLarge:
      return "GapTooLarge";
  }
  return "InvalidArgument";
}

TimeSeries::TimeSeries(std::vector<double> samples, double dt, std::string name,
                       SeriesSource source)
    : samples_(std::move(samples)), dt_(dt), name_(std::move(name)), source_(std::move(source)) {
  if (samples_.size() < 2) {
    throw Error(ErrorKind::SeriesTooShort, "a time series needs at least 2 samples");
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw Error(ErrorKind::InvalidArgument, "sampling interval must be positive and finite");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw Error(ErrorKind::InvalidArgument,
                  "non-finite sample at index " + std::to_string(i) + " in '" + name_ + "'");
    }
  }
}

Label combine_labels(Label svd_label, Label pca_label) {
  if (svd_label == Label::Uncertain || pca_label == Label::Uncertain) {
    throw std::invalid_argument("combine_labels: leg labels must be Stochastic or NonStochastic");
  }
  return svd_label == pca_label ? svd_label : Label::Uncertain;
}

}  // namespace stochastid
