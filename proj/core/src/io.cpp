#include "stochastid/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace stochastid::io {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size();
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

std::vector<double> read_series_csv(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string field = trim(line);
    if (field.empty()) continue;
    double v = 0.0;
    if (parse_number(field, v)) {
      values.push_back(v);
      continue;
    }
    if (values.empty() && !header_seen) {
      header_seen = true;
      continue;
    }
    throw Error(ErrorKind::ParseError,
                source + ":" + std::to_string(line_no) + ": not a number: '" + field + "'");
  }
  return values;
}

TimeSeries read_series_csv(const std::filesystem::path& path, double dt) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UnreadableFile, "cannot open " + path.string());
  auto values = read_series_csv(in, path.string());
  return TimeSeries(std::move(values), dt, path.stem().string(), FileSource{path});
}

void write_series_csv(std::ostream& out, std::span<const double> samples) {
  out << "value\n";
  char buf[32];
  for (double v : samples) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, std::span<const double> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::UnreadableFile, "cannot write " + path.string());
  write_series_csv(out, samples);
}

void write_pair_csv(std::ostream& out, const svd::SingularPair& pair) {
  out << "index,e1,e2\n";
  char buf[96];
  for (std::size_t i = 0; i < pair.e1.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, pair.e1[i], pair.e2[i]);
    out << buf;
  }
}

// --- JSON -----------------------------------------------------------------

std::string model_to_json(const pca::LinearModel& model, const ModelMetadata& meta) {
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["w"] = {model.w[0], model.w[1]};
  doc["b"] = model.b;
  doc["orientation"] = "ns_positive";
  doc["th"] = model.threshold;
  doc["features"] = {"log_ver", "log_auer"};
  doc["trained_on"] = {{"seeds", meta.train_seeds},
                       {"samples_per_series", meta.samples_per_series},
                       {"train_accuracy", meta.train_accuracy}};
  return doc.dump(2) + "\n";
}

pca::LinearModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model JSON: ") + e.what());
  }
  try {
    if (doc.at("schema").get<int>() != kSchemaVersion) {
      throw Error(ErrorKind::ParseError, "model JSON: unsupported schema version");
    }
    if (doc.at("orientation").get<std::string>() != "ns_positive") {
      throw Error(ErrorKind::ParseError, "model JSON: orientation must be \"ns_positive\"");
    }
    pca::LinearModel model;
    const auto& w = doc.at("w");
    if (!w.is_array() || w.size() != 2) throw Error(ErrorKind::ParseError, "model JSON: w must have 2 entries");
    model.w = {w[0].get<double>(), w[1].get<double>()};
    model.b = doc.at("b").get<double>();
    model.threshold = doc.at("th").get<double>();
    if (!(std::hypot(model.w[0], model.w[1]) > 0.0) || !std::isfinite(model.b) || !(model.threshold > 1.0)) {
      throw Error(ErrorKind::ParseError, "model JSON: need |w| > 0, finite b and th > 1");
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("model JSON: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const pca::LinearModel& model,
                const ModelMetadata& meta) {
  write_text(path, model_to_json(model, meta));
}

pca::LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UnreadableFile, "cannot open model " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

namespace {

json report_json(const ClassificationReport& r) {
  const auto& fv = r.pca.features;
  return json{
      {"schema", kSchemaVersion},
      {"name", r.series_name},
      {"n", r.n},
      {"tau", r.svd.params.tau},
      {"m", r.svd.params.m},
      {"k", r.svd.params.k},
      {"tau_clamped", r.svd.tau_clamped},
      {"resolution", r.svd.resolution},
      {"betti", {{"b0", r.svd.betti.b0}, {"b1", r.svd.betti.b1}, {"norm", r.svd.betti.norm()}}},
      {"svd_label", to_string(r.svd_label)},
      {"th", r.pca.curve.threshold},
      {"leaves", r.pca.curve.leaves.size()},
      {"ver", fv.ver},
      {"auer", fv.auer},
      {"log_ver", fv.log_ver},
      {"log_auer", fv.log_auer},
      {"pca_label", to_string(r.pca_label)},
      {"svm_margin", r.svm_margin},
      {"final_label", to_string(r.final_label)},
  };
}

}  // namespace

std::string report_to_json(const ClassificationReport& report, int indent) {
  return report_json(report).dump(indent) + "\n";
}

std::string experiment_to_json(const ExperimentReport& report, int indent) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json item = report_json(row.report);
    item["split"] = row.split;
    item["truth"] = to_string(row.truth);
    item["seed"] = row.seed;
    rows.push_back(std::move(item));
  }
  return rows.dump(indent) + "\n";
}

std::string tuning_to_json(const pca::TuningResult& tuning, int indent) {
  json scores = json::array();
  for (const auto& s : tuning.scores) scores.push_back({{"th", s.threshold}, {"silhouette", s.silhouette}});
  return json{{"schema", kSchemaVersion}, {"best_th", tuning.best_threshold}, {"scores", scores}}.dump(indent) +
         "\n";
}

std::string experiment_table(const ExperimentReport& report) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-5s %-6s %5s %-5s %12s %10s %-5s %-5s %-5s\n", "Series", "Split",
                "Truth", "Betti", "SVD", "VER", "AUER", "PCA", "Match", "Final");
  os << line;
  for (const auto& row : report.rows) {
    const auto& r = row.report;
    std::snprintf(line, sizeof line, "%-20s %-5s %-6s %5d %-5s %12.4g %10.4g %-5s %-5s %-5s\n",
                  r.series_name.c_str(), row.split.c_str(), std::string(short_name(row.truth)).c_str(),
                  r.svd.betti.norm(), std::string(short_name(r.svd_label)).c_str(), r.pca.features.ver,
                  r.pca.features.auer, std::string(short_name(r.pca_label)).c_str(),
                  r.svd_label == r.pca_label ? "Yes" : "No",
                  std::string(short_name(r.final_label)).c_str());
    os << line;
  }
  os << "threshold Th = " << fmt(report.model.threshold) << " (silhouette argmax over "
     << report.tuning.scores.size() << " grid points)\n";
  os << "model: w = (" << fmt(report.model.w[0]) << ", " << fmt(report.model.w[1]) << "), b = "
     << fmt(report.model.b) << "\n";
  os << "PCA train accuracy " << fmt(100.0 * report.pca_train_accuracy, 4) << "%, validation accuracy "
     << fmt(100.0 * report.pca_validation_accuracy, 4) << "%\n";
  os << "SVD-label accuracy " << fmt(100.0 * report.svd_accuracy, 4) << "%, Uncertain outcomes "
     << report.uncertain << "/" << report.rows.size() << "\n";
  return os.str();
}

// --- images and plots -----------------------------------------------------

void write_pgm(std::ostream& out, const svd::BinaryImage& image) {
  out << "P2\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      out << (image.at(r, c) ? 0 : 255) << (c + 1 < image.cols() ? ' ' : '\n');
    }
  }
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 50.0;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double px_lo = 0.0;
  double px_hi = 1.0;

  double map(double v) const {
    if (hi == lo) return 0.5 * (px_lo + px_hi);
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

Axis fit_axis(std::span<const double> values, double px_lo, double px_hi) {
  Axis a{0.0, 1.0, px_lo, px_hi};
  if (values.empty()) return a;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  a.lo = *lo;
  a.hi = *hi;
  const double pad = (a.hi - a.lo) * 0.05;
  a.lo -= pad;
  a.hi += pad;
  return a;
}

std::string svg_header(double height) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string frame(double x0, double y0, double x1, double y1, const std::string& xlabel,
                  const std::string& ylabel) {
  std::ostringstream os;
  os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0 << "\" height=\"" << y1 - y0
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << 0.5 * (x0 + x1) << "\" y=\"" << y1 + 30 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << escape(xlabel) << "</text>\n";
  os << "<text x=\"14\" y=\"" << 0.5 * (y0 + y1) << "\" transform=\"rotate(-90 14 " << 0.5 * (y0 + y1)
     << ")\" text-anchor=\"middle\" font-size=\"12\">" << escape(ylabel) << "</text>\n";
  return os.str();
}

std::string title_text(const std::string& title) {
  return "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
}

}  // namespace

std::string e1e2_svg(const svd::SingularPair& pair, const std::string& title) {
  const Axis x = fit_axis(pair.e1, kMargin, kWidth - kMargin);
  const Axis y = fit_axis(pair.e2, kHeight - kMargin, kMargin);
  std::ostringstream os;
  os << svg_header(kHeight) << title_text(title)
     << frame(kMargin, kMargin, kWidth - kMargin, kHeight - kMargin, "E1", "E2");
  os << "<g id=\"points\" fill=\"steelblue\">\n";
  for (std::size_t i = 0; i < pair.e1.size(); ++i) {
    os << "<circle cx=\"" << fmt(x.map(pair.e1[i])) << "\" cy=\"" << fmt(y.map(pair.e2[i]))
       << "\" r=\"1.2\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string ratio_svg(const pca::RatioCurve& curve, std::span<const double> samples,
                      const std::string& title) {
  constexpr double kPanel = 200.0;
  const double height = 2 * kPanel + 3 * kMargin;
  const double top0 = kMargin;
  const double top1 = kMargin + kPanel;
  const double bottom0 = top1 + kMargin;
  const double bottom1 = bottom0 + kPanel;
  const double n = static_cast<double>(std::max<std::size_t>(curve.even_length, 1));

  std::vector<double> ratios;
  for (const auto& leaf : curve.leaves) ratios.push_back(leaf.ratio);
  ratios.push_back(1.0);
  const Axis t{0.0, n, kMargin, kWidth - kMargin};
  const Axis ry = fit_axis(ratios, top1, top0);

  std::ostringstream os;
  os << svg_header(height) << title_text(title)
     << frame(kMargin, top0, kWidth - kMargin, top1, "", "eigenvalue ratio")
     << frame(kMargin, bottom0, kWidth - kMargin, bottom1, "sample", "value");
  os << "<g id=\"ratio\" stroke=\"firebrick\" stroke-width=\"1.5\">\n";
  for (const auto& leaf : curve.leaves) {
    const double y = ry.map(leaf.ratio);
    os << "<line x1=\"" << fmt(t.map(static_cast<double>(leaf.start))) << "\" y1=\"" << fmt(y) << "\" x2=\""
       << fmt(t.map(static_cast<double>(leaf.end))) << "\" y2=\"" << fmt(y) << "\"/>\n";
  }
  os << "</g>\n";

  const std::size_t shown = std::min<std::size_t>(samples.size(), curve.even_length);
  const Axis sy = fit_axis(samples.subspan(0, shown), bottom1, bottom0);
  const std::size_t stride = std::max<std::size_t>(1, shown / 2000);
  os << "<polyline id=\"series\" fill=\"none\" stroke=\"black\" stroke-width=\"0.6\" points=\"";
  for (std::size_t i = 0; i < shown; i += stride) {
    os << fmt(t.map(static_cast<double>(i))) << ',' << fmt(sy.map(samples[i])) << ' ';
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::string features_svg(std::span<const FeaturePoint> points, const pca::LinearModel& model,
                         const std::string& title) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    xs.push_back(p.features.log_ver);
    ys.push_back(p.features.log_auer);
  }
  if (xs.empty()) {
    xs = {-1.0, 1.0};
    ys = {-1.0, 1.0};
  }
  const Axis x = fit_axis(xs, kMargin, kWidth - kMargin);
  const Axis y = fit_axis(ys, kHeight - kMargin, kMargin);
  std::ostringstream os;
  os << svg_header(kHeight) << title_text(title)
     << frame(kMargin, kMargin, kWidth - kMargin, kHeight - kMargin, "ln VER", "ln AUER");

  // Boundary w0*x + w1*y + b = 0 clipped to the plotted box.
  std::vector<std::pair<double, double>> ends;
  const auto [w0, w1] = model.w;
  if (w1 != 0.0) {
    for (double xv : {x.lo, x.hi}) {
      const double yv = -(w0 * xv + model.b) / w1;
      if (yv >= std::min(y.lo, y.hi) && yv <= std::max(y.lo, y.hi)) ends.emplace_back(xv, yv);
    }
  }
  if (w0 != 0.0) {
    for (double yv : {y.lo, y.hi}) {
      const double xv = -(w1 * yv + model.b) / w0;
      if (xv >= x.lo && xv <= x.hi) ends.emplace_back(xv, yv);
    }
  }
  if (ends.size() >= 2) {
    os << "<line id=\"boundary\" x1=\"" << fmt(x.map(ends[0].first)) << "\" y1=\"" << fmt(y.map(ends[0].second))
       << "\" x2=\"" << fmt(x.map(ends[1].first)) << "\" y2=\"" << fmt(y.map(ends[1].second))
       << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
  }
  os << "<g id=\"points\">\n";
  for (const auto& p : points) {
    const char* colour = p.label == Label::NonStochastic ? "firebrick" : "steelblue";
    os << "<circle cx=\"" << fmt(x.map(p.features.log_ver)) << "\" cy=\"" << fmt(y.map(p.features.log_auer))
       << "\" r=\"4\" fill=\"" << colour << "\"><title>" << escape(p.name) << "</title></circle>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::UnreadableFile, "cannot write " + path.string());
  out << text;
}

}  // namespace stochastid::io
