// stochastid: generate, ingest, analyze and classify scalar time series.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 analysis error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stochastid/embedding.hpp"
#include "stochastid/ingest.hpp"
#include "stochastid/io.hpp"
#include "stochastid/pca_leg.hpp"
#include "stochastid/pipeline.hpp"
#include "stochastid/synth.hpp"
#include "stochastid/types.hpp"

namespace fs = std::filesystem;
using namespace stochastid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAnalysis = 3;

// Raised for configuration problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, svd::Normalization> kNormalizations{
    {"rank", svd::Normalization::Rank}, {"minmax", svd::Normalization::MinMax}};

struct AnalysisFlags {
  PipelineConfig config;
  double threshold = 0.0;  // 0: take it from the model
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
  auto& c = f.config;
  cmd->add_option("--m", c.embedding.m, "Embedding dimension")
      ->envname("STOCHASTID_M")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  cmd->add_option("--tau", c.embedding.tau, "Embedding delay, 0 = estimate from the autocorrelation")
      ->envname("STOCHASTID_TAU")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--k", c.embedding.k, "Embedded vectors, 0 = min(5000, N-(m-1)tau)")
      ->envname("STOCHASTID_K")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--resolution", c.raster.resolution, "Raster side in pixels, 0 = scale with k")
      ->envname("STOCHASTID_RESOLUTION")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--dilation", c.raster.dilation, "Disc radius stamped per point")
      ->envname("STOCHASTID_DILATION")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--normalization", c.raster.normalization, "Raster axis scaling: rank or minmax")
      ->envname("STOCHASTID_NORMALIZATION")
      ->transform(CLI::CheckedTransformer(kNormalizations, CLI::ignore_case))
      ->default_str("rank");
  cmd->add_option("--th", f.threshold, "Eigenvalue-ratio threshold, default from the model")
      ->envname("STOCHASTID_TH");
  cmd->add_option("--min-len", c.pca.min_length, "Smallest interval the ratio curve may split into")
      ->envname("STOCHASTID_MIN_LEN")
      ->check(CLI::Range(4, 1 << 30))
      ->capture_default_str();
}

void finish_flags(AnalysisFlags& f) {
  if (f.threshold != 0.0) {
    if (!(f.threshold > 1.0)) throw UsageError("--th must be greater than 1");
    f.config.pca.threshold = f.threshold;
  }
}

pca::LinearModel load_model_or_usage(const std::string& path) {
  if (path.empty()) throw UsageError("a trained model is required (--model, see `train`)");
  try {
    return io::load_model(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

struct InputFlags {
  std::string csv;
  std::string lightcurve;
  double dt = 1.0;
  double bin = ingest::kDefaultBinWidth;
};

void add_input_flags(CLI::App* cmd, InputFlags& in) {
  auto* csv = cmd->add_option("--input", in.csv, "One-column CSV series")->check(CLI::ExistingFile);
  auto* lc = cmd->add_option("--lightcurve", in.lightcurve, "Two-column (time, rate) light curve")
                 ->check(CLI::ExistingFile);
  csv->excludes(lc);
  cmd->add_option("--dt", in.dt, "Sampling interval of --input")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--bin", in.bin, "Resampling bin width for --lightcurve")
      ->envname("STOCHASTID_BIN")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

// File format problems are usage errors; a series that loads but is too
// short for the first stage is an analysis error.
TimeSeries load_input(const InputFlags& in) {
  if (in.csv.empty() && in.lightcurve.empty()) throw UsageError("one of --input or --lightcurve is required");
  if (!in.csv.empty()) {
    std::vector<double> values;
    {
      std::ifstream f(in.csv);
      if (!f) throw UsageError("cannot open " + in.csv);
      try {
        values = io::read_series_csv(f, in.csv);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }
    try {
      return TimeSeries(std::move(values), in.dt, fs::path(in.csv).stem().string(), FileSource{in.csv});
    } catch (const Error& e) {
      throw StageError(Stage::Embedding, e);
    }
  }
  ingest::LightCurveFile lc;
  try {
    lc = ingest::parse_lightcurve(fs::path(in.lightcurve));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UnreadableFile || e.kind() == ErrorKind::ParseError) throw UsageError(e.what());
    throw StageError(Stage::Embedding, e);
  }
  try {
    return ingest::resample(lc, in.bin);
  } catch (const Error& e) {
    throw StageError(Stage::Embedding, e);
  }
}

void print_stage_error(const StageError& e) {
  std::cerr << "error: analysis aborted at stage \"" << to_string(e.stage()) << "\" (" << to_string(e.kind())
            << "): " << e.what() << '\n';
}

std::vector<double> threshold_grid(double lo, double hi, double step) {
  if (!(lo > 1.0) || !(hi >= lo) || !(step > 0.0)) throw UsageError("grid needs 1 < lo <= hi and step > 0");
  std::vector<double> grid;
  for (double t = lo; t <= hi + 1e-9; t += step) grid.push_back(t);
  return grid;
}

struct CorpusFlags {
  std::size_t n = synth::kDefaultSamples;
  std::uint64_t seed_base = 0;
  int jobs = 1;
};

void add_corpus_flags(CLI::App* cmd, CorpusFlags& f) {
  cmd->add_option("--n", f.n, "Samples per synthetic series")
      ->envname("STOCHASTID_N")
      ->check(CLI::Range(synth::kMinSamples, std::size_t{1} << 26))
      ->capture_default_str();
  cmd->add_option("--seed", f.seed_base, "Offset added to the corpus seeds")
      ->envname("STOCHASTID_SEED")
      ->capture_default_str();
  cmd->add_option("--jobs", f.jobs, "Worker threads")
      ->envname("STOCHASTID_JOBS")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
}

ExperimentOptions experiment_options(const CorpusFlags& f) {
  ExperimentOptions opts;
  opts.n = f.n;
  opts.seed_base = f.seed_base;
  opts.jobs = f.jobs;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify scalar time series as stochastic or non-stochastic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "stochastid 0.1.0");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a seeded synthetic series as CSV");
  std::string gen_kind;
  std::size_t gen_n = synth::kDefaultSamples;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "white, pink, logistic or lorenz")->required();
  gen->add_option("--n", gen_n, "Number of samples")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV, '-' for stdout")->required();

  // ingest
  auto* ing = app.add_subcommand("ingest", "Resample a light curve onto a uniform grid");
  std::string ing_in;
  std::string ing_out;
  double ing_dt = ingest::kDefaultBinWidth;
  ing->add_option("--input", ing_in, "Two-column (time, rate) text file")->required()->check(CLI::ExistingFile);
  ing->add_option("--dt", ing_dt, "Bin width")->envname("STOCHASTID_BIN")->check(CLI::PositiveNumber)->capture_default_str();
  ing->add_option("--out", ing_out, "Output CSV, '-' for stdout")->required();

  // analyze
  auto* ana = app.add_subcommand("analyze", "Run both legs on one series and print a JSON report");
  AnalysisFlags ana_flags;
  InputFlags ana_input;
  std::string ana_model;
  add_input_flags(ana, ana_input);
  add_analysis_flags(ana, ana_flags);
  ana->add_option("--model", ana_model, "Model JSON written by `train`")->envname("STOCHASTID_MODEL");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Tune, train and validate on the synthetic corpus");
  AnalysisFlags exp_flags;
  CorpusFlags exp_corpus;
  std::string exp_model_out;
  add_analysis_flags(exp, exp_flags);
  add_corpus_flags(exp, exp_corpus);
  exp->add_option("--model-out", exp_model_out, "Also save the trained model here");

  // tune
  auto* tun = app.add_subcommand("tune", "Silhouette sweep of the eigenvalue-ratio threshold");
  CorpusFlags tun_corpus;
  int tun_min_len = pca::kDefaultMinLength;
  double grid_lo = 2.0;
  double grid_hi = 20.0;
  double grid_step = 1.0;
  add_corpus_flags(tun, tun_corpus);
  tun->add_option("--min-len", tun_min_len, "Smallest interval")->check(CLI::Range(4, 1 << 30))->capture_default_str();
  tun->add_option("--grid-lo", grid_lo, "First threshold")->capture_default_str();
  tun->add_option("--grid-hi", grid_hi, "Last threshold")->capture_default_str();
  tun->add_option("--grid-step", grid_step, "Threshold step")->capture_default_str();

  // train
  auto* trn = app.add_subcommand("train", "Train the linear classifier and save it as JSON");
  CorpusFlags trn_corpus;
  std::string trn_out;
  double trn_th = 0.0;
  int trn_min_len = pca::kDefaultMinLength;
  add_corpus_flags(trn, trn_corpus);
  trn->add_option("--out", trn_out, "Model JSON path")->required();
  trn->add_option("--th", trn_th, "Fixed threshold instead of the silhouette sweep")->envname("STOCHASTID_TH");
  trn->add_option("--min-len", trn_min_len, "Smallest interval")->check(CLI::Range(4, 1 << 30))->capture_default_str();

  // plot
  auto* plt = app.add_subcommand("plot", "Write SVG/CSV/PGM artifacts for one series");
  AnalysisFlags plt_flags;
  InputFlags plt_input;
  std::string plt_what;
  std::string plt_out;
  std::string plt_model;
  bool plt_corpus = false;
  CorpusFlags plt_corpus_flags;
  add_input_flags(plt, plt_input);
  add_analysis_flags(plt, plt_flags);
  plt->add_option("--what", plt_what, "e1e2, ratio or features")->required();
  plt->add_option("--out", plt_out, "Output path prefix")->required();
  plt->add_option("--model", plt_model, "Model JSON (required for features)")->envname("STOCHASTID_MODEL");
  plt->add_flag("--corpus", plt_corpus, "features: also plot the synthetic corpus");
  plt->add_option("--n", plt_corpus_flags.n, "Samples per corpus series")->capture_default_str();
  plt->add_option("--seed", plt_corpus_flags.seed_base, "Corpus seed offset")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      synth::GeneratorSpec spec;
      try {
        spec.kind = synthetic_kind_from_string(gen_kind);
        spec.n = gen_n;
        spec.seed = gen_seed;
        const auto series = synth::generate(spec);
        if (gen_out == "-") {
          io::write_series_csv(std::cout, series.samples());
        } else {
          io::write_series_csv(fs::path(gen_out), series.samples());
        }
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      return kExitOk;
    }

    if (*ing) {
      TimeSeries series = [&] {
        try {
          return ingest::resample(ingest::parse_lightcurve(fs::path(ing_in)), ing_dt);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::UnreadableFile || e.kind() == ErrorKind::ParseError) {
            throw UsageError(e.what());
          }
          throw StageError(Stage::Embedding, e);
        }
      }();
      if (ing_out == "-") {
        io::write_series_csv(std::cout, series.samples());
      } else {
        io::write_series_csv(fs::path(ing_out), series.samples());
      }
      std::cerr << series.name() << ": " << series.size() << " bins of " << ing_dt << '\n';
      return kExitOk;
    }

    if (*ana) {
      finish_flags(ana_flags);
      const auto model = load_model_or_usage(ana_model);
      const auto series = load_input(ana_input);
      const auto report = analyze(series, ana_flags.config, model);
      std::cout << io::report_to_json(report);
      return kExitOk;
    }

    if (*exp) {
      finish_flags(exp_flags);
      const auto report = run_experiment(exp_flags.config, experiment_options(exp_corpus));
      std::cout << io::experiment_to_json(report);
      std::cerr << io::experiment_table(report);
      if (!exp_model_out.empty()) {
        io::ModelMetadata meta{report.train_seeds, exp_corpus.n, report.pca_train_accuracy};
        io::save_model(exp_model_out, report.model, meta);
      }
      return kExitOk;
    }

    if (*tun) {
      auto opts = experiment_options(tun_corpus);
      const auto grid = threshold_grid(grid_lo, grid_hi, grid_step);
      const auto corpus = synth::make_corpus(synth::default_train_seeds(opts.seed_base),
                                             synth::default_validation_seeds(opts.seed_base), opts.n);
      std::vector<TimeSeries> all;
      for (const auto& l : corpus.train) all.push_back(l.series);
      for (const auto& l : corpus.validation) all.push_back(l.series);
      std::cout << io::tuning_to_json(pca::tune_threshold(all, grid, tun_min_len));
      return kExitOk;
    }

    if (*trn) {
      if (trn_th != 0.0 && !(trn_th > 1.0)) throw UsageError("--th must be greater than 1");
      const auto opts = experiment_options(trn_corpus);
      const auto trained =
          train_default_model(opts, trn_th != 0.0 ? std::optional<double>(trn_th) : std::nullopt, trn_min_len);
      io::save_model(trn_out, trained.model, {trained.train_seeds, opts.n, trained.train_accuracy});
      std::cerr << "threshold " << trained.model.threshold << ", training accuracy "
                << 100.0 * trained.train_accuracy << "%\n";
      return kExitOk;
    }

    if (*plt) {
      finish_flags(plt_flags);
      if (plt_what == "e1e2") {
        const auto series = load_input(plt_input);
        const auto svd_leg = run_svd_leg(series, plt_flags.config);
        io::write_text(plt_out + "_e1e2.svg", io::e1e2_svg(svd_leg.pair, series.name()));
        std::ofstream csv(plt_out + "_e1e2.csv", std::ios::binary);
        io::write_pair_csv(csv, svd_leg.pair);
        std::ofstream pgm(plt_out + "_raster.pgm", std::ios::binary);
        io::write_pgm(pgm, svd_leg.image);
        return kExitOk;
      }
      if (plt_what == "ratio") {
        const auto series = load_input(plt_input);
        double th = plt_flags.config.pca.threshold.value_or(0.0);
        if (th == 0.0) th = plt_model.empty() ? pca::kDefaultThreshold : load_model_or_usage(plt_model).threshold;
        const auto leg = run_pca_leg(series, th, plt_flags.config.pca.min_length);
        io::write_text(plt_out + "_ratio.svg", io::ratio_svg(leg.curve, series.samples(), series.name()));
        return kExitOk;
      }
      if (plt_what == "features") {
        const auto model = load_model_or_usage(plt_model);
        const double th = plt_flags.config.pca.threshold.value_or(model.threshold);
        std::vector<io::FeaturePoint> points;
        if (plt_corpus) {
          const auto corpus =
              synth::make_corpus(synth::default_train_seeds(plt_corpus_flags.seed_base),
                                 synth::default_validation_seeds(plt_corpus_flags.seed_base), plt_corpus_flags.n);
          for (const auto* part : {&corpus.train, &corpus.validation}) {
            for (const auto& l : *part) {
              points.push_back({run_pca_leg(l.series, th, plt_flags.config.pca.min_length).features, l.truth,
                                l.series.name()});
            }
          }
        }
        if (!plt_input.csv.empty() || !plt_input.lightcurve.empty()) {
          const auto series = load_input(plt_input);
          const auto fv = run_pca_leg(series, th, plt_flags.config.pca.min_length).features;
          points.push_back({fv, pca::pca_label(model, fv).label, series.name()});
        }
        if (points.empty()) throw UsageError("features needs --input, --lightcurve or --corpus");
        io::write_text(plt_out + "_features.svg", io::features_svg(points, model, "features"));
        return kExitOk;
      }
      throw UsageError("unknown --what '" + plt_what + "' (expected e1e2, ratio or features)");
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StageError& e) {
    print_stage_error(e);
    return kExitAnalysis;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitAnalysis;
  }
  return kExitUsage;
}
