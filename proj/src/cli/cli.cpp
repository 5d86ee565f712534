#include "dsentry/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "dsentry/bench/bench.hpp"
#include "dsentry/bench/curve_csv.hpp"
#include "dsentry/detectors/model_json.hpp"
#include "dsentry/enrichment.hpp"
#include "dsentry/scenario_json.hpp"
#include "dsentry/series_csv.hpp"

namespace dsentry::cli {

using detectors::DetectorKind;
using nlohmann::json;

namespace {

/// Raised for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ScenarioConfig load_scenario(bool paper_default, const std::string& path) {
  if (paper_default) return default_paper_scenario();
  if (path.empty()) throw UsageError("one of --paper-default or --scenario is required");
  return read_scenario_file(path);
}

std::vector<DetectorKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<DetectorKind> out;
  for (const auto& n : names) out.push_back(detectors::parse_kind(n));
  if (out.empty()) throw ConfigError("at least one algorithm is required");
  return out;
}

void print_summary(std::ostream& out, const detectors::TrainedModel& model,
                   const detectors::MCusumTrainingReport& report) {
  out << std::setprecision(6);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, detectors::KsModel>) {
          out << "window = " << m.window << '\n'
              << "duration bandwidth = " << m.baseline_duration.bandwidth << '\n'
              << "power bandwidth = " << m.baseline_power.bandwidth << '\n';
        } else if constexpr (std::is_same_v<M, detectors::GCusumModel>) {
          out << "duration: mean " << m.duration_g0.mean << ", std " << m.duration_g0.std << '\n'
              << "power: mean " << m.power_g0.mean << ", std " << m.power_g0.std << '\n';
        } else if constexpr (std::is_same_v<M, detectors::GmCusumModel>) {
          auto mix = [&](const char* name, const stats::GaussianMixture& g) {
            out << name << ": k = " << g.size() << '\n';
            for (std::size_t c = 0; c < g.size(); ++c) {
              out << "  weight " << g.weights[c] << ", mean " << g.components[c].mean << ", std "
                  << g.components[c].std << '\n';
            }
          };
          mix("duration", m.duration_mix);
          mix("power", m.power_mix);
        } else {
          out << "M = " << m.m << '\n';
          for (std::size_t c = 0; c < m.m; ++c) {
            out << "  cluster " << c + 1 << ": energy mean " << m.energy_g0[c].mean << ", power mean "
                << m.power_g0[c].mean;
            if (c < report.cluster_sizes.size()) out << ", n = " << report.cluster_sizes[c];
            out << '\n';
          }
        }
      },
      model);
}

int resolve_threads(int flag_value) {
  if (flag_value >= 0) return flag_value;
  const auto env = parse_thread_env(std::getenv(kThreadsEnv));
  return env.value_or(0);
}

}  // namespace

void validate(const CliConfig& config) {
  dsentry::validate(config.scenario);
  detectors::validate(config.shift);
  if (config.algo.empty()) throw ConfigError("at least one algorithm is required");
  if (config.trials < 1) throw ConfigError("trials must be >= 1");
  if (config.window < 2) throw ConfigError("window must be >= 2");
  for (std::size_t i = 1; i < config.thresholds.size(); ++i) {
    if (!(config.thresholds[i] > config.thresholds[i - 1])) {
      throw ConfigError("thresholds must be strictly increasing");
    }
  }
}

CliConfig cli_config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be an object");
  CliConfig c;
  try {
    if (doc.contains("scenario")) c.scenario = scenario_from_json(doc["scenario"]);
    if (doc.contains("algo")) {
      const auto& a = doc["algo"];
      c.algo = a.is_array() ? parse_kinds(a.get<std::vector<std::string>>())
                            : parse_kinds({a.get<std::string>()});
    }
    if (doc.contains("shift")) {
      c.shift = {doc["shift"].at("lower_mult").get<double>(), doc["shift"].at("upper_mult").get<double>()};
    }
    if (doc.contains("window")) c.window = doc["window"].get<std::size_t>();
    if (doc.contains("thresholds")) c.thresholds = doc["thresholds"].get<std::vector<double>>();
    if (doc.contains("trials")) c.trials = doc["trials"].get<std::size_t>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

std::optional<int> parse_thread_env(const char* value) {
  if (value == nullptr || *value == '\0') return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(value, &end, 10);
  if (*end != '\0' || n < 0 || n > 4096) {
    throw ConfigError(std::string(kThreadsEnv) + " must be a non-negative integer");
  }
  return static_cast<int>(n);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diversion detection from shipment duration and power observations", "dsentry"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate training and test shipment series");
  bool sim_paper = false;
  std::string sim_scenario, sim_train_out, sim_test_out;
  std::uint64_t sim_seed = 0;
  std::optional<std::size_t> sim_test_length, sim_change_point;
  auto* sim_pd = sim->add_flag("--paper-default", sim_paper, "Use the built-in six-pattern scenario");
  auto* sim_sc = sim->add_option("--scenario", sim_scenario, "Scenario JSON file");
  sim_pd->excludes(sim_sc);
  sim->add_option("--seed", sim_seed, "Random seed");
  sim->add_option("--train-out", sim_train_out, "Training CSV output path");
  sim->add_option("--test-out", sim_test_out, "Test CSV output path");
  sim->add_option("--test-length", sim_test_length, "Override test_length");
  sim->add_option("--change-point", sim_change_point, "Override change_point (test_length + 1 = none)");

  // train
  auto* tr = app.add_subcommand("train", "Train a detector on a training CSV");
  std::string tr_algo, tr_data, tr_out;
  std::size_t tr_window = 50, tr_k_max = 8, tr_m_min = 2, tr_m_max = 8;
  double tr_lower = 0.5, tr_upper = 3.0;
  std::uint64_t tr_seed = 0;
  tr->add_option("--algo", tr_algo, "ks | g_cusum | gm_cusum | m_cusum")->required();
  tr->add_option("--data", tr_data, "Training CSV")->required();
  tr->add_option("--out", tr_out, "Model JSON output path")->required();
  tr->add_option("--window", tr_window, "KS window size");
  tr->add_option("--shift-lower", tr_lower, "Lower mean-shift multiple of sigma");
  tr->add_option("--shift-upper", tr_upper, "Upper mean-shift multiple of sigma");
  tr->add_option("--k-max", tr_k_max, "Largest mixture order tried by GM-CUSUM");
  tr->add_option("--m-min", tr_m_min, "Smallest cluster count tried by M-CUSUM");
  tr->add_option("--m-max", tr_m_max, "Largest cluster count tried by M-CUSUM");
  tr->add_option("--seed", tr_seed, "Random seed");

  // detect
  auto* det = app.add_subcommand("detect", "Run a trained detector over a test CSV");
  std::string det_model, det_data;
  double det_threshold = 0.0;
  det->add_option("--model", det_model, "Model JSON")->required();
  det->add_option("--data", det_data, "Test CSV")->required();
  det->add_option("--threshold", det_threshold, "Alarm threshold")->required();

  // bench
  auto* be = app.add_subcommand("bench", "Monte Carlo FAR / ADD threshold sweeps");
  bool be_paper = false;
  std::string be_scenario, be_config, be_out;
  std::vector<std::string> be_algos;
  std::vector<double> be_thresholds;
  std::optional<std::size_t> be_trials, be_window, be_k_max, be_m_min, be_m_max;
  std::optional<std::uint64_t> be_seed;
  std::optional<double> be_lower, be_upper;
  int be_threads = -1;
  auto* be_pd = be->add_flag("--paper-default", be_paper, "Use the built-in six-pattern scenario");
  auto* be_sc = be->add_option("--scenario", be_scenario, "Scenario JSON file");
  be->add_option("--config", be_config, "Benchmark config JSON file");
  be_pd->excludes(be_sc);
  be->add_option("--algos", be_algos, "Comma-separated detector kinds")->delimiter(',');
  be->add_option("--thresholds", be_thresholds, "Comma-separated increasing thresholds")->delimiter(',');
  be->add_option("--trials", be_trials, "Trials per threshold");
  be->add_option("--seed", be_seed, "Random seed");
  be->add_option("--window", be_window, "KS window size");
  be->add_option("--shift-lower", be_lower, "Lower mean-shift multiple of sigma");
  be->add_option("--shift-upper", be_upper, "Upper mean-shift multiple of sigma");
  be->add_option("--k-max", be_k_max, "Largest mixture order tried by GM-CUSUM");
  be->add_option("--m-min", be_m_min, "Smallest cluster count tried by M-CUSUM");
  be->add_option("--m-max", be_m_max, "Largest cluster count tried by M-CUSUM");
  be->add_option("--threads", be_threads, "Worker threads (0 = auto); overrides the environment");
  be->add_option("--out", be_out, "Curve CSV output path")->required();

  // swu
  auto* sw = app.add_subcommand("swu", "Separative work for one enrichment batch");
  enrichment::EnrichmentSpec swu_spec;
  sw->add_option("--feed", swu_spec.feed_assay, "Feed assay (mass fraction)");
  sw->add_option("--product", swu_spec.product_assay, "Product assay (mass fraction)")->required();
  sw->add_option("--tails", swu_spec.tails_assay, "Tails assay (mass fraction)");
  sw->add_option("--mass", swu_spec.product_mass_kg, "Product mass in kg")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (sim->parsed()) {
      if (sim_train_out.empty() && sim_test_out.empty()) {
        throw UsageError("at least one of --train-out or --test-out is required");
      }
      auto config = load_scenario(sim_paper, sim_scenario);
      if (sim_test_length) {
        config.test_length = *sim_test_length;
        if (!sim_change_point && config.change_point > config.test_length + 1) {
          config.change_point = config.test_length + 1;
        }
      }
      if (sim_change_point) config.change_point = *sim_change_point;
      validate(config);
      const auto data = generate_training_and_test(config, RngStream(sim_seed, 0));
      if (!sim_train_out.empty()) write_series_file(sim_train_out, data.training);
      if (!sim_test_out.empty()) write_series_file(sim_test_out, data.test);
      const auto cp = config.test_change_point();
      out << "change_point: " << (cp ? std::to_string(*cp) : std::string("none")) << '\n';
      out << "training shipments: " << data.training.series.size() << '\n';
      out << "test shipments: " << data.test.series.size() << '\n';
      return kExitOk;
    }

    if (tr->parsed()) {
      detectors::TrainOptions opts;
      opts.kind = detectors::parse_kind(tr_algo);
      opts.shift = {tr_lower, tr_upper};
      opts.window = tr_window;
      opts.k_max = tr_k_max;
      opts.m_cusum.m_min = tr_m_min;
      opts.m_cusum.m_max = tr_m_max;
      const auto training = read_series_file(tr_data);
      detectors::MCusumTrainingReport report;
      detectors::TrainedModel model;
      if (opts.kind == DetectorKind::kMCusum) {
        detectors::validate(opts.shift);
        model = detectors::train_m_cusum(training.series, opts.shift,
                                         bench::model_stream(tr_seed, opts.kind), opts.m_cusum, &report);
      } else {
        model = detectors::train(training.series, opts, bench::model_stream(tr_seed, opts.kind));
      }
      detectors::write_model_file(tr_out, model);
      out << "kind: " << detectors::kind_name(opts.kind) << '\n';
      print_summary(out, model, report);
      return kExitOk;
    }

    if (det->parsed()) {
      const auto model = detectors::read_model_file(det_model);
      const auto data = read_series_file(det_data);
      const auto alarm = detectors::first_alarm(model, data.series, det_threshold);
      out << (alarm ? std::to_string(*alarm) : std::string("none")) << '\n';
      return kExitOk;
    }

    if (be->parsed()) {
      CliConfig config;
      if (!be_config.empty()) {
        std::ifstream in(be_config);
        if (!in) throw IoError("cannot open config '" + be_config + "'");
        json doc;
        try {
          doc = json::parse(in);
        } catch (const json::parse_error& e) {
          throw ConfigError("config '" + be_config + "': " + e.what());
        }
        config = cli_config_from_json(doc);
      } else if (!be_paper && be_scenario.empty()) {
        throw UsageError("one of --paper-default, --scenario or --config is required");
      }
      if (!be_scenario.empty()) config.scenario = read_scenario_file(be_scenario);
      if (be_paper) config.scenario = default_paper_scenario();
      if (!be_algos.empty()) config.algo = parse_kinds(be_algos);
      if (!be_thresholds.empty()) config.thresholds = be_thresholds;
      if (be_trials) config.trials = *be_trials;
      if (be_seed) config.seed = *be_seed;
      if (be_window) config.window = *be_window;
      if (be_lower) config.shift.lower_mult = *be_lower;
      if (be_upper) config.shift.upper_mult = *be_upper;
      validate(config);

      bench::ExperimentOptions opts;
      opts.algorithms = config.algo;
      opts.trials = config.trials;
      opts.train.shift = config.shift;
      opts.train.window = config.window;
      if (be_k_max) opts.train.k_max = *be_k_max;
      if (be_m_min) opts.train.m_cusum.m_min = *be_m_min;
      if (be_m_max) opts.train.m_cusum.m_max = *be_m_max;
      opts.thresholds.assign(config.algo.size(), config.thresholds);
      opts.sweep.threads = resolve_threads(be_threads);

      const auto runs = bench::run_experiment(config.scenario, config.seed, opts);
      std::vector<bench::NamedCurve> curves;
      for (const auto& r : runs) {
        curves.push_back({std::string(detectors::kind_name(r.kind)), r.curve});
        out << detectors::kind_name(r.kind) << ": " << r.curve.size() << " thresholds x "
            << config.trials << " trials\n";
      }
      bench::write_curves_file(be_out, curves);
      return kExitOk;
    }

    if (sw->parsed()) {
      const double kg_swu = enrichment::separative_work(swu_spec);
      out << std::setprecision(6) << "kg-SWU: " << kg_swu << '\n'
          << "MTSWU: " << kg_swu / enrichment::kKgSwuPerMtswu << '\n';
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace dsentry::cli
