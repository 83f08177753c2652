// Batch front end: dataset simulation, reconstruction, analysis, and the
// chained full run. Subcommands: simulate | reconstruct | analyze | full-run.
// Exit codes: 0 success, 2 validation error, 3 solver failure, 4 I/O error.

#include "qpt/analysis.hpp"
#include "qpt/io.hpp"
#include "qpt/sim.hpp"
#include "qpt/tomography.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
  int exit_code;
  std::string stage;
  CliError(int code, std::string st, const std::string& msg)
      : std::runtime_error(msg), exit_code(code), stage(std::move(st)) {}
};

struct RunConfig {
  std::string source = "simulate";  // simulate | file
  std::string input;                // dataset path when source = file
  qpt::SpinSystemParams spin;
  qpt::RelaxationParams relax;
  qpt::NoiseSpec noise;
  std::vector<double> times = qpt::default_time_grid();
  qpt::SolverConfig solver;
  fs::path out = "out";
  int jobs = 1;
};

std::map<std::string, std::string> load_key_values(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw CliError(4, "config", "cannot open config file: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CliError(2, "config",
                     path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    kv[trim(line.substr(0, eq))] = val;
  }
  return kv;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw CliError(2, "config", "config key '" + key + "': malformed number '" + v + "'");
  }
}

RunConfig parse_config(const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  for (const auto& [key, val] : kv) {
    if (key == "source") cfg.source = val;
    else if (key == "input") cfg.input = val;
    else if (key == "out") cfg.out = val;
    else if (key == "omega_h") cfg.spin.omega_h = to_double(key, val);
    else if (key == "omega_c") cfg.spin.omega_c = to_double(key, val);
    else if (key == "j_coupling") cfg.spin.j_coupling = to_double(key, val);
    else if (key == "temperature") cfg.spin.temperature = to_double(key, val);
    else if (key == "epsilon_scale") cfg.spin.epsilon_scale = to_double(key, val);
    else if (key == "t1_h") cfg.relax.t1_h = to_double(key, val);
    else if (key == "t2_h") cfg.relax.t2_h = to_double(key, val);
    else if (key == "t1_c") cfg.relax.t1_c = to_double(key, val);
    else if (key == "t2_c") cfg.relax.t2_c = to_double(key, val);
    else if (key == "t1_j") cfg.relax.t1_j = to_double(key, val);
    else if (key == "t2_j") cfg.relax.t2_j = to_double(key, val);
    else if (key == "noise") {
      if (val == "none") cfg.noise.kind = qpt::NoiseSpec::Kind::none;
      else if (val == "gaussian") cfg.noise.kind = qpt::NoiseSpec::Kind::gaussian;
      else throw CliError(2, "config", "config key 'noise': expected none|gaussian");
    } else if (key == "sigma") cfg.noise.sigma = to_double(key, val);
    else if (key == "seed") cfg.noise.seed = static_cast<std::uint64_t>(to_double(key, val));
    else if (key == "tolerance") cfg.solver.tolerance = to_double(key, val);
    else if (key == "max_iterations") cfg.solver.max_iterations = static_cast<int>(to_double(key, val));
    else if (key == "jobs") cfg.jobs = static_cast<int>(to_double(key, val));
    else if (key == "times") {
      if (val == "default") continue;
      cfg.times.clear();
      std::stringstream ss(val);
      std::string tok;
      while (std::getline(ss, tok, ' '))
        if (!tok.empty()) cfg.times.push_back(to_double(key, tok));
    } else {
      throw CliError(2, "config", "unknown config key '" + key + "'");
    }
  }
  if (cfg.source != "simulate" && cfg.source != "file")
    throw CliError(2, "config", "source must be simulate or file");
  if (cfg.source == "file" && cfg.input.empty())
    throw CliError(2, "config", "source = file requires input = <path>");
  return cfg;
}

std::string index_name(const char* stem, int k, const char* ext = ".csv") {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%02d%s", stem, k, ext);
  return buf;
}

qpt::Dataset obtain_dataset(const RunConfig& cfg, bool allow_previous_output) {
  if (cfg.source == "file") {
    try {
      return qpt::ingest_dataset(cfg.input);
    } catch (const std::runtime_error& e) {
      const std::string msg = e.what();
      throw CliError(msg.find("cannot open") != std::string::npos ? 4 : 2, "ingest", msg);
    }
  }
  if (allow_previous_output && fs::exists(cfg.out / "dataset.csv"))
    return qpt::ingest_dataset(cfg.out / "dataset.csv");
  try {
    return qpt::generate_dataset(cfg.spin, cfg.relax, cfg.noise, cfg.times);
  } catch (const std::invalid_argument& e) {
    throw CliError(2, "simulate", e.what());
  }
}

void cmd_simulate(const RunConfig& cfg) {
  const qpt::Dataset ds = obtain_dataset(cfg, false);
  fs::create_directories(cfg.out);
  qpt::write_dataset_csv(ds, cfg.out / "dataset.csv");
}

void cmd_reconstruct(const RunConfig& cfg) {
  const qpt::Dataset ds = obtain_dataset(cfg, true);
  if (auto err = ds.validate()) throw CliError(2, "reconstruct", "dataset invalid: " + *err);

  qpt::StateTomographyResult init;
  std::vector<qpt::ProcessEstimate> estimates;
  try {
    init = qpt::initial_states(ds, cfg.solver);
    estimates = qpt::run_full_reconstruction(ds, cfg.solver, cfg.jobs);
  } catch (const std::invalid_argument& e) {
    throw CliError(2, "reconstruct", e.what());
  } catch (const std::runtime_error& e) {
    throw CliError(3, "reconstruct", e.what());
  }

  fs::create_directories(cfg.out / "states");
  fs::create_directories(cfg.out / "maps");
  for (int l = 0; l < 20; ++l)
    qpt::write_matrix_csv(init.states[static_cast<std::size_t>(l)].matrix,
                          cfg.out / "states" / index_name("state", l + 1));
  std::ofstream res(cfg.out / "residuals.csv");
  res << "k,prep,channel,slack\n";
  json summary;
  summary["n0"] = init.n0;
  json per_k = json::array();
  bool any_failed = false;
  for (const auto& est : estimates) {
    const int k = est.time_index;
    qpt::write_matrix_csv(est.chi.matrix, cfg.out / "maps" / index_name("chi", k));
    qpt::write_matrix_csv(est.superop.matrix, cfg.out / "maps" / index_name("liouville", k));
    qpt::write_matrix_csv(est.choi.matrix, cfg.out / "maps" / index_name("choi", k));
    for (int l = 0; l < 20; ++l)
      for (int ch = 0; ch < qpt::kNumChannels; ++ch)
        res << k << ',' << (l + 1) << ','
            << qpt::channel_names()[static_cast<std::size_t>(ch)] << ','
            << qpt::format_double(est.residuals[l * qpt::kNumChannels + ch]) << '\n';
    per_k.push_back({{"k", k}, {"time_s", est.time_s}, {"ok", est.ok}, {"error", est.error}});
    any_failed = any_failed || !est.ok;
  }
  summary["time_steps"] = per_k;
  std::ofstream(cfg.out / "summary.json") << summary.dump(2) << '\n';
  if (any_failed) throw CliError(3, "reconstruct", "one or more time steps failed; see summary.json");
}

void cmd_analyze(const RunConfig& cfg) {
  const fs::path ds_path = cfg.source == "file" ? fs::path(cfg.input) : cfg.out / "dataset.csv";
  if (!fs::exists(ds_path))
    throw CliError(4, "analyze", "missing dataset (run simulate first): " + ds_path.string());
  const qpt::Dataset ds = qpt::ingest_dataset(ds_path);

  const auto basis = qpt::build_operator_basis(qpt::build_mub_preparations());
  std::vector<qpt::DensityEstimate> preps;
  for (int l = 0; l < 20; ++l) {
    const fs::path p = cfg.out / "states" / index_name("state", l + 1);
    if (!fs::exists(p))
      throw CliError(4, "analyze", "missing reconstruction output (run reconstruct first): " + p.string());
    preps.push_back(qpt::DensityEstimate::from(qpt::read_matrix_csv(p)));
  }
  std::vector<qpt::ProcessEstimate> estimates;
  for (int k = 0; k < ds.n_times(); ++k) {
    const fs::path p = cfg.out / "maps" / index_name("chi", k);
    if (!fs::exists(p))
      throw CliError(4, "analyze", "missing reconstruction output (run reconstruct first): " + p.string());
    qpt::ProcessEstimate est;
    est.chi = qpt::ChiMatrix{qpt::read_matrix_csv(p)};
    est.superop = qpt::chi_to_superoperator(est.chi, basis);
    est.choi = qpt::reshuffle(est.superop);
    est.time_index = k;
    est.time_s = ds.times[static_cast<std::size_t>(k)];
    estimates.push_back(std::move(est));
  }

  const qpt::DensityEstimate eq = qpt::rescaled_equilibrium(cfg.spin);
  const qpt::RelaxationTable table = qpt::relaxation_table(estimates, preps, eq);
  const auto [tp, uni] = qpt::map_property_series(estimates);

  // Mean trace distance of the evolved preparations to the reference state.
  qpt::DecaySeries dist;
  dist.channel_label = "mean-trace-distance";
  for (const auto& est : estimates) {
    double sum = 0.0;
    for (const auto& prep : preps)
      sum += qpt::trace_distance(qpt::apply_map(est.superop, prep).matrix, eq.matrix);
    dist.times.push_back(est.time_s);
    dist.values.push_back(sum / static_cast<double>(preps.size()));
  }

  fs::create_directories(cfg.out);
  qpt::write_fit_table_csv(table, cfg.out / "fit_table.csv");
  const std::vector<qpt::DecaySeries> decay(table.series.begin(), table.series.end());
  qpt::write_series_csv(decay, cfg.out / "decay_series.csv");
  qpt::write_series_csv({tp, uni}, cfg.out / "deviation_series.csv");
  qpt::write_series_csv({dist}, cfg.out / "trace_distance.csv");
  try {  // plotting failures never fail the numeric pipeline
    qpt::write_svg_plot(decay, "Ensemble magnetization decay", true, cfg.out / "decay_series.svg");
    qpt::write_svg_plot({tp, uni}, "Map property deviations", true,
                        cfg.out / "deviation_series.svg");
    qpt::write_svg_plot({dist}, "Distance to reference state", true,
                        cfg.out / "trace_distance.svg");
  } catch (const std::exception& e) {
    std::cerr << "warning: plot emission failed: " << e.what() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-spin relaxation process tomography pipeline"};
  app.require_subcommand(1);
  std::string config_path, out_override;
  std::optional<int> jobs_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<double> tol_override;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_override, "output directory");
  app.add_option("--jobs", jobs_override, "worker threads for per-time-step solves");
  app.add_option("--seed", seed_override, "noise RNG seed");
  app.add_option("--tolerance", tol_override, "solver tolerance");
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset CSV");
  auto* rec = app.add_subcommand("reconstruct", "run state + process tomography");
  auto* ana = app.add_subcommand("analyze", "fit tables and diagnostic series");
  auto* full = app.add_subcommand("full-run", "simulate, reconstruct, analyze");
  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty()
                        ? RunConfig{}
                        : parse_config(load_key_values(config_path));
    if (!out_override.empty()) cfg.out = out_override;
    if (jobs_override) cfg.jobs = *jobs_override;
    if (seed_override) cfg.noise.seed = *seed_override;
    if (tol_override) cfg.solver.tolerance = *tol_override;

    if (sim->parsed()) cmd_simulate(cfg);
    if (rec->parsed()) cmd_reconstruct(cfg);
    if (ana->parsed()) cmd_analyze(cfg);
    if (full->parsed()) {
      cmd_simulate(cfg);
      cmd_reconstruct(cfg);
      cmd_analyze(cfg);
    }
    return 0;
  } catch (const CliError& e) {
    std::cerr << json{{"error", e.what()}, {"stage", e.stage}, {"exit_code", e.exit_code}}.dump()
              << '\n';
    return e.exit_code;
  } catch (const std::ios_base::failure& e) {
    std::cerr << json{{"error", e.what()}, {"stage", "io"}, {"exit_code", 4}}.dump() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"stage", "unknown"}, {"exit_code", 2}}.dump() << '\n';
    return 2;
  }
}
