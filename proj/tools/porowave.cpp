// porowave: command-line driver for the built-in scenarios.
#include "pw/io.hpp"
#include "pw/scenarios.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace pw;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Options {
  std::string config;
  std::string out;
  int threads = 0;
  std::vector<int> grids;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw IoError("cannot write " + p.string());
  return os;
}

class Run {
 public:
  Run(const std::string& command, const Options& o) : command_(command), opt_(o) {
    text_ = read_text(o.config);
    cfg_ = load_config(o.config);
    if (o.threads > 0) cfg_.solver.threads = o.threads;
    out_ = o.out.empty() ? fs::path(cfg_.output_dir) : fs::path(o.out);
    fs::create_directories(out_);
    start_ = std::chrono::steady_clock::now();
    const double f = cfg_.wave.omega / (2 * std::numbers::pi);
    for (const Material& m : cfg_.materials)
      if (m.biot_max_frequency > 0 && f > m.biot_max_frequency) {
        const std::string w = "wave frequency " + std::to_string(f) + " Hz exceeds the Biot validity limit of '" +
                              m.name + "' (" + std::to_string(m.biot_max_frequency) + " Hz)";
        std::cerr << "warning: " << w << '\n';
        warnings_.push_back(w);
      }
  }

  ScenarioConfig& cfg() { return cfg_; }
  const fs::path& out() const { return out_; }

  std::vector<int> grids(std::vector<int> fallback) const {
    if (!opt_.grids.empty()) return opt_.grids;
    if (!cfg_.grids.empty()) return cfg_.grids;
    return fallback;
  }

  void output(const fs::path& p) { outputs_.push_back(p.string()); }
  void record(const std::string& key, json v) { results_[key] = std::move(v); }

  void timed(const std::string& label, const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    timings_[label] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  void finish() {
    json m;
    m["command"] = command_;
    m["version"] = kVersion;
    m["scenario"] = to_string(cfg_.kind);
    m["name"] = cfg_.name;
    m["config_path"] = opt_.config;
    m["config"] = text_;
    m["threads"] = cfg_.solver.threads;
    m["compiler"] = __VERSION__;
    m["timings_s"] = timings_;
    m["timings_s"]["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    m["outputs"] = outputs_;
    m["results"] = results_;
    m["warnings"] = warnings_;
    const fs::path p = out_ / "manifest.json";
    open_out(p) << m.dump(2) << '\n';
    std::cout << "wrote " << p.string() << '\n';
  }

 private:
  std::string command_;
  Options opt_;
  std::string text_;
  ScenarioConfig cfg_;
  fs::path out_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_, warnings_;
  json timings_ = json::object();
  json results_ = json::object();
};

json fit_json(const ConvergenceResult& r) {
  json j;
  j["rate1"] = r.fit1.rate;
  j["rate_max"] = r.fit_max.rate;
  j["finest_norm1"] = r.reports.back().norm1;
  return j;
}

ConvergenceCase convergence_case(const ScenarioConfig& c) {
  switch (c.kind) {
    case ScenarioKind::plane_wave: return plane_wave_case(c);
    case ScenarioKind::reflection: return reflection_case(c);
    default: throw ConfigError(std::string("scenario '") + to_string(c.kind) + "' has no analytic convergence study");
  }
}

void do_convergence(Run& run) {
  const ConvergenceCase cc = convergence_case(run.cfg());
  ConvergenceResult r;
  run.timed("convergence", [&] { r = run_convergence(cc, run.grids({100, 200, 400})); });
  const fs::path p = run.out() / "convergence.csv";
  auto os = open_out(p);
  write_convergence_csv(os, {r});
  run.output(p);
  run.record(r.id, fit_json(r));
  std::cout << r.id << ": rate1 " << r.fit1.rate << ", rateMax " << r.fit_max.rate << '\n';
}

// Every configured incidence angle at eta_d in {0, 0.5, 1}.
void do_full_sweep(Run& run) {
  ScenarioConfig base = run.cfg();
  if (base.kind != ScenarioKind::reflection) throw ConfigError("full-sweep needs a reflection scenario");
  std::vector<double> angles = base.reflection.angles;
  if (angles.empty()) angles.push_back(-base.wave.direction);
  std::vector<ConvergenceResult> all;
  run.timed("full_sweep", [&] {
    for (double a : angles)
      for (double ed : {0.0, 0.5, 1.0}) {
        ScenarioConfig c = base;
        c.wave.direction = -a;
        c.interface.eta_d = ed;
        std::ostringstream id;
        id << base.name << "_a" << std::lround(a * 180 / std::numbers::pi) << "_ed" << ed;
        c.name = id.str();
        all.push_back(run_convergence(reflection_case(c), run.grids({100, 200, 400})));
        std::cout << c.name << ": rate1 " << all.back().fit1.rate << '\n';
        run.record(c.name, fit_json(all.back()));
      }
  });
  const fs::path p = run.out() / "full_sweep.csv";
  auto os = open_out(p);
  write_convergence_csv(os, all);
  run.output(p);
}

void do_zeta(Run& run) {
  if (run.cfg().kind != ScenarioKind::zeta_sweep) throw ConfigError("zeta-sweep needs a zeta_sweep scenario");
  std::vector<ZetaRow> rows;
  run.timed("zeta_sweep", [&] { rows = zeta_sweep(run.cfg()); });
  const fs::path p = run.out() / "zeta_sweep.csv";
  auto os = open_out(p);
  write_zeta_csv(os, rows);
  run.output(p);
  double worst = 0;
  for (const auto& r : rows) worst = std::max(worst, r.cond);
  run.record("max_cond", worst);
  std::cout << "max condition number " << worst << '\n';
}

void do_rt(Run& run) {
  if (run.cfg().kind != ScenarioKind::reflection) throw ConfigError("rt-coefficients needs a reflection scenario");
  const fs::path p = run.out() / "rt_coefficients.csv";
  auto os = open_out(p);
  write_rt_csv(os, rt_coefficients(run.cfg()));
  run.output(p);
}

void do_dump_grid(Run& run) {
  for (int N : run.grids({run.cfg().kind == ScenarioKind::femur ? run.cfg().femur.N : 100})) {
    const MappedGrid g = scenario_grid(run.cfg(), N);
    const fs::path prefix = run.out() / ("grid_N" + std::to_string(N));
    dump_grid(g, prefix.string());
    run.output(prefix.string() + ".vertices.pwv");
  }
}

void do_splitting(Run& run) {
  SplittingResult r;
  run.timed("splitting", [&] { r = splitting_study(run.cfg()); });
  const fs::path p = run.out() / "splitting.csv";
  auto os = open_out(p);
  os << "dt,diff_to_next,rate\n";
  os.precision(10);
  for (size_t k = 0; k < r.dt.size(); ++k) {
    os << r.dt[k] << ',';
    if (k < r.diffs.size()) os << r.diffs[k];
    os << ',';
    if (k < r.rates.size()) os << r.rates[k];
    os << '\n';
  }
  run.output(p);
  run.record("tau_min", r.tau_min);
  run.record("rates", r.rates);
  for (double q : r.rates) std::cout << "rate " << q << '\n';
}

void do_scatterer(Run& run) {
  ScattererResult r;
  run.timed("scatterer", [&] { r = scatterer_study(run.cfg(), run.grids({128, 256, 512}), run.out().string()); });
  const fs::path p = run.out() / "scatterer.csv";
  auto os = open_out(p);
  write_scatterer_csv(os, r);
  run.output(p);
  run.record("rates", r.rates);
  run.record("contamination", r.contamination);
  for (double q : r.rates) std::cout << "rate " << q << '\n';
}

void do_femur(Run& run, int threads) {
  FemurResult r;
  const int N = run.grids({}).empty() ? 0 : run.grids({}).front();
  run.timed("femur", [&] { r = run_femur(run.cfg(), run.out().string(), N, threads); });
  for (const auto& s : r.snapshots) run.output(s);
  run.record("steps", r.steps);
  run.record("time", r.time);
  run.record("contamination", r.contamination);
  run.record("max_pore_pressure", json{{"core", r.max_p_core}, {"shell", r.max_p_shell}});
  run.record("max_flow", json{{"core", r.max_q_core}, {"shell", r.max_q_shell}});
  std::cout << "femur: " << r.steps << " steps to t = " << r.time << " s, " << r.snapshots.size() << " snapshots\n";
}

void do_run(Run& run, int threads) {
  switch (run.cfg().kind) {
    case ScenarioKind::plane_wave:
    case ScenarioKind::reflection: do_convergence(run); break;
    case ScenarioKind::splitting: do_splitting(run); break;
    case ScenarioKind::scatterer: do_scatterer(run); break;
    case ScenarioKind::femur: do_femur(run, threads); break;
    case ScenarioKind::zeta_sweep: do_zeta(run); break;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poroelastic wave-propagation scenarios"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options opt;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "scenario YAML")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory (default: config output.dir)");
    sub->add_option("--threads", opt.threads, "solver threads")->check(CLI::PositiveNumber);
    sub->add_option("--grids", opt.grids, "grid sizes, e.g. --grids 100,200,400")->delimiter(',');
    return sub;
  };
  add("run", "run the configured scenario");
  add("convergence", "analytic convergence study (plane_wave or reflection)");
  add("full-sweep", "convergence over every configured angle and eta_d in {0, 0.5, 1}");
  add("zeta-sweep", "interface condition numbers over zeta");
  add("rt-coefficients", "analytic reflection/transmission coefficients");
  add("dump-grid", "write grid geometry dumps");
  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    Run run(cmd, opt);
    if (cmd == "run") do_run(run, opt.threads);
    else if (cmd == "convergence") do_convergence(run);
    else if (cmd == "full-sweep") do_full_sweep(run);
    else if (cmd == "zeta-sweep") do_zeta(run);
    else if (cmd == "rt-coefficients") do_rt(run);
    else if (cmd == "dump-grid") do_dump_grid(run);
    run.finish();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << opt.config << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
