// Command-line front end: simulate / scan / levels / report.

#include <clocale>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "multibarrier/cli_io.hpp"

namespace {

using namespace mbp;

std::string trimmed(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Flat key=value config mirroring the long flags. Values are injected as
// --key=value tokens for every key the command line does not already carry,
// so explicit flags always override the file.
std::vector<std::string> with_config_applied(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);

  std::size_t insert_at = 0;  // right after the subcommand token
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!args[i].empty() && args[i][0] != '-') {
      insert_at = i + 1;
      break;
    }
  }

  std::string line;
  while (std::getline(in, line)) {
    line = trimmed(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + line);
    const std::string key = "--" + trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    bool overridden = false;
    for (const std::string& a : args)
      if (a == key || a.rfind(key + "=", 0) == 0) overridden = true;
    if (!overridden) args.insert(args.begin() + insert_at++, key + "=" + value);
  }
  return args;
}

Rational parse_c_or_throw(const std::string& text) {
  auto c = parse_rational(text);
  if (!c || !(c->value() > 0.0))
    throw CLI::ValidationError("--c", "expected a positive rational like 7/3 or 0.25");
  return *c;
}

Scheme parse_scheme_or_throw(const std::string& text) {
  auto s = parse_scheme(text);
  if (!s) throw CLI::ValidationError("--scheme", "expected crank_nicolson or paper_explicit");
  return *s;
}

std::filesystem::path resolve_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MBCL_CACHE"); env && *env) return env;
  return "cache";
}

struct PhysicsFlags {
  double length = 20.0;
  double height = 2.0;
  double t_final = 6.0;
  double dx = 1.0 / 7.0;
  double dt = 1.0 / 50.0;
  double x_min = -40.0;
  double x_max = 60.0;
  double x0 = -10.0;
  double p0 = 3.0;
  double w0 = 0.5;
  double mass = 0.5;
  std::string scheme = "crank_nicolson";

  void attach(CLI::App& cmd) {
    cmd.add_option("--length", length, "total length L of the barrier array");
    cmd.add_option("--height,--v", height, "barrier height V");
    cmd.add_option("--t-final", t_final, "evolution time");
    cmd.add_option("--dx", dx, "grid spacing");
    cmd.add_option("--dt", dt, "time step");
    cmd.add_option("--x-min", x_min, "grid left edge");
    cmd.add_option("--x-max", x_max, "grid right edge");
    cmd.add_option("--x0", x0, "initial packet center");
    cmd.add_option("--p0", p0, "initial packet momentum");
    cmd.add_option("--w0", w0, "initial momentum-space width");
    cmd.add_option("--mass", mass, "particle mass");
    cmd.add_option("--scheme", scheme, "crank_nicolson or paper_explicit");
  }

  PipelineParams resolve() const {
    PipelineParams p;
    p.grid = make_grid(x_min, x_max, dx, dt);
    p.packet = PacketParams{x0, p0, w0, mass};
    p.total_length = length;
    p.height = height;
    p.t_final = t_final;
    p.scheme = parse_scheme_or_throw(scheme);
    return p;
  }
};

std::vector<int> expand_n_values(const std::vector<std::string>& items) {
  std::vector<int> out;
  for (const std::string& item : items) {
    const auto dash = item.find("..");
    if (dash == std::string::npos) {
      out.push_back(std::stoi(item));
      continue;
    }
    const int lo = std::stoi(item.substr(0, dash));
    const int hi = std::stoi(item.substr(dash + 2));
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"bounded multibarrier wavepacket simulations"};
  app.require_subcommand(1);
  std::string config_path;  // parsed from the injected token stream

  // simulate
  auto* sim = app.add_subcommand("simulate", "one (N, c) evolution with density output");
  sim->add_option("--config", config_path, "flat key=value config file");
  int sim_n = 10;
  std::string sim_c = "1";
  int sim_stride = 0;
  std::string sim_out = "out";
  PhysicsFlags sim_phys;
  sim->add_option("--n", sim_n, "number of barriers");
  sim->add_option("--c", sim_c, "gap-to-barrier ratio (rational, e.g. 7/3)");
  sim->add_option("--snapshot-stride", sim_stride, "emit a snapshot every k steps");
  sim->add_option("--out-dir", sim_out, "output directory");
  sim_phys.attach(*sim);

  // scan
  auto* scan = app.add_subcommand("scan", "sweep (N, c), detect periods and c-constancy");
  scan->add_option("--config", config_path, "flat key=value config file");
  std::vector<std::string> scan_n{"4..15"};
  std::vector<std::string> scan_c;
  std::vector<int> scan_periods{140, 28};
  double scan_tol = 1e-6;
  bool scan_raw = false;
  int scan_workers = 1;
  std::string scan_cache, scan_out = "out";
  bool scan_dry = false;
  PhysicsFlags scan_phys;
  scan->add_option("--n", scan_n, "N values or ranges like 4..15");
  scan->add_option("--c", scan_c, "c values (default: 4 7/3 3/2 1 2/3 0.25)");
  scan->add_option("--periods", scan_periods, "candidate periods in N");
  scan->add_option("--tolerance", scan_tol, "relative matrix-equality tolerance");
  scan->add_flag("--raw-compare", scan_raw, "compare raw instead of normalized matrices");
  scan->add_option("--workers", scan_workers, "worker thread count");
  scan->add_option("--cache-dir", scan_cache, "record cache directory (or MBCL_CACHE)");
  scan->add_option("--out-dir", scan_out, "output directory");
  scan->add_flag("--dry-run", scan_dry, "write the planned-task manifest only");
  scan_phys.attach(*scan);

  // levels
  auto* levels = app.add_subcommand("levels", "energy levels and spacing statistics");
  levels->add_option("--config", config_path, "flat key=value config file");
  int lev_n = 10, lev_bins = 24, lev_spp = 8;
  std::string lev_c = "1", lev_out = "out";
  double lev_length = 20.0, lev_height = 2.0, lev_emin = 1e-6, lev_emax = 2.0,
         lev_radius = 0.0;
  levels->add_option("--n", lev_n, "number of barriers");
  levels->add_option("--c", lev_c, "gap-to-barrier ratio");
  levels->add_option("--length", lev_length, "total length L");
  levels->add_option("--height,--v", lev_height, "barrier height V (0 = free)");
  levels->add_option("--e-min", lev_emin, "lower end of the energy window");
  levels->add_option("--e-max", lev_emax, "upper end of the energy window");
  levels->add_option("--radius", lev_radius, "boundary radius R (default 10 L)");
  levels->add_option("--bins", lev_bins, "histogram bin count");
  levels->add_option("--samples-per-period", lev_spp, "scan samples per phase period");
  levels->add_option("--out-dir", lev_out, "output directory");

  // report
  auto* report = app.add_subcommand("report", "re-render scan outputs from the cache");
  report->add_option("--config", config_path, "flat key=value config file");
  std::vector<std::string> rep_n{"4..15"};
  std::vector<std::string> rep_c;
  std::vector<int> rep_periods{140, 28};
  double rep_tol = 1e-6;
  std::string rep_cache, rep_out = "out";
  PhysicsFlags rep_phys;
  report->add_option("--n", rep_n, "N values or ranges");
  report->add_option("--c", rep_c, "c values");
  report->add_option("--periods", rep_periods, "candidate periods");
  report->add_option("--tolerance", rep_tol, "matrix-equality tolerance");
  report->add_option("--cache-dir", rep_cache, "record cache directory");
  report->add_option("--out-dir", rep_out, "output directory");
  rep_phys.attach(*report);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = with_config_applied(args);
    std::vector<const char*> cargv;
    cargv.push_back(argv[0]);
    for (const std::string& a : args) cargv.push_back(a.c_str());
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex);
    return code == 0 ? 0 : mbp::kExitInvalidInput;  // help/version exit cleanly
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return mbp::kExitInvalidInput;
  }

  try {
    if (sim->parsed()) {
      SimulateOptions opts;
      opts.physics = sim_phys.resolve();
      opts.n = sim_n;
      opts.c = parse_c_or_throw(sim_c);
      opts.snapshot_stride = sim_stride;
      opts.out_dir = sim_out;
      return run_simulate(opts);
    }

    auto fill_scan_config = [](ScanConfig& cfg, const std::vector<std::string>& n_items,
                               const std::vector<std::string>& c_items,
                               const std::vector<int>& periods, double tol, int workers,
                               const std::string& cache, const PhysicsFlags& phys) {
      cfg.n_values = expand_n_values(n_items);
      if (!c_items.empty()) {
        cfg.c_values.clear();
        for (const std::string& item : c_items) cfg.c_values.push_back(parse_c_or_throw(item));
      }
      cfg.candidate_periods = periods;
      cfg.tolerance = tol;
      cfg.workers = workers;
      cfg.cache_dir = resolve_cache_dir(cache);
      cfg.physics = phys.resolve();
    };

    if (scan->parsed()) {
      ScanCommandOptions opts;
      fill_scan_config(opts.config, scan_n, scan_c, scan_periods, scan_tol, scan_workers,
                       scan_cache, scan_phys);
      opts.config.normalized_compare = !scan_raw;
      opts.out_dir = scan_out;
      opts.dry_run = scan_dry;
      return run_scan_command(opts).exit_code;
    }

    if (levels->parsed()) {
      LevelsOptions opts;
      opts.n = lev_n;
      opts.c = parse_c_or_throw(lev_c);
      opts.total_length = lev_length;
      opts.height = lev_height;
      opts.e_min = lev_emin;
      opts.e_max = lev_emax;
      opts.radius = lev_radius;
      opts.bins = lev_bins;
      opts.samples_per_period = lev_spp;
      opts.out_dir = lev_out;
      if (opts.height < 0.0) throw std::invalid_argument("height must be >= 0");
      return run_levels_command(opts);
    }

    if (report->parsed()) {
      ScanCommandOptions opts;
      fill_scan_config(opts.config, rep_n, rep_c, rep_periods, rep_tol, 1, rep_cache,
                       rep_phys);
      opts.out_dir = rep_out;
      return run_report_command(opts).exit_code;
    }
  } catch (const CLI::ValidationError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return mbp::kExitInvalidInput;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return mbp::kExitInvalidInput;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return mbp::kExitTaskFailure;
  }
  return mbp::kExitInvalidInput;
}
