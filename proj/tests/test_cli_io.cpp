#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "multibarrier/cli_io.hpp"

using namespace mbp;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* tag) {
  const fs::path p = fs::temp_directory_path() / (std::string("mbp_cli_") + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PipelineParams fast_params() {
  PipelineParams p;
  p.t_final = 0.2;
  return p;
}

int count_lines_with_prefix(const std::string& text, const std::string& prefix) {
  int count = 0;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind(prefix, 0) == 0) ++count;
  return count;
}

}  // namespace

TEST_CASE("rational parsing accepts fractions and decimals") {
  CHECK(*parse_rational("7/3") == Rational{7, 3});
  CHECK(*parse_rational("0.25") == Rational{1, 4});
  CHECK(*parse_rational("4") == Rational{4, 1});
  CHECK(*parse_rational("-1/2") == Rational{-1, 2});
  CHECK(*parse_rational("6/4") == Rational{3, 2});
  CHECK(*parse_rational("1.5") == Rational{3, 2});
  CHECK(to_string(Rational{7, 3}) == "7/3");
  CHECK(to_string(Rational{4, 1}) == "4");
  CHECK_FALSE(parse_rational("").has_value());
  CHECK_FALSE(parse_rational("x/y").has_value());
  CHECK_FALSE(parse_rational("7/0").has_value());
  CHECK_FALSE(parse_rational("1.2.3").has_value());
}

TEST_CASE("simulate emits densities, record, manifest") {
  const fs::path out = temp_dir("simulate");
  SimulateOptions opts;
  opts.physics = fast_params();
  opts.physics.t_final = 0.0;
  opts.n = 10;
  opts.c = Rational{1, 1};
  opts.out_dir = out;
  CHECK(run_simulate(opts) == kExitOk);

  for (const char* name :
       {"initial_density.dat", "final_density.dat", "record.csv", "manifest.txt"})
    CHECK(fs::exists(out / name));

  // every output starts with a # header carrying the format version
  for (const char* name : {"initial_density.dat", "final_density.dat", "record.csv"}) {
    const std::string text = slurp(out / name);
    CHECK(text.rfind("# multibarrier", 0) == 0);
    CHECK(text.find("format=1") != std::string::npos);
  }

  // t_final = 0: the final density equals the initial density (the walls are
  // pinned to zero, which only touches values that already underflow)
  auto densities = [](const std::string& text) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      double x, re, im, rho;
      ls >> x >> re >> im >> rho;
      out.push_back(rho);
    }
    return out;
  };
  const auto rho_i = densities(slurp(out / "initial_density.dat"));
  const auto rho_f = densities(slurp(out / "final_density.dat"));
  REQUIRE(rho_i.size() == rho_f.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < rho_i.size(); ++i)
    worst = std::max(worst, std::abs(rho_i[i] - rho_f[i]));
  CHECK(worst < 1e-50);

  // the manifest inventory covers every emitted file
  const std::string manifest = slurp(out / "manifest.txt");
  for (const char* name : {"initial_density.dat", "final_density.dat", "record.csv"})
    CHECK(manifest.find(std::string("file.") + name + "=") != std::string::npos);
  CHECK(manifest.find("task.n10_c1=ok") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("simulate rejects invalid parameters") {
  SimulateOptions opts;
  opts.physics = fast_params();
  opts.n = 1;  // too few barriers
  opts.out_dir = temp_dir("simulate_bad");
  CHECK_THROWS_AS((void)run_simulate(opts), std::invalid_argument);
  fs::remove_all(opts.out_dir);
}

TEST_CASE("simulate snapshots are named by step index") {
  const fs::path out = temp_dir("snapshots");
  SimulateOptions opts;
  opts.physics = fast_params();  // 10 steps
  opts.snapshot_stride = 5;
  opts.out_dir = out;
  CHECK(run_simulate(opts) == kExitOk);
  CHECK(fs::exists(out / "snapshot_000000.dat"));
  CHECK(fs::exists(out / "snapshot_000005.dat"));
  CHECK(fs::exists(out / "snapshot_000010.dat"));
  fs::remove_all(out);
}

TEST_CASE("scan dry run writes only the planned manifest") {
  const fs::path out = temp_dir("dryrun");
  ScanCommandOptions opts;
  opts.config.physics = fast_params();
  opts.config.n_values = {4, 5};
  opts.config.c_values = {Rational{1, 1}, Rational{7, 3}};
  opts.out_dir = out;
  opts.dry_run = true;
  const CommandResult res = run_scan_command(opts);
  CHECK(res.exit_code == kExitOk);
  CHECK(fs::exists(out / "manifest.txt"));
  CHECK_FALSE(fs::exists(out / "records.csv"));
  const std::string manifest = slurp(out / "manifest.txt");
  CHECK(count_lines_with_prefix(manifest, "task.") == 4);
  CHECK(manifest.find("=planned") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("scan emits reports and a complete inventory") {
  const fs::path out = temp_dir("scanout");
  const fs::path cache = temp_dir("scanout_cache");
  ScanCommandOptions opts;
  opts.config.physics = fast_params();
  opts.config.n_values = {4, 5};
  opts.config.c_values = {Rational{1, 1}};
  opts.config.candidate_periods = {3};  // small period keeps the partner cheap
  opts.config.cache_dir = cache;
  opts.out_dir = out;
  const CommandResult res = run_scan_command(opts);
  CHECK(res.exit_code == kExitOk);

  const char* names[] = {"records.csv",          "correlations_table.csv",
                         "period_report.csv",    "period_report.txt",
                         "constancy_report.csv", "constancy_report.txt"};
  const std::string manifest = slurp(out / "manifest.txt");
  for (const char* name : names) {
    CHECK(fs::exists(out / name));
    CHECK(slurp(out / name).rfind("# multibarrier", 0) == 0);
    CHECK(manifest.find(std::string("file.") + name + "=") != std::string::npos);
  }
  // records.csv: header comment + column row + one row per record
  CHECK(count_lines_with_prefix(slurp(out / "records.csv"), "4,") == 1);
  CHECK(count_lines_with_prefix(slurp(out / "records.csv"), "5,") == 1);
  fs::remove_all(out);
  fs::remove_all(cache);
}

TEST_CASE("report command works only from the cache") {
  const fs::path out1 = temp_dir("report1");
  const fs::path out2 = temp_dir("report2");
  const fs::path cache = temp_dir("report_cache");
  ScanCommandOptions opts;
  opts.config.physics = fast_params();
  opts.config.n_values = {4};
  opts.config.c_values = {Rational{1, 1}};
  opts.config.candidate_periods = {1};
  opts.config.cache_dir = cache;
  opts.out_dir = out1;

  // cold cache: report fails
  CHECK(run_report_command(opts).exit_code == kExitTaskFailure);

  // after a scan the report re-renders identical CSV bytes
  ScanCommandOptions scan_opts = opts;
  CHECK(run_scan_command(scan_opts).exit_code == kExitOk);
  ScanCommandOptions rep_opts = opts;
  rep_opts.out_dir = out2;
  CHECK(run_report_command(rep_opts).exit_code == kExitOk);
  CHECK(slurp(out1 / "records.csv") == slurp(out2 / "records.csv"));
  CHECK(slurp(out1 / "correlations_table.csv") == slurp(out2 / "correlations_table.csv"));
  fs::remove_all(out1);
  fs::remove_all(out2);
  fs::remove_all(cache);
}

TEST_CASE("levels command emits levels and histogram") {
  const fs::path out = temp_dir("levels");
  LevelsOptions opts;
  opts.height = 0.0;  // free case
  opts.e_min = 1e-9;
  opts.e_max = 0.05;
  opts.radius = 200.0;
  opts.bins = 4;
  opts.out_dir = out;
  CHECK(run_levels_command(opts) == kExitOk);
  const std::string levels = slurp(out / "levels.dat");
  // free ladder in (0, 0.05]: floor(200*sqrt(0.05)/pi) = 14 levels
  CHECK(count_lines_with_prefix(levels, "#") == 3);
  int rows = 0;
  std::istringstream is(levels);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == 14);

  const std::string hist = slurp(out / "spacing_histogram.dat");
  int total = 0;
  std::istringstream hs(hist);
  while (std::getline(hs, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double center, wig;
    int count;
    ls >> center >> count >> wig;
    total += count;
  }
  CHECK(total == 13);  // one fewer spacings than levels
  fs::remove_all(out);
}

#ifdef MBP_CLI_BIN
TEST_CASE("config file values apply and command-line flags override them") {
  const fs::path out = temp_dir("config");
  const std::string bin = MBP_CLI_BIN;
  {
    std::ofstream conf(out / "run.conf");
    conf << "# comment line\n";
    conf << "n=6\n";
    conf << "c=7/3\n";
    conf << "t-final=0.2\n";
  }
  const std::string from_file = bin + " simulate --config " + (out / "run.conf").string() +
                                " --out-dir " + (out / "a").string() + " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(from_file.c_str())) == 0);
  CHECK(slurp(out / "a" / "record.csv").find("\n6,7/3,") != std::string::npos);

  const std::string overridden = bin + " simulate --config " + (out / "run.conf").string() +
                                 " --c 1 --out-dir " + (out / "b").string() +
                                 " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(overridden.c_str())) == 0);
  CHECK(slurp(out / "b" / "record.csv").find("\n6,1,") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("binary exit codes: 0 on success, 2 on invalid input") {
  const fs::path out = temp_dir("binary");
  const std::string bin = MBP_CLI_BIN;
  const std::string ok = bin + " simulate --n 4 --c 1 --t-final 0.2 --out-dir " +
                         (out / "ok").string() + " >/dev/null 2>&1";
  int rc = std::system(ok.c_str());
  REQUIRE(rc != -1);
  CHECK(WEXITSTATUS(rc) == 0);

  const std::string bad = bin + " simulate --n 1 --c 1 --out-dir " + (out / "bad").string() +
                          " >/dev/null 2>&1";
  rc = std::system(bad.c_str());
  REQUIRE(rc != -1);
  CHECK(WEXITSTATUS(rc) == 2);

  const std::string badc = bin + " simulate --c nonsense --out-dir " + (out / "badc").string() +
                           " >/dev/null 2>&1";
  rc = std::system(badc.c_str());
  REQUIRE(rc != -1);
  CHECK(WEXITSTATUS(rc) == 2);
  fs::remove_all(out);
}
#endif
