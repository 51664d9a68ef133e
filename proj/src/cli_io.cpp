#include "multibarrier/cli_io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "multibarrier/fingerprint.hpp"
#include "multibarrier/table1_reference.hpp"

namespace mbp {

namespace fs = std::filesystem;

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

void write_manifest(const fs::path& out_dir, const RunManifest& manifest) {
  std::ostringstream os;
  os << "# multibarrier manifest format=" << kFormatVersion << "\n";
  os << "command=" << manifest.command << "\n";
  os << "started=" << manifest.started << "\n";
  os << "finished=" << manifest.finished << "\n";
  for (const auto& [k, v] : manifest.config) os << "config." << k << "=" << v << "\n";
  for (const auto& [task, status] : manifest.tasks) os << "task." << task << "=" << status << "\n";
  for (const auto& [name, bytes] : manifest.files)
    os << "file." << name << "=" << bytes << "\n";
  write_text_file(out_dir / "manifest.txt", os.str());
}

namespace {

// tracks emitted files so the manifest inventory is complete by construction
struct Emitter {
  fs::path out_dir;
  std::vector<std::pair<std::string, std::uintmax_t>> files;

  void emit(const std::string& name, const std::string& content) {
    const fs::path path = out_dir / name;
    write_text_file(path, content);
    files.emplace_back(name, fs::file_size(path));
  }
};

std::string field_file_text(const ComplexField& field) {
  std::ostringstream os;
  os << "# multibarrier field format=" << kFormatVersion << "\n";
  os << "# columns: x re im density\n";
  for (int i = 0; i < field.grid.n_points; ++i) {
    const auto& v = field.values[i];
    const double rho = v.real() * v.real() + v.imag() * v.imag();
    os << g17(field.grid.x(i)) << " " << g17(v.real()) << " " << g17(v.imag()) << " "
       << g17(rho) << "\n";
  }
  return os.str();
}

std::string levels_file_text(const LevelSet& levels) {
  std::ostringstream os;
  os << "# multibarrier levels format=" << kFormatVersion << "\n";
  os << "# radius=" << g17(levels.radius) << "\n";
  os << "# columns: energy from_real from_imag\n";
  for (const Level& lv : levels.levels)
    os << g17(lv.energy) << " " << (lv.from_real ? 1 : 0) << " " << (lv.from_imag ? 1 : 0)
       << "\n";
  return os.str();
}

std::string histogram_file_text(const SpacingHistogram& hist) {
  std::ostringstream os;
  os << "# multibarrier spacing histogram format=" << kFormatVersion << "\n";
  os << "# mean_spacing=" << g17(hist.mean_spacing) << "\n";
  os << "# columns: bin_center count wigner_value\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const double center = 0.5 * (hist.edges[i] + hist.edges[i + 1]);
    os << g17(center) << " " << hist.counts[i] << " " << g17(wigner_pdf(center)) << "\n";
  }
  return os.str();
}

std::string task_id(const ScanKey& key) {
  return "n" + std::to_string(key.n) + "_c" + to_string(key.c);
}

void append_physics_config(std::vector<std::pair<std::string, std::string>>& cfg,
                           const PipelineParams& p) {
  cfg.emplace_back("scheme", to_string(p.scheme));
  cfg.emplace_back("length", g17(p.total_length));
  cfg.emplace_back("height", g17(p.height));
  cfg.emplace_back("t_final", g17(p.t_final));
  cfg.emplace_back("x_min", g17(p.grid.x_min));
  cfg.emplace_back("x_max", g17(p.grid.x_max));
  cfg.emplace_back("dx", g17(p.grid.dx));
  cfg.emplace_back("dt", g17(p.grid.dt));
  cfg.emplace_back("x0", g17(p.packet.x0));
  cfg.emplace_back("p0", g17(p.packet.p0));
  cfg.emplace_back("w0", g17(p.packet.w0));
  cfg.emplace_back("mass", g17(p.packet.mass));
}

}  // namespace

void write_field_file(const fs::path& path, const ComplexField& field) {
  write_text_file(path, field_file_text(field));
}

void write_levels_file(const fs::path& path, const LevelSet& levels) {
  write_text_file(path, levels_file_text(levels));
}

void write_histogram_file(const fs::path& path, const SpacingHistogram& hist) {
  write_text_file(path, histogram_file_text(hist));
}

std::string render_record_csv_row(const CorrelationRecord& rec) {
  std::ostringstream os;
  os << rec.n_barriers << "," << to_string(rec.c) << "," << g17(rec.correlation) << ","
     << g17(rec.tridiag.alpha[0]) << "," << g17(rec.tridiag.alpha[1]) << ","
     << g17(rec.tridiag.alpha[2]) << "," << g17(rec.tridiag.beta[0]) << ","
     << g17(rec.tridiag.beta[1]) << "," << (rec.tridiag.breakdown ? 1 : 0) << ","
     << rec.fingerprint;
  return os.str();
}

std::string render_records_csv(const std::map<ScanKey, CorrelationRecord>& records,
                               const PeriodReport& periods) {
  std::map<ScanKey, PeriodFlag> flag140;
  for (const auto& e : periods.entries)
    if (e.period == 140) flag140[e.key] = e.flag;

  std::ostringstream os;
  os << "# multibarrier correlation records format=" << kFormatVersion << "\n";
  os << "n,c,C,alpha1,alpha2,alpha3,beta1,beta2,breakdown,fingerprint,"
     << "bw_over_dx,periodic_140,reference_C,reference_p,p_agreement\n";
  for (const auto& [key, rec] : records) {
    os << render_record_csv_row(rec) << "," << g17(rec.bw_over_dx) << ",";
    std::string detected = "indeterminate";
    if (auto it = flag140.find(key); it != flag140.end()) detected = to_string(it->second);
    os << detected << ",";
    const Table1Entry* ref = table1_lookup(key.n, key.c);
    if (ref) {
      os << g17(ref->correlation) << "," << (ref->periodic_140 ? "p" : "");
      if (detected == "indeterminate")
        os << ",";
      else
        os << "," << ((detected == "periodic") == ref->periodic_140 ? "agree" : "differ");
    } else {
      os << ",,";
    }
    os << "\n";
  }
  return os.str();
}

std::string render_table_csv(const std::map<ScanKey, CorrelationRecord>& records,
                             const ScanConfig& config) {
  std::vector<int> ns;
  for (const auto& [key, rec] : records)
    if (ns.empty() || ns.back() != key.n) ns.push_back(key.n);

  std::ostringstream os;
  os << "# multibarrier correlation table format=" << kFormatVersion << "\n";
  os << "n";
  for (const Rational& c : config.c_values) os << ",C(c=" << to_string(c) << ")";
  os << "\n";
  for (int n : ns) {
    os << n;
    for (const Rational& c : config.c_values) {
      os << ",";
      auto it = records.find(ScanKey{n, c});
      if (it != records.end()) os << g17(it->second.correlation);
    }
    os << "\n";
  }
  return os.str();
}

std::string render_period_csv(const PeriodReport& report) {
  std::ostringstream os;
  os << "# multibarrier period report format=" << kFormatVersion << "\n";
  os << "n,c,period,partner_n,flag,max_rel_deviation,C,partner_C,reference_p\n";
  for (const auto& e : report.entries) {
    const Table1Entry* ref = table1_lookup(e.key.n, e.key.c);
    os << e.key.n << "," << to_string(e.key.c) << "," << e.period << "," << e.partner_n
       << "," << to_string(e.flag) << "," << g17(e.max_deviation) << ","
       << g17(e.correlation) << "," << g17(e.partner_correlation) << ","
       << (ref ? (ref->periodic_140 ? "p" : "-") : "") << "\n";
  }
  os << "# implication_violations=" << report.implication_violations << "\n";
  return os.str();
}

std::string render_period_text(const PeriodReport& report) {
  std::ostringstream os;
  os << "# multibarrier period report format=" << kFormatVersion << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%5s %6s %7s %9s %14s %13s %11s\n", "n", "c", "period",
                "partner_n", "flag", "max_rel_dev", "ref_marker");
  os << line;
  for (const auto& e : report.entries) {
    const Table1Entry* ref = table1_lookup(e.key.n, e.key.c);
    std::snprintf(line, sizeof line, "%5d %6s %7d %9d %14s %13.4e %11s\n", e.key.n,
                  to_string(e.key.c).c_str(), e.period, e.partner_n, to_string(e.flag),
                  e.max_deviation, ref ? (ref->periodic_140 ? "p" : "-") : "?");
    os << line;
  }
  os << "implication violations: " << report.implication_violations << "\n";
  return os.str();
}

std::string render_constancy_csv(const ConstancyReport& report) {
  std::ostringstream os;
  os << "# multibarrier constancy report format=" << kFormatVersion << "\n";
  os << "n,c_from,c_to,window_length,max_rel_deviation\n";
  for (const auto& w : report.windows) {
    os << w.n << "," << to_string(report.sorted_c[w.c_begin]) << ","
       << to_string(report.sorted_c[w.c_end]) << "," << (w.c_end - w.c_begin + 1) << ","
       << g17(w.max_deviation) << "\n";
  }
  return os.str();
}

std::string render_constancy_text(const ConstancyReport& report) {
  std::ostringstream os;
  os << "# multibarrier constancy report format=" << kFormatVersion << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%5s %8s %8s %7s %13s\n", "n", "c_from", "c_to", "len",
                "max_rel_dev");
  os << line;
  for (const auto& w : report.windows) {
    std::snprintf(line, sizeof line, "%5d %8s %8s %7zu %13.4e\n", w.n,
                  to_string(report.sorted_c[w.c_begin]).c_str(),
                  to_string(report.sorted_c[w.c_end]).c_str(), w.c_end - w.c_begin + 1,
                  w.max_deviation);
    os << line;
  }
  return os.str();
}

int run_simulate(const SimulateOptions& opts) {
  RunManifest manifest;
  manifest.command = "simulate";
  manifest.started = iso8601_utc_now();
  const PipelineParams& p = opts.physics;
  manifest.config.emplace_back("n", std::to_string(opts.n));
  manifest.config.emplace_back("c", to_string(opts.c));
  manifest.config.emplace_back("snapshot_stride", std::to_string(opts.snapshot_stride));
  append_physics_config(manifest.config, p);

  const PotentialSpec spec{opts.n, opts.c.value(), p.total_length, p.height};
  const BarrierLayout layout = build_layout(spec);  // throws on invalid input
  const ComplexField initial = analytic_packet(p.packet, p.grid, 0.0);

  Emitter em{opts.out_dir, {}};
  EvolutionConfig cfg;
  cfg.scheme = p.scheme;
  cfg.t_final = p.t_final;
  cfg.mass = p.packet.mass;
  cfg.snapshot_stride = opts.snapshot_stride;

  SnapshotSink sink;
  if (opts.snapshot_stride > 0) {
    sink = [&em](int step, const ComplexField& field) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%06d.dat", step);
      em.emit(name, field_file_text(field));
    };
  }

  const ScanKey key{opts.n, opts.c};
  try {
    const ComplexField final_field = evolve(initial, layout, p.height, cfg, sink);

    CorrelationRecord rec;
    rec.n_barriers = opts.n;
    rec.c = opts.c;
    rec.tridiag = correlate(density(initial), density(final_field));
    rec.correlation = correlation_value(rec.tridiag);
    rec.bw_over_dx = layout.barrier_width / p.grid.dx;
    rec.fingerprint = fingerprint_for(p, opts.n, opts.c);

    em.emit("initial_density.dat", field_file_text(initial));
    em.emit("final_density.dat", field_file_text(final_field));
    std::ostringstream rcsv;
    rcsv << "# multibarrier correlation records format=" << kFormatVersion << "\n";
    rcsv << "n,c,C,alpha1,alpha2,alpha3,beta1,beta2,breakdown,fingerprint\n";
    rcsv << render_record_csv_row(rec) << "\n";
    em.emit("record.csv", rcsv.str());
    manifest.tasks.emplace_back(task_id(key), "ok");
  } catch (const std::runtime_error& ex) {
    manifest.tasks.emplace_back(task_id(key), std::string("failed: ") + ex.what());
    manifest.files = em.files;
    manifest.finished = iso8601_utc_now();
    write_manifest(opts.out_dir, manifest);
    return kExitTaskFailure;
  }

  manifest.files = em.files;
  manifest.finished = iso8601_utc_now();
  write_manifest(opts.out_dir, manifest);
  return kExitOk;
}

namespace {

CommandResult scan_like_command(const ScanCommandOptions& opts, const char* command) {
  RunManifest manifest;
  manifest.command = command;
  manifest.started = iso8601_utc_now();
  const ScanConfig& config = opts.config;

  std::ostringstream nlist;
  for (std::size_t i = 0; i < config.n_values.size(); ++i)
    nlist << (i ? " " : "") << config.n_values[i];
  std::ostringstream clist;
  for (std::size_t i = 0; i < config.c_values.size(); ++i)
    clist << (i ? " " : "") << to_string(config.c_values[i]);
  std::ostringstream plist;
  for (std::size_t i = 0; i < config.candidate_periods.size(); ++i)
    plist << (i ? " " : "") << config.candidate_periods[i];
  manifest.config.emplace_back("n_values", nlist.str());
  manifest.config.emplace_back("c_values", clist.str());
  manifest.config.emplace_back("periods", plist.str());
  manifest.config.emplace_back("tolerance", g17(config.tolerance));
  manifest.config.emplace_back("workers", std::to_string(config.workers));
  manifest.config.emplace_back("cache_dir", config.cache_dir.string());
  append_physics_config(manifest.config, config.physics);

  CommandResult result;
  if (opts.dry_run) {
    for (int n : config.n_values)
      for (const Rational& c : config.c_values)
        manifest.tasks.emplace_back(task_id(ScanKey{n, c}), "planned");
    manifest.finished = iso8601_utc_now();
    write_manifest(opts.out_dir, manifest);
    result.exit_code = kExitOk;
    return result;
  }

  result.scan = run_scan(config);
  for (const TaskStatus& st : result.scan.statuses) {
    std::string status = st.ok ? (st.from_cache ? "ok (cached)" : "ok") : "failed: " + st.error;
    manifest.tasks.emplace_back(task_id(st.key), status);
  }

  const PeriodReport periods =
      detect_periods(result.scan.records, config, make_record_source(config));
  const ConstancyReport constancy = detect_c_constancy(result.scan.records, config);

  Emitter em{opts.out_dir, {}};
  em.emit("records.csv", render_records_csv(result.scan.records, periods));
  em.emit("correlations_table.csv", render_table_csv(result.scan.records, config));
  em.emit("period_report.csv", render_period_csv(periods));
  em.emit("period_report.txt", render_period_text(periods));
  em.emit("constancy_report.csv", render_constancy_csv(constancy));
  em.emit("constancy_report.txt", render_constancy_text(constancy));

  manifest.files = em.files;
  manifest.finished = iso8601_utc_now();
  write_manifest(opts.out_dir, manifest);
  result.exit_code = result.scan.failed > 0 ? kExitTaskFailure : kExitOk;
  return result;
}

}  // namespace

CommandResult run_scan_command(const ScanCommandOptions& opts) {
  return scan_like_command(opts, "scan");
}

CommandResult run_report_command(const ScanCommandOptions& opts) {
  ScanCommandOptions cache_only = opts;
  cache_only.config.cache_only = true;
  return scan_like_command(cache_only, "report");
}

int run_levels_command(const LevelsOptions& opts) {
  RunManifest manifest;
  manifest.command = "levels";
  manifest.started = iso8601_utc_now();
  manifest.config.emplace_back("n", std::to_string(opts.n));
  manifest.config.emplace_back("c", to_string(opts.c));
  manifest.config.emplace_back("length", g17(opts.total_length));
  manifest.config.emplace_back("height", g17(opts.height));
  manifest.config.emplace_back("e_min", g17(opts.e_min));
  manifest.config.emplace_back("e_max", g17(opts.e_max));
  const double radius = opts.radius > 0.0 ? opts.radius : 10.0 * opts.total_length;
  manifest.config.emplace_back("radius", g17(radius));
  manifest.config.emplace_back("bins", std::to_string(opts.bins));
  manifest.config.emplace_back("samples_per_period", std::to_string(opts.samples_per_period));

  // height 0 means free propagation; the layout needs a positive nominal
  // height only to pass validation, the scan itself uses opts.height
  const PotentialSpec spec{opts.n, opts.c.value(), opts.total_length,
                           opts.height > 0.0 ? opts.height : 1.0};
  const BarrierLayout layout = build_layout(spec);

  Emitter em{opts.out_dir, {}};
  try {
    const LevelSet levels = find_levels(layout, opts.height, opts.e_min, opts.e_max, radius,
                                        opts.samples_per_period);
    em.emit("levels.dat", levels_file_text(levels));
    const SpacingHistogram hist = spacing_statistics(levels, opts.bins);
    em.emit("spacing_histogram.dat", histogram_file_text(hist));
    manifest.tasks.emplace_back("levels", "ok");
  } catch (const std::runtime_error& ex) {
    manifest.tasks.emplace_back("levels", std::string("failed: ") + ex.what());
    manifest.files = em.files;
    manifest.finished = iso8601_utc_now();
    write_manifest(opts.out_dir, manifest);
    return kExitTaskFailure;
  }

  manifest.files = em.files;
  manifest.finished = iso8601_utc_now();
  write_manifest(opts.out_dir, manifest);
  return kExitOk;
}

}  // namespace mbp
