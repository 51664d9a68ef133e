#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "multibarrier/period_scan.hpp"
#include "multibarrier/spectrum.hpp"

namespace mbp {

inline constexpr int kFormatVersion = 1;

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitTaskFailure = 1;
inline constexpr int kExitInvalidInput = 2;

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;  // resolved key/value
  std::vector<std::pair<std::string, std::string>> tasks;   // task id -> status
  std::vector<std::pair<std::string, std::uintmax_t>> files;  // name -> bytes
  std::string started;
  std::string finished;
};

/// Written last: its presence marks a complete run. Plain text with a
/// #-prefixed header like every other output.
void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest);

std::string iso8601_utc_now();

// ---- columnar emitters (all text, # header naming columns + format version)

void write_field_file(const std::filesystem::path& path, const ComplexField& field);
void write_levels_file(const std::filesystem::path& path, const LevelSet& levels);
void write_histogram_file(const std::filesystem::path& path, const SpacingHistogram& hist);

std::string render_record_csv_row(const CorrelationRecord& rec);
std::string render_records_csv(const std::map<ScanKey, CorrelationRecord>& records,
                               const PeriodReport& periods);
std::string render_table_csv(const std::map<ScanKey, CorrelationRecord>& records,
                             const ScanConfig& config);
std::string render_period_csv(const PeriodReport& report);
std::string render_period_text(const PeriodReport& report);
std::string render_constancy_csv(const ConstancyReport& report);
std::string render_constancy_text(const ConstancyReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// ---- subcommands

struct SimulateOptions {
  PipelineParams physics{};
  int n = 10;
  Rational c{1, 1};
  int snapshot_stride = 0;
  std::filesystem::path out_dir = "out";
};

struct ScanCommandOptions {
  ScanConfig config{};
  std::filesystem::path out_dir = "out";
  bool dry_run = false;
};

struct LevelsOptions {
  int n = 10;
  Rational c{1, 1};
  double total_length = 20.0;
  double height = 2.0;
  double e_min = 1e-6;
  double e_max = 2.0;
  double radius = 0.0;  // 0 -> 10 * total_length
  int bins = 24;
  int samples_per_period = 8;
  std::filesystem::path out_dir = "out";
};

struct CommandResult {
  int exit_code = kExitOk;
  ScanResult scan;  // filled by scan/report
};

/// One (N, c) evolution: initial/final density files, optional snapshots,
/// the record CSV. Throws std::invalid_argument on bad parameters.
int run_simulate(const SimulateOptions& opts);

/// run_scan + detect_periods + detect_c_constancy + all report files.
CommandResult run_scan_command(const ScanCommandOptions& opts);

/// Re-render from cache only; missing records become failed tasks.
CommandResult run_report_command(const ScanCommandOptions& opts);

int run_levels_command(const LevelsOptions& opts);

}  // namespace mbp
