#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multibarrier/correlation.hpp"
#include "multibarrier/evolution.hpp"
#include "multibarrier/rational.hpp"

namespace mbp {

/// Everything the geometry -> packet -> evolution -> correlation pipeline
/// needs besides (N, c). Part of the record fingerprint.
struct PipelineParams {
  GridSpec grid = default_grid();
  PacketParams packet{};
  double total_length = 20.0;
  double height = 2.0;
  double t_final = 6.0;
  Scheme scheme = Scheme::crank_nicolson;
};

struct CorrelationRecord {
  int n_barriers = 0;
  Rational c{1, 1};
  Tridiag3 tridiag{};
  double correlation = 0.0;  // == tridiag.alpha[2]
  double bw_over_dx = 0.0;   // barrier_width / dx, recorded for interpretability
  std::string fingerprint;
};

std::string fingerprint_for(const PipelineParams& params, int n, const Rational& c);

/// Runs the full pipeline for one (N, c). Pure and deterministic.
CorrelationRecord compute_record(const PipelineParams& params, int n, const Rational& c);

/// Self-describing cache file: header with format version and the full
/// parameter set, then the record payload. All doubles as %.17g so reloads
/// are bit-exact.
std::string record_to_text(const PipelineParams& params, const CorrelationRecord& rec);
struct ParsedRecord {
  PipelineParams params;
  CorrelationRecord record;
};
std::optional<ParsedRecord> parse_record_text(const std::string& text);

/// One file per fingerprint under dir. Writes go to a temporary then an
/// atomic rename; corrupted files (parse failure or fingerprint mismatch)
/// are quarantined with a .bad suffix and recomputed.
class RecordCache {
 public:
  RecordCache() = default;  // disabled
  explicit RecordCache(std::filesystem::path dir);

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& dir() const { return dir_; }

  std::optional<CorrelationRecord> load(const PipelineParams& params,
                                        const std::string& fingerprint) const;
  void store(const PipelineParams& params, const CorrelationRecord& rec) const;

 private:
  std::filesystem::path dir_;
};

struct ScanKey {
  int n = 0;
  Rational c{1, 1};
  friend bool operator==(const ScanKey&, const ScanKey&) = default;
};
bool operator<(const ScanKey& a, const ScanKey& b);

/// Paper column order: 4, 7/3, 3/2, 1, 2/3, 1/4.
std::vector<Rational> default_c_values();

struct ScanConfig {
  std::vector<int> n_values;
  std::vector<Rational> c_values = default_c_values();
  std::vector<int> candidate_periods{140, 28};
  double tolerance = 1e-6;        // relative, per matrix entry
  bool normalized_compare = true; // compare scale-free matrices
  PipelineParams physics{};
  int workers = 1;
  std::filesystem::path cache_dir;  // empty = no cache
  bool cache_only = false;          // report mode: never compute
};

struct TaskStatus {
  ScanKey key;
  bool ok = false;
  bool from_cache = false;
  std::string error;
};

struct ScanResult {
  std::map<ScanKey, CorrelationRecord> records;
  std::vector<TaskStatus> statuses;  // sorted by key
  int computed = 0;
  int cache_hits = 0;
  int failed = 0;
};

/// Parallel map over (N, c) tasks; records keyed then sorted, so the result
/// is independent of worker count and completion order.
ScanResult run_scan(const ScanConfig& config);

/// Entrywise comparison, relative tol with a 1e-12 absolute floor. Breakdown
/// records compare equal only to records with the same breakdown pattern.
bool matrices_equal(const Tridiag3& m1, const Tridiag3& m2, double tol,
                    bool normalized_mode = true);

enum class PeriodFlag { periodic, nonperiodic, indeterminate };
const char* to_string(PeriodFlag f);

struct PeriodEntry {
  ScanKey key;
  int period = 0;
  int partner_n = 0;
  PeriodFlag flag = PeriodFlag::indeterminate;
  double max_deviation = 0.0;  // max entrywise relative deviation
  double correlation = 0.0;
  double partner_correlation = 0.0;
};

struct PeriodReport {
  std::vector<PeriodEntry> entries;   // one per (key, candidate period)
  int implication_violations = 0;     // periodic with 28 but not with 140
};

/// Supplies the (N+P, c) partner record, computing it on demand; nullopt on
/// failure (the entry becomes indeterminate).
using RecordSource = std::function<std::optional<CorrelationRecord>(int n, const Rational& c)>;

/// Cache-backed RecordSource over the config's pipeline parameters.
RecordSource make_record_source(const ScanConfig& config);

PeriodReport detect_periods(const std::map<ScanKey, CorrelationRecord>& records,
                            const ScanConfig& config, const RecordSource& partners);

struct ConstancyWindow {
  int n = 0;
  std::size_t c_begin = 0;  // indices into ConstancyReport::sorted_c, inclusive
  std::size_t c_end = 0;
  double max_deviation = 0.0;  // largest adjacent deviation inside the window
};

struct ConstancyReport {
  std::vector<Rational> sorted_c;        // ascending
  std::vector<ConstancyWindow> windows;  // longest maximal window per N
};

/// Longest contiguous run of c values (per N) whose normalized matrices agree
/// within the config tolerance; ties resolved toward smaller c.
ConstancyReport detect_c_constancy(const std::map<ScanKey, CorrelationRecord>& records,
                                   const ScanConfig& config);

}  // namespace mbp
