#include "multibarrier/period_scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "multibarrier/fingerprint.hpp"
#include "multibarrier/geometry.hpp"
#include "multibarrier/task_pool.hpp"

namespace mbp {

bool operator<(const ScanKey& a, const ScanKey& b) {
  if (a.n != b.n) return a.n < b.n;
  return a.c < b.c;
}

std::vector<Rational> default_c_values() {
  return {Rational{4, 1}, Rational{7, 3}, Rational{3, 2},
          Rational{1, 1}, Rational{2, 3}, Rational{1, 4}};
}

namespace {

std::string canonical_params(const PipelineParams& p, int n, const Rational& c) {
  std::ostringstream os;
  os << "multibarrier-record-v1"
     << "|scheme=" << to_string(p.scheme)
     << "|n=" << n
     << "|c=" << to_string(c)
     << "|L=" << g17(p.total_length)
     << "|V=" << g17(p.height)
     << "|t_final=" << g17(p.t_final)
     << "|x_min=" << g17(p.grid.x_min)
     << "|x_max=" << g17(p.grid.x_max)
     << "|dx=" << g17(p.grid.dx)
     << "|dt=" << g17(p.grid.dt)
     << "|x0=" << g17(p.packet.x0)
     << "|p0=" << g17(p.packet.p0)
     << "|w0=" << g17(p.packet.w0)
     << "|mass=" << g17(p.packet.mass);
  return os.str();
}

}  // namespace

std::string fingerprint_for(const PipelineParams& params, int n, const Rational& c) {
  return hex64(fnv1a64(canonical_params(params, n, c)));
}

CorrelationRecord compute_record(const PipelineParams& params, int n, const Rational& c) {
  const PotentialSpec spec{n, c.value(), params.total_length, params.height};
  const BarrierLayout layout = build_layout(spec);
  const ComplexField initial = analytic_packet(params.packet, params.grid, 0.0);
  EvolutionConfig cfg;
  cfg.scheme = params.scheme;
  cfg.t_final = params.t_final;
  cfg.mass = params.packet.mass;
  const ComplexField final_field = evolve(initial, layout, params.height, cfg);

  CorrelationRecord rec;
  rec.n_barriers = n;
  rec.c = c;
  rec.tridiag = correlate(density(initial), density(final_field));
  rec.correlation = correlation_value(rec.tridiag);
  rec.bw_over_dx = layout.barrier_width / params.grid.dx;
  rec.fingerprint = fingerprint_for(params, n, c);
  return rec;
}

std::string record_to_text(const PipelineParams& params, const CorrelationRecord& rec) {
  std::ostringstream os;
  os << "# multibarrier correlation record format=1\n";
  os << "fingerprint=" << rec.fingerprint << "\n";
  os << "scheme=" << to_string(params.scheme) << "\n";
  os << "n=" << rec.n_barriers << "\n";
  os << "c=" << to_string(rec.c) << "\n";
  os << "L=" << g17(params.total_length) << "\n";
  os << "V=" << g17(params.height) << "\n";
  os << "t_final=" << g17(params.t_final) << "\n";
  os << "x_min=" << g17(params.grid.x_min) << "\n";
  os << "x_max=" << g17(params.grid.x_max) << "\n";
  os << "dx=" << g17(params.grid.dx) << "\n";
  os << "dt=" << g17(params.grid.dt) << "\n";
  os << "x0=" << g17(params.packet.x0) << "\n";
  os << "p0=" << g17(params.packet.p0) << "\n";
  os << "w0=" << g17(params.packet.w0) << "\n";
  os << "mass=" << g17(params.packet.mass) << "\n";
  os << "bw_over_dx=" << g17(rec.bw_over_dx) << "\n";
  os << "alpha=" << g17(rec.tridiag.alpha[0]) << "," << g17(rec.tridiag.alpha[1]) << ","
     << g17(rec.tridiag.alpha[2]) << "\n";
  os << "beta=" << g17(rec.tridiag.beta[0]) << "," << g17(rec.tridiag.beta[1]) << "\n";
  os << "breakdown=" << (rec.tridiag.breakdown ? 1 : 0) << "\n";
  return os.str();
}

namespace {

bool split_csv3(const std::string& s, double out[], int want) {
  std::istringstream is(s);
  std::string item;
  int got = 0;
  while (std::getline(is, item, ',')) {
    if (got >= want) return false;
    try {
      std::size_t pos = 0;
      out[got] = std::stod(item, &pos);
      if (pos != item.size()) return false;
    } catch (...) {
      return false;
    }
    ++got;
  }
  return got == want;
}

}  // namespace

std::optional<ParsedRecord> parse_record_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "# multibarrier correlation record format=1")
    return std::nullopt;

  std::map<std::string, std::string> kv;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) return std::nullopt;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }

  auto need = [&](const char* key) -> const std::string& {
    static const std::string missing;
    auto it = kv.find(key);
    return it == kv.end() ? missing : it->second;
  };
  auto need_d = [&](const char* key, double& out) {
    const std::string& s = need(key);
    if (s.empty()) return false;
    try {
      std::size_t pos = 0;
      out = std::stod(s, &pos);
      return pos == s.size();
    } catch (...) {
      return false;
    }
  };

  ParsedRecord pr;
  double xmin, xmax, dx, dt;
  if (!need_d("L", pr.params.total_length) || !need_d("V", pr.params.height) ||
      !need_d("t_final", pr.params.t_final) || !need_d("x_min", xmin) ||
      !need_d("x_max", xmax) || !need_d("dx", dx) || !need_d("dt", dt) ||
      !need_d("x0", pr.params.packet.x0) || !need_d("p0", pr.params.packet.p0) ||
      !need_d("w0", pr.params.packet.w0) || !need_d("mass", pr.params.packet.mass) ||
      !need_d("bw_over_dx", pr.record.bw_over_dx))
    return std::nullopt;
  try {
    pr.params.grid = make_grid(xmin, xmax, dx, dt);
  } catch (...) {
    return std::nullopt;
  }

  auto scheme = parse_scheme(need("scheme"));
  if (!scheme) return std::nullopt;
  pr.params.scheme = *scheme;

  try {
    pr.record.n_barriers = std::stoi(need("n"));
  } catch (...) {
    return std::nullopt;
  }
  auto c = parse_rational(need("c"));
  if (!c) return std::nullopt;
  pr.record.c = *c;

  double alpha[3], beta[2];
  if (!split_csv3(need("alpha"), alpha, 3) || !split_csv3(need("beta"), beta, 2))
    return std::nullopt;
  for (int i = 0; i < 3; ++i) pr.record.tridiag.alpha[i] = alpha[i];
  for (int i = 0; i < 2; ++i) pr.record.tridiag.beta[i] = beta[i];
  const std::string& bd = need("breakdown");
  if (bd != "0" && bd != "1") return std::nullopt;
  pr.record.tridiag.breakdown = (bd == "1");
  pr.record.correlation = pr.record.tridiag.alpha[2];
  pr.record.fingerprint = need("fingerprint");
  if (pr.record.fingerprint.size() != 16) return std::nullopt;
  return pr;
}

RecordCache::RecordCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::optional<CorrelationRecord> RecordCache::load(const PipelineParams& params,
                                                   const std::string& fingerprint) const {
  if (!enabled()) return std::nullopt;
  const auto path = dir_ / (fingerprint + ".rec");
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;

  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto parsed = parse_record_text(buf.str());

  // corruption check: the payload must re-fingerprint to its own name
  bool good = parsed.has_value() && parsed->record.fingerprint == fingerprint &&
              fingerprint_for(parsed->params, parsed->record.n_barriers,
                              parsed->record.c) == fingerprint &&
              fingerprint_for(params, parsed->record.n_barriers, parsed->record.c) ==
                  fingerprint;
  if (!good) {
    std::fprintf(stderr, "warning: cache entry %s is corrupt, quarantined and recomputing\n",
                 path.string().c_str());
    std::filesystem::rename(path, dir_ / (fingerprint + ".rec.bad"), ec);
    return std::nullopt;
  }
  return parsed->record;
}

void RecordCache::store(const PipelineParams& params, const CorrelationRecord& rec) const {
  if (!enabled()) return;
  static std::atomic<unsigned> counter{0};
  const auto tmp = dir_ / (rec.fingerprint + ".rec.tmp" + std::to_string(counter.fetch_add(1)));
  {
    std::ofstream out(tmp);
    out << record_to_text(params, rec);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, dir_ / (rec.fingerprint + ".rec"), ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

namespace {

struct TaskOutcome {
  std::optional<CorrelationRecord> record;
  bool from_cache = false;
  std::string error;
};

TaskOutcome run_task(const PipelineParams& params, int n, const Rational& c,
                     const RecordCache& cache, bool cache_only) {
  TaskOutcome out;
  try {
    const std::string fp = fingerprint_for(params, n, c);
    if (auto cached = cache.load(params, fp)) {
      out.record = std::move(cached);
      out.from_cache = true;
      return out;
    }
    if (cache_only) {
      out.error = "cache miss (cache-only mode)";
      return out;
    }
    out.record = compute_record(params, n, c);
    cache.store(params, *out.record);
  } catch (const std::exception& ex) {
    out.record.reset();
    out.error = ex.what();
  }
  return out;
}

}  // namespace

ScanResult run_scan(const ScanConfig& config) {
  std::vector<ScanKey> keys;
  keys.reserve(config.n_values.size() * config.c_values.size());
  for (int n : config.n_values)
    for (const Rational& c : config.c_values) keys.push_back(ScanKey{n, c});

  std::vector<TaskOutcome> outcomes(keys.size());
  const RecordCache cache(config.cache_dir);
  parallel_for(config.workers, keys.size(), [&](std::size_t i) {
    outcomes[i] = run_task(config.physics, keys[i].n, keys[i].c, cache, config.cache_only);
  });

  ScanResult result;
  std::vector<std::size_t> order(keys.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  for (std::size_t i : order) {
    TaskStatus st;
    st.key = keys[i];
    st.ok = outcomes[i].record.has_value();
    st.from_cache = outcomes[i].from_cache;
    st.error = outcomes[i].error;
    if (st.ok) {
      result.records.emplace(keys[i], std::move(*outcomes[i].record));
      if (st.from_cache)
        ++result.cache_hits;
      else
        ++result.computed;
    } else {
      ++result.failed;
    }
    result.statuses.push_back(std::move(st));
  }
  return result;
}

namespace {

bool entries_equal(const Tridiag3& a, const Tridiag3& b, double tol) {
  auto close = [tol](double x, double y) {
    return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y)) + 1e-12;
  };
  for (int i = 0; i < 3; ++i)
    if (!close(a.alpha[i], b.alpha[i])) return false;
  for (int i = 0; i < 2; ++i)
    if (!close(a.beta[i], b.beta[i])) return false;
  return true;
}

double max_relative_deviation(const Tridiag3& a, const Tridiag3& b) {
  double worst = 0.0;
  auto dev = [](double x, double y) {
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale > 0.0 ? std::abs(x - y) / scale : 0.0;
  };
  for (int i = 0; i < 3; ++i) worst = std::max(worst, dev(a.alpha[i], b.alpha[i]));
  for (int i = 0; i < 2; ++i) worst = std::max(worst, dev(a.beta[i], b.beta[i]));
  return worst;
}

}  // namespace

bool matrices_equal(const Tridiag3& m1, const Tridiag3& m2, double tol,
                    bool normalized_mode) {
  if (m1.breakdown != m2.breakdown) return false;
  const Tridiag3 a = normalized_mode ? normalized(m1) : m1;
  const Tridiag3 b = normalized_mode ? normalized(m2) : m2;
  return entries_equal(a, b, tol);
}

const char* to_string(PeriodFlag f) {
  switch (f) {
    case PeriodFlag::periodic: return "periodic";
    case PeriodFlag::nonperiodic: return "nonperiodic";
    case PeriodFlag::indeterminate: return "indeterminate";
  }
  return "unknown";
}

RecordSource make_record_source(const ScanConfig& config) {
  auto cache = std::make_shared<RecordCache>(config.cache_dir);
  const PipelineParams params = config.physics;
  const bool cache_only = config.cache_only;
  return [cache, params, cache_only](int n, const Rational& c)
             -> std::optional<CorrelationRecord> {
    TaskOutcome out = run_task(params, n, c, *cache, cache_only);
    return out.record;
  };
}

PeriodReport detect_periods(const std::map<ScanKey, CorrelationRecord>& records,
                            const ScanConfig& config, const RecordSource& partners) {
  PeriodReport report;
  for (const auto& [key, rec] : records) {
    for (int period : config.candidate_periods) {
      PeriodEntry entry;
      entry.key = key;
      entry.period = period;
      entry.partner_n = key.n + period;
      entry.correlation = rec.correlation;

      std::optional<CorrelationRecord> partner;
      auto it = records.find(ScanKey{entry.partner_n, key.c});
      if (it != records.end())
        partner = it->second;
      else if (partners)
        partner = partners(entry.partner_n, key.c);

      if (!partner) {
        entry.flag = PeriodFlag::indeterminate;
      } else {
        entry.partner_correlation = partner->correlation;
        const Tridiag3& a = rec.tridiag;
        const Tridiag3& b = partner->tridiag;
        entry.max_deviation = config.normalized_compare
                                  ? max_relative_deviation(normalized(a), normalized(b))
                                  : max_relative_deviation(a, b);
        entry.flag = matrices_equal(a, b, config.tolerance, config.normalized_compare)
                         ? PeriodFlag::periodic
                         : PeriodFlag::nonperiodic;
      }
      report.entries.push_back(entry);
    }
  }

  // small period implies the large one whenever both were decided
  std::map<std::pair<ScanKey, int>, PeriodFlag> flags;
  for (const auto& e : report.entries) flags[{e.key, e.period}] = e.flag;
  for (const auto& e : report.entries) {
    if (e.period != 28 || e.flag != PeriodFlag::periodic) continue;
    auto it = flags.find({e.key, 140});
    if (it != flags.end() && it->second == PeriodFlag::nonperiodic)
      ++report.implication_violations;
  }
  return report;
}

ConstancyReport detect_c_constancy(const std::map<ScanKey, CorrelationRecord>& records,
                                   const ScanConfig& config) {
  ConstancyReport report;
  report.sorted_c = config.c_values;
  std::sort(report.sorted_c.begin(), report.sorted_c.end());

  std::vector<int> ns;
  for (const auto& [key, rec] : records)
    if (ns.empty() || ns.back() != key.n) ns.push_back(key.n);

  for (int n : ns) {
    std::vector<const CorrelationRecord*> row(report.sorted_c.size(), nullptr);
    for (std::size_t i = 0; i < report.sorted_c.size(); ++i) {
      auto it = records.find(ScanKey{n, report.sorted_c[i]});
      if (it != records.end()) row[i] = &it->second;
    }

    ConstancyWindow best{n, 0, 0, 0.0};
    std::size_t len_best = 0;
    std::size_t i = 0;
    while (i < row.size()) {
      if (!row[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      double worst = 0.0;
      while (j + 1 < row.size() && row[j + 1] &&
             matrices_equal(row[j]->tridiag, row[j + 1]->tridiag, config.tolerance,
                            config.normalized_compare)) {
        const Tridiag3 a = config.normalized_compare ? normalized(row[j]->tridiag)
                                                     : row[j]->tridiag;
        const Tridiag3 b = config.normalized_compare ? normalized(row[j + 1]->tridiag)
                                                     : row[j + 1]->tridiag;
        worst = std::max(worst, max_relative_deviation(a, b));
        ++j;
      }
      const std::size_t len = j - i + 1;
      if (len > len_best) {
        len_best = len;
        best = ConstancyWindow{n, i, j, worst};
      }
      i = j + 1;
    }
    if (len_best > 0) report.windows.push_back(best);
  }
  return report;
}

}  // namespace mbp
