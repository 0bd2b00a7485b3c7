#include "stablefields/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include <json.hpp>

#include "stablefields/special.hpp"

namespace stablefields {

namespace {

// ---------------------------------------------------------------- config ----

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>,
                                 std::vector<std::string>>;

struct RawEntry {
  ConfigValue value;
  int line = 0;
};

using RawConfig = std::map<std::string, std::map<std::string, RawEntry>>;

[[noreturn]] void config_fail(const std::string& file, int line,
                              const std::string& msg) {
  throw ConfigError(file + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

ConfigValue parse_scalar(const std::string& file, int line, const std::string& tok) {
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
    return tok.substr(1, tok.size() - 2);
  if (tok == "true") return true;
  if (tok == "false") return false;
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    config_fail(file, line, "cannot parse value '" + tok + "'");
  return v;
}

ConfigValue parse_value(const std::string& file, int line, const std::string& raw) {
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') config_fail(file, line, "unterminated array");
    std::string body = raw.substr(1, raw.size() - 2);
    std::vector<double> nums;
    std::vector<std::string> strs;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      ConfigValue v = parse_scalar(file, line, tok);
      if (std::holds_alternative<double>(v))
        nums.push_back(std::get<double>(v));
      else if (std::holds_alternative<std::string>(v))
        strs.push_back(std::get<std::string>(v));
      else
        config_fail(file, line, "array elements must be numbers or strings");
    }
    if (!strs.empty() && !nums.empty())
      config_fail(file, line, "mixed array types");
    if (!strs.empty()) return strs;
    return nums;
  }
  return parse_scalar(file, line, raw);
}

RawConfig parse_raw(std::istream& in, const std::string& file) {
  RawConfig raw;
  std::string section = "";
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside quotes
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        config_fail(file, lineno, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) config_fail(file, lineno, "empty section name");
      raw[section];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      config_fail(file, lineno, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) config_fail(file, lineno, "empty key");
    if (val.empty()) config_fail(file, lineno, "missing value for '" + key + "'");
    if (raw[section].count(key))
      config_fail(file, lineno, "duplicate key '" + key + "'");
    raw[section][key] = {parse_value(file, lineno, val), lineno};
  }
  return raw;
}

struct ConfigReader {
  const RawConfig& raw;
  const std::string& file;

  const RawEntry* find(const std::string& sec, const std::string& key) const {
    auto s = raw.find(sec);
    if (s == raw.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  template <class T>
  T require(const std::string& sec, const std::string& key) const {
    const RawEntry* e = find(sec, key);
    if (!e)
      throw ConfigError(file + ":1: missing required key [" + sec + "] " + key);
    if (!std::holds_alternative<T>(e->value))
      config_fail(file, e->line, "wrong type for '" + key + "'");
    return std::get<T>(e->value);
  }

  template <class T>
  T get_or(const std::string& sec, const std::string& key, T def) const {
    const RawEntry* e = find(sec, key);
    if (!e) return def;
    if (!std::holds_alternative<T>(e->value))
      config_fail(file, e->line, "wrong type for '" + key + "'");
    return std::get<T>(e->value);
  }

  int line_of(const std::string& sec, const std::string& key) const {
    const RawEntry* e = find(sec, key);
    return e ? e->line : 1;
  }
};

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& filename) {
  RawConfig raw = parse_raw(in, filename);
  ConfigReader r{raw, filename};
  ExperimentConfig c;

  std::string kind = r.require<std::string>("field", "kind");
  if (kind == "gaussian")
    c.kind = FieldKind::gaussian;
  else if (kind == "subgaussian")
    c.kind = FieldKind::subgaussian;
  else if (kind == "harmonisable")
    c.kind = FieldKind::harmonisable;
  else if (kind == "concatenated")
    c.kind = FieldKind::concatenated;
  else
    config_fail(filename, r.line_of("field", "kind"),
                "unknown field kind '" + kind + "'");

  auto sides = r.require<std::vector<double>>("domain", "sides");
  auto resolution = r.require<std::vector<double>>("domain", "resolution");
  if (sides.empty() || sides.size() != resolution.size())
    config_fail(filename, r.line_of("domain", "sides"),
                "sides and resolution must be non-empty and match");
  c.rectangle.sides = sides;
  for (double v : resolution) {
    if (v < 8 || v != std::floor(v))
      config_fail(filename, r.line_of("domain", "resolution"),
                  "resolution entries must be integers >= 8");
    c.resolution.push_back(static_cast<int>(v));
  }
  const int N = c.rectangle.dim();

  if (c.kind != FieldKind::gaussian) {
    c.alpha = r.require<double>("field", "alpha");
    if (!(c.alpha > 0.0 && c.alpha < 2.0))
      config_fail(filename, r.line_of("field", "alpha"), "alpha must be in (0,2)");
  }
  c.sigma = r.get_or<double>("field", "sigma", 1.0);
  if (c.kind == FieldKind::gaussian || c.kind == FieldKind::subgaussian) {
    c.lambda2 = r.require<double>("field", "lambda2");
    if (!(c.lambda2 > 0.0))
      config_fail(filename, r.line_of("field", "lambda2"), "lambda2 must be positive");
  } else {
    std::string mk = r.require<std::string>("field", "measure");
    double mass = r.get_or<double>("field", "mass", 1.0);
    if (mk == "ball") {
      c.measure = SpectralMeasure::ball(N, r.require<double>("field", "radius"), mass);
    } else if (mk == "box") {
      auto hw = r.require<std::vector<double>>("field", "half_widths");
      if (static_cast<int>(hw.size()) != N)
        config_fail(filename, r.line_of("field", "half_widths"),
                    "half_widths must match the domain dimension");
      c.measure = SpectralMeasure::box(hw, mass);
    } else {
      config_fail(filename, r.line_of("field", "measure"),
                  "unknown measure kind '" + mk + "'");
    }
    c.truncation =
        static_cast<int>(r.get_or<double>("field", "truncation", 1000.0));
    if (c.truncation < 1)
      config_fail(filename, r.line_of("field", "truncation"),
                  "truncation must be >= 1");
    c.n_prime = static_cast<int>(r.get_or<double>("field", "n_prime", 1.0));
    if (c.kind == FieldKind::concatenated && (c.n_prime < 1 || c.n_prime > N))
      config_fail(filename, r.line_of("field", "n_prime"),
                  "n_prime must be in [1, dimension]");
  }

  c.levels = r.require<std::vector<double>>("experiment", "levels");
  if (c.levels.empty())
    config_fail(filename, r.line_of("experiment", "levels"), "levels is empty");
  double reps = r.require<double>("experiment", "replications");
  if (reps < 1 || reps != std::floor(reps))
    config_fail(filename, r.line_of("experiment", "replications"),
                "replications must be a positive integer");
  c.replications = static_cast<int>(reps);
  c.master_seed = static_cast<std::uint64_t>(
      r.get_or<double>("experiment", "master_seed", 0.0));
  c.threads = static_cast<int>(r.get_or<double>("experiment", "threads", 1.0));
  if (c.threads < 1)
    config_fail(filename, r.line_of("experiment", "threads"),
                "threads must be >= 1");

  auto meas = r.get_or<std::vector<std::string>>("experiment", "measurements",
                                                 {"ec"});
  c.measure_ec = c.measure_lk = c.measure_upcrossings = false;
  for (const auto& m : meas) {
    if (m == "ec")
      c.measure_ec = true;
    else if (m == "lk")
      c.measure_lk = true;
    else if (m == "upcrossings")
      c.measure_upcrossings = true;
    else
      config_fail(filename, r.line_of("experiment", "measurements"),
                  "unknown measurement '" + m + "'");
  }
  c.measure_ec = true;  // EC always measured; it is the comparison target
  if (c.measure_upcrossings && N != 1)
    config_fail(filename, r.line_of("experiment", "measurements"),
                "upcrossings measurement requires a 1-D domain");

  auto targets = r.get_or<std::vector<std::string>>(
      "experiment", "targets", {"exact", "asymptotic", "conditional"});
  c.target_exact = c.target_asymptotic = c.target_conditional = false;
  for (const auto& t : targets) {
    if (t == "exact")
      c.target_exact = true;
    else if (t == "asymptotic")
      c.target_asymptotic = true;
    else if (t == "conditional")
      c.target_conditional = true;
    else
      config_fail(filename, r.line_of("experiment", "targets"),
                  "unknown target '" + t + "'");
  }
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ":1: cannot open config file");
  return parse_config(in, path);
}

// ------------------------------------------------------------ experiment ----

namespace {

GaussianFieldSpec gaussian_spec_of(const ExperimentConfig& c) {
  double l = c.sigma / std::sqrt(c.lambda2);
  return GaussianFieldSpec::squared_exponential(c.rectangle.dim(),
                                                c.sigma * c.sigma, l);
}

struct ReplicateResult {
  bool failed = false;
  std::vector<double> ec;           // per level
  std::vector<double> cond_pred;    // per level, conditional identity
  std::vector<std::vector<double>> lk;  // per level
  std::vector<double> upcrossings;  // per level
};

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  const int R = config.replications;
  const int L = static_cast<int>(config.levels.size());
  const int N = config.rectangle.dim();

  GaussianFieldSpec gspec;
  if (config.kind == FieldKind::gaussian || config.kind == FieldKind::subgaussian)
    gspec = gaussian_spec_of(config);

  const bool series_kind = config.kind == FieldKind::harmonisable ||
                           config.kind == FieldKind::concatenated;
  const bool want_cond = series_kind && config.target_conditional;

  std::vector<ReplicateResult> results(R);
  auto worker = [&](int first) {
    for (int i = first; i < R; i += config.threads) {
      ReplicateResult& rr = results[i];
      try {
        RngStream stream(config.master_seed, static_cast<std::uint64_t>(i));
        FieldGrid grid;
        switch (config.kind) {
          case FieldKind::gaussian:
            grid = simulate_gaussian(gspec, config.rectangle, config.resolution,
                                     stream);
            break;
          case FieldKind::subgaussian:
            grid = simulate_subgaussian(gspec, config.alpha, config.rectangle,
                                        config.resolution, stream);
            break;
          case FieldKind::harmonisable:
            grid = simulate_harmonisable(config.measure, config.alpha,
                                         config.truncation, config.rectangle,
                                         config.resolution, stream);
            break;
          case FieldKind::concatenated:
            grid = simulate_concatenated(config.measure, config.alpha,
                                         config.n_prime, config.truncation,
                                         config.rectangle, config.resolution,
                                         stream);
            break;
        }
        ConditionedGaussianSpec cspec;
        if (want_cond) cspec = conditioned_spec(grid.provenance, N);
        for (int li = 0; li < L; ++li) {
          double u = config.levels[li];
          CubicalSet set = threshold(grid, u);
          rr.ec.push_back(static_cast<double>(euler_characteristic(set)));
          if (want_cond)
            rr.cond_pred.push_back(
                conditional_gaussian_mean_ec(cspec, config.rectangle, u));
          if (config.measure_lk)
            rr.lk.push_back(lk_estimates(set, config.rectangle, u).lk_estimates);
          if (config.measure_upcrossings)
            rr.upcrossings.push_back(
                static_cast<double>(upcrossings_1d(grid, u).count));
        }
      } catch (const std::exception&) {
        rr.failed = true;
      }
    }
  };
  if (config.threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < config.threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  ExperimentReport report;
  report.config = config;
  for (const auto& rr : results)
    if (rr.failed) ++report.failed_replicates;
  if (report.failed_replicates * 100 > R)
    throw std::runtime_error("run_experiment: more than 1% of replicates failed");

  // asymptotic prediction (level-independent constant)
  if (config.target_asymptotic) {
    switch (config.kind) {
      case FieldKind::gaussian:
        break;  // exact formula only
      case FieldKind::subgaussian:
        report.asymptote = subgaussian_mean_ec_asymptote(
            subgaussian_constants(config.alpha, config.sigma, N),
            config.rectangle, gspec.spectral_moments);
        report.asymptote->alpha = config.alpha;
        break;
      case FieldKind::harmonisable:
        report.asymptote = harmonisable_mean_ec_asymptote(
            measure_moments(config.measure), config.alpha, config.rectangle);
        break;
      case FieldKind::concatenated: {
        RngStream cstream(config.master_seed, 1ULL << 40);
        report.asymptote = concatenated_mean_ec_asymptote(
            concatenated_constants(config.alpha, config.n_prime, config.measure,
                                   N, cstream),
            config.measure, config.rectangle);
        break;
      }
    }
  }

  for (int li = 0; li < L; ++li) {
    ReportRow row;
    row.u = config.levels[li];
    double sum = 0.0, sumsq = 0.0, csum = 0.0, usum = 0.0;
    std::vector<double> lksum(N + 1, 0.0);
    long long n = 0;
    for (const auto& rr : results) {  // ordered reduction by replicate index
      if (rr.failed) continue;
      double v = rr.ec[li];
      sum += v;
      sumsq += v * v;
      if (want_cond) csum += rr.cond_pred[li];
      if (config.measure_lk)
        for (int j = 0; j <= N; ++j) lksum[j] += rr.lk[li][j];
      if (config.measure_upcrossings) usum += rr.upcrossings[li];
      ++n;
    }
    row.n = n;
    row.mean_ec = sum / n;
    double var = std::max(0.0, sumsq / n - row.mean_ec * row.mean_ec);
    row.stderr_ec = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    if (config.measure_lk) {
      row.mean_lk.resize(N + 1);
      for (int j = 0; j <= N; ++j) row.mean_lk[j] = lksum[j] / n;
    }
    if (config.measure_upcrossings) row.mean_upcrossings = usum / n;

    if (config.target_exact) {
      if (config.kind == FieldKind::gaussian)
        row.pred_exact = gaussian_mean_ec(gspec, config.rectangle, row.u);
      else if (config.kind == FieldKind::subgaussian)
        row.pred_exact = subgaussian_mean_ec_exact(gspec, config.alpha,
                                                   config.rectangle, row.u);
    }
    if (want_cond && !row.pred_exact) row.pred_exact = csum / n;
    if (report.asymptote && row.u > 0.0)
      row.pred_asymp =
          report.asymptote->constant * std::pow(row.u, -config.alpha);
    double pref = row.pred_exact ? *row.pred_exact
                                 : (row.pred_asymp ? *row.pred_asymp : 0.0);
    if (pref != 0.0) {
      row.ratio = row.mean_ec / pref;
      row.ratio_se = row.stderr_ec / std::abs(pref);
    }
    report.rows.push_back(row);
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

ConvergenceTable convergence_table(const ExperimentReport& report, double alpha) {
  ConvergenceTable table;
  if (!report.asymptote) return table;  // structured absence
  double c = report.asymptote->constant;
  for (const auto& row : report.rows) {
    if (row.u <= 0.0) continue;
    ConvergenceRow r;
    r.u = row.u;
    r.ratio = std::pow(row.u, alpha) * row.mean_ec / c;
    r.se = std::pow(row.u, alpha) * row.stderr_ec / c;
    table.rows.push_back(r);
  }
  const int n = static_cast<int>(table.rows.size());
  for (int b = 0; b < n; ++b) {
    double lo = table.rows[b].ratio, hi = lo;
    for (int e = b + 1; e <= n; ++e) {
      if (e - b > table.plateau_end - table.plateau_begin) {
        table.plateau_begin = b;
        table.plateau_end = e;
      }
      if (e == n) break;
      lo = std::min(lo, table.rows[e].ratio);
      hi = std::max(hi, table.rows[e].ratio);
      if (lo <= 0.0 || hi / lo >= 1.10) break;
    }
  }
  return table;
}

// --------------------------------------------------------------- reports ----

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::gaussian: return "gaussian";
    case FieldKind::subgaussian: return "subgaussian";
    case FieldKind::harmonisable: return "harmonisable";
    case FieldKind::concatenated: return "concatenated";
  }
  return "?";
}

}  // namespace

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << "u,mean_ec,stderr,n,pred_exact,pred_asymp,ratio,ratio_se\n";
  for (const auto& r : report.rows) {
    out << fmt(r.u) << ',' << fmt(r.mean_ec) << ',' << fmt(r.stderr_ec) << ','
        << r.n << ',';
    if (r.pred_exact) out << fmt(*r.pred_exact);
    out << ',';
    if (r.pred_asymp) out << fmt(*r.pred_asymp);
    out << ',';
    if (r.ratio) out << fmt(*r.ratio);
    out << ',';
    if (r.ratio_se) out << fmt(*r.ratio_se);
    out << '\n';
  }
}

void write_report_json(const ExperimentReport& report, std::ostream& out) {
  nlohmann::json j;
  j["schema_version"] = 1;
  const ExperimentConfig& c = report.config;
  nlohmann::json cfg;
  cfg["kind"] = kind_name(c.kind);
  cfg["alpha"] = c.alpha;
  cfg["sides"] = c.rectangle.sides;
  cfg["resolution"] = c.resolution;
  cfg["levels"] = c.levels;
  cfg["replications"] = c.replications;
  cfg["master_seed"] = c.master_seed;
  cfg["truncation"] = c.truncation;
  cfg["n_prime"] = c.n_prime;
  j["config"] = cfg;
  j["failed_replicates"] = report.failed_replicates;
  if (report.asymptote) {
    nlohmann::json a;
    a["constant"] = report.asymptote->constant;
    a["constant_se"] = report.asymptote->constant_se;
    a["breakdown"] = report.asymptote->breakdown;
    j["asymptote"] = a;
    if (c.kind == FieldKind::harmonisable || c.kind == FieldKind::concatenated) {
      nlohmann::json ts;
      ts["k"] = c.truncation;
      ts["tail_fraction_k"] = truncation_tail_fraction(c.alpha, c.truncation);
      ts["tail_fraction_2k"] = truncation_tail_fraction(c.alpha, 2 * c.truncation);
      j["truncation_sensitivity"] = ts;
    }
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row;
    row["u"] = r.u;
    row["mean_ec"] = r.mean_ec;
    row["stderr"] = r.stderr_ec;
    row["n"] = r.n;
    if (r.pred_exact) row["pred_exact"] = *r.pred_exact;
    if (r.pred_asymp) row["pred_asymp"] = *r.pred_asymp;
    if (r.ratio) row["ratio"] = *r.ratio;
    if (r.ratio_se) row["ratio_se"] = *r.ratio_se;
    if (!r.mean_lk.empty()) row["mean_lk"] = r.mean_lk;
    if (r.mean_upcrossings) row["mean_upcrossings"] = *r.mean_upcrossings;
    rows.push_back(row);
  }
  j["rows"] = rows;
  out << j.dump(2) << "\n";
}

}  // namespace stablefields
