#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stablefields/excursion.hpp"
#include "stablefields/harness.hpp"
#include "stablefields/theory.hpp"

using namespace stablefields;

namespace {

std::vector<double> parse_csv_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("SFIELDS_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

FieldGrid simulate_from_config(const ExperimentConfig& c, std::uint64_t stream) {
  RngStream rng(c.master_seed, stream);
  switch (c.kind) {
    case FieldKind::gaussian: {
      double l = c.sigma / std::sqrt(c.lambda2);
      auto spec = GaussianFieldSpec::squared_exponential(c.rectangle.dim(),
                                                         c.sigma * c.sigma, l);
      return simulate_gaussian(spec, c.rectangle, c.resolution, rng);
    }
    case FieldKind::subgaussian: {
      double l = c.sigma / std::sqrt(c.lambda2);
      auto spec = GaussianFieldSpec::squared_exponential(c.rectangle.dim(),
                                                         c.sigma * c.sigma, l);
      return simulate_subgaussian(spec, c.alpha, c.rectangle, c.resolution, rng);
    }
    case FieldKind::harmonisable:
      return simulate_harmonisable(c.measure, c.alpha, c.truncation, c.rectangle,
                                   c.resolution, rng);
    case FieldKind::concatenated:
      return simulate_concatenated(c.measure, c.alpha, c.n_prime, c.truncation,
                                   c.rectangle, c.resolution, rng);
  }
  throw std::runtime_error("unreachable field kind");
}

void apply_overrides(ExperimentConfig& c, bool have_seed, std::uint64_t seed,
                     int threads, const std::string& levels) {
  if (have_seed) c.master_seed = seed;
  c.threads = threads;
  if (!levels.empty()) c.levels = parse_csv_list(levels);
}

int cmd_simulate(const std::string& config_path, const std::string& out_prefix,
                 bool have_seed, std::uint64_t seed, int count) {
  ExperimentConfig c = parse_config_file(config_path);
  if (have_seed) c.master_seed = seed;
  for (int i = 0; i < count; ++i) {
    FieldGrid grid = simulate_from_config(c, static_cast<std::uint64_t>(i));
    std::string path =
        count == 1 ? out_prefix : out_prefix + "_" + std::to_string(i);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    dump_grid(grid, out);
    std::cerr << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_measure(const std::string& in_path, const std::string& levels_arg,
                const std::string& out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open grid file " + in_path);
  FieldGrid grid = load_grid(in);
  nlohmann::json records = nlohmann::json::array();
  for (double u : parse_csv_list(levels_arg)) {
    CubicalSet set = threshold(grid, u);
    ExcursionGeometry g = lk_estimates(set, grid.rectangle, u);
    nlohmann::json rec;
    rec["level"] = g.level;
    rec["euler"] = g.euler;
    rec["lk_estimates"] = g.lk_estimates;
    rec["cell_counts"] = g.cell_counts;
    records.push_back(rec);
  }
  std::string text = records.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    out << text;
  }
  return 0;
}

int cmd_theory(const std::string& model, double sigma, double lambda2,
               double alpha, const std::string& t_arg, double u, double radius,
               double mass, int n_prime, std::uint64_t seed) {
  Rectangle T;
  T.sides = parse_csv_list(t_arg);
  const int N = T.dim();
  nlohmann::json out;
  out["model"] = model;
  out["u"] = u;
  if (model == "gaussian") {
    auto spec = GaussianFieldSpec::squared_exponential(
        N, sigma * sigma, sigma / std::sqrt(lambda2));
    out["value"] = gaussian_mean_ec(spec, T, u);
  } else if (model == "subgaussian") {
    auto spec = GaussianFieldSpec::squared_exponential(
        N, sigma * sigma, sigma / std::sqrt(lambda2));
    out["value"] = subgaussian_mean_ec_exact(spec, alpha, T, u);
    auto pred = subgaussian_mean_ec_asymptote(
        subgaussian_constants(alpha, sigma, N), T, spec.spectral_moments);
    out["asymptote"] = {{"constant", pred.constant},
                        {"breakdown", pred.breakdown}};
  } else if (model == "harmonisable") {
    SpectralMeasure mu = SpectralMeasure::ball(N, radius, mass);
    auto pred = harmonisable_mean_ec_asymptote(measure_moments(mu), alpha, T);
    out["asymptote"] = {{"constant", pred.constant},
                        {"breakdown", pred.breakdown}};
    if (u > 0.0) out["value"] = pred.constant * std::pow(u, -alpha);
  } else if (model == "concatenated") {
    SpectralMeasure mu = SpectralMeasure::ball(N, radius, mass);
    RngStream stream(seed, 1ULL << 40);
    auto cc = concatenated_constants(alpha, n_prime, mu, N, stream);
    auto pred = concatenated_mean_ec_asymptote(cc, mu, T);
    out["asymptote"] = {{"constant", pred.constant},
                        {"constant_se", pred.constant_se},
                        {"breakdown", pred.breakdown}};
    if (u > 0.0) out["value"] = pred.constant * std::pow(u, -alpha);
  } else {
    throw ConfigError("theory:1: unknown model '" + model + "'");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_base,
                   bool have_seed, std::uint64_t seed, int threads,
                   const std::string& levels) {
  ExperimentConfig c = parse_config_file(config_path);
  apply_overrides(c, have_seed, seed, threads, levels);
  ExperimentReport report = run_experiment(c);
  {
    std::ofstream csv(out_base + ".csv");
    if (!csv) throw std::runtime_error("cannot open " + out_base + ".csv");
    write_report_csv(report, csv);
  }
  {
    std::ofstream json(out_base + ".json");
    write_report_json(report, json);
  }
  std::cerr << "wrote " << out_base << ".csv and " << out_base << ".json ("
            << report.wall_seconds << " s)\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& csvs, const std::string& out_path) {
  std::ostringstream longcsv;
  longcsv << "source,u,series,value\n";
  std::ostringstream summary;
  for (const auto& path : csvs) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "u,mean_ec,stderr,n,pred_exact,pred_asymp,ratio,ratio_se")
      throw ConfigError(path + ":1: unexpected CSV header");
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string tok;
      while (std::getline(ss, tok, ',')) f.push_back(tok);
      f.resize(8);
      double u = std::stod(f[0]), mean = std::stod(f[1]), se = std::stod(f[2]);
      longcsv << path << ',' << f[0] << ",mean_ec," << f[1] << "\n";
      for (int i : {4, 5})
        if (!f[i].empty())
          longcsv << path << ',' << f[0] << ','
                  << (i == 4 ? "pred_exact" : "pred_asymp") << ',' << f[i] << "\n";
      if (!f[4].empty()) {
        double pred = std::stod(f[4]);
        bool pass = std::abs(mean - pred) <= 3.0 * se;
        summary << path << " u=" << u << ": mean " << mean << " vs exact "
                << pred << " -> " << (pass ? "pass" : "FAIL") << " (3 s.e.)\n";
      }
    }
  }
  if (out_path.empty()) {
    std::cout << longcsv.str();
  } else {
    std::ofstream out(out_path);
    out << longcsv.str();
  }
  std::cerr << summary.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable random field excursion-set toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path = "grid", levels, in_path, model = "gaussian";
  std::string t_arg = "1";
  std::uint64_t seed = 0;
  bool have_seed = false;
  int threads = default_threads(), count = 1, n_prime = 1;
  double sigma = 1.0, lambda2 = 1.0, alpha = 1.5, u = 0.0, radius = 1.0,
         mass = 1.0;
  std::vector<std::string> csvs;

  auto* sim = app.add_subcommand("simulate", "simulate field grids");
  sim->add_option("--config", config_path, "experiment config file")->required();
  sim->add_option("--out", out_path, "output path or prefix");
  sim->add_option("--seed", seed, "master seed override")
      ->each([&](const std::string&) { have_seed = true; });
  sim->add_option("--count", count, "number of grids (replicate streams)");

  auto* mea = app.add_subcommand("measure", "measure excursion geometry");
  mea->add_option("--in", in_path, "grid file")->required();
  mea->add_option("--levels", levels, "comma-separated levels")->required();
  mea->add_option("--out", out_path, "output JSON path (default stdout)");

  auto* thy = app.add_subcommand("theory", "evaluate predictions");
  thy->add_option("--model", model, "gaussian|subgaussian|harmonisable|concatenated");
  thy->add_option("--sigma", sigma, "base standard deviation");
  thy->add_option("--lambda2", lambda2, "second spectral moment");
  thy->add_option("--alpha", alpha, "stability index");
  thy->add_option("--T", t_arg, "rectangle sides, comma-separated");
  thy->add_option("--u", u, "level");
  thy->add_option("--radius", radius, "ball measure radius");
  thy->add_option("--mass", mass, "measure total mass");
  thy->add_option("--n-prime", n_prime, "concatenation count");
  thy->add_option("--seed", seed, "seed for MC constants");

  auto* exp = app.add_subcommand("experiment", "run a replicated experiment");
  exp->add_option("--config", config_path, "experiment config file")->required();
  exp->add_option("--out", out_path, "output base name (.csv/.json appended)");
  exp->add_option("--seed", seed, "master seed override")
      ->each([&](const std::string&) { have_seed = true; });
  exp->add_option("--threads", threads, "worker thread count");
  exp->add_option("--levels", levels, "levels override, comma-separated");

  auto* rep = app.add_subcommand("report", "reshape report CSVs for plotting");
  rep->add_option("csvs", csvs, "input report CSVs")->required();
  rep->add_option("--out", out_path, "long-format CSV path (default stdout)");

  try {
    app.parse(argc, argv);
    if (sim->parsed())
      return cmd_simulate(config_path, out_path == "grid" ? "grid" : out_path,
                          have_seed, seed, count);
    if (mea->parsed())
      return cmd_measure(in_path, levels, out_path == "grid" ? "" : out_path);
    if (thy->parsed())
      return cmd_theory(model, sigma, lambda2, alpha, t_arg, u, radius, mass,
                        n_prime, seed);
    if (exp->parsed())
      return cmd_experiment(config_path, out_path == "grid" ? "report" : out_path,
                            have_seed, seed, threads, levels);
    if (rep->parsed())
      return cmd_report(csvs, out_path == "grid" ? "" : out_path);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
