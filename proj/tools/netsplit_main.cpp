// netsplit: split / cluster / infer / simulate / gapcurves / analyze
//
// Exit codes: 0 success, 1 usage error, 2 data or domain error, 3 numerical
// failure. All randomness flows from --seed; every run echoes its resolved
// configuration as config.resolved.json next to its outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "netsplit/netsplit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netsplit;

namespace {

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  for (const auto& f : netsplit::detail::split_fields(text)) {
    double v = 0.0;
    if (!netsplit::detail::parse_double(f, v))
      throw std::invalid_argument(std::string(flag) + ": bad number '" + f + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(std::string(flag) + ": empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  for (double v : parse_list(text, flag)) {
    if (v != std::floor(v) || v < 1)
      throw std::invalid_argument(std::string(flag) + ": expected positive integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

/// Injects values from a `--config FILE` JSON document for every long flag
/// that is absent from the command line. Flags always win over the file.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  if (config_path.empty()) return args;
  std::ifstream in(config_path);
  if (!in) throw data_error("cannot open config file '" + config_path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw data_error("config file '" + config_path + "': " + e.what());
  }
  if (!doc.is_object()) throw data_error("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else {
      args.push_back(flag);
      args.push_back(value.dump());
    }
  }
  return args;
}

fs::path output_dir_of(const std::string& out_path) {
  const fs::path p = fs::path(out_path).parent_path();
  return p.empty() ? fs::path(".") : p;
}

void write_resolved_config(const fs::path& dir, const json& j) {
  fs::create_directories(dir);
  std::ofstream out(dir / "config.resolved.json", std::ios::binary);
  if (!out) throw data_error("cannot write config.resolved.json in " + dir.string());
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- split ---

struct SplitOpts {
  std::string mode, in, kind = "directed-self", format = "auto";
  std::string out_train, out_test, out_toggles, config;
  double epsilon = sim::kNaN, gamma = sim::kNaN, tau2 = sim::kNaN;
  std::uint64_t seed = 1;
  int n = 0;
};

int run_split(const SplitOpts& o) {
  fs::create_directories(output_dir_of(o.out_train));
  fs::create_directories(output_dir_of(o.out_test));
  const EdgeModel model = parse_model(o.mode);
  const NetworkKind kind = parse_kind(o.kind);
  SplitParams p;
  p.mode = split_mode_for(model);
  p.seed = o.seed;
  if (model == EdgeModel::bernoulli) {
    if (!(o.gamma > 0.0 && o.gamma < 0.5))
      throw std::invalid_argument("--gamma must be in the open interval (0,0.5)");
    p.gamma = o.gamma;
  } else {
    if (!(o.epsilon > 0.0 && o.epsilon < 1.0))
      throw std::invalid_argument("--epsilon must be in the open interval (0,1)");
    p.epsilon = o.epsilon;
    if (model == EdgeModel::gaussian) {
      if (!(o.tau2 > 0.0)) throw std::invalid_argument("--tau2 must be > 0");
      p.tau2 = o.tau2;
    }
  }
  const Network a =
      read_network(o.in, parse_format(o.format), o.n, kind, domain_for(model));
  const SplitPair pair = split_network(a, p);
  write_network(pair.train, o.out_train);
  write_network(pair.test, o.out_test);
  if (!o.out_toggles.empty() && pair.toggles) write_network(*pair.toggles, o.out_toggles);

  json cfg{{"mode", o.mode},       {"in", o.in},
           {"kind", o.kind},       {"format", o.format},
           {"n", a.n()},           {"seed", o.seed},
           {"out-train", o.out_train}, {"out-test", o.out_test}};
  if (model == EdgeModel::bernoulli) cfg["gamma"] = o.gamma;
  else cfg["epsilon"] = o.epsilon;
  if (model == EdgeModel::gaussian) cfg["tau2"] = o.tau2;
  if (!o.out_toggles.empty()) cfg["out-toggles"] = o.out_toggles;
  write_resolved_config(output_dir_of(o.out_train), cfg);
  return 0;
}

// -------------------------------------------------------------- cluster ---

struct ClusterOpts {
  std::string in, kind = "directed-self", format = "auto", domain = "real";
  std::string out, config;
  int k = 2, restarts = 20, n = 0;
  std::uint64_t seed = 1;
  bool normalize_rows = false;
};

int run_cluster(const ClusterOpts& o) {
  fs::create_directories(output_dir_of(o.out));
  const NetworkKind kind = parse_kind(o.kind);
  const Network a =
      read_network(o.in, parse_format(o.format), o.n, kind, parse_domain(o.domain));
  if (o.k < 1 || o.k > a.n()) throw std::invalid_argument("--k must be in [1, n]");
  const auto z = spectral_clustering(a, o.k, o.restarts, o.seed, o.normalize_rows);
  write_labels(z, o.out);
  write_resolved_config(output_dir_of(o.out),
                        json{{"in", o.in},
                             {"kind", o.kind},
                             {"format", o.format},
                             {"domain", o.domain},
                             {"n", a.n()},
                             {"k", o.k},
                             {"restarts", o.restarts},
                             {"seed", o.seed},
                             {"normalize-rows", o.normalize_rows},
                             {"out", o.out}});
  return 0;
}

// ---------------------------------------------------------------- infer ---

struct InferOpts {
  std::string model, train, test, labels, contrast = "cell:1,1";
  std::string kind = "directed-self", format = "auto", out, config;
  double epsilon = sim::kNaN, gamma = sim::kNaN, tau2 = sim::kNaN, alpha = 0.10;
  int n = 0;
};

int run_infer(const InferOpts& o) {
  fs::create_directories(output_dir_of(o.out));
  const EdgeModel model = parse_model(o.model);
  const NetworkKind kind = parse_kind(o.kind);
  if (!(o.alpha > 0.0 && o.alpha < 1.0))
    throw std::invalid_argument("--alpha must be in the open interval (0,1)");
  const Network test =
      read_network(o.test, parse_format(o.format), o.n, kind, domain_for(model));
  const CommunityAssignment z = read_labels(o.labels);
  if (static_cast<int>(z.labels.size()) != test.n())
    throw data_error("labels file has " + std::to_string(z.labels.size()) +
                     " entries but the network has " + std::to_string(test.n()) + " nodes");
  const Contrast u =
      sim::ContrastSpec::parse(o.contrast).resolve(CellIndexer{z.K, kind.undirected()});

  InferenceResult r;
  switch (model) {
    case EdgeModel::gaussian:
      if (!(o.epsilon > 0.0 && o.epsilon < 1.0))
        throw std::invalid_argument("--epsilon must be in the open interval (0,1)");
      if (!(o.tau2 > 0.0)) throw std::invalid_argument("--tau2 must be > 0");
      r = infer_gaussian(test, z, u, o.epsilon, o.tau2, o.alpha);
      break;
    case EdgeModel::poisson:
      if (!(o.epsilon > 0.0 && o.epsilon < 1.0))
        throw std::invalid_argument("--epsilon must be in the open interval (0,1)");
      r = infer_poisson(test, z, u, o.epsilon, o.alpha);
      break;
    case EdgeModel::bernoulli: {
      if (!(o.gamma > 0.0 && o.gamma < 0.5))
        throw std::invalid_argument("--gamma must be in the open interval (0,0.5)");
      if (o.train.empty())
        throw std::invalid_argument("--train is required for the bernoulli model");
      const Network train =
          read_network(o.train, parse_format(o.format), test.n(), kind, EdgeDomain::binary);
      r = infer_bernoulli(test, train, z, u, o.gamma, o.alpha);
      break;
    }
  }
  write_results_json(r, o.out);

  json cfg{{"model", o.model},   {"test", o.test},     {"labels", o.labels},
           {"contrast", o.contrast}, {"kind", o.kind}, {"format", o.format},
           {"n", test.n()},      {"alpha", o.alpha},   {"out", o.out}};
  if (model == EdgeModel::bernoulli) {
    cfg["gamma"] = o.gamma;
    cfg["train"] = o.train;
  } else {
    cfg["epsilon"] = o.epsilon;
  }
  if (model == EdgeModel::gaussian) cfg["tau2"] = o.tau2;
  write_resolved_config(output_dir_of(o.out), cfg);
  return 0;
}

// ------------------------------------------------------------- simulate ---

struct SimulateOpts {
  std::string preset, out_dir, model, ks, epsilons, gammas, rho2s, contrast = "cell:1,1";
  std::string config;
  int n = 0, replicates = 0, restarts = 20, threads = 0;
  double alpha = 0.10, uniform_lo = sim::kNaN, uniform_hi = sim::kNaN;
  std::uint64_t seed = 1;
  bool svg = false;
};

void emit_coverage_svg(const sim::CoverageReport& rows, const fs::path& dir) {
  // coverage against the fitted K, one series per model/target
  std::vector<svg::Series> series;
  auto find = [&](const std::string& label) -> svg::Series& {
    for (auto& s : series)
      if (s.label == label) return s;
    series.push_back({label, {}, {}});
    return series.back();
  };
  for (const auto& r : rows) {
    auto& s = find(to_string(r.model) + " " + to_string(r.target));
    s.x.push_back(r.k_fit);
    s.y.push_back(r.coverage);
    if (!std::isnan(r.naive_coverage)) {
      auto& ns = find(to_string(r.model) + " naive");
      ns.x.push_back(r.k_fit);
      ns.y.push_back(r.naive_coverage);
    }
  }
  svg::write_line_chart((dir / "coverage.svg").string(), "empirical coverage", "K",
                        "coverage", series);
}

void emit_tradeoff_svg(const sim::CoverageReport& rows, const fs::path& dir) {
  std::vector<svg::Series> width, ari;
  auto find = [](std::vector<svg::Series>& v, const std::string& label) -> svg::Series& {
    for (auto& s : v)
      if (s.label == label) return s;
    v.push_back({label, {}, {}});
    return v.back();
  };
  for (const auto& r : rows) {
    const std::string label = "rho2=" + netsplit::detail::format_double(r.rho2);
    auto& w = find(width, label);
    w.x.push_back(r.split_param);
    w.y.push_back(r.mean_width);
    auto& s = find(ari, label);
    s.x.push_back(r.split_param);
    s.y.push_back(r.mean_ari);
  }
  svg::write_line_chart((dir / "width.svg").string(), "mean 90% CI width",
                        "epsilon or gamma", "width", width);
  svg::write_line_chart((dir / "ari.svg").string(), "mean adjusted Rand index",
                        "epsilon or gamma", "ARI", ari);
}

int run_simulate(const SimulateOpts& o) {
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);

  sim::Scenario base;
  base.alpha = o.alpha;
  base.base_seed = o.seed;
  base.restarts = o.restarts;
  base.threads = o.threads;
  base.contrast = sim::ContrastSpec::parse(o.contrast);

  json cfg{{"preset", o.preset}, {"seed", o.seed},       {"alpha", o.alpha},
           {"restarts", o.restarts}, {"svg", o.svg},     {"contrast", o.contrast},
           {"out-dir", o.out_dir}};

  const auto ks = o.ks.empty() ? std::vector<int>{2, 5, 10} : parse_int_list(o.ks, "--ks");
  const int reps_default_1000 = o.replicates > 0 ? o.replicates : 1000;

  if (o.preset == "fig2") {
    const int n = o.n > 0 ? o.n : 100;
    const int reps = o.replicates > 0 ? o.replicates : 200;
    const auto gammas = o.gammas.empty()
                            ? std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4, 0.49}
                            : parse_list(o.gammas, "--gammas");
    std::vector<sim::GapRow> rows;
    for (auto setting :
         {sim::GapSetting::constant, sim::GapSetting::two_block, sim::GapSetting::uniform}) {
      auto part = sim::gap_curves(setting, n, gammas, reps, o.seed, o.restarts, o.threads);
      rows.insert(rows.end(), part.begin(), part.end());
      if (o.svg) {
        std::vector<svg::Series> series{{"|V11-B11|", {}, {}}, {"|Phi11-B11|", {}, {}}};
        for (const auto& r : part) {
          series[0].x.push_back(r.gamma);
          series[0].y.push_back(r.mean_abs_v_gap);
          series[1].x.push_back(r.gamma);
          series[1].y.push_back(r.mean_abs_phi_gap);
        }
        svg::write_line_chart((dir / ("gaps_" + to_string(setting) + ".svg")).string(),
                              "cell (1,1) gaps, " + to_string(setting), "gamma", "mean |gap|",
                              series);
      }
    }
    sim::write_gap_csv(rows, (dir / "report.csv").string());
    cfg["n"] = n;
    cfg["replicates"] = reps;
    cfg["gammas"] = gammas;
    write_resolved_config(dir, cfg);
    return 0;
  }

  if (o.preset == "tableS1" || o.preset == "tableS2" || o.preset == "fig6") {
    const bool bern = o.preset != "tableS1";
    std::vector<EdgeModel> models;
    if (!o.model.empty())
      models = {parse_model(o.model)};
    else if (o.preset == "tableS1")
      models = {EdgeModel::gaussian, EdgeModel::poisson};
    else
      models = {EdgeModel::bernoulli};

    base.n = o.n > 0 ? o.n : 200;
    base.replicates = reps_default_1000;
    base.compare_naive = true;
    if (o.preset == "fig6") {
      base.k_true = 0;  // heterogeneous
      base.uniform_lo = std::isnan(o.uniform_lo) ? 0.0 : o.uniform_lo;
      base.uniform_hi = std::isnan(o.uniform_hi) ? 1.0 : o.uniform_hi;
    } else {
      base.k_true = 5;
      base.rho1 = bern ? 0.75 : 30.0;
      base.rho2 = bern ? 0.50 : 27.0;
    }
    sim::CoverageReport rows;
    for (EdgeModel model : models) {
      sim::Scenario sc = base;
      sc.model = model;
      if (model == EdgeModel::gaussian) sc.tau2 = 25.0;
      const auto params =
          model == EdgeModel::bernoulli
              ? (o.gammas.empty() ? std::vector<double>{0.25} : parse_list(o.gammas, "--gammas"))
              : (o.epsilons.empty() ? std::vector<double>{0.5}
                                    : parse_list(o.epsilons, "--epsilons"));
      for (double p : params)
        for (int k : ks) {
          sc.split_param = p;
          sc.k_fit = k;
          rows.push_back(sim::coverage_point(sc));
        }
    }
    sim::write_coverage_csv(rows, (dir / "report.csv").string());
    if (o.svg) emit_coverage_svg(rows, dir);
    cfg["n"] = base.n;
    cfg["replicates"] = base.replicates;
    cfg["ks"] = ks;
    if (!o.model.empty()) cfg["model"] = o.model;
    if (o.preset == "fig6") {
      cfg["uniform-lo"] = base.uniform_lo;
      cfg["uniform-hi"] = base.uniform_hi;
    }
    write_resolved_config(dir, cfg);
    return 0;
  }

  if (o.preset == "fig3" || o.preset == "fig4" || o.preset == "fig5") {
    const bool bern = o.preset == "fig5";
    base.model = o.preset == "fig3" ? EdgeModel::gaussian
                                    : (o.preset == "fig4" ? EdgeModel::poisson
                                                          : EdgeModel::bernoulli);
    if (!o.model.empty()) base.model = parse_model(o.model);
    base.n = o.n > 0 ? o.n : 200;
    base.k_true = 5;
    base.k_fit = ks.size() == 3 && o.ks.empty() ? 5 : ks.front();
    base.rho1 = bern ? 0.75 : 30.0;
    if (base.model == EdgeModel::gaussian) base.tau2 = 25.0;
    base.replicates = reps_default_1000;
    const auto params =
        bern ? (o.gammas.empty()
                    ? std::vector<double>{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45}
                    : parse_list(o.gammas, "--gammas"))
             : (o.epsilons.empty()
                    ? std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}
                    : parse_list(o.epsilons, "--epsilons"));
    const auto rho2s =
        o.rho2s.empty()
            ? (bern ? std::vector<double>{0.35, 0.40, 0.45, 0.50, 0.55}
                    : std::vector<double>{21, 23, 25, 27, 29})
            : parse_list(o.rho2s, "--rho2s");
    const auto rows = sim::tradeoff_grid(base, params, rho2s);
    sim::write_coverage_csv(rows, (dir / "report.csv").string());
    if (o.svg) emit_tradeoff_svg(rows, dir);
    cfg["n"] = base.n;
    cfg["replicates"] = base.replicates;
    cfg["k"] = base.k_fit;
    cfg["grid"] = params;
    cfg["rho2s"] = rho2s;
    write_resolved_config(dir, cfg);
    return 0;
  }

  throw std::invalid_argument(
      "--preset must be one of fig2|fig3|fig4|fig5|fig6|tableS1|tableS2");
}

// ------------------------------------------------------------ gapcurves ---

struct GapOpts {
  std::string setting, out, gammas = "0.05,0.1,0.2,0.3,0.4,0.49", config;
  int n = 100, reps = 200, restarts = 20, threads = 0;
  std::uint64_t seed = 1;
  bool svg = false;
};

int run_gapcurves(const GapOpts& o) {
  fs::create_directories(output_dir_of(o.out));
  const auto setting = sim::parse_gap_setting(o.setting);
  const auto gammas = parse_list(o.gammas, "--gammas");
  const auto rows =
      sim::gap_curves(setting, o.n, gammas, o.reps, o.seed, o.restarts, o.threads);
  sim::write_gap_csv(rows, o.out);
  if (o.svg) {
    std::vector<svg::Series> series{{"|V11-B11|", {}, {}}, {"|Phi11-B11|", {}, {}}};
    for (const auto& r : rows) {
      series[0].x.push_back(r.gamma);
      series[0].y.push_back(r.mean_abs_v_gap);
      series[1].x.push_back(r.gamma);
      series[1].y.push_back(r.mean_abs_phi_gap);
    }
    svg::write_line_chart((output_dir_of(o.out) / "gaps.svg").string(),
                          "cell (1,1) gaps, " + o.setting, "gamma", "mean |gap|", series);
  }
  write_resolved_config(output_dir_of(o.out), json{{"setting", o.setting},
                                                   {"n", o.n},
                                                   {"gammas", gammas},
                                                   {"reps", o.reps},
                                                   {"seed", o.seed},
                                                   {"restarts", o.restarts},
                                                   {"svg", o.svg},
                                                   {"out", o.out}});
  return 0;
}

// -------------------------------------------------------------- analyze ---

struct AnalyzeOpts {
  std::string in, out, format = "auto", contrast = "1,-2,1";
  std::string gammas = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45", config;
  int n = 0, repeats = 100, k = 2, restarts = 20, threads = 0;
  double alpha = 0.10;
  std::uint64_t seed = 1;
  bool svg = false;
};

int run_analyze(const AnalyzeOpts& o) {
  fs::create_directories(output_dir_of(o.out));
  const Network a = read_network(o.in, parse_format(o.format), o.n, kUndirectedNoLoops,
                                 EdgeDomain::binary);
  const auto gammas = parse_list(o.gammas, "--gammas");
  if (!(o.alpha > 0.0 && o.alpha < 1.0))
    throw std::invalid_argument("--alpha must be in the open interval (0,1)");
  const auto rows = sim::analyze_real(a, gammas, o.repeats, o.k,
                                      sim::ContrastSpec::parse(o.contrast), o.alpha, o.seed,
                                      o.restarts, o.threads);
  sim::write_analyze_csv(rows, o.out);
  if (o.svg) {
    std::vector<svg::Series> ari{{"ARI vs Zhat(A)", {}, {}}};
    std::vector<svg::Series> band{
        {"mean estimate", {}, {}}, {"mean lower", {}, {}}, {"mean upper", {}, {}}};
    for (const auto& r : rows) {
      ari[0].x.push_back(r.gamma);
      ari[0].y.push_back(r.mean_ari);
      band[0].x.push_back(r.gamma);
      band[0].y.push_back(r.mean_estimate);
      band[1].x.push_back(r.gamma);
      band[1].y.push_back(r.mean_lower);
      band[2].x.push_back(r.gamma);
      band[2].y.push_back(r.mean_upper);
    }
    svg::write_line_chart((output_dir_of(o.out) / "ari.svg").string(),
                          "train-network clustering agreement", "gamma", "ARI", ari);
    svg::write_line_chart((output_dir_of(o.out) / "interval.svg").string(),
                          "90% interval for the separation contrast", "gamma", "xi", band);
  }
  write_resolved_config(output_dir_of(o.out), json{{"in", o.in},
                                                   {"format", o.format},
                                                   {"n", a.n()},
                                                   {"gammas", gammas},
                                                   {"repeats", o.repeats},
                                                   {"k", o.k},
                                                   {"contrast", o.contrast},
                                                   {"alpha", o.alpha},
                                                   {"seed", o.seed},
                                                   {"restarts", o.restarts},
                                                   {"svg", o.svg},
                                                   {"out", o.out}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-network sample splitting and selective inference"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  SplitOpts so;
  auto* split_cmd = app.add_subcommand("split", "split a network into train/test");
  split_cmd->add_option("--mode", so.mode, "gaussian|poisson|bernoulli")->required();
  split_cmd->add_option("--epsilon", so.epsilon, "thinning fraction in (0,1)");
  split_cmd->add_option("--gamma", so.gamma, "fission toggle probability in (0,0.5)");
  split_cmd->add_option("--tau2", so.tau2, "known gaussian variance");
  split_cmd->add_option("--seed", so.seed, "RNG seed");
  split_cmd->add_option("--in", so.in, "input network")->required();
  split_cmd->add_option("--kind", so.kind, "network kind");
  split_cmd->add_option("--format", so.format, "auto|edgelist|csv");
  split_cmd->add_option("--n", so.n, "node count hint for edge lists");
  split_cmd->add_option("--out-train", so.out_train)->required();
  split_cmd->add_option("--out-test", so.out_test)->required();
  split_cmd->add_option("--out-toggles", so.out_toggles);
  split_cmd->add_option("--config", so.config, "JSON file with defaults for these flags");

  ClusterOpts co;
  auto* cluster_cmd = app.add_subcommand("cluster", "spectral clustering of a network");
  cluster_cmd->add_option("--in", co.in)->required();
  cluster_cmd->add_option("--kind", co.kind);
  cluster_cmd->add_option("--format", co.format);
  cluster_cmd->add_option("--domain", co.domain, "real|count|binary");
  cluster_cmd->add_option("--n", co.n);
  cluster_cmd->add_option("--k", co.k, "community count")->required();
  cluster_cmd->add_option("--restarts", co.restarts);
  cluster_cmd->add_option("--seed", co.seed);
  cluster_cmd->add_flag("--normalize-rows", co.normalize_rows);
  cluster_cmd->add_option("--out", co.out, "labels file, one label per line")->required();
  cluster_cmd->add_option("--config", co.config);

  InferOpts io;
  auto* infer_cmd = app.add_subcommand("infer", "selective confidence interval");
  infer_cmd->add_option("--model", io.model, "gaussian|poisson|bernoulli")->required();
  infer_cmd->add_option("--train", io.train, "train network (bernoulli only)");
  infer_cmd->add_option("--test", io.test)->required();
  infer_cmd->add_option("--labels", io.labels)->required();
  infer_cmd->add_option("--contrast", io.contrast, "cell:k,l or coefficient list");
  infer_cmd->add_option("--epsilon", io.epsilon);
  infer_cmd->add_option("--gamma", io.gamma);
  infer_cmd->add_option("--tau2", io.tau2);
  infer_cmd->add_option("--alpha", io.alpha);
  infer_cmd->add_option("--kind", io.kind);
  infer_cmd->add_option("--format", io.format);
  infer_cmd->add_option("--n", io.n);
  infer_cmd->add_option("--out", io.out, "result JSON")->required();
  infer_cmd->add_option("--config", io.config);

  SimulateOpts mo;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo study presets");
  sim_cmd->add_option("--preset", mo.preset, "fig2|fig3|fig4|fig5|fig6|tableS1|tableS2")
      ->required();
  sim_cmd->add_option("--out-dir", mo.out_dir)->required();
  sim_cmd->add_option("--n", mo.n);
  sim_cmd->add_option("--replicates", mo.replicates);
  sim_cmd->add_option("--seed", mo.seed);
  sim_cmd->add_option("--threads", mo.threads);
  sim_cmd->add_option("--alpha", mo.alpha);
  sim_cmd->add_option("--restarts", mo.restarts);
  sim_cmd->add_option("--model", mo.model, "override the preset's edge model");
  sim_cmd->add_option("--ks", mo.ks, "fitted K grid, comma separated");
  sim_cmd->add_option("--epsilons", mo.epsilons);
  sim_cmd->add_option("--gammas", mo.gammas);
  sim_cmd->add_option("--rho2s", mo.rho2s);
  sim_cmd->add_option("--uniform-lo", mo.uniform_lo);
  sim_cmd->add_option("--uniform-hi", mo.uniform_hi);
  sim_cmd->add_option("--contrast", mo.contrast);
  sim_cmd->add_flag("--svg", mo.svg, "emit line charts next to report.csv");
  sim_cmd->add_option("--config", mo.config);

  GapOpts go;
  auto* gap_cmd = app.add_subcommand("gapcurves", "surrogate-gap curves over gamma");
  gap_cmd->add_option("--setting", go.setting, "constant|two-block|uniform")->required();
  gap_cmd->add_option("--n", go.n);
  gap_cmd->add_option("--gammas", go.gammas);
  gap_cmd->add_option("--reps", go.reps);
  gap_cmd->add_option("--seed", go.seed);
  gap_cmd->add_option("--restarts", go.restarts);
  gap_cmd->add_option("--threads", go.threads);
  gap_cmd->add_flag("--svg", go.svg);
  gap_cmd->add_option("--out", go.out, "output CSV")->required();
  gap_cmd->add_option("--config", go.config);

  AnalyzeOpts ao;
  auto* an_cmd = app.add_subcommand("analyze", "gamma sweep on a real binary network");
  an_cmd->add_option("--in", ao.in, "undirected edge list without self-loops")->required();
  an_cmd->add_option("--format", ao.format);
  an_cmd->add_option("--n", ao.n);
  an_cmd->add_option("--gammas", ao.gammas);
  an_cmd->add_option("--repeats", ao.repeats);
  an_cmd->add_option("--k", ao.k);
  an_cmd->add_option("--contrast", ao.contrast);
  an_cmd->add_option("--alpha", ao.alpha);
  an_cmd->add_option("--seed", ao.seed);
  an_cmd->add_option("--restarts", ao.restarts);
  an_cmd->add_option("--threads", ao.threads);
  an_cmd->add_flag("--svg", ao.svg);
  an_cmd->add_option("--out", ao.out, "output CSV")->required();
  an_cmd->add_option("--config", ao.config);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    std::vector<const char*> cargs{argv[0]};
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());

    if (split_cmd->parsed()) return run_split(so);
    if (cluster_cmd->parsed()) return run_cluster(co);
    if (infer_cmd->parsed()) return run_infer(io);
    if (sim_cmd->parsed()) return run_simulate(mo);
    if (gap_cmd->parsed()) return run_gapcurves(go);
    if (an_cmd->parsed()) return run_analyze(ao);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
