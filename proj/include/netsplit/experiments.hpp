#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "netsplit/estimands.hpp"
#include "netsplit/inference.hpp"
#include "netsplit/io.hpp"
#include "netsplit/sbm.hpp"

namespace netsplit::sim {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Contrast given as `cell:k,l` (1-based indicator) or an explicit raw
/// coefficient list; resolved to a unit vector once K and the kind are known.
struct ContrastSpec {
  std::optional<std::pair<int, int>> cell;
  std::vector<double> raw;

  static ContrastSpec first_cell() { return ContrastSpec{std::pair<int, int>{1, 1}, {}}; }

  static ContrastSpec parse(const std::string& text) {
    ContrastSpec spec;
    if (text.rfind("cell:", 0) == 0) {
      const auto fields = netsplit::detail::split_fields(text.substr(5));
      long k = 0, l = 0;
      if (fields.size() != 2 || !netsplit::detail::parse_int(fields[0], k) ||
          !netsplit::detail::parse_int(fields[1], l) || k < 1 || l < 1)
        throw std::invalid_argument("contrast 'cell:k,l' needs two 1-based indices");
      spec.cell = {static_cast<int>(k), static_cast<int>(l)};
      return spec;
    }
    for (const auto& f : netsplit::detail::split_fields(text)) {
      double v = 0.0;
      if (!netsplit::detail::parse_double(f, v))
        throw std::invalid_argument("bad contrast coefficient '" + f + "'");
      spec.raw.push_back(v);
    }
    if (spec.raw.empty()) throw std::invalid_argument("empty contrast");
    return spec;
  }

  Contrast resolve(const CellIndexer& cells) const {
    if (cell) {
      auto [k, l] = *cell;
      if (k > cells.K || l > cells.K)
        throw std::invalid_argument("contrast cell out of range for K=" +
                                    std::to_string(cells.K));
      return Contrast::cell(cells, k - 1, l - 1);
    }
    return Contrast::normalized(raw, cells);
  }

  std::string describe() const {
    if (cell)
      return "cell:" + std::to_string(cell->first) + "," + std::to_string(cell->second);
    std::string s;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (i) s += ",";
      s += netsplit::detail::format_double(raw[i]);
    }
    return s;
  }
};

namespace detail {

/// Runs f(r) for r in [0, count) across threads. Workers own disjoint index
/// blocks and write into preallocated slots, so results do not depend on the
/// thread count. data_error must be handled inside f; anything else aborts.
template <class F>
inline void parallel_replicates(int count, int threads, F&& f) {
  int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (t > count) t = count;
  if (t <= 1) {
    for (int r = 0; r < count; ++r) f(r);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(t);
  for (int w = 0; w < t; ++w) {
    const int lo = static_cast<int>(static_cast<std::int64_t>(count) * w / t);
    const int hi = static_cast<int>(static_cast<std::int64_t>(count) * (w + 1) / t);
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (int r = lo; r < hi; ++r) f(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Tally {
  std::int64_t count = 0;
  double sum = 0.0;
  void add(double v) {
    if (std::isnan(v)) return;
    ++count;
    sum += v;
  }
  double mean() const { return count > 0 ? sum / static_cast<double>(count) : kNaN; }
};

}  // namespace detail

/// One simulation configuration. k_true = 0 selects the heterogeneous mode
/// where M_ij ~ Unif(uniform_lo, uniform_hi) is redrawn before every
/// replicate; otherwise a planted SBM mean is used.
struct Scenario {
  EdgeModel model = EdgeModel::gaussian;
  NetworkKind kind = kDirectedLoops;
  int n = 100;
  int k_true = 5;
  double rho1 = kNaN;
  double rho2 = kNaN;
  double uniform_lo = kNaN;
  double uniform_hi = kNaN;
  double tau2 = kNaN;
  int k_fit = 5;
  double split_param = 0.5;  // epsilon (thinning) or gamma (fission)
  ContrastSpec contrast = ContrastSpec::first_cell();
  double alpha = 0.10;
  int replicates = 1000;
  std::uint64_t base_seed = 1;
  bool compare_naive = false;
  int restarts = 20;
  int threads = 0;
};

struct CoverageRow {
  EdgeModel model = EdgeModel::gaussian;
  TargetKind target = TargetKind::theta;
  int n = 0, k_true = 0, k_fit = 0;
  double rho1 = kNaN, rho2 = kNaN, uniform_lo = kNaN, uniform_hi = kNaN, tau2 = kNaN;
  double split_param = kNaN, alpha = kNaN;
  int replicates = 0, n_failed = 0;
  double coverage = kNaN;           // primary target: theta, or xi for fission
  double coverage_b_target = kNaN;  // fission only: coverage of theta(A^tr)
  double naive_coverage = kNaN;
  double mean_width = kNaN, naive_mean_width = kNaN;
  double mean_ari = kNaN;
  double mc_se = kNaN;
};

using CoverageReport = std::vector<CoverageRow>;

namespace detail {

struct RepOutcome {
  bool failed = false;
  bool naive_failed = false;
  double covered = kNaN;
  double covered_b = kNaN;
  double width = kNaN;
  double ari = kNaN;
  double naive_covered = kNaN;
  double naive_width = kNaN;
};

}  // namespace detail

/// R replicates of draw -> split -> cluster -> infer at one configuration.
/// Truth-side targets come from the estimands module on the known M.
/// Replicate r is driven entirely by mix_seed(base_seed, r); degenerate
/// replicates are excluded and counted, and more than 1% of them fails the
/// run.
inline CoverageRow coverage_point(const Scenario& sc) {
  const bool fission = sc.model == EdgeModel::bernoulli;
  const bool heterogeneous = sc.k_true == 0;
  if (heterogeneous && !(sc.uniform_hi > sc.uniform_lo))
    throw std::invalid_argument("heterogeneous mode needs uniform_lo < uniform_hi");
  if (sc.replicates < 1) throw std::invalid_argument("replicates must be >= 1");

  SbmTruth truth;
  if (!heterogeneous)
    truth = sbm_mean_matrix(
        SbmConfig{sc.n, sc.k_true, sc.rho1, sc.rho2, sc.model, sc.tau2, sc.kind});

  const CellIndexer cells{sc.k_fit, sc.kind.undirected()};
  const Contrast u = sc.contrast.resolve(cells);

  std::vector<detail::RepOutcome> reps(sc.replicates);
  detail::parallel_replicates(sc.replicates, sc.threads, [&](int r) {
    auto& o = reps[r];
    const std::uint64_t rep_seed = rng::mix_seed(sc.base_seed, static_cast<std::uint64_t>(r));
    MeanMatrix local;
    const MeanMatrix* m = &truth.mean;
    if (heterogeneous) {
      local = uniform_mean_matrix(sc.n, sc.kind, sc.uniform_lo, sc.uniform_hi,
                                  rng::mix_seed(rep_seed, 1));
      m = &local;
    }
    const Network a = sample_network(*m, sc.model, sc.tau2, rng::mix_seed(rep_seed, 2));

    try {
      SplitParams sp;
      sp.mode = split_mode_for(sc.model);
      sp.seed = rng::mix_seed(rep_seed, 3);
      if (fission)
        sp.gamma = sc.split_param;
      else {
        sp.epsilon = sc.split_param;
        if (sc.model == EdgeModel::gaussian) sp.tau2 = sc.tau2;
      }
      const auto pr = run_pipeline(a, sp, sc.k_fit, u, sc.alpha, sc.restarts,
                                   rng::mix_seed(rep_seed, 4));
      const auto sets = dyad_index_sets(pr.communities, sc.kind, sc.n,
                                        fission ? &pr.split.train : nullptr);
      const double theta_true = estimands::theta(*m, sets, u);
      if (fission) {
        const double xi_true = estimands::xi(
            estimands::surrogate_phi(*m, pr.split.train, sc.split_param, sets).phi, u);
        o.covered = pr.inference.contains(xi_true) ? 1.0 : 0.0;
        o.covered_b = pr.inference.contains(theta_true) ? 1.0 : 0.0;
      } else {
        o.covered = pr.inference.contains(theta_true) ? 1.0 : 0.0;
      }
      o.width = pr.inference.width();
      if (!heterogeneous)
        o.ari = adjusted_rand_index(pr.communities.labels, truth.labels);
    } catch (const data_error&) {
      o.failed = true;
    }

    if (sc.compare_naive) {
      try {
        const auto zn =
            spectral_clustering(a, sc.k_fit, sc.restarts, rng::mix_seed(rep_seed, 5));
        const auto sets_n = dyad_index_sets(zn, sc.kind, sc.n);
        const double theta_naive = estimands::theta(*m, sets_n, u);
        const auto rn = infer_naive(a, zn, u, sc.model, sc.alpha, sc.tau2);
        o.naive_covered = rn.contains(theta_naive) ? 1.0 : 0.0;
        o.naive_width = rn.width();
      } catch (const data_error&) {
        o.naive_failed = true;
      }
    }
  });

  CoverageRow row;
  row.model = sc.model;
  row.target = fission ? TargetKind::xi : TargetKind::theta;
  row.n = sc.n;
  row.k_true = sc.k_true;
  row.k_fit = sc.k_fit;
  row.rho1 = sc.rho1;
  row.rho2 = sc.rho2;
  row.uniform_lo = sc.uniform_lo;
  row.uniform_hi = sc.uniform_hi;
  row.tau2 = sc.tau2;
  row.split_param = sc.split_param;
  row.alpha = sc.alpha;
  row.replicates = sc.replicates;

  detail::Tally cov, cov_b, width, ari, ncov, nwidth;
  int failed = 0;
  for (const auto& o : reps) {
    if (o.failed) {
      ++failed;
    } else {
      cov.add(o.covered);
      cov_b.add(o.covered_b);
      width.add(o.width);
      ari.add(o.ari);
    }
    if (sc.compare_naive && !o.naive_failed) {
      ncov.add(o.naive_covered);
      nwidth.add(o.naive_width);
    }
  }
  row.n_failed = failed;
  if (failed > 0 && static_cast<std::int64_t>(failed) * 100 >= sc.replicates)
    throw data_error("more than 1% of replicates degenerated (" + std::to_string(failed) +
                     "/" + std::to_string(sc.replicates) + ")");
  row.coverage = cov.mean();
  row.coverage_b_target = cov_b.mean();
  row.mean_width = width.mean();
  row.mean_ari = ari.mean();
  if (cov.count > 0) {
    const double p = row.coverage;
    row.mc_se = std::sqrt(p * (1.0 - p) / static_cast<double>(cov.count));
  }
  if (sc.compare_naive) {
    row.naive_coverage = ncov.mean();
    row.naive_mean_width = nwidth.mean();
  }
  return row;
}

/// Width/ARI trade-off sweep: one coverage_point per (split_param, rho2)
/// pair. Replicate seeds are shared across grid points (common random
/// numbers), so curves differ only through the parameters.
inline CoverageReport tradeoff_grid(const Scenario& base,
                                    const std::vector<double>& split_params,
                                    const std::vector<double>& rho2s) {
  if (split_params.empty()) throw std::invalid_argument("empty split-parameter grid");
  CoverageReport report;
  const std::vector<double> rho2_grid = rho2s.empty() ? std::vector<double>{base.rho2} : rho2s;
  for (double rho2 : rho2_grid)
    for (double p : split_params) {
      Scenario sc = base;
      sc.split_param = p;
      sc.rho2 = rho2;
      report.push_back(coverage_point(sc));
    }
  return report;
}

enum class GapSetting { constant, two_block, uniform };

inline GapSetting parse_gap_setting(const std::string& token) {
  if (token == "constant") return GapSetting::constant;
  if (token == "two-block" || token == "two_block") return GapSetting::two_block;
  if (token == "uniform") return GapSetting::uniform;
  throw std::invalid_argument("unknown setting '" + token +
                              "' (expected constant|two-block|uniform)");
}

inline std::string to_string(GapSetting s) {
  switch (s) {
    case GapSetting::constant: return "constant";
    case GapSetting::two_block: return "two-block";
    case GapSetting::uniform: return "uniform";
  }
  return "?";
}

struct GapRow {
  GapSetting setting = GapSetting::constant;
  double gamma = 0.0;
  int reps = 0, n_failed = 0;
  double mean_abs_v_gap = kNaN;
  double mean_abs_phi_gap = kNaN;
};

/// Per gamma: fission draws of a Bernoulli network, 2-community clustering
/// of the train network, then the cell-(1,1) gaps |V - B| and |Phi - B|
/// evaluated on the known M.
inline std::vector<GapRow> gap_curves(GapSetting setting, int n,
                                      const std::vector<double>& gammas, int reps,
                                      std::uint64_t seed, int restarts = 20,
                                      int threads = 0) {
  if (gammas.empty()) throw std::invalid_argument("empty gamma grid");
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  const NetworkKind kind = kDirectedLoops;
  const int k_fit = 2;
  struct Outcome {
    bool failed = false;
    double v_gap = kNaN, phi_gap = kNaN;
  };
  const int g_count = static_cast<int>(gammas.size());
  std::vector<Outcome> grid(static_cast<std::size_t>(g_count) * reps);
  MeanMatrix fixed;
  if (setting == GapSetting::constant) fixed = constant_mean_matrix(n, kind, 0.5);
  if (setting == GapSetting::two_block) fixed = two_block_mean_matrix(n, kind, 0.6, 0.4);

  detail::parallel_replicates(g_count * reps, threads, [&](int slot) {
    const int gi = slot / reps;
    const int r = slot % reps;
    auto& o = grid[slot];
    const double gamma = gammas[gi];
    const std::uint64_t rep_seed = rng::mix_seed(seed, static_cast<std::uint64_t>(r));
    MeanMatrix local;
    const MeanMatrix* m = &fixed;
    if (setting == GapSetting::uniform) {
      local = uniform_mean_matrix(n, kind, 0.0, 1.0, rng::mix_seed(rep_seed, 1));
      m = &local;
    }
    try {
      const Network a = sample_network(*m, EdgeModel::bernoulli, kNaN,
                                       rng::mix_seed(rep_seed, 2));
      const auto pair = fission_bernoulli(a, gamma, rng::mix_seed(rep_seed, 3));
      const auto z = spectral_clustering(pair.train, k_fit, restarts,
                                         rng::mix_seed(rep_seed, 4));
      const auto sets = dyad_index_sets(z, kind, n, &pair.train);
      const auto b = estimands::cell_means_B(*m, sets);
      const auto tables = estimands::surrogate_phi(*m, pair.train, gamma, sets);
      o.v_gap = std::fabs(tables.v_all.at(0, 0) - b.at(0, 0));
      o.phi_gap = std::fabs(tables.phi.at(0, 0) - b.at(0, 0));
    } catch (const data_error&) {
      o.failed = true;
    }
  });

  std::vector<GapRow> rows;
  for (int gi = 0; gi < g_count; ++gi) {
    GapRow row;
    row.setting = setting;
    row.gamma = gammas[gi];
    row.reps = reps;
    detail::Tally v, phi;
    for (int r = 0; r < reps; ++r) {
      const auto& o = grid[static_cast<std::size_t>(gi) * reps + r];
      if (o.failed) {
        ++row.n_failed;
        continue;
      }
      v.add(o.v_gap);
      phi.add(o.phi_gap);
    }
    row.mean_abs_v_gap = v.mean();
    row.mean_abs_phi_gap = phi.mean();
    rows.push_back(row);
  }
  return rows;
}

struct AnalyzeRow {
  double gamma = 0.0;
  int repeats = 0, n_failed = 0;
  double mean_ari = kNaN;
  double mean_estimate = kNaN, mean_lower = kNaN, mean_upper = kNaN;
};

/// Real-network analysis over a gamma grid: repeated fission, clustering of
/// each train network, ARI against the clustering of the full network, and
/// the undirected fission interval for the contrast.
inline std::vector<AnalyzeRow> analyze_real(const Network& a,
                                            const std::vector<double>& gammas, int repeats,
                                            int K, const ContrastSpec& contrast, double alpha,
                                            std::uint64_t seed, int restarts = 20,
                                            int threads = 0) {
  if (!(a.kind() == kUndirectedNoLoops) || a.domain() != EdgeDomain::binary)
    throw data_error("analysis expects a binary undirected network without self-loops");
  if (gammas.empty()) throw std::invalid_argument("empty gamma grid");
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");

  const CellIndexer cells{K, true};
  const Contrast u = contrast.resolve(cells);
  const auto z_full = spectral_clustering(a, K, restarts, rng::mix_seed(seed, 0xF001));

  struct Outcome {
    bool failed = false;
    double ari = kNaN, est = kNaN, lo = kNaN, hi = kNaN;
  };
  const int g_count = static_cast<int>(gammas.size());
  std::vector<Outcome> grid(static_cast<std::size_t>(g_count) * repeats);

  detail::parallel_replicates(g_count * repeats, threads, [&](int slot) {
    const int gi = slot / repeats;
    const int r = slot % repeats;
    auto& o = grid[slot];
    const double gamma = gammas[gi];
    const std::uint64_t rep_seed = rng::mix_seed(seed, static_cast<std::uint64_t>(r));
    try {
      const auto pair = fission_bernoulli(a, gamma, rng::mix_seed(rep_seed, 3));
      const auto z = spectral_clustering(pair.train, K, restarts, rng::mix_seed(rep_seed, 4));
      o.ari = adjusted_rand_index(z.labels, z_full.labels);
      const auto res = infer_bernoulli(pair.test, pair.train, z, u, gamma, alpha);
      o.est = res.estimate;
      o.lo = res.lower;
      o.hi = res.upper;
    } catch (const data_error&) {
      o.failed = true;
    }
  });

  std::vector<AnalyzeRow> rows;
  for (int gi = 0; gi < g_count; ++gi) {
    AnalyzeRow row;
    row.gamma = gammas[gi];
    row.repeats = repeats;
    detail::Tally ari, est, lo, hi;
    for (int r = 0; r < repeats; ++r) {
      const auto& o = grid[static_cast<std::size_t>(gi) * repeats + r];
      if (o.failed) {
        ++row.n_failed;
        continue;
      }
      ari.add(o.ari);
      est.add(o.est);
      lo.add(o.lo);
      hi.add(o.hi);
    }
    row.mean_ari = ari.mean();
    row.mean_estimate = est.mean();
    row.mean_lower = lo.mean();
    row.mean_upper = hi.mean();
    rows.push_back(row);
  }
  return rows;
}

// ---- CSV emission (byte-stable; all numbers via format_double) ----

inline void write_coverage_csv(const CoverageReport& rows, const std::string& path) {
  auto out = netsplit::detail::open_out(path);
  out << "model,target,n,k_true,k_fit,rho1,rho2,uniform_lo,uniform_hi,tau2,"
         "epsilon_or_gamma,alpha,replicates,coverage,coverage_b_target,naive_coverage,"
         "mean_width,naive_mean_width,mean_ari,mc_se,n_failed\n";
  using netsplit::detail::format_double;
  for (const auto& r : rows) {
    out << netsplit::to_string(r.model) << ',' << netsplit::to_string(r.target) << ','
        << r.n << ',' << r.k_true << ',' << r.k_fit << ',' << format_double(r.rho1) << ','
        << format_double(r.rho2) << ',' << format_double(r.uniform_lo) << ','
        << format_double(r.uniform_hi) << ',' << format_double(r.tau2) << ','
        << format_double(r.split_param) << ',' << format_double(r.alpha) << ','
        << r.replicates << ',' << format_double(r.coverage) << ','
        << format_double(r.coverage_b_target) << ',' << format_double(r.naive_coverage)
        << ',' << format_double(r.mean_width) << ',' << format_double(r.naive_mean_width)
        << ',' << format_double(r.mean_ari) << ',' << format_double(r.mc_se) << ','
        << r.n_failed << '\n';
  }
  if (!out) throw data_error("write failed: " + path);
}

inline void write_gap_csv(const std::vector<GapRow>& rows, const std::string& path) {
  auto out = netsplit::detail::open_out(path);
  out << "setting,gamma,reps,mean_abs_V_gap,mean_abs_Phi_gap,n_failed\n";
  using netsplit::detail::format_double;
  for (const auto& r : rows)
    out << to_string(r.setting) << ',' << format_double(r.gamma) << ',' << r.reps << ','
        << format_double(r.mean_abs_v_gap) << ',' << format_double(r.mean_abs_phi_gap)
        << ',' << r.n_failed << '\n';
  if (!out) throw data_error("write failed: " + path);
}

inline void write_analyze_csv(const std::vector<AnalyzeRow>& rows, const std::string& path) {
  auto out = netsplit::detail::open_out(path);
  out << "gamma,repeats,mean_ari,mean_estimate,mean_lower,mean_upper,n_failed\n";
  using netsplit::detail::format_double;
  for (const auto& r : rows)
    out << format_double(r.gamma) << ',' << r.repeats << ',' << format_double(r.mean_ari)
        << ',' << format_double(r.mean_estimate) << ',' << format_double(r.mean_lower)
        << ',' << format_double(r.mean_upper) << ',' << r.n_failed << '\n';
  if (!out) throw data_error("write failed: " + path);
}

}  // namespace netsplit::sim
