#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "netsplit/experiments.hpp"
#include "oracles.hpp"

using namespace netsplit;

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

TEST_CASE("SBM mean matrices", "[sim]") {
  SECTION("2x2 block structure at the paper's connectivities") {
    const auto truth =
        sbm_mean_matrix(SbmConfig{4, 2, 30.0, 27.0, EdgeModel::poisson, kNaN, kDirectedLoops});
    REQUIRE(truth.labels == std::vector<int>{0, 0, 1, 1});
    REQUIRE(truth.mean.value(0, 1) == 30.0);
    REQUIRE(truth.mean.value(2, 3) == 30.0);
    REQUIRE(truth.mean.value(0, 2) == 27.0);
    REQUIRE(truth.mean.value(3, 1) == 27.0);
  }

  SECTION("equal connectivities collapse to a constant matrix") {
    const auto truth =
        sbm_mean_matrix(SbmConfig{6, 3, 5.0, 5.0, EdgeModel::poisson, kNaN, kDirectedLoops});
    truth.mean.for_each([](std::int64_t, int, int, double v) { REQUIRE(v == 5.0); });
  }

  SECTION("n=6, K=3: brute-force check of all 36 entries") {
    const auto truth =
        sbm_mean_matrix(SbmConfig{6, 3, 9.0, 2.0, EdgeModel::poisson, kNaN, kDirectedLoops});
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const bool same = (i / 2) == (j / 2);
        REQUIRE(truth.mean.value(i, j) == (same ? 9.0 : 2.0));
      }
  }

  SECTION("divisibility and domain validation") {
    REQUIRE_THROWS_AS(
        sbm_mean_matrix(SbmConfig{5, 2, 1.0, 1.0, EdgeModel::poisson, kNaN, kDirectedLoops}),
        std::invalid_argument);
    REQUIRE_THROWS_AS(sbm_mean_matrix(SbmConfig{4, 2, 1.5, 0.5, EdgeModel::bernoulli, kNaN,
                                                kDirectedLoops}),
                      std::invalid_argument);
  }
}

TEST_CASE("network sampling", "[sim]") {
  SECTION("deterministic under a fixed seed") {
    const auto m = constant_mean_matrix(20, kDirectedLoops, 3.0);
    const auto a = sample_network(m, EdgeModel::poisson, kNaN, 42);
    const auto b = sample_network(m, EdgeModel::poisson, kNaN, 42);
    REQUIRE(a == b);
    REQUIRE(!(a == sample_network(m, EdgeModel::poisson, kNaN, 43)));
  }

  SECTION("poisson empirical mean at M=30 over ~1e5 dyads") {
    const auto m = constant_mean_matrix(317, kDirectedLoops, 30.0);
    const auto a = sample_network(m, EdgeModel::poisson, kNaN, 9);
    double sum = 0.0;
    std::int64_t count = 0;
    a.for_each([&](std::int64_t, int, int, double v) {
      sum += v;
      ++count;
    });
    const double se = std::sqrt(30.0 / static_cast<double>(count));
    REQUIRE(sum / static_cast<double>(count) == Catch::Approx(30.0).margin(3 * se));
  }

  SECTION("bernoulli at M = 1 - 1e-12 is all ones at this scale") {
    const auto m = constant_mean_matrix(100, kDirectedLoops, 1.0 - 1e-12);
    const auto a = sample_network(m, EdgeModel::bernoulli, kNaN, 4);
    a.for_each([](std::int64_t, int, int, double v) { REQUIRE(v == 1.0); });
  }
}

TEST_CASE("coverage point: sanity and thread-count invariance", "[sim]") {
  sim::Scenario sc;
  sc.model = EdgeModel::gaussian;
  sc.n = 40;
  sc.k_true = 2;
  sc.k_fit = 2;
  sc.rho1 = 30.0;
  sc.rho2 = 25.0;
  sc.tau2 = 25.0;
  sc.split_param = 0.5;
  sc.replicates = 60;
  sc.base_seed = 5;
  sc.compare_naive = true;
  sc.restarts = 8;

  sc.threads = 1;
  const auto row1 = sim::coverage_point(sc);
  sc.threads = 4;
  const auto row4 = sim::coverage_point(sc);

  REQUIRE(row1.coverage == row4.coverage);
  REQUIRE(row1.mean_width == row4.mean_width);
  REQUIRE(row1.mean_ari == row4.mean_ari);
  REQUIRE(row1.naive_coverage == row4.naive_coverage);
  REQUIRE(row1.n_failed == row4.n_failed);

  REQUIRE(row1.coverage >= 0.75);  // exact guarantee, loose MC band at R=60
  REQUIRE(row1.coverage <= 1.0);
  REQUIRE(row1.mean_width > 0.0);
  REQUIRE(row1.mc_se == Catch::Approx(std::sqrt(row1.coverage * (1 - row1.coverage) / 60.0))
                            .margin(1e-12));
}

TEST_CASE("gaussian coverage is exact across small designs", "[sim]") {
  // exact finite-sample guarantee: 2000 replicates stay within 3 binomial
  // standard errors of the nominal level at every tested (n, K, epsilon)
  const double se = std::sqrt(0.9 * 0.1 / 2000.0);
  struct Design {
    int n, k;
    double eps;
  };
  for (const auto& d : {Design{30, 2, 0.3}, Design{50, 5, 0.7}}) {
    sim::Scenario sc;
    sc.model = EdgeModel::gaussian;
    sc.n = d.n;
    sc.k_true = d.k;
    sc.k_fit = d.k;
    sc.rho1 = 30.0;
    sc.rho2 = 27.0;
    sc.tau2 = 25.0;
    sc.split_param = d.eps;
    sc.replicates = 2000;
    sc.base_seed = 1000 + d.n;
    sc.restarts = 8;
    const auto row = sim::coverage_point(sc);
    REQUIRE(row.coverage == Catch::Approx(0.90).margin(3 * se));
  }
}

TEST_CASE("bernoulli coverage point reports both targets", "[sim]") {
  sim::Scenario sc;
  sc.model = EdgeModel::bernoulli;
  sc.n = 40;
  sc.k_true = 2;
  sc.k_fit = 2;
  sc.rho1 = 0.7;
  sc.rho2 = 0.4;
  sc.split_param = 0.25;
  sc.replicates = 40;
  sc.base_seed = 11;
  sc.restarts = 8;
  sc.threads = 2;
  const auto row = sim::coverage_point(sc);
  REQUIRE(row.target == TargetKind::xi);
  REQUIRE(std::isfinite(row.coverage));
  REQUIRE(std::isfinite(row.coverage_b_target));
  REQUIRE(row.coverage >= 0.7);
  REQUIRE(row.coverage_b_target >= 0.7);
}

TEST_CASE("heterogeneous mode redraws M and leaves ARI blank", "[sim]") {
  sim::Scenario sc;
  sc.model = EdgeModel::poisson;
  sc.n = 30;
  sc.k_true = 0;
  sc.uniform_lo = 0.5;
  sc.uniform_hi = 20.0;
  sc.k_fit = 2;
  sc.split_param = 0.5;
  sc.replicates = 30;
  sc.base_seed = 3;
  sc.threads = 2;
  const auto row = sim::coverage_point(sc);
  REQUIRE(std::isnan(row.mean_ari));
  REQUIRE(row.coverage >= 0.7);
}

TEST_CASE("fission near gamma = 0.5 clusters pure noise", "[sim]") {
  const auto truth = sbm_mean_matrix(
      SbmConfig{60, 2, 0.8, 0.2, EdgeModel::bernoulli, kNaN, kDirectedLoops});
  const auto u = Contrast::cell(CellIndexer{2, false}, 0, 0);
  double ari_noisy = 0.0, ari_clean = 0.0;
  const int reps = 20;
  for (int r = 0; r < reps; ++r) {
    const auto a = sample_network(truth.mean, EdgeModel::bernoulli, kNaN, 900 + r);
    SplitParams p;
    p.mode = SplitMode::bernoulli_fission;
    p.seed = 950 + r;
    p.gamma = 0.499;
    ari_noisy += adjusted_rand_index(
        run_pipeline(a, p, 2, u, 0.1, 8, 980 + r).communities.labels, truth.labels);
    p.gamma = 0.05;
    ari_clean += adjusted_rand_index(
        run_pipeline(a, p, 2, u, 0.1, 8, 980 + r).communities.labels, truth.labels);
  }
  REQUIRE(ari_noisy / reps < 0.15);  // train is Bern(~0.5) noise
  REQUIRE(ari_clean / reps > 0.95);  // train keeps nearly all structure
}

TEST_CASE("gap curves: constant setting pins Phi to B", "[sim]") {
  const auto rows =
      sim::gap_curves(sim::GapSetting::constant, 30, {0.1, 0.3}, 5, 21, 6, 2);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    REQUIRE(r.n_failed == 0);
    REQUIRE(r.mean_abs_phi_gap < 1e-10);
    REQUIRE(r.mean_abs_v_gap > r.mean_abs_phi_gap);
  }
}

TEST_CASE("real-network analysis over a gamma grid", "[sim]") {
  const auto truth = sbm_mean_matrix(
      SbmConfig{62, 2, 0.6, 0.05, EdgeModel::bernoulli, kNaN, kUndirectedNoLoops});
  const auto a = sample_network(truth.mean, EdgeModel::bernoulli, kNaN, 77);

  const auto rows = sim::analyze_real(a, {0.1, 0.45}, 10, 2,
                                      sim::ContrastSpec::parse("1,-2,1"), 0.10, 5, 10, 2);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    REQUIRE(r.n_failed == 0);
    REQUIRE(std::isfinite(r.mean_estimate));
    REQUIRE(r.mean_lower <= r.mean_upper);
  }
  // more toggling noise, less agreement with the full-network clustering
  REQUIRE(rows[0].mean_ari >= rows[1].mean_ari);

  const auto wrong = sample_network(
      sbm_mean_matrix(SbmConfig{10, 2, 0.6, 0.05, EdgeModel::bernoulli, kNaN, kDirectedLoops})
          .mean,
      EdgeModel::bernoulli, kNaN, 1);
  REQUIRE_THROWS_AS(sim::analyze_real(wrong, {0.1}, 2, 2, sim::ContrastSpec::first_cell(),
                                      0.1, 1, 2, 1),
                    data_error);
}

TEST_CASE("contrast specs parse and resolve", "[sim]") {
  const CellIndexer cells{2, true};
  const auto c1 = sim::ContrastSpec::parse("cell:1,2").resolve(cells);
  REQUIRE(c1.coeff(0, 1) == 1.0);
  REQUIRE(c1.coeff(0, 0) == 0.0);
  const auto c2 = sim::ContrastSpec::parse("1,-2,1").resolve(cells);
  REQUIRE(c2.norm() == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(c2.coeff(0, 0) == Catch::Approx(1.0 / std::sqrt(6.0)).margin(1e-15));
  REQUIRE_THROWS_AS(sim::ContrastSpec::parse("cell:3,1").resolve(cells),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(sim::ContrastSpec::parse("0,0,0").resolve(cells), std::invalid_argument);
  REQUIRE_THROWS_AS(sim::ContrastSpec::parse(""), std::invalid_argument);
}
