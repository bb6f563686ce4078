#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "netsplit/inference.hpp"
#include "netsplit/sbm.hpp"
#include "oracles.hpp"

using namespace netsplit;

namespace {

constexpr double kZ90 = 1.6448536269514722;  // standard normal 0.95 quantile

Network fill_by_ordinal(int n, NetworkKind kind, EdgeDomain domain,
                        const std::function<double(std::int64_t)>& f) {
  Network net(n, kind, domain);
  net.for_each([&](std::int64_t ord, int i, int j, double) { net.set(i, j, f(ord)); });
  return net;
}

}  // namespace

TEST_CASE("gaussian interval: hand-evaluated 2x2 case", "[inference]") {
  const auto test = fill_by_ordinal(2, kDirectedLoops, EdgeDomain::real,
                                    [](std::int64_t) { return 1.0; });
  const CommunityAssignment z{{0, 0}, 1};
  const auto u = Contrast::cell(CellIndexer{1, false}, 0, 0);
  const auto r = infer_gaussian(test, z, u, 0.5, 1.0, 0.10);
  REQUIRE(r.estimate == 2.0);
  REQUIRE(r.std_error == Catch::Approx(std::sqrt(0.5)).margin(1e-15));
  REQUIRE(r.lower == Catch::Approx(2.0 - kZ90 * std::sqrt(0.5)).margin(1e-12));
  REQUIRE(r.upper == Catch::Approx(2.0 + kZ90 * std::sqrt(0.5)).margin(1e-12));
  REQUIRE(r.level == Catch::Approx(0.90));
  REQUIRE(r.target == TargetKind::theta);

  SECTION("alpha near 1 degenerates to the point estimate") {
    const auto tight = infer_gaussian(test, z, u, 0.5, 1.0, 1.0 - 1e-9);
    REQUIRE(tight.width() < 1e-8);
    REQUIRE(tight.lower <= tight.upper);
  }

  SECTION("width decreases as alpha grows") {
    const double w05 = infer_gaussian(test, z, u, 0.5, 1.0, 0.05).width();
    const double w10 = infer_gaussian(test, z, u, 0.5, 1.0, 0.10).width();
    const double w20 = infer_gaussian(test, z, u, 0.5, 1.0, 0.20).width();
    REQUIRE(w05 > w10);
    REQUIRE(w10 > w20);
  }

  SECTION("parameter validation") {
    REQUIRE_THROWS_AS(infer_gaussian(test, z, u, 1.0, 1.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(infer_gaussian(test, z, u, 0.5, -1.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(infer_gaussian(test, z, u, 0.5, 1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("poisson interval: hand case and zero-count boundary", "[inference]") {
  const auto test = fill_by_ordinal(2, kDirectedLoops, EdgeDomain::count,
                                    [](std::int64_t ord) { return static_cast<double>(ord + 1); });
  const CommunityAssignment z{{0, 0}, 1};
  const auto u = Contrast::cell(CellIndexer{1, false}, 0, 0);
  const auto r = infer_poisson(test, z, u, 0.5, 0.10);
  REQUIRE(r.b_hat.at(0, 0) == Catch::Approx(2.5).margin(1e-15));
  REQUIRE(r.estimate == Catch::Approx(5.0).margin(1e-14));
  REQUIRE(r.std_error * r.std_error == Catch::Approx(2.5).margin(1e-12));

  const auto zeros = fill_by_ordinal(2, kDirectedLoops, EdgeDomain::count,
                                     [](std::int64_t) { return 0.0; });
  const auto rz = infer_poisson(zeros, z, u, 0.5, 0.10);
  REQUIRE(rz.estimate == 0.0);
  REQUIRE(rz.std_error == 0.0);
  REQUIRE(rz.lower == 0.0);
  REQUIRE(rz.upper == 0.0);
  REQUIRE_FALSE(rz.warnings.empty());
}

TEST_CASE("bernoulli interval: hand case, delta method, safeguards", "[inference]") {
  // one community over n=10 directed-with-loops: |I| = 100; the train
  // network splits it into 50/50 and each slice has test mean 1/2
  const int n = 10;
  const auto train = fill_by_ordinal(n, kDirectedLoops, EdgeDomain::binary,
                                     [](std::int64_t ord) { return ord < 50 ? 0.0 : 1.0; });
  const auto test = fill_by_ordinal(n, kDirectedLoops, EdgeDomain::binary,
                                    [](std::int64_t ord) { return ord % 2 == 0 ? 1.0 : 0.0; });
  const CommunityAssignment z{std::vector<int>(n, 0), 1};
  const auto u = Contrast::cell(CellIndexer{1, false}, 0, 0);
  const auto r = infer_bernoulli(test, train, z, u, 0.25, 0.10);

  REQUIRE(r.b_hat0->at(0, 0) == Catch::Approx(0.5).margin(1e-15));
  REQUIRE(r.b_hat1->at(0, 0) == Catch::Approx(0.5).margin(1e-15));
  // Vhat^(0) = 0.5/(0.5 + 0.5/3) = 0.75, Vhat^(1) = 0.25, Phihat = 0.5
  REQUIRE(r.estimate == Catch::Approx(0.5).margin(1e-14));
  REQUIRE(r.target == TargetKind::xi);

  SECTION("delta-method variance agrees with a finite-difference oracle") {
    for (double b : {0.2, 0.5, 0.9}) {
      for (double ec : {1.0 / 3.0, 3.0}) {
        const std::int64_t count = 50;
        bool clamped = false, degenerate = false;
        const double got = netsplit::detail::delta_hat_s(b, count, ec, clamped, degenerate);
        const auto g = [ec](double x) { return x / (x + (1.0 - x) * ec); };
        const double h = 1e-6;
        const double slope = (g(b + h) - g(b - h)) / (2.0 * h);
        const double want = slope * slope * b * (1.0 - b) / static_cast<double>(count);
        REQUIRE(got == Catch::Approx(want).epsilon(1e-6));
        REQUIRE_FALSE(clamped);
        REQUIRE_FALSE(degenerate);
      }
    }
    // hand value for the 50/50 case above: both slices give 0.0028125
    bool clamped = false, degenerate = false;
    const double d0 = netsplit::detail::delta_hat_s(0.5, 50, 1.0 / 3.0, clamped, degenerate);
    REQUIRE(d0 == Catch::Approx(0.0028125).margin(1e-12));
    REQUIRE(r.std_error * r.std_error ==
            Catch::Approx(0.25 * (2 * 0.0028125)).margin(1e-12));
  }

  SECTION("boundary test mean triggers the eta recomputation, then the cap") {
    bool clamped = false, degenerate = false;
    const double d = netsplit::detail::delta_hat_s(1.0, 20, 99.0, clamped, degenerate);
    REQUIRE(degenerate);
    REQUIRE(clamped);
    REQUIRE(d == 0.25);
    clamped = degenerate = false;
    const double d2 = netsplit::detail::delta_hat_s(1.0, 1000, 1.0 / 3.0, clamped, degenerate);
    REQUIRE(degenerate);
    REQUIRE_FALSE(clamped);
    REQUIRE(d2 > 0.0);
    REQUIRE(d2 < 0.25);
  }

  SECTION("all-ones test still yields a positive-width interval") {
    const auto ones = fill_by_ordinal(n, kDirectedLoops, EdgeDomain::binary,
                                      [](std::int64_t) { return 1.0; });
    const auto r1 = infer_bernoulli(ones, train, z, u, 0.05, 0.10);
    REQUIRE(r1.std_error > 0.0);
    REQUIRE_FALSE(r1.warnings.empty());
  }

  SECTION("empty train-value slice in an addressed cell errors") {
    const auto all_zero_train = fill_by_ordinal(n, kDirectedLoops, EdgeDomain::binary,
                                                [](std::int64_t) { return 0.0; });
    REQUIRE_THROWS_WITH(infer_bernoulli(test, all_zero_train, z, u, 0.25, 0.10),
                        Catch::Matchers::ContainsSubstring("re-fission"));
  }
}

TEST_CASE("naive intervals", "[inference]") {
  SECTION("K=1 gaussian equals the unadjusted z-interval for the grand mean") {
    const auto a = fill_by_ordinal(3, kDirectedLoops, EdgeDomain::real,
                                   [](std::int64_t ord) { return 0.5 * static_cast<double>(ord); });
    const CommunityAssignment z{{0, 0, 0}, 1};
    const auto u = Contrast::cell(CellIndexer{1, false}, 0, 0);
    const double tau2 = 4.0;
    const auto r = infer_naive(a, z, u, EdgeModel::gaussian, 0.10, tau2);
    double sum = 0.0;
    a.for_each([&](std::int64_t, int, int, double v) { sum += v; });
    const double mean = sum / 9.0;
    REQUIRE(r.estimate == Catch::Approx(mean).margin(1e-14));
    REQUIRE(r.std_error == Catch::Approx(std::sqrt(tau2 / 9.0)).margin(1e-14));
    REQUIRE(r.target == TargetKind::naive);
  }

  SECTION("bernoulli cell with zero mean gives a degenerate interval") {
    const auto a = fill_by_ordinal(4, kDirectedLoops, EdgeDomain::binary,
                                   [](std::int64_t) { return 0.0; });
    const CommunityAssignment z{{0, 0, 0, 0}, 1};
    const auto u = Contrast::cell(CellIndexer{1, false}, 0, 0);
    const auto r = infer_naive(a, z, u, EdgeModel::bernoulli, 0.10);
    REQUIRE(r.estimate == 0.0);
    REQUIRE(r.std_error == 0.0);
    REQUIRE(r.width() == 0.0);
  }
}

TEST_CASE("estimates are linear in u with the stated quadratic-form variance",
          "[inference]") {
  const auto truth = sbm_mean_matrix(SbmConfig{
      12, 3, 9.0, 4.0, EdgeModel::poisson, std::numeric_limits<double>::quiet_NaN(),
      kDirectedLoops});
  const auto test = sample_network(truth.mean, EdgeModel::poisson, 0.0, 3);
  const CommunityAssignment z{truth.labels, 3};
  const CellIndexer cells{3, false};
  rng::Stream st(17, 0);
  std::vector<double> raw(9);
  for (auto& c : raw) c = st.uniform01() - 0.5;
  const auto u = Contrast::normalized(raw, cells);
  const double eps = 0.3;
  const auto r = infer_poisson(test, z, u, eps, 0.10);

  const auto mean_at = [&](int k, int l) {
    return oracles::cell_mean([&](int i, int j) { return test.value(i, j); }, truth.labels,
                              kDirectedLoops, k, l);
  };
  double est = 0.0, var = 0.0;
  const double block = 4.0;  // 12 nodes over 3 communities
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      const double c = u.coeff(k, l);
      est += c * mean_at(k, l);
      var += c * c * mean_at(k, l) / (block * block);
    }
  REQUIRE(r.estimate == Catch::Approx(est / (1.0 - eps)).margin(1e-10));
  REQUIRE(r.std_error * r.std_error ==
          Catch::Approx(var / ((1.0 - eps) * (1.0 - eps))).margin(1e-10));
}

TEST_CASE("undirected gaussian interval matches a from-scratch computation",
          "[inference]") {
  const auto truth = sbm_mean_matrix(SbmConfig{10, 2, 4.0, 1.0, EdgeModel::gaussian, 2.0,
                                               kUndirectedNoLoops});
  const auto test = sample_network(truth.mean, EdgeModel::gaussian, 2.0, 23);
  const CommunityAssignment z{truth.labels, 2};
  const CellIndexer cells{2, true};
  const auto u = Contrast::normalized({1.0, -2.0, 1.0}, cells);
  const double eps = 0.4, tau2 = 2.0;
  const auto r = infer_gaussian(test, z, u, eps, tau2, 0.10);

  // upper-triangle cells of the 5+5 split: |I'_11| = |I'_22| = 10, |I'_12| = 25
  double est = 0.0, var = 0.0;
  const double counts[3] = {10.0, 25.0, 10.0};
  int idx = 0;
  for (int k = 0; k < 2; ++k)
    for (int l = k; l < 2; ++l, ++idx) {
      const double mean = oracles::cell_mean(
          [&](int i, int j) { return test.value(i, j); }, truth.labels,
          kUndirectedNoLoops, k, l);
      est += u.coeffs()[idx] * mean;
      var += u.coeffs()[idx] * u.coeffs()[idx] / counts[idx];
    }
  REQUIRE(r.estimate == Catch::Approx(est / (1.0 - eps)).margin(1e-12));
  REQUIRE(r.std_error == Catch::Approx(std::sqrt(tau2 * var / (1.0 - eps))).margin(1e-12));
}

TEST_CASE("pipeline composes split, clustering, and inference deterministically",
          "[inference]") {
  const auto truth = sbm_mean_matrix(SbmConfig{20, 2, 8.0, 2.0, EdgeModel::poisson,
                                               std::numeric_limits<double>::quiet_NaN(),
                                               kDirectedLoops});
  const auto a = sample_network(truth.mean, EdgeModel::poisson, 0.0, 7);
  SplitParams sp;
  sp.mode = SplitMode::poisson_thin;
  sp.epsilon = 0.5;
  sp.seed = 11;
  const auto u = Contrast::cell(CellIndexer{2, false}, 0, 0);
  const auto p1 = run_pipeline(a, sp, 2, u, 0.10, 10, 13);
  const auto p2 = run_pipeline(a, sp, 2, u, 0.10, 10, 13);
  REQUIRE(p1.inference.estimate == p2.inference.estimate);
  REQUIRE(p1.communities.labels == p2.communities.labels);

  const auto direct = infer_poisson(p1.split.test, p1.communities, u, 0.5, 0.10);
  REQUIRE(p1.inference.estimate == direct.estimate);
  REQUIRE(p1.inference.std_error == direct.std_error);
}
