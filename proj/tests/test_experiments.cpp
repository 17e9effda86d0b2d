#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "fwpoly/conditioning.hpp"
#include "fwpoly/experiments.hpp"
#include "fwpoly/stats.hpp"

using namespace fwpoly;

TEST_CASE("rng streams are deterministic and decorrelated") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    std::vector<double> xa, xb;
    for (int i = 0; i < 1000; ++i) {
        xa.push_back(a.gaussian());
        xb.push_back(b.gaussian());
    }
    CHECK(xa == xb);  // bit-identical replay
    // different substream differs immediately
    CHECK(c.next_u64() != RngStream(42, 7).next_u64());
    // uniforms in range, roughly uniform mean
    RngStream u(9, 0);
    double s = 0;
    for (int i = 0; i < 100000; ++i) {
        const double x = u.uniform();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        s += x;
    }
    CHECK(std::abs(s / 100000 - 0.5) < 0.01);
}

TEST_CASE("gaussian points have the requested moments") {
    RngStream stream(3, 0);
    const int d = 3, n = 4000;
    std::vector<Vec> means(n, Vec{0.5, -0.25, 0.0});
    PointSet ps = gaussian_points(d, n, means, 0.2, stream);
    Vec m(d, 0.0);
    for (const Vec& p : ps.points)
        for (int j = 0; j < d; ++j) m[j] += p[j] / n;
    CHECK(std::abs(m[0] - 0.5) < 0.02);
    CHECK(std::abs(m[1] + 0.25) < 0.02);
    CHECK(std::abs(m[2]) < 0.02);
    double var = 0;
    for (const Vec& p : ps.points) var += (p[0] - 0.5) * (p[0] - 0.5) / n;
    CHECK(std::abs(var - 0.04) < 0.005);
    // mean norms above 1 are rejected
    std::vector<Vec> bad(2, Vec{2.0, 0.0, 0.0});
    RngStream s2(3, 1);
    CHECK_THROWS_AS(gaussian_points(3, 2, bad, 0.1, s2), std::invalid_argument);
}

TEST_CASE("sampled submatrix minimum upper-bounds the exact one") {
    for (int rep = 0; rep < 10; ++rep) {
        RngStream stream(100 + rep, 0);
        PointSet ps = gaussian_points(4, 9, {}, 1.0, stream);
        Matrix a = Matrix::from_columns(ps.points);
        const double exact = min_submatrix_sigma_exact(a);
        const double sampled = min_submatrix_sigma_sampled(a, 500, stream);
        CHECK(sampled >= exact - 1e-12);
        // exhaustive sampling budget recovers the exact value eventually
        RngStream s2(100 + rep, 1);
        const double heavy = min_submatrix_sigma_sampled(a, 20000, s2);
        CHECK(heavy == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("band union volume matches the closed form for one line in the plane") {
    // d=2, n=1: the band is {x : dist(x, span(a_1)) <= eps}, a slab of
    // half-width eps; Gaussian measure = erf(eps / sqrt(2)).
    Matrix a(2, 1);
    a(0, 0) = 3.0;
    a(1, 0) = 4.0;
    RngStream stream(11, 0);
    McEstimate e = band_union_volume(a, 0.1, 400000, stream);
    const double exact = std::erf(0.1 / std::sqrt(2.0));
    CHECK(std::abs(e.estimate - exact) < 3.5 * e.std_error + 1e-6);
    CHECK(e.std_error > 0.0);
    CHECK(e.std_error < 0.01);
}

TEST_CASE("band union volume respects monotonicity and the union bound") {
    RngStream stream(12, 0);
    PointSet ps = gaussian_points(3, 6, {}, 1.0, stream);
    Matrix a = Matrix::from_columns(ps.points);
    McEstimate small = band_union_volume(a, 0.01, 200000, stream);
    RngStream s2(12, 1);
    McEstimate big = band_union_volume(a, 0.05, 200000, s2);
    CHECK(big.estimate >= small.estimate);
    // union bound with slack: 15 spans, each a slab of measure <= 2eps/sqrt(2pi)
    const double ub = 15 * 2 * 0.05 / std::sqrt(2 * M_PI);
    CHECK(big.estimate <= ub + 3 * big.std_error);
}

TEST_CASE("pair band estimate vs closed form in two dimensions") {
    // Orthogonal u,v: measure of the intersection factorizes exactly.
    Vec u{1.0, 0.0}, v{0.0, 1.0};
    const double eps = 0.3, cs = 0.2, ct = -0.5;
    RngStream stream(13, 0);
    BandPairResult r = band_pair_measure_check(u, v, cs, ct, eps, 400000, stream);
    const double exact = (normal_cdf(cs + eps) - normal_cdf(cs)) *
                         (normal_cdf(ct + eps) - normal_cdf(ct));
    CHECK(std::abs(r.estimate - exact) < 3.5 * r.std_error + 1e-6);
    CHECK(r.bound == doctest::Approx(eps * eps / std::sqrt(2 * M_PI)));
    CHECK(r.pass);
    // near-parallel directions are rejected
    Vec w{1.0, 1e-14};
    RngStream s2(13, 1);
    CHECK_THROWS_AS(band_pair_measure_check(u, scaled(w, 1.0 / norm(w)), 0, 0, 0.1, 10, s2),
                    std::invalid_argument);
}

TEST_CASE("constant-weight code: exhaustive small case and guarantees") {
    // n=4, w=2, t=2: greedy over 0011,0101,0110,1001,1010,1100 keeps words at
    // pairwise distance >= 2; all six have pairwise distance 2 or 4, so all stay.
    std::vector<std::uint32_t> code = gv_code(4, 2, 2);
    CHECK(code.size() == 6);
    // t=1 keeps every weight-w word
    CHECK(gv_code(5, 1, 2).size() == 10);
    // t=3 on n=4,w=2: only distance-4 pairs survive -> complementary pairs,
    // greedy keeps 0011 then 1100, rejects the rest except disjoint supports
    std::vector<std::uint32_t> c3 = gv_code(4, 3, 2);
    for (size_t i = 0; i < c3.size(); ++i)
        for (size_t j = i + 1; j < c3.size(); ++j)
            CHECK(std::popcount(c3[i] ^ c3[j]) >= 3);
    CHECK(c3.size() >= static_cast<size_t>(std::ceil(gv_lower_bound(4, 3, 2) - 1e-9)));
    // every word has the advertised weight and distance over a larger sweep
    for (int n : {6, 9})
        for (int w = 1; w <= n / 2; ++w)
            for (int t = 1; t <= n; ++t) {
                std::vector<std::uint32_t> c = gv_code(n, t, w);
                CHECK(c.size() >= gv_lower_bound(n, t, w) - 1e-9);
                for (std::uint32_t word : c) CHECK(std::popcount(word) == w);
                for (size_t i = 0; i < c.size(); ++i)
                    for (size_t j = i + 1; j < c.size(); ++j)
                        REQUIRE(std::popcount(c[i] ^ c[j]) >= t);
            }
}

TEST_CASE("regular simplex means are unit, equidistant, centered") {
    for (int d : {2, 3, 6, 10}) {
        std::vector<Vec> m = regular_simplex_means(d);
        REQUIRE(static_cast<int>(m.size()) == d + 1);
        Vec c(d, 0.0);
        for (const Vec& p : m) {
            CHECK(norm(p) == doctest::Approx(1.0).epsilon(1e-12));
            for (int k = 0; k < d; ++k) c[k] += p[k];
        }
        CHECK(norm(c) < 1e-10);
        const double side = norm(sub(m[0], m[1]));
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = i + 1; j < m.size(); ++j)
                CHECK(norm(sub(m[i], m[j])) == doctest::Approx(side).epsilon(1e-12));
    }
}

TEST_CASE("simplex trial: deterministic, consistent with exact measures") {
    const int d = 4;
    std::vector<Vec> means = regular_simplex_means(d);
    SimplexTrial a = smoothed_simplex_trial(d, 0.1, means, 77, 3);
    SimplexTrial b = smoothed_simplex_trial(d, 0.1, means, 77, 3);
    REQUIRE(a.valid);
    CHECK(a.minwidth_lb == b.minwidth_lb);
    CHECK(a.diam == b.diam);
    CHECK(a.phi == b.phi);
    // centroid-ball width bound is a genuine lower bound on the facial distance
    CHECK(a.minwidth_lb > 0.0);
    CHECK(a.minwidth_lb <= a.phi + 1e-12);
    CHECK(a.kappa_lb == doctest::Approx(a.minwidth_lb / a.diam));
    // diameter close to the unperturbed side length for small sigma
    const double side = norm(sub(means[0], means[1]));
    CHECK(std::abs(a.diam - side) < 1.0);
}

TEST_CASE("vf trial: deterministic and within hull invariants") {
    VfTrial a = random_polytope_vf_trial(8, 0.5, 21, 5);
    VfTrial b = random_polytope_vf_trial(8, 0.5, 21, 5);
    REQUIRE(a.valid);
    CHECK(a.vf == b.vf);
    CHECK(a.diam == b.diam);
    CHECK(a.facet_count == b.facet_count);
    CHECK(a.vf > 0.0);
    CHECK(a.facet_count >= 5);  // at least a simplex in R^4
    CHECK_THROWS_AS(random_polytope_vf_trial(2, 0.5, 21, 0), std::invalid_argument);
}

TEST_CASE("config parsing validates keys and values") {
    std::map<std::string, std::string> kv{{"experiment", "smoothed_simplex"},
                                          {"d", "8"},
                                          {"sigma", "0.1"},
                                          {"delta", "0.25"},
                                          {"trials", "10"},
                                          {"seed", "5"}};
    ExperimentConfig cfg = parse_experiment_config(kv);
    CHECK(cfg.d == 8);
    CHECK(cfg.sigma == doctest::Approx(0.1));
    CHECK(cfg.seed == 5);
    kv["bogus"] = "1";
    CHECK_THROWS_AS(parse_experiment_config(kv), std::invalid_argument);
    kv.erase("bogus");
    kv["experiment"] = "no_such_experiment";
    CHECK_THROWS_AS(parse_experiment_config(kv), std::invalid_argument);
    kv["experiment"] = "smoothed_simplex";
    kv["delta"] = "1.5";
    CHECK_THROWS_AS(parse_experiment_config(kv), std::invalid_argument);
    kv["delta"] = "0.25";
    kv["d"] = "8x";
    CHECK_THROWS_AS(parse_experiment_config(kv), std::invalid_argument);
}

TEST_CASE("run_experiment is deterministic and thread-count invariant") {
    ExperimentConfig cfg;
    cfg.name = "smoothed_simplex";
    cfg.d = 3;
    cfg.sigma = 0.15;
    cfg.delta = 0.25;
    cfg.trials = 24;
    cfg.seed = 1234;
    cfg.jobs = 1;
    ExperimentResult a = run_experiment(cfg);
    cfg.jobs = 4;
    ExperimentResult b = run_experiment(cfg);
    REQUIRE(a.trials.size() == b.trials.size());
    for (size_t i = 0; i < a.trials.size(); ++i)
        CHECK(a.trials[i].values == b.trials[i].values);
    REQUIRE(a.summary.size() == b.summary.size());
    for (size_t i = 0; i < a.summary.size(); ++i) {
        CHECK(a.summary[i].first == b.summary[i].first);
        CHECK(a.summary[i].second == b.summary[i].second);
    }
    // summary recomputable from the raw trials alone (report path)
    auto agg = summarize_trials(cfg.name, a.columns, a.trials);
    for (const auto& [k, v] : agg) {
        auto it = std::find_if(a.summary.begin(), a.summary.end(),
                               [&](const auto& p) { return p.first == k; });
        REQUIRE(it != a.summary.end());
        CHECK(it->second == v);
    }
}

TEST_CASE("sigma_decay experiment produces per-dimension medians and a slope") {
    ExperimentConfig cfg;
    cfg.name = "sigma_decay";
    cfg.d_min = 3;
    cfg.d_max = 6;
    cfg.trials = 20;
    cfg.seed = 2024;
    cfg.jobs = 2;
    ExperimentResult r = run_experiment(cfg);
    CHECK(r.trials.size() == 80);
    auto find = [&](const std::string& k) {
        auto it = std::find_if(r.summary.begin(), r.summary.end(),
                               [&](const auto& p) { return p.first == k; });
        REQUIRE(it != r.summary.end());
        return it->second;
    };
    for (int d = 3; d <= 6; ++d) CHECK(find("median_d" + std::to_string(d)) > 0.0);
    CHECK(find("overall_min") > 0.0);
    (void)find("log_slope");
}

TEST_CASE("probability toolkit checks all pass") {
    RngStream stream(31337, 0);
    std::vector<CheckResult> checks = stats_toolkit_checks(stream);
    CHECK(checks.size() >= 10);
    for (const CheckResult& c : checks) {
        INFO(c.name, " statistic=", c.statistic, " threshold=", c.threshold);
        CHECK(c.pass);
    }
}
