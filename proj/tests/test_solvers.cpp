#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fwpoly/solvers.hpp"

using namespace fwpoly;

namespace {

PointSet random_points(std::mt19937_64& rng, int d, int n) {
    std::normal_distribution<double> g;
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) {
        Vec p(d);
        for (double& x : p) x = g(rng);
        pts.push_back(p);
    }
    return PointSet(d, std::move(pts));
}

// Brute-force min-norm point: over all vertex subsets, take the affine
// minimizer when its weights are nonnegative (a feasible hull point), and
// keep the best. The optimum lies in some face's relative interior, so it is
// among the candidates; every candidate is feasible, so the min is exact.
Vec brute_force_mnp(const PointSet& vs) {
    const int n = vs.size();
    Vec best;
    double best_n2 = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> S;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) S.push_back(i);
        const int m = static_cast<int>(S.size());
        Vec alpha(m, 0.0);
        if (m == 1) {
            alpha[0] = 1.0;
        } else {
            const Vec& ak = vs.points[S[m - 1]];
            std::vector<Vec> bcols;
            for (int i = 0; i < m - 1; ++i) bcols.push_back(sub(vs.points[S[i]], ak));
            Matrix b = Matrix::from_columns(bcols);
            Vec w = solve_least_squares(b, scaled(ak, -1.0));
            double ws = 0.0;
            for (int i = 0; i < m - 1; ++i) {
                alpha[i] = w[i];
                ws += w[i];
            }
            alpha[m - 1] = 1.0 - ws;
        }
        bool feasible = true;
        for (double a : alpha)
            if (a < -1e-12) feasible = false;
        if (!feasible) continue;
        Vec x(vs.dim, 0.0);
        for (int i = 0; i < m; ++i) axpy(alpha[i], vs.points[S[i]], x);
        const double n2 = dot(x, x);
        if (n2 < best_n2) {
            best_n2 = n2;
            best = x;
        }
    }
    return best;
}

void check_certificate(const PointSet& vs, const SolveResult& r, double tol) {
    // reconstruction
    Vec x(vs.dim, 0.0);
    double wsum = 0.0;
    for (size_t i = 0; i < r.certificate.active_indices.size(); ++i) {
        axpy(r.certificate.weights[i], vs.points[r.certificate.active_indices[i]], x);
        wsum += r.certificate.weights[i];
        CHECK(r.certificate.weights[i] > 0.0);
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(norm(sub(x, r.x)) <= 1e-10 * std::max(1.0, norm(r.x)));
    // min-norm optimality: <x,a_i> >= ||x||^2 - tol, equality on active set
    const double xx = dot(r.x, r.x);
    const double slack = tol * std::max(1.0, xx);
    for (const Vec& a : vs.points) CHECK(dot(r.x, a) >= xx - slack - 1e-12);
    for (int idx : r.certificate.active_indices)
        CHECK(std::abs(dot(r.x, vs.points[idx]) - xx) <= 10 * slack + 1e-9);
}

}  // namespace

TEST_CASE("lmo basics and exhaustive pin") {
    PointSet seg(2, {{0, 0}, {1, 0}});
    CHECK(lmo(seg, {1, 0}) == 0);
    CHECK(lmo(seg, {-1, 0}) == 1);

    std::mt19937_64 rng(3);
    PointSet ps = random_points(rng, 3, 10);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
        Vec dir(3);
        for (double& v : dir) v = g(rng);
        int best = 0;
        for (int i = 1; i < 10; ++i)
            if (dot(dir, ps.points[i]) < dot(dir, ps.points[best])) best = i;
        CHECK(lmo(ps, dir) == best);
    }
}

TEST_CASE("quadratic objective validation and constants") {
    QuadraticObjective mn = QuadraticObjective::min_norm(3);
    CHECK(mn.mu == doctest::Approx(1.0));
    CHECK(mn.l == doctest::Approx(1.0));

    Matrix q(2, 2);
    q(0, 0) = 2;
    q(1, 1) = 0.5;
    QuadraticObjective obj(q, {0, 0});
    CHECK(obj.mu == doctest::Approx(0.5));
    CHECK(obj.l == doctest::Approx(2.0));

    Matrix asym(2, 2);
    asym(0, 1) = 1;
    CHECK_THROWS(QuadraticObjective(asym, {0, 0}));
    Matrix neg = Matrix::identity(2);
    neg(0, 0) = -1;
    CHECK_THROWS(QuadraticObjective(neg, {0, 0}));
}

TEST_CASE("fw variants on the segment") {
    PointSet seg(2, {{1, 0}, {0, 1}});
    QuadraticObjective mn = QuadraticObjective::min_norm(2);
    for (auto solver : {fw_away, fw_pairwise, fw_vanilla}) {
        SolveResult r = solver(seg, mn, {}, 200, 1e-9);
        CHECK(r.trace.converged);
        CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-4));
        CHECK(r.x[1] == doctest::Approx(0.5).epsilon(1e-4));
    }
    QuadraticObjective tgt = QuadraticObjective::distance_to({2, 0});
    for (auto solver : {fw_away, fw_pairwise, fw_vanilla}) {
        SolveResult r = solver(seg, tgt, {}, 200, 1e-9);
        CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.x[1] == doctest::Approx(0.0).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("fw reaches 0 on polygons containing the origin") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        // star-shaped vertex set around 0: one vertex per angular sector
        std::vector<Vec> pts;
        for (int i = 0; i < 5; ++i) {
            const double ang = 2 * M_PI * (i + 0.1 + 0.8 * u(rng)) / 5;
            const double rad = 0.5 + u(rng);
            pts.push_back({rad * std::cos(ang), rad * std::sin(ang)});
        }
        PointSet ps(2, pts);
        QuadraticObjective mn = QuadraticObjective::min_norm(2);
        for (auto solver : {fw_away, fw_pairwise}) {
            SolveResult r = solver(ps, mn, {}, 2000, 1e-10);
            CHECK(r.trace.converged);
            CHECK(dot(r.x, r.x) <= 1e-10);
        }
    }
}

TEST_CASE("monotone descent and gap soundness") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        PointSet ps = random_points(rng, 3, 7);
        QuadraticObjective mn = QuadraticObjective::min_norm(3);
        const double fstar = 0.5 * dot(brute_force_mnp(ps), brute_force_mnp(ps));
        for (auto solver : {fw_away, fw_pairwise, fw_vanilla}) {
            SolveResult r = solver(ps, mn, {}, 500, 1e-9);
            for (size_t i = 1; i < r.trace.records.size(); ++i)
                CHECK(r.trace.records[i].objective <=
                      r.trace.records[i - 1].objective + 1e-12);
            for (const TraceRecord& rec : r.trace.records) {
                CHECK(rec.gap >= -1e-12);
                CHECK(rec.objective - fstar <= rec.gap + 1e-9);
            }
        }
    }
}

TEST_CASE("vanilla fw sublinear gap decay on a face-interior optimum") {
    // optimum (0,0) in the interior of the edge [(-1,0),(1,0)]; starting at
    // the apex forces the classic zigzag between the two base vertices
    PointSet tri(2, {{-1, 0}, {1, 0}, {0, 1}});
    QuadraticObjective mn = QuadraticObjective::min_norm(2);
    SolveResult r = fw_vanilla(tri, mn, {0, 0, 1}, 3000, 1e-14);
    // fit slope of log(gap) vs log(t) over the tail; expect roughly -1
    std::vector<double> xs, ys;
    for (size_t t = 10; t < r.trace.records.size(); ++t) {
        if (r.trace.records[t].gap <= 0) break;
        xs.push_back(std::log(double(t)));
        ys.push_back(std::log(r.trace.records[t].gap));
    }
    REQUIRE(xs.size() > 50);
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    CHECK(slope < -0.7);
    CHECK(slope > -1.5);
}

TEST_CASE("wolfe_mnp hand examples") {
    SolveResult r1 = wolfe_mnp(PointSet(2, {{1, 0}, {0, 1}}), 1e-10);
    CHECK(r1.x[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(r1.x[1] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(dot(r1.x, r1.x) == doctest::Approx(0.5).epsilon(1e-8));

    SolveResult r2 = wolfe_mnp(PointSet(2, {{1, 1}, {2, 1}, {1, 2}}), 1e-10);
    CHECK(r2.x[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r2.x[1] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("wolfe_mnp vs brute-force oracle with certificates") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int n = d + 1 + static_cast<int>(rng() % 5);
        PointSet ps = random_points(rng, d, n);
        SolveResult r = wolfe_mnp(ps, 1e-10);
        CHECK(r.trace.converged);
        Vec oracle = brute_force_mnp(ps);
        CHECK(norm(sub(r.x, oracle)) <= 1e-8 * std::max(1.0, norm(oracle)) + 1e-8);
        check_certificate(ps, r, 1e-10);
    }
}

TEST_CASE("wolfe_mnp equals fw_away optimum on min-norm instances") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        PointSet ps = random_points(rng, 3, 8);
        SolveResult w = wolfe_mnp(ps, 1e-12);
        SolveResult f = fw_away(ps, QuadraticObjective::min_norm(3), {}, 20000, 1e-13);
        CHECK(norm(sub(w.x, f.x)) <= 1e-7 * std::max(1.0, norm(w.x)) + 1e-7);
    }
}

TEST_CASE("polytope_distance") {
    CHECK(polytope_distance({{0, 0}}, {{3, 4}}, 1e-10) == doctest::Approx(5.0));
    // overlapping unit squares shifted by (0.5, 0.5)
    std::vector<Vec> sq1{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    std::vector<Vec> sq2;
    for (const Vec& p : sq1) sq2.push_back(add(p, {0.5, 0.5}));
    CHECK(polytope_distance(sq1, sq2, 1e-10) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(polytope_distance({{0, 0}, {1, 0}}, {{2, 1}}, 1e-10) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("input validation") {
    PointSet seg(2, {{1, 0}, {0, 1}});
    CHECK_THROWS(fw_away(seg, QuadraticObjective::min_norm(2), {}, 100, 0.0));
    CHECK_THROWS(fw_away(seg, QuadraticObjective::min_norm(2), {0.5, 0.6}, 100, 1e-9));
    CHECK_THROWS(wolfe_mnp(seg, -1.0));
}
