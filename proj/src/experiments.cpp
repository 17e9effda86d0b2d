#include "fwpoly/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "fwpoly/conditioning.hpp"
#include "fwpoly/stats.hpp"

namespace fwpoly {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> sel(k);
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == k) {
            fn(sel);
            return;
        }
        for (int i = start; i < n; ++i) {
            sel[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
}

// Run fn(trial_index) for indices [0, count) on `jobs` threads. Results must
// be written to per-index slots by fn; aggregation order stays deterministic.
void parallel_trials(long long count, int jobs, const std::function<void(long long)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const long long i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

PointSet gaussian_points(int d, int n, const std::vector<Vec>& means, double sigma,
                         RngStream& stream) {
    if (sigma <= 0) throw std::invalid_argument("gaussian_points: sigma must be > 0");
    if (!means.empty() && static_cast<int>(means.size()) != n)
        throw std::invalid_argument("gaussian_points: means count mismatch");
    for (const Vec& m : means)
        if (norm(m) > 1.0 + 1e-12)
            throw std::invalid_argument("gaussian_points: mean norm exceeds 1");
    std::vector<Vec> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec p(d);
        for (int j = 0; j < d; ++j)
            p[j] = (means.empty() ? 0.0 : means[i][j]) + sigma * stream.gaussian();
        pts.push_back(std::move(p));
    }
    return PointSet(d, std::move(pts));
}

double min_submatrix_sigma_exact(const Matrix& a) {
    const int d = a.rows, n = a.cols;
    if (n < d) throw std::invalid_argument("min_submatrix_sigma: need n >= d");
    if (binom(n, d) > 2e6)
        throw CapExceeded("min_submatrix_sigma: C(n,d) exceeds 2e6, use sampled mode");
    double best = std::numeric_limits<double>::infinity();
    for_each_subset(n, d, [&](const std::vector<int>& sel) {
        std::vector<Vec> cols;
        cols.reserve(d);
        for (int j : sel) cols.push_back(a.col(j));
        best = std::min(best, min_singular_value(Matrix::from_columns(cols)));
    });
    return best;
}

double min_submatrix_sigma_sampled(const Matrix& a, long long k, RngStream& stream) {
    const int d = a.rows, n = a.cols;
    if (n < d) throw std::invalid_argument("min_submatrix_sigma: need n >= d");
    if (k <= 0) throw std::invalid_argument("min_submatrix_sigma: sample count must be > 0");
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(n);
    for (long long it = 0; it < k; ++it) {
        // partial Fisher-Yates draw of a uniform d-subset
        for (int i = 0; i < n; ++i) idx[i] = i;
        for (int i = 0; i < d; ++i) {
            const int j = i + static_cast<int>(stream.next_u64() % (n - i));
            std::swap(idx[i], idx[j]);
        }
        std::vector<Vec> cols;
        cols.reserve(d);
        for (int i = 0; i < d; ++i) cols.push_back(a.col(idx[i]));
        best = std::min(best, min_singular_value(Matrix::from_columns(cols)));
    }
    return best;
}

McEstimate band_union_volume(const Matrix& a, double eps, long long mc_samples,
                             RngStream& stream) {
    const int d = a.rows, n = a.cols;
    if (eps < 0) throw std::invalid_argument("band_union_volume: eps must be >= 0");
    if (d < 2) throw std::invalid_argument("band_union_volume: need d >= 2");
    if (n < d - 1) throw std::invalid_argument("band_union_volume: need n >= d-1");
    if (binom(n, d - 1) > 1e5)
        throw CapExceeded("band_union_volume: C(n,d-1) exceeds 1e5");
    // Precompute an orthonormal basis per span.
    std::vector<std::vector<Vec>> bases;
    for_each_subset(n, d - 1, [&](const std::vector<int>& sel) {
        std::vector<Vec> cols;
        for (int j : sel) cols.push_back(a.col(j));
        bases.push_back(orthonormalize(cols, 1e-12));
    });
    long long hits = 0;
    Vec x(d);
    const double eps2 = eps * eps;
    for (long long it = 0; it < mc_samples; ++it) {
        for (double& v : x) v = stream.gaussian();
        const double xx = dot(x, x);
        for (const std::vector<Vec>& q : bases) {
            double proj2 = 0.0;
            for (const Vec& b : q) {
                const double c = dot(x, b);
                proj2 += c * c;
            }
            if (xx - proj2 <= eps2) {
                ++hits;
                break;
            }
        }
    }
    McEstimate e;
    e.estimate = static_cast<double>(hits) / mc_samples;
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / mc_samples);
    return e;
}

BandPairResult band_pair_measure_check(const Vec& u, const Vec& v, double c_s, double c_t,
                                       double eps, long long mc_samples, RngStream& stream) {
    if (std::abs(norm(u) - 1.0) > 1e-9 || std::abs(norm(v) - 1.0) > 1e-9)
        throw std::invalid_argument("band_pair_measure_check: u, v must be unit length");
    const double uv = dot(u, v);
    if (std::abs(uv) >= 1.0 - 1e-12)
        throw std::invalid_argument("band_pair_measure_check: u, v parallel");
    if (eps < 0) throw std::invalid_argument("band_pair_measure_check: eps must be >= 0");
    const int d = static_cast<int>(u.size());
    long long hits = 0;
    Vec x(d);
    for (long long it = 0; it < mc_samples; ++it) {
        for (double& w : x) w = stream.gaussian();
        const double su = dot(x, u);
        if (su < c_s || su > c_s + eps) continue;
        const double sv = dot(x, v);
        if (sv >= c_t && sv <= c_t + eps) ++hits;
    }
    BandPairResult r;
    r.estimate = static_cast<double>(hits) / mc_samples;
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / mc_samples);
    r.bound = eps * eps / std::sqrt(2.0 * M_PI * (1.0 - uv * uv));
    r.pass = r.estimate <= r.bound + 3.0 * r.std_error;
    return r;
}

std::vector<std::uint32_t> gv_code(int n, int t, int w) {
    if (n < 1 || n > 24) throw std::invalid_argument("gv_code: n out of range");
    if (w < 1 || w > n) throw std::invalid_argument("gv_code: need 0 < w <= n");
    if (t < 1 || t > n) throw std::invalid_argument("gv_code: need 0 < t <= n");
    if (binom(n, w) > 1e7) throw CapExceeded("gv_code: C(n,w) exceeds 1e7");
    std::vector<std::uint32_t> kept;
    // weight-w words in lexicographic (numeric) order via Gosper's hack
    std::uint32_t word = (1u << w) - 1;
    const std::uint32_t limit = 1u << n;
    while (word < limit) {
        bool ok = true;
        for (std::uint32_t k : kept)
            if (std::popcount(k ^ word) < t) {
                ok = false;
                break;
            }
        if (ok) kept.push_back(word);
        const std::uint32_t c = word & (0u - word);
        const std::uint32_t r = word + c;
        if (r >= limit || c == 0) break;
        word = (((r ^ word) >> 2) / c) | r;
    }
    return kept;
}

double gv_lower_bound(int n, int t, int w) {
    double b = 0.0;
    for (int k = 0; k <= t; ++k) b += binom(n, k);
    return binom(n, w) / b;
}

std::vector<Vec> regular_simplex_means(int d) {
    if (d < 1) throw std::invalid_argument("regular_simplex_means: d must be >= 1");
    // e_i - centroid in R^{d+1} live in the hyperplane orthogonal to the
    // all-ones vector; express them in an orthonormal basis of it.
    std::vector<Vec> basis;
    for (int i = 0; i < d; ++i) {
        Vec v(d + 1, 0.0);
        v[i] = 1.0;
        v[d] = -1.0;
        basis.push_back(v);
    }
    std::vector<Vec> q = orthonormalize(basis, 1e-12);
    std::vector<Vec> out;
    for (int i = 0; i <= d; ++i) {
        Vec u(d + 1, -1.0 / (d + 1));
        u[i] += 1.0;
        Vec x(d);
        for (int k = 0; k < d; ++k) x[k] = dot(u, q[k]);
        out.push_back(scaled(x, 1.0 / norm(x)));
    }
    return out;
}

SimplexTrial smoothed_simplex_trial(int d, double sigma, const std::vector<Vec>& means,
                                    std::uint64_t master, std::uint64_t trial_index) {
    if (static_cast<int>(means.size()) != d + 1)
        throw std::invalid_argument("smoothed_simplex_trial: need d+1 means");
    SimplexTrial out;
    out.phi = std::numeric_limits<double>::quiet_NaN();
    for (int attempt = 0; attempt < 10; ++attempt) {
        RngStream stream(master, trial_index * 16 + attempt);
        PointSet ps = gaussian_points(d, d + 1, means, sigma, stream);
        try {
            CentroidBall cb = simplex_centroid_ball(ps.points);
            out.minwidth_lb = 2.0 * cb.radius;
            out.diam = diameter(ps);
            out.kappa_lb = out.minwidth_lb / out.diam;
            if (d <= 6) out.phi = facial_distance(convex_hull(ps));
            out.resamples = attempt;
            out.valid = true;
            return out;
        } catch (const std::exception&) {
            continue;  // degenerate draw; bump substream
        }
    }
    out.resamples = 10;
    return out;
}

VfTrial random_polytope_vf_trial(int n, double delta, std::uint64_t master,
                                 std::uint64_t trial_index) {
    if (delta <= 0 || delta >= 1)
        throw std::invalid_argument("random_polytope_vf_trial: delta must be in (0,1)");
    const int d = static_cast<int>(std::floor(delta * n));
    if (d < 2) throw std::invalid_argument("random_polytope_vf_trial: floor(delta*n) < 2");
    if (d > 10 || n > 24)
        throw CapExceeded("random_polytope_vf_trial: hull caps d <= 10, n <= 24");
    VfTrial out;
    for (int attempt = 0; attempt < 10; ++attempt) {
        RngStream stream(master, trial_index * 16 + attempt);
        PointSet ps = gaussian_points(d, n + 1, {}, 1.0, stream);
        try {
            Polytope hull = convex_hull(ps);
            out.vf = vf(hull);
            out.diam = diameter(ps);
            out.facet_count = static_cast<int>(hull.facets.size());
            out.resamples = attempt;
            out.valid = true;
            return out;
        } catch (const std::exception&) {
            continue;
        }
    }
    out.resamples = 10;
    return out;
}

std::vector<CheckResult> stats_toolkit_checks(RngStream& stream) {
    std::vector<CheckResult> out;

    // Uniform-on-sphere coordinate norm: ||(U_1..U_{d-2})|| has CDF x^{d-2}.
    for (int d : {4, 6}) {
        const int ns = 100000;
        std::vector<double> samples;
        samples.reserve(ns);
        for (int it = 0; it < ns; ++it) {
            Vec u(d);
            for (double& x : u) x = stream.gaussian();
            u = scaled(u, 1.0 / norm(u));
            double s = 0.0;
            for (int k = 0; k < d - 2; ++k) s += u[k] * u[k];
            samples.push_back(std::sqrt(s));
        }
        const int expo = d - 2;
        const double ks = ks_distance(samples, [expo](double x) {
            if (x <= 0) return 0.0;
            if (x >= 1) return 1.0;
            return std::pow(x, expo);
        });
        out.push_back({"sphere_coordinate_cdf_d" + std::to_string(d), ks <= 0.02, ks, 0.02});
    }

    // Quadratic-form tails: Z = sum alpha_i (X_i^2 - 1), alpha = ones(k).
    {
        const int k = 5;
        const long long ns = 1000000;
        const double a2 = std::sqrt(double(k)), ainf = 1.0;
        for (double t : {0.5, 1.0, 2.0}) {
            long long up = 0, dn = 0;
            for (long long it = 0; it < ns; ++it) {
                double z = 0.0;
                for (int i = 0; i < k; ++i) {
                    const double g = stream.gaussian();
                    z += g * g - 1.0;
                }
                if (z >= 2 * a2 * std::sqrt(t) + 2 * ainf * t) ++up;
                if (z <= -2 * a2 * std::sqrt(t)) ++dn;
            }
            const double bound = std::exp(-t);
            for (auto [tag, hits] : {std::pair<const char*, long long>{"upper", up},
                                     {"lower", dn}}) {
                const double p = static_cast<double>(hits) / ns;
                const double se = std::sqrt(p * (1 - p) / ns) + 1e-12;
                out.push_back({std::string("quadratic_tail_") + tag + "_t" +
                                   std::to_string(t).substr(0, 3),
                               p <= bound + 3 * se, p, bound});
            }
        }
    }

    // Noncentral vs central chi-square tail ordering (and the equivalent
    // norm version): P(sum X_i^2 >= t^2) <= P(sum (X_i+mu)^2 >= t^2).
    for (double mu : {0.5, 1.0, 2.0}) {
        for (int k : {3, 8}) {
            const long long ns = 200000;
            bool all_ok = true;
            double worst = 0.0;
            for (double t : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
                long long central = 0, noncentral = 0;
                for (long long it = 0; it < ns; ++it) {
                    double sc = 0.0, sn = 0.0;
                    for (int i = 0; i < k; ++i) {
                        const double g = stream.gaussian();
                        sc += g * g;
                        const double h = stream.gaussian() + mu;
                        sn += h * h;
                    }
                    if (sc >= t * t) ++central;
                    if (sn >= t * t) ++noncentral;
                }
                const double pc = static_cast<double>(central) / ns;
                const double pn = static_cast<double>(noncentral) / ns;
                const double se = std::sqrt((pc * (1 - pc) + pn * (1 - pn)) / ns) + 1e-12;
                worst = std::max(worst, pc - pn);
                if (pc > pn + 3 * se) all_ok = false;
            }
            out.push_back({"noncentral_tail_mu" + std::to_string(mu).substr(0, 3) + "_k" +
                               std::to_string(k),
                           all_ok, worst, 0.0});
        }
    }

    // 1-D concentration: P(|X + c| < t) <= P(|X| < t).
    for (double c : {0.5, 2.0}) {
        const long long ns = 200000;
        bool all_ok = true;
        double worst = 0.0;
        for (double t : {0.25, 0.5, 1.0, 2.0}) {
            long long central = 0, shifted = 0;
            for (long long it = 0; it < ns; ++it) {
                const double g = stream.gaussian();
                if (std::abs(g) < t) ++central;
                if (std::abs(g + c) < t) ++shifted;
            }
            const double pc = static_cast<double>(central) / ns;
            const double py = static_cast<double>(shifted) / ns;
            const double se = std::sqrt((pc * (1 - pc) + py * (1 - py)) / ns) + 1e-12;
            worst = std::max(worst, py - pc);
            if (py > pc + 3 * se) all_ok = false;
        }
        out.push_back({"shifted_ball_measure_c" + std::to_string(c).substr(0, 3), all_ok,
                       worst, 0.0});
    }

    // Inner-boundary measure of a box is monotone in eps (coupled samples).
    {
        const int d = 4;
        const long long ns = 200000;
        const std::vector<double> epss{0.05, 0.1, 0.2};
        std::vector<long long> hits(epss.size(), 0);
        Vec x(d);
        for (long long it = 0; it < ns; ++it) {
            for (double& v : x) v = stream.gaussian();
            double amax = 0.0;
            bool inside = true;
            for (double v : x) {
                amax = std::max(amax, std::abs(v));
                if (std::abs(v) > 1.0) inside = false;
            }
            if (!inside) continue;
            for (size_t e = 0; e < epss.size(); ++e)
                if (amax > 1.0 - epss[e]) ++hits[e];
        }
        bool mono = true;
        for (size_t e = 1; e < epss.size(); ++e)
            if (hits[e] < hits[e - 1]) mono = false;
        out.push_back({"box_boundary_monotone_in_eps", mono,
                       static_cast<double>(hits.back()) / ns, 0.0});
    }

    return out;
}

// --- named experiments ----------------------------------------------------

std::vector<std::string> experiment_names() {
    return {"smoothed_simplex", "sigma_decay", "vf_decay",
            "band_volume",      "band_pair",   "gv_code", "stats_toolkit"};
}

ExperimentConfig parse_experiment_config(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    static const std::set<std::string> known{"experiment", "d",       "d_min", "d_max",
                                            "n",          "delta",   "sigma", "trials",
                                            "epsilon",    "mc_samples", "seed", "jobs",
                                            "output"};
    for (const auto& [k, v] : kv)
        if (!known.count(k)) throw std::invalid_argument("unknown config key '" + k + "'");
    auto get = [&](const std::string& k) {
        auto it = kv.find(k);
        return it == kv.end() ? std::string() : it->second;
    };
    cfg.name = get("experiment");
    if (cfg.name.empty()) throw std::invalid_argument("config missing 'experiment'");
    const std::vector<std::string> names = experiment_names();
    if (std::find(names.begin(), names.end(), cfg.name) == names.end()) {
        std::string valid;
        for (const std::string& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown experiment '" + cfg.name + "' (valid: " + valid +
                                    ")");
    }
    auto to_int = [](const std::string& s, const std::string& key) {
        try {
            size_t used;
            const int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "': bad integer '" + s + "'");
        }
    };
    auto to_double = [](const std::string& s, const std::string& key) {
        try {
            size_t used;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "': bad number '" + s + "'");
        }
    };
    if (!get("d").empty()) cfg.d = to_int(get("d"), "d");
    if (!get("d_min").empty()) cfg.d_min = to_int(get("d_min"), "d_min");
    if (!get("d_max").empty()) cfg.d_max = to_int(get("d_max"), "d_max");
    if (!get("n").empty()) cfg.n = to_int(get("n"), "n");
    if (!get("delta").empty()) cfg.delta = to_double(get("delta"), "delta");
    if (!get("sigma").empty()) cfg.sigma = to_double(get("sigma"), "sigma");
    if (!get("trials").empty()) cfg.trials = to_int(get("trials"), "trials");
    if (!get("epsilon").empty()) cfg.epsilon = to_double(get("epsilon"), "epsilon");
    if (!get("mc_samples").empty())
        cfg.mc_samples = to_int(get("mc_samples"), "mc_samples");
    if (!get("seed").empty()) cfg.seed = std::stoull(get("seed"));
    if (!get("jobs").empty()) cfg.jobs = to_int(get("jobs"), "jobs");
    cfg.output = get("output");

    if (cfg.trials < 0 || cfg.mc_samples <= 0 || cfg.jobs < 1)
        throw std::invalid_argument("config: counts must be positive");
    if (!get("delta").empty() && (cfg.delta <= 0 || cfg.delta >= 1))
        throw std::invalid_argument("config: delta must be in (0,1)");
    if (!get("sigma").empty() && cfg.sigma <= 0)
        throw std::invalid_argument("config: sigma must be > 0");
    return cfg;
}

namespace {

ExperimentResult run_smoothed_simplex(const ExperimentConfig& cfg) {
    if (cfg.d < 1 || cfg.trials < 1 || cfg.sigma <= 0 || cfg.delta <= 0 || cfg.delta >= 1)
        throw std::invalid_argument("smoothed_simplex: need d, trials, sigma, delta");
    const std::vector<Vec> means = regular_simplex_means(cfg.d);
    ExperimentResult res;
    res.columns = {"trial", "minwidth_lb", "diam", "kappa_lb", "phi", "resamples", "valid"};
    res.trials.resize(cfg.trials);
    parallel_trials(cfg.trials, cfg.jobs, [&](long long i) {
        SimplexTrial t = smoothed_simplex_trial(cfg.d, cfg.sigma, means, cfg.seed, i);
        res.trials[i].values = {double(i),    t.minwidth_lb,      t.diam, t.kappa_lb,
                                t.phi,        double(t.resamples), t.valid ? 1.0 : 0.0};
    });
    res.summary = summarize_trials(cfg.name, res.columns, res.trials);
    // thresholds depend on config, append here
    const double mw_thr =
        std::sqrt(2 * M_PI) * cfg.sigma * cfg.delta / ((cfg.d + 1.0) * (cfg.d + 1.0));
    const double diam_thr =
        2 * (cfg.sigma * std::sqrt(2.0 * cfg.d + 3.0 * std::log((cfg.d + 1) / cfg.delta)) + 1.0);
    int mw_ok = 0, diam_ok = 0, valid = 0;
    for (const TrialRecord& t : res.trials) {
        if (t.values[6] == 0.0) continue;
        ++valid;
        if (t.values[1] >= mw_thr) ++mw_ok;
        if (t.values[2] <= diam_thr) ++diam_ok;
    }
    res.summary.emplace_back("minwidth_threshold", mw_thr);
    res.summary.emplace_back("diam_threshold", diam_thr);
    res.summary.emplace_back("valid_trials", valid);
    res.summary.emplace_back("frac_minwidth_ok", valid ? double(mw_ok) / valid : 0.0);
    res.summary.emplace_back("frac_diam_ok", valid ? double(diam_ok) / valid : 0.0);
    return res;
}

ExperimentResult run_sigma_decay(const ExperimentConfig& cfg) {
    const int dmin = cfg.d_min ? cfg.d_min : 4;
    const int dmax = cfg.d_max ? cfg.d_max : 10;
    if (cfg.trials < 1 || dmin < 2 || dmax < dmin)
        throw std::invalid_argument("sigma_decay: need trials, d_min <= d_max");
    ExperimentResult res;
    res.columns = {"d", "trial", "min_sigma", "sampled"};
    const int per_d = cfg.trials;
    const int nd = dmax - dmin + 1;
    res.trials.resize(static_cast<size_t>(nd) * per_d);
    parallel_trials(static_cast<long long>(nd) * per_d, cfg.jobs, [&](long long i) {
        const int d = dmin + static_cast<int>(i / per_d);
        const long long trial = i % per_d;
        const int n = 2 * d;
        RngStream stream(cfg.seed, i);
        PointSet ps = gaussian_points(d, n, {}, 1.0, stream);
        Matrix a = Matrix::from_columns(ps.points);
        const bool sampled = d > 7;
        const double v = sampled ? min_submatrix_sigma_sampled(a, 10000, stream)
                                 : min_submatrix_sigma_exact(a);
        res.trials[i].values = {double(d), double(trial), v, sampled ? 1.0 : 0.0};
    });
    res.summary = summarize_trials(cfg.name, res.columns, res.trials);
    return res;
}

ExperimentResult run_vf_decay(const ExperimentConfig& cfg) {
    const int dmin = cfg.d_min ? cfg.d_min : 3;
    const int dmax = cfg.d_max ? cfg.d_max : 8;
    const double delta = cfg.delta > 0 ? cfg.delta : 0.5;
    if (cfg.trials < 1 || dmin < 2 || dmax < dmin)
        throw std::invalid_argument("vf_decay: need trials, d_min <= d_max");
    ExperimentResult res;
    res.columns = {"d", "trial", "vf", "diam", "facet_count", "resamples", "valid"};
    const int per_d = cfg.trials;
    const int nd = dmax - dmin + 1;
    res.trials.resize(static_cast<size_t>(nd) * per_d);
    parallel_trials(static_cast<long long>(nd) * per_d, cfg.jobs, [&](long long i) {
        const int d = dmin + static_cast<int>(i / per_d);
        const long long trial = i % per_d;
        const int n = static_cast<int>(std::floor(d / delta + 1e-9));
        VfTrial t = random_polytope_vf_trial(n, delta, cfg.seed, i);
        res.trials[i].values = {double(d),           double(trial),       t.vf,
                                t.diam,              double(t.facet_count),
                                double(t.resamples), t.valid ? 1.0 : 0.0};
    });
    res.summary = summarize_trials(cfg.name, res.columns, res.trials);
    return res;
}

ExperimentResult run_band_volume(const ExperimentConfig& cfg) {
    const int trials = cfg.trials > 0 ? cfg.trials : 50;
    const double eps = cfg.epsilon > 0 ? cfg.epsilon : 0.01;
    ExperimentResult res;
    res.columns = {"trial", "d", "n", "estimate", "std_error", "bound", "pass"};
    res.trials.resize(trials);
    parallel_trials(trials, cfg.jobs, [&](long long i) {
        RngStream stream(cfg.seed, i);
        const int d = 2 + static_cast<int>(stream.next_u64() % 4);      // 2..5
        const int n = d + static_cast<int>(stream.next_u64() % (9 - d));  // d..8
        PointSet ps = gaussian_points(d, n, {}, 1.0, stream);
        Matrix a = Matrix::from_columns(ps.points);
        McEstimate e = band_union_volume(a, eps, cfg.mc_samples, stream);
        const double bound = 2 * eps / std::sqrt(2 * M_PI) * binom(n, d - 1);
        const double pass = e.estimate <= bound + 3 * e.std_error ? 1.0 : 0.0;
        res.trials[i].values = {double(i), double(d), double(n),
                                e.estimate, e.std_error, bound, pass};
    });
    res.summary = summarize_trials(cfg.name, res.columns, res.trials);
    return res;
}

ExperimentResult run_band_pair(const ExperimentConfig& cfg) {
    const int trials = cfg.trials > 0 ? cfg.trials : 50;
    ExperimentResult res;
    res.columns = {"trial", "d", "dot_uv", "eps", "estimate", "std_error", "bound", "pass"};
    res.trials.resize(trials);
    parallel_trials(trials, cfg.jobs, [&](long long i) {
        RngStream stream(cfg.seed, i);
        const int d = 2 + static_cast<int>(stream.next_u64() % 5);  // 2..6
        Vec u(d), v(d);
        double uv;
        do {
            for (double& x : u) x = stream.gaussian();
            for (double& x : v) x = stream.gaussian();
            u = scaled(u, 1.0 / norm(u));
            v = scaled(v, 1.0 / norm(v));
            uv = dot(u, v);
        } while (std::abs(uv) > 0.999);
        const double cs = -1.0 + 2.0 * stream.uniform();
        const double ct = -1.0 + 2.0 * stream.uniform();
        const double eps =
            cfg.epsilon > 0 ? cfg.epsilon : 0.02 + 0.18 * stream.uniform();
        BandPairResult r =
            band_pair_measure_check(u, v, cs, ct, eps, cfg.mc_samples, stream);
        res.trials[i].values = {double(i),  double(d),  uv,      eps,
                                r.estimate, r.std_error, r.bound, r.pass ? 1.0 : 0.0};
    });
    res.summary = summarize_trials(cfg.name, res.columns, res.trials);
    return res;
}

ExperimentResult run_gv_code(const ExperimentConfig& cfg) {
    const int nmax = cfg.n > 0 ? cfg.n : 14;
    ExperimentResult res;
    res.columns = {"n", "t", "w", "size", "lower_bound", "dist_ok", "size_ok"};
    for (int n = 2; n <= nmax; ++n)
        for (int w = 1; w <= n / 2; ++w)
            for (int t = 1; t <= n; ++t) {
                std::vector<std::uint32_t> code = gv_code(n, t, w);
                bool dist_ok = true;
                for (size_t i = 0; i < code.size() && dist_ok; ++i)
                    for (size_t j = i + 1; j < code.size(); ++j)
                        if (std::popcount(code[i] ^ code[j]) < t) {
                            dist_ok = false;
                            break;
                        }
                const double lb = gv_lower_bound(n, t, w);
                TrialRecord rec;
                rec.values = {double(n),  double(t), double(w), double(code.size()), lb,
                              dist_ok ? 1.0 : 0.0, code.size() >= lb ? 1.0 : 0.0};
                res.trials.push_back(rec);
            }
    res.summary = summarize_trials(cfg.name, res.columns, res.trials);
    return res;
}

ExperimentResult run_stats_toolkit(const ExperimentConfig& cfg) {
    RngStream stream(cfg.seed, 0);
    std::vector<CheckResult> checks = stats_toolkit_checks(stream);
    ExperimentResult res;
    res.columns = {"check", "pass", "statistic", "threshold"};
    for (size_t i = 0; i < checks.size(); ++i) {
        TrialRecord rec;
        rec.values = {double(i), checks[i].pass ? 1.0 : 0.0, checks[i].statistic,
                      checks[i].threshold};
        res.trials.push_back(rec);
        res.summary.emplace_back("pass_" + checks[i].name, checks[i].pass ? 1.0 : 0.0);
    }
    auto agg = summarize_trials(cfg.name, res.columns, res.trials);
    res.summary.insert(res.summary.end(), agg.begin(), agg.end());
    return res;
}

int column_index(const std::vector<std::string>& cols, const std::string& name) {
    auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end())
        throw std::invalid_argument("summarize_trials: missing column '" + name + "'");
    return static_cast<int>(it - cols.begin());
}

}  // namespace

std::vector<std::pair<std::string, double>> summarize_trials(
    const std::string& experiment, const std::vector<std::string>& columns,
    const std::vector<TrialRecord>& trials) {
    std::vector<std::pair<std::string, double>> s;
    s.emplace_back("trials", static_cast<double>(trials.size()));
    auto pass_fraction = [&](const std::string& col) {
        const int c = column_index(columns, col);
        long long ok = 0;
        for (const TrialRecord& t : trials)
            if (t.values[c] != 0.0) ++ok;
        return trials.empty() ? 0.0 : static_cast<double>(ok) / trials.size();
    };

    if (experiment == "smoothed_simplex") {
        const int c_mw = column_index(columns, "minwidth_lb");
        const int c_diam = column_index(columns, "diam");
        const int c_kap = column_index(columns, "kappa_lb");
        std::vector<double> mw, diam, kap;
        for (const TrialRecord& t : trials) {
            mw.push_back(t.values[c_mw]);
            diam.push_back(t.values[c_diam]);
            kap.push_back(t.values[c_kap]);
        }
        if (!mw.empty()) {
            s.emplace_back("minwidth_lb_q25", quantile(mw, 0.25));
            s.emplace_back("minwidth_lb_median", quantile(mw, 0.5));
            s.emplace_back("diam_median", quantile(diam, 0.5));
            s.emplace_back("kappa_lb_median", quantile(kap, 0.5));
        }
    } else if (experiment == "sigma_decay" || experiment == "vf_decay") {
        const int c_d = column_index(columns, "d");
        const bool is_sigma = experiment == "sigma_decay";
        const int c_v = column_index(columns, is_sigma ? "min_sigma" : "vf");
        std::map<int, std::vector<double>> by_d;
        for (const TrialRecord& t : trials) {
            if (!is_sigma && t.values[column_index(columns, "valid")] == 0.0) continue;
            by_d[static_cast<int>(t.values[c_d])].push_back(t.values[c_v]);
        }
        std::vector<double> xs, ys;
        double prev_min = 0.0;
        int trend_violations = 0;
        double overall_min = std::numeric_limits<double>::infinity();
        bool first = true;
        for (const auto& [d, vals] : by_d) {
            const double q = is_sigma ? quantile(vals, 0.5) : quantile(vals, 0.25);
            const double mn = *std::min_element(vals.begin(), vals.end());
            s.emplace_back((is_sigma ? "median_d" : "q25_d") + std::to_string(d), q);
            s.emplace_back("min_d" + std::to_string(d), mn);
            overall_min = std::min(overall_min, mn);
            if (!first && mn > prev_min) ++trend_violations;  // counts increases
            prev_min = mn;
            first = false;
            if (q > 0) {
                xs.push_back(d);
                ys.push_back(std::log(q));
            }
        }
        if (xs.size() >= 3) {
            SlopeFit fit = ols_slope(xs, ys);
            s.emplace_back("log_slope", fit.slope);
            s.emplace_back("log_slope_stderr", fit.stderr_slope);
            s.emplace_back("log_slope_ci95_half", fit.ci95_half);
            s.emplace_back("slope_negative_ci",
                           (fit.slope + fit.ci95_half < 0) ? 1.0 : 0.0);
        }
        s.emplace_back("overall_min", overall_min);
        s.emplace_back("per_d_min_increases", trend_violations);
        if (!is_sigma) {
            const int c_diam = column_index(columns, "diam");
            const int c_fc = column_index(columns, "facet_count");
            long long diam_ok = 0, valid = 0;
            std::map<int, std::vector<double>> fc_by_d;
            for (const TrialRecord& t : trials) {
                if (t.values[column_index(columns, "valid")] == 0.0) continue;
                ++valid;
                const int d = static_cast<int>(t.values[c_d]);
                if (t.values[c_diam] >= std::sqrt(double(d))) ++diam_ok;
                fc_by_d[d].push_back(t.values[c_fc]);
            }
            s.emplace_back("frac_diam_ge_sqrt_d",
                           valid ? static_cast<double>(diam_ok) / valid : 0.0);
            std::vector<double> fx, fy;
            for (const auto& [d, vals] : fc_by_d) {
                const double med = quantile(vals, 0.5);
                s.emplace_back("facet_median_d" + std::to_string(d), med);
                if (med > 0) {
                    fx.push_back(d);
                    fy.push_back(std::log(med));
                }
            }
            if (fx.size() >= 3) {
                SlopeFit fit = ols_slope(fx, fy);
                s.emplace_back("facet_log_slope", fit.slope);
                s.emplace_back("facet_log_slope_ci95_half", fit.ci95_half);
                s.emplace_back("facet_slope_positive_ci",
                               (fit.slope - fit.ci95_half > 0) ? 1.0 : 0.0);
            }
        }
    } else if (experiment == "band_volume" || experiment == "band_pair") {
        s.emplace_back("frac_pass", pass_fraction("pass"));
        s.emplace_back("all_pass", pass_fraction("pass") == 1.0 ? 1.0 : 0.0);
    } else if (experiment == "gv_code") {
        const double fd = pass_fraction("dist_ok");
        const double fs = pass_fraction("size_ok");
        s.emplace_back("frac_dist_ok", fd);
        s.emplace_back("frac_size_ok", fs);
        s.emplace_back("all_pass", (fd == 1.0 && fs == 1.0) ? 1.0 : 0.0);
    } else if (experiment == "stats_toolkit") {
        s.emplace_back("frac_pass", pass_fraction("pass"));
        s.emplace_back("all_pass", pass_fraction("pass") == 1.0 ? 1.0 : 0.0);
    }
    return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.name == "smoothed_simplex") return run_smoothed_simplex(cfg);
    if (cfg.name == "sigma_decay") return run_sigma_decay(cfg);
    if (cfg.name == "vf_decay") return run_vf_decay(cfg);
    if (cfg.name == "band_volume") return run_band_volume(cfg);
    if (cfg.name == "band_pair") return run_band_pair(cfg);
    if (cfg.name == "gv_code") return run_gv_code(cfg);
    if (cfg.name == "stats_toolkit") return run_stats_toolkit(cfg);
    throw std::invalid_argument("unknown experiment '" + cfg.name + "'");
}

}  // namespace fwpoly
