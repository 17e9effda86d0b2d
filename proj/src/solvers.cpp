#include "fwpoly/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fwpoly {

namespace {

// Signed extreme eigenvalues of a symmetric matrix via its SVD: the sign of
// eigenvalue |sigma_i| is the sign of the Rayleigh quotient at v_i.
void symmetric_eigen_range(const Matrix& q, double& emin, double& emax) {
    SvdResult s = svd(q);
    emin = std::numeric_limits<double>::infinity();
    emax = -emin;
    const int n = q.cols;
    for (int k = 0; k < n; ++k) {
        Vec v = s.v.col(k);
        double rq = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rq += v[i] * q(i, j) * v[j];
        emin = std::min(emin, rq);
        emax = std::max(emax, rq);
    }
}

}  // namespace

QuadraticObjective::QuadraticObjective(Matrix q_in, Vec c_in)
    : q(std::move(q_in)), c(std::move(c_in)) {
    if (q.rows != q.cols) throw std::invalid_argument("QuadraticObjective: Q must be square");
    if (static_cast<int>(c.size()) != q.rows)
        throw std::invalid_argument("QuadraticObjective: c dimension mismatch");
    const double scale = std::max(1.0, q.frobenius_norm());
    for (int i = 0; i < q.rows; ++i)
        for (int j = i + 1; j < q.cols; ++j)
            if (std::abs(q(i, j) - q(j, i)) > 1e-12 * scale)
                throw std::invalid_argument("QuadraticObjective: Q not symmetric");
    symmetric_eigen_range(q, mu, l);
    if (mu < -1e-10 * scale) throw std::invalid_argument("QuadraticObjective: Q not PSD");
    mu = std::max(mu, 0.0);
    l = std::max(l, mu);
}

QuadraticObjective QuadraticObjective::distance_to(const Vec& b) {
    return QuadraticObjective(Matrix::identity(static_cast<int>(b.size())), scaled(b, -1.0));
}

QuadraticObjective QuadraticObjective::min_norm(int dim) {
    return QuadraticObjective(Matrix::identity(dim), Vec(dim, 0.0));
}

double QuadraticObjective::value(const Vec& x) const {
    double v = dot(c, x);
    for (int i = 0; i < q.rows; ++i)
        for (int j = 0; j < q.cols; ++j) v += 0.5 * x[i] * q(i, j) * x[j];
    return v;
}

Vec QuadraticObjective::gradient(const Vec& x) const {
    Vec g = c;
    for (int i = 0; i < q.rows; ++i)
        for (int j = 0; j < q.cols; ++j) g[i] += q(i, j) * x[j];
    return g;
}

int lmo(const PointSet& vertices, const Vec& direction) {
    if (vertices.size() == 0) throw std::invalid_argument("lmo: empty vertex set");
    int best = 0;
    double best_v = dot(direction, vertices.points[0]);
    for (int i = 1; i < vertices.size(); ++i) {
        const double v = dot(direction, vertices.points[i]);
        if (v < best_v) {
            best = i;
            best_v = v;
        }
    }
    return best;
}

namespace {

Vec combine(const PointSet& vs, const Vec& lambda) {
    Vec x(vs.dim, 0.0);
    for (int i = 0; i < vs.size(); ++i)
        if (lambda[i] != 0.0) axpy(lambda[i], vs.points[i], x);
    return x;
}

Certificate make_certificate(const Vec& lambda, double residual) {
    Certificate cert;
    cert.residual = residual;
    for (size_t i = 0; i < lambda.size(); ++i)
        if (lambda[i] > 0.0) {
            cert.active_indices.push_back(static_cast<int>(i));
            cert.weights.push_back(lambda[i]);
        }
    return cert;
}

enum class Variant { vanilla, away, pairwise };

SolveResult fw_run(Variant variant, const PointSet& vs, const QuadraticObjective& obj,
                   Vec lambda, int max_iter, double tol) {
    if (tol <= 0) throw std::invalid_argument("frank-wolfe: tol must be > 0");
    if (vs.dim != obj.q.rows) throw std::invalid_argument("frank-wolfe: dimension mismatch");
    const int n = vs.size();
    if (lambda.empty()) {
        lambda.assign(n, 0.0);
        lambda[0] = 1.0;
    }
    if (static_cast<int>(lambda.size()) != n)
        throw std::invalid_argument("frank-wolfe: weight vector size mismatch");
    double lsum = 0.0;
    for (double w : lambda) {
        if (w < -1e-12) throw std::invalid_argument("frank-wolfe: negative initial weight");
        lsum += w;
    }
    if (std::abs(lsum - 1.0) > 1e-9)
        throw std::invalid_argument("frank-wolfe: initial weights must sum to 1");

    SolveResult res;
    Vec x = combine(vs, lambda);
    res.trace.x0 = x;

    auto quad_form = [&](const Vec& d) {
        double v = 0.0;
        for (int i = 0; i < vs.dim; ++i)
            for (int j = 0; j < vs.dim; ++j) v += d[i] * obj.q(i, j) * d[j];
        return v;
    };

    for (int it = 0; it < max_iter; ++it) {
        Vec grad = obj.gradient(x);
        const int s = lmo(vs, grad);
        const double gap = dot(grad, x) - dot(grad, vs.points[s]);
        TraceRecord rec;
        rec.x = x;
        rec.objective = obj.value(x);
        rec.gap = gap;
        if (gap <= tol) {
            rec.step = StepType::fw;
            rec.step_length = 0.0;
            res.trace.records.push_back(rec);
            res.trace.converged = true;
            break;
        }

        // Away vertex: max gradient among active vertices (lowest index ties).
        int a = -1;
        double a_val = -std::numeric_limits<double>::infinity();
        if (variant != Variant::vanilla) {
            for (int i = 0; i < n; ++i)
                if (lambda[i] > 0.0) {
                    const double v = dot(grad, vs.points[i]);
                    if (v > a_val) {
                        a = i;
                        a_val = v;
                    }
                }
        }

        Vec dir;
        double gamma_max = 1.0;
        bool is_away = false;
        if (variant == Variant::pairwise) {
            dir = sub(vs.points[s], vs.points[a]);
            gamma_max = lambda[a];
        } else if (variant == Variant::away) {
            Vec d_fw = sub(vs.points[s], x);
            Vec d_aw = sub(x, vs.points[a]);
            if (dot(grad, d_fw) <= dot(grad, d_aw)) {
                dir = d_fw;
            } else {
                dir = d_aw;
                is_away = true;
                gamma_max = (lambda[a] < 1.0) ? lambda[a] / (1.0 - lambda[a])
                                              : std::numeric_limits<double>::infinity();
            }
        } else {
            dir = sub(vs.points[s], x);
        }

        const double slope = -dot(grad, dir);  // > 0 for a descent direction
        const double curv = quad_form(dir);
        double gamma = (curv > 0) ? slope / curv : gamma_max;
        bool drop = false;
        if (gamma >= gamma_max) {
            gamma = gamma_max;
            drop = is_away || variant == Variant::pairwise;
        }
        if (!std::isfinite(gamma)) gamma = 0.0;

        // Weight update keeps the convex representation exact.
        if (variant == Variant::pairwise) {
            lambda[s] += gamma;
            lambda[a] -= gamma;
            if (lambda[a] < 1e-15) lambda[a] = 0.0;
        } else if (is_away) {
            for (double& w : lambda) w *= (1.0 + gamma);
            lambda[a] -= gamma;
            if (lambda[a] < 1e-15) lambda[a] = 0.0;
        } else {
            for (double& w : lambda) w *= (1.0 - gamma);
            lambda[s] += gamma;
            drop = false;
        }
        double ws = 0.0;
        for (double w : lambda) ws += w;
        if (std::abs(ws - 1.0) > 1e-12)
            for (double& w : lambda) w /= ws;

        x = combine(vs, lambda);
        rec.step = drop ? StepType::drop
                        : (variant == Variant::pairwise
                               ? StepType::pairwise
                               : (is_away ? StepType::away : StepType::fw));
        rec.step_length = gamma;
        res.trace.records.push_back(rec);
    }

    res.x = x;
    {
        Vec grad = obj.gradient(x);
        const int s = lmo(vs, grad);
        res.trace.final_residual = std::max(0.0, dot(grad, x) - dot(grad, vs.points[s]));
    }
    res.certificate = make_certificate(lambda, res.trace.final_residual);
    return res;
}

}  // namespace

SolveResult fw_away(const PointSet& vs, const QuadraticObjective& obj, Vec x0_weights,
                    int max_iter, double tol) {
    return fw_run(Variant::away, vs, obj, std::move(x0_weights), max_iter, tol);
}

SolveResult fw_pairwise(const PointSet& vs, const QuadraticObjective& obj, Vec x0_weights,
                        int max_iter, double tol) {
    return fw_run(Variant::pairwise, vs, obj, std::move(x0_weights), max_iter, tol);
}

SolveResult fw_vanilla(const PointSet& vs, const QuadraticObjective& obj, Vec x0_weights,
                       int max_iter, double tol) {
    return fw_run(Variant::vanilla, vs, obj, std::move(x0_weights), max_iter, tol);
}

SolveResult wolfe_mnp(const PointSet& vs, double tol) {
    if (tol <= 0) throw std::invalid_argument("wolfe_mnp: tol must be > 0");
    const int n = vs.size();
    if (n == 0) throw std::invalid_argument("wolfe_mnp: empty vertex set");

    // Affine minimizer of ||y|| over aff{a_i : i in S}: y = a_k + B w with
    // B = (a_i - a_k), w from least squares; returns affine weights.
    auto affine_min_weights = [&](const std::vector<int>& S) {
        const int m = static_cast<int>(S.size());
        Vec alpha(m, 0.0);
        if (m == 1) {
            alpha[0] = 1.0;
            return alpha;
        }
        const Vec& ak = vs.points[S[m - 1]];
        std::vector<Vec> bcols;
        for (int i = 0; i < m - 1; ++i) bcols.push_back(sub(vs.points[S[i]], ak));
        Matrix b = Matrix::from_columns(bcols);
        Vec w = solve_least_squares(b, scaled(ak, -1.0));
        double wsum = 0.0;
        for (int i = 0; i < m - 1; ++i) {
            alpha[i] = w[i];
            wsum += w[i];
        }
        alpha[m - 1] = 1.0 - wsum;
        return alpha;
    };

    std::vector<int> S;
    Vec lam;  // weights aligned with S
    {
        int j0 = 0;
        double best = dot(vs.points[0], vs.points[0]);
        for (int i = 1; i < n; ++i) {
            const double v = dot(vs.points[i], vs.points[i]);
            if (v < best) {
                best = v;
                j0 = i;
            }
        }
        S.push_back(j0);
        lam.push_back(1.0);
    }
    Vec x = vs.points[S[0]];

    SolveResult res;
    res.trace.x0 = x;
    const long long cap =
        (n <= 16) ? std::max(1000LL, (1LL << n) * 4) : 200000LL;
    long long iters = 0;
    bool converged = false;

    while (true) {
        if (++iters > cap)
            throw std::runtime_error("wolfe_mnp: iteration cap exceeded (possible cycling)");
        const double xx = dot(x, x);
        const int j = lmo(vs, x);
        const double xj = dot(x, vs.points[j]);
        TraceRecord rec;
        rec.x = x;
        rec.objective = 0.5 * xx;
        rec.gap = xx - xj;
        rec.step = StepType::fw;
        res.trace.records.push_back(rec);
        if (xj >= xx - tol * std::max(1.0, xx)) {
            converged = true;
            break;
        }
        if (std::find(S.begin(), S.end(), j) == S.end()) {
            S.push_back(j);
            lam.push_back(0.0);
        }

        // Minor cycles.
        while (true) {
            if (++iters > cap)
                throw std::runtime_error("wolfe_mnp: iteration cap exceeded (possible cycling)");
            Vec alpha = affine_min_weights(S);
            bool interior = true;
            for (double a : alpha)
                if (a <= 1e-12) interior = false;
            if (interior) {
                lam = alpha;
                break;
            }
            double theta = 1.0;
            for (size_t i = 0; i < S.size(); ++i)
                if (alpha[i] <= 1e-12 && lam[i] > alpha[i])
                    theta = std::min(theta, lam[i] / (lam[i] - alpha[i]));
            for (size_t i = 0; i < S.size(); ++i)
                lam[i] = (1.0 - theta) * lam[i] + theta * alpha[i];
            std::vector<int> ns;
            Vec nl;
            for (size_t i = 0; i < S.size(); ++i)
                if (lam[i] > 1e-12) {
                    ns.push_back(S[i]);
                    nl.push_back(lam[i]);
                }
            S = std::move(ns);
            lam = std::move(nl);
            double sum = 0.0;
            for (double w : lam) sum += w;
            for (double& w : lam) w /= sum;
        }
        x = Vec(vs.dim, 0.0);
        for (size_t i = 0; i < S.size(); ++i) axpy(lam[i], vs.points[S[i]], x);
    }

    res.x = x;
    res.trace.converged = converged;
    const double xx = dot(x, x);
    res.trace.final_residual = std::max(0.0, xx - dot(x, vs.points[lmo(vs, x)]));
    Certificate cert;
    cert.residual = res.trace.final_residual;
    for (size_t i = 0; i < S.size(); ++i)
        if (lam[i] > 0.0) {
            cert.active_indices.push_back(S[i]);
            cert.weights.push_back(lam[i]);
        }
    res.certificate = cert;
    return res;
}

double polytope_distance(const std::vector<Vec>& p_vertices,
                         const std::vector<Vec>& q_vertices, double tol) {
    if (p_vertices.empty() || q_vertices.empty())
        throw std::invalid_argument("polytope_distance: empty vertex set");
    const int d = static_cast<int>(p_vertices[0].size());
    std::set<Vec> seen;
    std::vector<Vec> diff;
    for (const Vec& p : p_vertices)
        for (const Vec& q : q_vertices) {
            Vec v = sub(p, q);
            if (seen.insert(v).second) diff.push_back(v);
        }
    SolveResult r = wolfe_mnp(PointSet(d, diff), tol);
    return norm(r.x);
}

}  // namespace fwpoly
