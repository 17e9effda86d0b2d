#include "fwpoly/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fwpoly {

Matrix::Matrix(int r, int c, double fill) : rows(r), cols(c) {
    if (r < 1 || c < 1) throw std::invalid_argument("Matrix: rows and cols must be >= 1");
    data.assign(static_cast<size_t>(r) * c, fill);
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& columns) {
    if (columns.empty()) throw std::invalid_argument("from_columns: empty");
    const int r = static_cast<int>(columns[0].size());
    Matrix m(r, static_cast<int>(columns.size()));
    for (int j = 0; j < m.cols; ++j) {
        if (static_cast<int>(columns[j].size()) != r)
            throw std::invalid_argument("from_columns: ragged input");
        for (int i = 0; i < r; ++i) m(i, j) = columns[j][i];
    }
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& row_vecs) {
    if (row_vecs.empty()) throw std::invalid_argument("from_rows: empty");
    const int c = static_cast<int>(row_vecs[0].size());
    Matrix m(static_cast<int>(row_vecs.size()), c);
    for (int i = 0; i < m.rows; ++i) {
        if (static_cast<int>(row_vecs[i].size()) != c)
            throw std::invalid_argument("from_rows: ragged input");
        for (int j = 0; j < c; ++j) m(i, j) = row_vecs[i][j];
    }
    return m;
}

Vec Matrix::col(int j) const {
    Vec v(rows);
    for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
}

Vec Matrix::row(int i) const {
    Vec v(cols);
    for (int j = 0; j < cols; ++j) v[j] = (*this)(i, j);
    return v;
}

Matrix Matrix::transposed() const {
    Matrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data) s += x * x;
    return std::sqrt(s);
}

bool Matrix::finite() const {
    return std::all_of(data.begin(), data.end(), [](double x) { return std::isfinite(x); });
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec scaled(const Vec& a, double s) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

void axpy(double a, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: dimension mismatch");
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// --- SVD ------------------------------------------------------------------

namespace {

// One-sided Jacobi on a tall (m >= n) matrix: orthogonalize column pairs
// until convergence, then read off singular values as column norms.
SvdResult svd_tall(const Matrix& a) {
    const int m = a.rows, n = a.cols;
    Matrix b = a;
    Matrix v = Matrix::identity(n);

    const double eps = 1e-15;
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    const double bp = b(i, p), bq = b(i, q);
                    app += bp * bp;
                    aqq += bq * bq;
                    apq += bp * bq;
                }
                if (std::abs(apq) <= eps * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int i = 0; i < m; ++i) {
                    const double bp = b(i, p), bq = b(i, q);
                    b(i, p) = cs * bp - sn * bq;
                    b(i, q) = sn * bp + cs * bq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = cs * vp - sn * vq;
                    v(i, q) = sn * vp + cs * vq;
                }
            }
        }
        if (!rotated) break;
    }

    Vec sigma(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += b(i, j) * b(i, j);
        sigma[j] = std::sqrt(s);
    }

    // Sort nonincreasing.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int i, int j) { return sigma[i] > sigma[j]; });

    SvdResult res;
    res.singular_values.resize(n);
    res.u = Matrix(m, n);
    res.v = Matrix(n, n);
    const double zero_tol = 1e-14 * std::max(1.0, a.frobenius_norm());
    std::vector<Vec> u_cols;
    for (int k = 0; k < n; ++k) {
        const int j = perm[k];
        res.singular_values[k] = sigma[j];
        for (int i = 0; i < n; ++i) res.v(i, k) = v(i, j);
        Vec u = b.col(j);
        if (sigma[j] > zero_tol) {
            for (double& x : u) x /= sigma[j];
        } else {
            // Null column: replace with a unit vector orthogonal to the
            // accepted left factors so U keeps orthonormal columns.
            res.singular_values[k] = 0.0;
            for (int cand = 0; cand < m; ++cand) {
                Vec e(m, 0.0);
                e[cand] = 1.0;
                for (const Vec& uc : u_cols) axpy(-dot(e, uc), uc, e);
                const double r = norm(e);
                if (r > 0.5) {
                    u = scaled(e, 1.0 / r);
                    break;
                }
            }
        }
        u_cols.push_back(u);
        for (int i = 0; i < m; ++i) res.u(i, k) = u[i];
    }
    return res;
}

}  // namespace

SvdResult svd(const Matrix& m) {
    if (!m.finite()) throw std::invalid_argument("svd: input has non-finite entries");
    if (m.rows >= m.cols) return svd_tall(m);
    SvdResult t = svd_tall(m.transposed());
    std::swap(t.u, t.v);
    return t;
}

double min_singular_value(const Matrix& m) {
    if (m.rows < m.cols)
        throw std::invalid_argument("min_singular_value: wide matrix (rows < cols) rejected");
    return svd(m).singular_values.back();
}

double max_singular_value(const Matrix& m) {
    SvdResult s = svd(m);
    return s.singular_values.front();
}

int numerical_rank(const Matrix& m) {
    SvdResult s = svd(m);
    const double smax = s.singular_values.front();
    const double tol = 1e-10 * smax * std::max(m.rows, m.cols);
    int r = 0;
    for (double x : s.singular_values)
        if (x > tol) ++r;
    return r;
}

// --- QR least squares -----------------------------------------------------

Vec solve_least_squares(const Matrix& a, const Vec& b) {
    if (static_cast<int>(b.size()) != a.rows)
        throw std::invalid_argument("solve_least_squares: rhs dimension mismatch");
    const int m = a.rows, n = a.cols;
    Matrix r = a;
    Vec y = b;
    std::vector<int> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    Vec colnorm(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += r(i, j) * r(i, j);
        colnorm[j] = s;
    }
    const int kmax = std::min(m, n);
    double first_pivot = 0.0;
    int rank = 0;
    for (int k = 0; k < kmax; ++k) {
        // Column pivot: largest remaining norm.
        int best = k;
        double bestn = -1.0;
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += r(i, j) * r(i, j);
            if (s > bestn) {
                bestn = s;
                best = j;
            }
        }
        if (best != k) {
            for (int i = 0; i < m; ++i) std::swap(r(i, k), r(i, best));
            std::swap(piv[k], piv[best]);
        }
        const double pivnorm = std::sqrt(std::max(bestn, 0.0));
        if (k == 0) first_pivot = pivnorm;
        if (pivnorm <= 1e-13 * std::max(first_pivot, 1e-300)) break;
        ++rank;
        // Householder reflector for column k.
        Vec w(m - k);
        double alpha = 0.0;
        for (int i = k; i < m; ++i) {
            w[i - k] = r(i, k);
            alpha += r(i, k) * r(i, k);
        }
        alpha = std::sqrt(alpha);
        if (w[0] > 0) alpha = -alpha;
        w[0] -= alpha;
        double wn = 0.0;
        for (double x : w) wn += x * x;
        if (wn > 0.0) {
            for (int j = k; j < n; ++j) {
                double s = 0.0;
                for (int i = k; i < m; ++i) s += w[i - k] * r(i, j);
                s *= 2.0 / wn;
                for (int i = k; i < m; ++i) r(i, j) -= s * w[i - k];
            }
            double s = 0.0;
            for (int i = k; i < m; ++i) s += w[i - k] * y[i];
            s *= 2.0 / wn;
            for (int i = k; i < m; ++i) y[i] -= s * w[i - k];
        }
        r(k, k) = alpha;
    }
    // Back substitution on the rank x rank leading block; free variables 0.
    Vec xp(n, 0.0);
    for (int i = rank - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < rank; ++j) s -= r(i, j) * xp[j];
        xp[i] = s / r(i, i);
    }
    Vec x(n, 0.0);
    for (int j = 0; j < n; ++j) x[piv[j]] = xp[j];
    return x;
}

std::vector<Vec> orthonormalize(const std::vector<Vec>& vs, double drop_tol) {
    std::vector<Vec> q;
    double max_norm = 0.0;
    for (const Vec& v : vs) max_norm = std::max(max_norm, norm(v));
    if (max_norm == 0.0) return q;
    for (const Vec& v : vs) {
        Vec r = v;
        for (const Vec& u : q) axpy(-dot(r, u), u, r);
        // Re-orthogonalize once; cures loss of orthogonality for near-dependent sets.
        for (const Vec& u : q) axpy(-dot(r, u), u, r);
        const double rn = norm(r);
        if (rn > drop_tol * max_norm) q.push_back(scaled(r, 1.0 / rn));
    }
    return q;
}

double distance_to_span(const Vec& x, const std::vector<Vec>& basis) {
    for (const Vec& b : basis)
        if (b.size() != x.size())
            throw std::invalid_argument("distance_to_span: dimension mismatch");
    Vec r = x;
    std::vector<Vec> q = orthonormalize(basis, 1e-12);
    for (const Vec& u : q) axpy(-dot(r, u), u, r);
    for (const Vec& u : q) axpy(-dot(r, u), u, r);
    const double d = norm(r);
    if (d <= std::max(1e-12 * norm(x), 1e-14)) return 0.0;
    return d;
}

double distance_to_affine_hull(const Vec& x, const std::vector<Vec>& points) {
    if (points.empty()) throw std::invalid_argument("distance_to_affine_hull: empty point list");
    std::vector<Vec> basis;
    basis.reserve(points.size() - 1);
    for (size_t i = 1; i < points.size(); ++i) basis.push_back(sub(points[i], points[0]));
    return distance_to_span(sub(x, points[0]), basis);
}

Vec affine_shortest_vector(const std::vector<Vec>& points) {
    const int d = static_cast<int>(points.size());
    if (d == 0) throw std::invalid_argument("affine_shortest_vector: empty point list");
    for (const Vec& p : points)
        if (static_cast<int>(p.size()) != d)
            throw std::invalid_argument("affine_shortest_vector: need d points in R^d");
    Matrix p = Matrix::from_rows(points);
    const int rank = numerical_rank(p);
    if (rank < d)
        throw std::invalid_argument("affine_shortest_vector: singular point matrix, rank " +
                                    std::to_string(rank) + " < " + std::to_string(d));
    Vec ones(d, 1.0);
    Vec y = solve_least_squares(p, ones);  // y = P^-1 1
    const double yn2 = dot(y, y);
    if (!(yn2 > 0.0) || !std::isfinite(yn2))
        throw std::invalid_argument("affine_shortest_vector: affine hull passes through origin");
    return scaled(y, 1.0 / yn2);
}

double one_off_distance(const Matrix& m) {
    if (m.rows < m.cols) throw std::invalid_argument("one_off_distance: need rows >= cols");
    const int n = m.cols;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        std::vector<Vec> others;
        others.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) others.push_back(m.col(j));
        best = std::min(best, others.empty() ? norm(m.col(i))
                                             : distance_to_span(m.col(i), others));
    }
    return best;
}

}  // namespace fwpoly
