#include "fwpoly/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "fwpoly/solvers.hpp"

namespace fwpoly {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Coordinates of the points in an orthonormal basis of their affine hull.
std::vector<Vec> affine_hull_coords(const std::vector<Vec>& pts) {
    std::vector<Vec> dirs;
    for (size_t i = 1; i < pts.size(); ++i) dirs.push_back(sub(pts[i], pts[0]));
    std::vector<Vec> q = orthonormalize(dirs, 1e-10);
    std::vector<Vec> out;
    for (const Vec& p : pts) {
        Vec d = sub(p, pts[0]);
        Vec c(q.size());
        for (size_t k = 0; k < q.size(); ++k) c[k] = dot(d, q[k]);
        out.push_back(c);
    }
    return out;
}

double directional_width(const std::vector<Vec>& pts, const Vec& u) {
    double lo = dot(u, pts[0]), hi = lo;
    for (size_t i = 1; i < pts.size(); ++i) {
        const double v = dot(u, pts[i]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

// Width of points given in full-dimensional coordinates (dim m >= 1).
double width_full_dim(const std::vector<Vec>& pts) {
    const int m = static_cast<int>(pts[0].size());
    const int n = static_cast<int>(pts.size());
    if (m == 1) {
        double lo = pts[0][0], hi = lo;
        for (const Vec& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        return hi - lo;
    }
    // Candidate directions: for each split of an (m+1)-subset into two
    // nonempty groups S1, S2, the unit vector orthogonal to all differences
    // within each group (the normal of the facet of the difference body whose
    // support touches conv(S1) and conv(S2)).
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> sel;
    auto handle_split = [&](const std::vector<int>& s1, const std::vector<int>& s2) {
        std::vector<Vec> span;
        for (size_t i = 1; i < s1.size(); ++i) span.push_back(sub(pts[s1[i]], pts[s1[0]]));
        for (size_t i = 1; i < s2.size(); ++i) span.push_back(sub(pts[s2[i]], pts[s2[0]]));
        std::vector<Vec> q = orthonormalize(span, 1e-10);
        if (static_cast<int>(q.size()) != m - 1) return;  // degenerate split
        Vec r = sub(pts[s1[0]], pts[s2[0]]);
        for (const Vec& b : q) axpy(-dot(r, b), b, r);
        for (const Vec& b : q) axpy(-dot(r, b), b, r);
        const double rn = norm(r);
        if (rn < 1e-12) return;
        best = std::min(best, directional_width(pts, scaled(r, 1.0 / rn)));
    };
    auto rec = [&](auto&& self, int start, int k) -> void {
        if (k == m + 1) {
            // all 2-colorings of sel into nonempty S1, S2 (fix sel[0] in S1)
            for (unsigned mask = 1; mask < (1u << m); ++mask) {
                std::vector<int> s1{sel[0]}, s2;
                for (int j = 1; j <= m; ++j)
                    ((mask >> (j - 1)) & 1 ? s2 : s1).push_back(sel[j]);
                if (s2.empty()) continue;
                handle_split(s1, s2);
            }
            return;
        }
        for (int i = start; i < n; ++i) {
            sel.push_back(i);
            self(self, i + 1, k + 1);
            sel.pop_back();
        }
    };
    rec(rec, 0, 0);
    if (!std::isfinite(best))
        throw std::runtime_error("width: no valid supporting direction found");
    return best;
}

bool is_simplex(const std::vector<Vec>& pts) {
    std::vector<Vec> dirs;
    for (size_t i = 1; i < pts.size(); ++i) dirs.push_back(sub(pts[i], pts[0]));
    return orthonormalize(dirs, 1e-10).size() == pts.size() - 1;
}

}  // namespace

double width(const PointSet& ps) {
    if (ps.size() < 2) throw std::invalid_argument("width: need >= 2 points");
    std::vector<Vec> coords = affine_hull_coords(ps.points);
    if (coords[0].empty()) throw std::invalid_argument("width: all points coincide");
    return width_full_dim(coords);
}

double minwidth(const PointSet& ps, int subset_cap) {
    if (ps.size() < 2) throw std::invalid_argument("minwidth: need >= 2 points");
    if (is_simplex(ps.points)) return width(ps);
    const int n = ps.size();
    if (n > subset_cap)
        throw CapExceeded(
            "minwidth: " + std::to_string(n) + " points exceed the subset cap " +
            std::to_string(subset_cap) +
            " (only simplices are exempt); raise the cap or reduce the input");
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) < 2) continue;
        std::vector<Vec> sub_pts;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) sub_pts.push_back(ps.points[i]);
        std::vector<Vec> coords = affine_hull_coords(sub_pts);
        if (coords[0].empty()) continue;
        best = std::min(best, width_full_dim(coords));
    }
    return best;
}

double vf(const Polytope& p) {
    if (p.facets.empty()) throw std::invalid_argument("vf: polytope has no facets");
    const int n = p.point_set.size();
    double best = std::numeric_limits<double>::infinity();
    for (const Facet& f : p.facets) {
        std::vector<Vec> fpts;
        for (int i : f.vertex_indices) fpts.push_back(p.point_set.points[i]);
        bool any = false;
        for (int i = 0; i < n; ++i) {
            if (std::find(f.vertex_indices.begin(), f.vertex_indices.end(), i) !=
                f.vertex_indices.end())
                continue;
            any = true;
            best = std::min(best, distance_to_affine_hull(p.point_set.points[i], fpts));
        }
        if (!any) throw std::invalid_argument("vf: facet has no non-facet vertex");
    }
    return best;
}

double facial_distance(const Polytope& p) {
    const int n = p.point_set.size();
    if (n < 2) throw std::invalid_argument("facial_distance: need >= 2 vertices");
    std::vector<std::vector<int>> faces = enumerate_faces(p);
    double best = std::numeric_limits<double>::infinity();
    for (const std::vector<int>& face : faces) {
        std::vector<Vec> fpts, rest;
        for (int i : face) fpts.push_back(p.point_set.points[i]);
        for (int i = 0; i < n; ++i)
            if (std::find(face.begin(), face.end(), i) == face.end())
                rest.push_back(p.point_set.points[i]);
        if (rest.empty()) continue;
        best = std::min(best, polytope_distance(fpts, rest, 1e-12));
    }
    return best;
}

double kappa(const PointSet& ps) {
    return facial_distance(convex_hull(ps)) / diameter(ps);
}

MeasureReport measure_report(const PointSet& ps, int subset_cap) {
    MeasureReport r;
    r.is_simplex = is_simplex(ps.points);
    r.width = width(ps);
    if (r.is_simplex || ps.size() <= subset_cap) {
        r.minwidth = minwidth(ps, subset_cap);
        if (r.is_simplex) r.method_notes = "simplex: minwidth = width";
    } else {
        r.method_notes = "minwidth omitted: point count exceeds subset cap";
    }
    Polytope hull = convex_hull(ps);
    r.vf = vf(hull);
    r.phi = facial_distance(hull);
    r.pwidth = r.phi;
    r.diam = diameter(ps);
    r.kappa = r.phi / r.diam;
    if (r.minwidth && *r.minwidth > r.phi + 1e-8)
        throw std::runtime_error("measure_report: chain violation minwidth > phi");
    if (r.phi > r.vf + 1e-8)
        throw std::runtime_error("measure_report: chain violation phi > vf");
    return r;
}

MeasureReport cube_report(int d) {
    if (d < 1) throw std::invalid_argument("cube_report: d must be >= 1");
    MeasureReport r;
    r.width = 1.0;
    r.vf = 1.0;
    r.phi = 1.0 / std::sqrt(double(d));
    r.pwidth = r.phi;
    r.diam = std::sqrt(double(d));
    r.kappa = 1.0 / double(d);
    r.is_simplex = (d == 1);
    r.method_notes = "closed-form unit cube [0,1]^" + std::to_string(d) +
                     " (minwidth not computed)";
    return r;
}

std::string MeasureReport::to_kv() const {
    std::ostringstream os;
    os << "width=" << fmt17(width) << "\n";
    if (minwidth) os << "minwidth=" << fmt17(*minwidth) << "\n";
    os << "vf=" << fmt17(vf) << "\n"
       << "phi=" << fmt17(phi) << "\n"
       << "pwidth=" << fmt17(pwidth) << "\n"
       << "diam=" << fmt17(diam) << "\n"
       << "kappa=" << fmt17(kappa) << "\n"
       << "simplex=" << (is_simplex ? 1 : 0) << "\n"
       << "notes=" << method_notes << "\n";
    return os.str();
}

std::string MeasureReport::csv_header() {
    return "width,minwidth,vf,phi,pwidth,diam,kappa,simplex";
}

std::string MeasureReport::to_csv_row() const {
    std::ostringstream os;
    os << fmt17(width) << "," << (minwidth ? fmt17(*minwidth) : std::string()) << ","
       << fmt17(vf) << "," << fmt17(phi) << "," << fmt17(pwidth) << "," << fmt17(diam)
       << "," << fmt17(kappa) << "," << (is_simplex ? 1 : 0);
    return os.str();
}

int robust_kruskal_rank(const Matrix& m, double tau) {
    if (tau <= 0) throw std::invalid_argument("robust_kruskal_rank: tau must be > 0");
    const int n = m.cols;
    if (n > 20) throw CapExceeded("robust_kruskal_rank: more than 20 columns");
    const double floor_sigma = 1.0 / tau;
    // sigma_{k+1} of a superset is <= sigma_k of a subset (interlacing), so
    // the per-k predicate is monotone: scan k upward until a subset fails.
    int k = 0;
    std::vector<int> sel;
    while (k < std::min(n, m.rows)) {
        const int kk = k + 1;
        bool all_pass = true;
        sel.assign(kk, 0);
        auto rec = [&](auto&& self, int start, int depth) -> bool {
            if (depth == kk) {
                std::vector<Vec> cols;
                for (int j = 0; j < kk; ++j) cols.push_back(m.col(sel[j]));
                return min_singular_value(Matrix::from_columns(cols)) >= floor_sigma;
            }
            for (int i = start; i < n; ++i) {
                sel[depth] = i;
                if (!self(self, i + 1, depth + 1)) return false;  // early exit
            }
            return true;
        };
        all_pass = rec(rec, 0, 0);
        if (!all_pass) break;
        ++k;
    }
    return k;
}

double delta_distance(const Matrix& m_in) {
    const int rows = m_in.rows, d = m_in.cols;
    if (rows > 18) throw CapExceeded("delta_distance: more than 18 rows");
    std::vector<Vec> r;
    for (int i = 0; i < rows; ++i) {
        Vec v = m_in.row(i);
        const double nv = norm(v);
        if (nv == 0) throw std::invalid_argument("delta_distance: zero row");
        r.push_back(scaled(v, 1.0 / nv));
    }
    const double in_span_tol = 1e-10 * std::max(rows, d);
    double best = 1.0;  // I = empty set: distance is ||a_j|| = 1
    for (int j = 0; j < rows; ++j) {
        std::vector<int> others;
        for (int i = 0; i < rows; ++i)
            if (i != j) others.push_back(i);
        // DFS over subsets with an incrementally maintained orthonormal basis;
        // once a_j enters the span, every superset is invalid too (prune).
        std::vector<Vec> q;
        auto rec = [&](auto&& self, int idx, const Vec& resid_j) -> void {
            const double dj = norm(resid_j);
            if (dj <= in_span_tol) return;  // a_j in span: invalid branch
            best = std::min(best, dj);
            for (int t = idx; t < static_cast<int>(others.size()); ++t) {
                Vec v = r[others[t]];
                for (const Vec& b : q) axpy(-dot(v, b), b, v);
                for (const Vec& b : q) axpy(-dot(v, b), b, v);
                const double nv = norm(v);
                if (nv <= 1e-12) {
                    // row already in span: same subspace, recurse without growth
                    self(self, t + 1, resid_j);
                    continue;
                }
                Vec u = scaled(v, 1.0 / nv);
                Vec nres = resid_j;
                axpy(-dot(nres, u), u, nres);
                q.push_back(u);
                self(self, t + 1, nres);
                q.pop_back();
            }
        };
        rec(rec, 0, r[j]);
    }
    return best;
}

}  // namespace fwpoly
