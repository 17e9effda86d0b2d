#include "fwpoly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fwpoly {

PointSet::PointSet(int d, std::vector<Vec> pts) : dim(d), points(std::move(pts)) {
    if (d < 1) throw std::invalid_argument("PointSet: dim must be >= 1");
    for (size_t i = 0; i < points.size(); ++i) {
        if (static_cast<int>(points[i].size()) != d)
            throw std::invalid_argument("PointSet: point " + std::to_string(i) +
                                        " has wrong dimension");
        for (double x : points[i])
            if (!std::isfinite(x))
                throw std::invalid_argument("PointSet: non-finite coordinate at point " +
                                            std::to_string(i));
    }
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw std::invalid_argument("PointSet: duplicate points " + std::to_string(i) +
                                            " and " + std::to_string(j));
}

DegenerateInput::DegenerateInput(const std::string& what, std::vector<int> idx)
    : std::runtime_error(what), indices(std::move(idx)) {}

namespace {

std::string index_list(const std::vector<int>& idx) {
    std::ostringstream os;
    for (size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
    return os.str();
}

constexpr double kHullTol = 1e-9;

// Unit normal of the hyperplane through the given points (spanning vectors
// orthonormalized; normal = residual of a probe direction). Oriented so the
// interior point is on the negative side.
Vec facet_normal(const std::vector<Vec>& pts, const std::vector<int>& idx,
                 const Vec& interior) {
    const int d = static_cast<int>(pts[0].size());
    const Vec& base = pts[idx[0]];
    std::vector<Vec> span;
    for (size_t i = 1; i < idx.size(); ++i) span.push_back(sub(pts[idx[i]], base));
    std::vector<Vec> q = orthonormalize(span, 1e-12);
    if (static_cast<int>(q.size()) != d - 1)
        throw DegenerateInput("facet is affinely dependent: indices " + index_list(idx), idx);
    Vec n;
    for (int probe = 0; probe < d; ++probe) {
        Vec e(d, 0.0);
        e[probe] = 1.0;
        for (const Vec& u : q) axpy(-dot(e, u), u, e);
        for (const Vec& u : q) axpy(-dot(e, u), u, e);
        const double r = norm(e);
        if (r > 1e-8) {
            n = scaled(e, 1.0 / r);
            break;
        }
    }
    if (n.empty())
        throw DegenerateInput("no normal direction found for facet " + index_list(idx), idx);
    if (dot(n, sub(interior, base)) > 0) n = scaled(n, -1.0);
    return n;
}

struct RidgeKey {
    std::vector<int> idx;  // sorted
    bool operator<(const RidgeKey& o) const { return idx < o.idx; }
};

Polytope hull_1d(const PointSet& ps) {
    int lo = 0, hi = 0;
    for (int i = 1; i < ps.size(); ++i) {
        if (ps.points[i][0] < ps.points[lo][0]) lo = i;
        if (ps.points[i][0] > ps.points[hi][0]) hi = i;
    }
    Polytope p;
    p.point_set = ps;
    p.facets.push_back({{lo}, {-1.0}, -ps.points[lo][0]});
    p.facets.push_back({{hi}, {1.0}, ps.points[hi][0]});
    return p;
}

}  // namespace

Polytope convex_hull(const PointSet& ps) {
    const int d = ps.dim;
    const int n = ps.size();
    if (n < d + 1) throw std::invalid_argument("convex_hull: need at least d+1 points");
    if (d == 1) return hull_1d(ps);

    // Scale to RMS norm 1 so hyperplane tolerances are absolute.
    double rms = 0.0;
    for (const Vec& p : ps.points) rms += dot(p, p);
    rms = std::sqrt(rms / n);
    const double scale = (rms > 0) ? 1.0 / rms : 1.0;
    std::vector<Vec> pts;
    pts.reserve(n);
    for (const Vec& p : ps.points) pts.push_back(scaled(p, scale));

    Vec centroid(d, 0.0);
    for (const Vec& p : pts) axpy(1.0 / n, p, centroid);

    // Full-dimensionality check.
    {
        std::vector<Vec> dirs;
        for (int i = 1; i < n; ++i) dirs.push_back(sub(pts[i], pts[0]));
        if (static_cast<int>(orthonormalize(dirs, 1e-9).size()) < d) {
            std::vector<int> all(n);
            std::iota(all.begin(), all.end(), 0);
            throw DegenerateInput("point set is not full-dimensional", all);
        }
    }

    // --- Initial facet: grow a supporting flat one vertex at a time by
    // rotating the supporting hyperplane about the current flat. ---
    std::vector<int> facet0;
    {
        int v0 = 0;
        for (int i = 1; i < n; ++i)
            if (pts[i][0] < pts[v0][0]) v0 = i;
        facet0.push_back(v0);
        Vec nrm(d, 0.0);
        nrm[0] = -1.0;
        std::vector<Vec> q;  // orthonormal basis of the flat's directions
        const Vec& base = pts[v0];
        while (static_cast<int>(facet0.size()) < d) {
            // Rotation partner t: a unit direction orthogonal to the flat and n.
            Vec t;
            for (int probe = 0; probe < d; ++probe) {
                Vec e(d, 0.0);
                e[probe] = 1.0;
                for (const Vec& u : q) axpy(-dot(e, u), u, e);
                axpy(-dot(e, nrm), nrm, e);
                for (const Vec& u : q) axpy(-dot(e, u), u, e);
                axpy(-dot(e, nrm), nrm, e);
                const double r = norm(e);
                if (r > 1e-8) {
                    t = scaled(e, 1.0 / r);
                    break;
                }
            }
            if (t.empty()) throw std::runtime_error("convex_hull: rotation direction not found");
            // Rotate n toward t; a point at (a, b) = (<w,n>, <w,t>), a <= 0,
            // first meets the hyperplane at angle phi with a cos + b sin = 0.
            int best = -1;
            double best_phi = 0.0;
            for (int i = 0; i < n; ++i) {
                if (std::find(facet0.begin(), facet0.end(), i) != facet0.end()) continue;
                Vec w = sub(pts[i], base);
                const double a = dot(w, nrm), b = dot(w, t);
                if (std::abs(a) < kHullTol && std::abs(b) < kHullTol) continue;  // in the flat
                double phi = std::fmod(M_PI / 2.0 - std::atan2(-b, a), M_PI);
                if (phi <= 0) phi += M_PI;
                if (best < 0 || phi < best_phi) {
                    best = i;
                    best_phi = phi;
                }
            }
            if (best < 0) throw std::runtime_error("convex_hull: initial facet search failed");
            // New supporting normal and extended flat basis.
            Vec nn = add(scaled(nrm, std::cos(best_phi)), scaled(t, std::sin(best_phi)));
            nrm = scaled(nn, 1.0 / norm(nn));
            Vec wdir = sub(pts[best], base);
            for (const Vec& u : q) axpy(-dot(wdir, u), u, wdir);
            axpy(-dot(wdir, nrm), nrm, wdir);
            const double wn = norm(wdir);
            if (wn < 1e-10) {
                std::vector<int> bad = facet0;
                bad.push_back(best);
                throw DegenerateInput("affinely dependent points during hull start: " +
                                          index_list(bad),
                                      bad);
            }
            q.push_back(scaled(wdir, 1.0 / wn));
            facet0.push_back(best);
        }
        std::sort(facet0.begin(), facet0.end());
    }

    // --- BFS across ridges. ---
    std::set<std::vector<int>> visited;
    std::map<RidgeKey, int> ridge_count;
    std::queue<std::vector<int>> work;
    std::vector<Facet> facets;

    auto push_facet = [&](std::vector<int> idx) {
        std::sort(idx.begin(), idx.end());
        if (!visited.insert(idx).second) return;
        Facet f;
        f.vertex_indices = idx;
        f.outward_normal = facet_normal(pts, idx, centroid);
        f.offset = dot(f.outward_normal, pts[idx[0]]);
        facets.push_back(f);
        work.push(idx);
        for (int skip = 0; skip < static_cast<int>(idx.size()); ++skip) {
            RidgeKey rk;
            for (int j = 0; j < static_cast<int>(idx.size()); ++j)
                if (j != skip) rk.idx.push_back(idx[j]);
            ++ridge_count[rk];
        }
    };
    push_facet(facet0);

    while (!work.empty()) {
        std::vector<int> fidx = work.front();
        work.pop();
        Facet cur;  // copy: push_facet below may reallocate `facets`
        for (const Facet& g : facets)
            if (g.vertex_indices == fidx) {
                cur = g;
                break;
            }
        const Facet* f = &cur;
        for (int skip = 0; skip < d; ++skip) {
            std::vector<int> ridge;
            for (int j = 0; j < d; ++j)
                if (j != skip) ridge.push_back(fidx[j]);
            const int v_out = fidx[skip];
            RidgeKey rk{ridge};
            if (ridge_count[rk] >= 2) continue;  // both incident facets known

            const Vec& base = pts[ridge[0]];
            std::vector<Vec> span;
            for (size_t i = 1; i < ridge.size(); ++i) span.push_back(sub(pts[ridge[i]], base));
            std::vector<Vec> q = orthonormalize(span, 1e-12);
            if (static_cast<int>(q.size()) != d - 2)
                throw DegenerateInput("degenerate ridge " + index_list(ridge), ridge);
            Vec u = sub(pts[v_out], base);
            for (const Vec& b : q) axpy(-dot(u, b), b, u);
            axpy(-dot(u, f->outward_normal), f->outward_normal, u);
            const double un = norm(u);
            if (un < 1e-10) {
                std::vector<int> bad = ridge;
                bad.push_back(v_out);
                throw DegenerateInput("degenerate pivot geometry: " + index_list(bad), bad);
            }
            u = scaled(u, 1.0 / un);

            // Winner: smallest angle atan2(y, x) over candidates, where
            // x = <w,u>, y = <w, old normal>; all hull points have y <= 0.
            int best = -1;
            double best_ang = 0.0;
            for (int i = 0; i < n; ++i) {
                if (std::find(ridge.begin(), ridge.end(), i) != ridge.end() || i == v_out)
                    continue;
                Vec w = sub(pts[i], base);
                const double x = dot(w, u), y = dot(w, f->outward_normal);
                if (std::abs(x) < kHullTol && std::abs(y) < kHullTol) {
                    std::vector<int> bad = ridge;
                    bad.push_back(i);
                    throw DegenerateInput("point in ridge affine hull: " + index_list(bad), bad);
                }
                const double ang = std::atan2(y, x);
                if (best < 0 || ang < best_ang) {
                    best = i;
                    best_ang = ang;
                }
            }
            if (best < 0) throw std::runtime_error("convex_hull: pivot found no candidate");
            std::vector<int> nf = ridge;
            nf.push_back(best);
            push_facet(nf);
        }
    }

    // --- Validation: one-sidedness, ridge closure, vertex membership. ---
    for (const Facet& f : facets) {
        for (int i = 0; i < n; ++i) {
            const double s = dot(f.outward_normal, pts[i]) - f.offset;
            if (s > kHullTol) {
                std::vector<int> bad = f.vertex_indices;
                bad.push_back(i);
                throw DegenerateInput("hull validation failed (point above facet " +
                                          index_list(f.vertex_indices) + ", point " +
                                          std::to_string(i) + ")",
                                      bad);
            }
            const bool on_facet = std::find(f.vertex_indices.begin(), f.vertex_indices.end(),
                                            i) != f.vertex_indices.end();
            if (!on_facet && s > -kHullTol) {
                std::vector<int> bad = f.vertex_indices;
                bad.push_back(i);
                throw DegenerateInput("point within tolerance of facet hyperplane: " +
                                          index_list(bad),
                                      bad);
            }
        }
    }
    for (const auto& [rk, cnt] : ridge_count)
        if (cnt != 2)
            throw std::runtime_error("convex_hull: ridge " + index_list(rk.idx) +
                                     " has " + std::to_string(cnt) + " facets");

    // Recompute normals/offsets in original (unscaled) coordinates.
    Vec centroid0(d, 0.0);
    for (const Vec& p : ps.points) axpy(1.0 / n, p, centroid0);
    Polytope poly;
    poly.point_set = ps;
    for (Facet& f : facets) {
        f.outward_normal = facet_normal(ps.points, f.vertex_indices, centroid0);
        f.offset = dot(f.outward_normal, ps.points[f.vertex_indices[0]]);
    }
    poly.facets = std::move(facets);
    poly.simplicial = true;
    return poly;
}

std::vector<std::vector<int>> enumerate_faces(const Polytope& p) {
    if (!p.simplicial) throw std::invalid_argument("enumerate_faces: polytope not simplicial");
    std::set<std::vector<int>> faces;
    for (const Facet& f : p.facets) {
        const int k = static_cast<int>(f.vertex_indices.size());
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            std::vector<int> face;
            for (int j = 0; j < k; ++j)
                if (mask & (1u << j)) face.push_back(f.vertex_indices[j]);
            faces.insert(face);
            if (faces.size() > 200000)
                throw CapExceeded("enumerate_faces: face count exceeds 200000");
        }
    }
    return {faces.begin(), faces.end()};
}

double diameter(const PointSet& ps) {
    if (ps.size() < 2) throw std::invalid_argument("diameter: need >= 2 points");
    double best = 0.0;
    for (int i = 0; i < ps.size(); ++i)
        for (int j = i + 1; j < ps.size(); ++j)
            best = std::max(best, norm(sub(ps.points[i], ps.points[j])));
    return best;
}

CentroidBall simplex_centroid_ball(const std::vector<Vec>& simplex_points) {
    if (simplex_points.empty()) throw std::invalid_argument("simplex_centroid_ball: empty");
    const int d = static_cast<int>(simplex_points[0].size());
    if (static_cast<int>(simplex_points.size()) != d + 1)
        throw std::invalid_argument("simplex_centroid_ball: need d+1 points in R^d");
    {
        std::vector<Vec> dirs;
        for (int i = 1; i <= d; ++i) dirs.push_back(sub(simplex_points[i], simplex_points[0]));
        if (static_cast<int>(orthonormalize(dirs, 1e-12).size()) < d)
            throw std::invalid_argument("simplex_centroid_ball: degenerate simplex");
    }
    CentroidBall cb;
    cb.center = Vec(d, 0.0);
    for (const Vec& p : simplex_points) axpy(1.0 / (d + 1), p, cb.center);
    cb.radius = std::numeric_limits<double>::infinity();
    for (int skip = 0; skip <= d; ++skip) {
        std::vector<Vec> facet;
        for (int i = 0; i <= d; ++i)
            if (i != skip) facet.push_back(simplex_points[i]);
        cb.radius = std::min(cb.radius, distance_to_affine_hull(cb.center, facet));
    }
    return cb;
}

}  // namespace fwpoly
