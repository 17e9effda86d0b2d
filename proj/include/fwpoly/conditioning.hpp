#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fwpoly/geometry.hpp"
#include "fwpoly/linalg.hpp"

namespace fwpoly {

struct MeasureReport {
    double width = 0.0;
    std::optional<double> minwidth;  // omitted when n exceeds the subset cap
    double vf = 0.0;
    double phi = 0.0;     // facial distance
    double pwidth = 0.0;  // equals phi
    double diam = 0.0;
    double kappa = 0.0;   // pwidth / diam
    bool is_simplex = false;
    std::string method_notes;

    // Flat key=value text block (one pair per line).
    std::string to_kv() const;
    // One CSV row matching csv_header().
    std::string to_csv_row() const;
    static std::string csv_header();
};

// Exact width: min over directions u (in the affine hull) of
// max_i <u,a_i> - min_i <u,a_i>. The minimizing direction is normal to a
// facet of the difference body conv{a_i - a_j}; candidates are enumerated as
// perpendicular feet onto affine flats spanned by disjoint vertex subsets.
double width(const PointSet& ps);

// Min width over all subsets of >= 2 points. Simplices short-circuit to
// width(ps); otherwise n must be <= subset_cap.
double minwidth(const PointSet& ps, int subset_cap = 12);

// Vertex-facet distance: min over facets of the distance from the facet's
// affine hull to the nearest non-facet vertex.
double vf(const Polytope& p);

// Facial distance Phi: min over nonempty proper faces F of the distance
// between conv(F) and conv(remaining vertices). Equals the pyramidal width.
double facial_distance(const Polytope& p);

// facial_distance(hull) / diameter.
double kappa(const PointSet& ps);

// All measures for one point set (hull computed internally).
MeasureReport measure_report(const PointSet& ps, int subset_cap = 12);

// Closed forms for the unit cube [0,1]^d (non-simplicial, handled without a
// hull): width 1, vf 1, phi = 1/sqrt(d), diam = sqrt(d), kappa = 1/d.
MeasureReport cube_report(int d);

// Max k such that every k-column submatrix S has sigma_k(M_S) >= 1/tau.
// Exhaustive over subsets; n <= 20.
int robust_kruskal_rank(const Matrix& m, double tau);

// Largest delta such that every row is at distance >= delta from the span of
// any row subset not containing it (rows unit-normalized internally; m <= 18).
double delta_distance(const Matrix& m);

}  // namespace fwpoly
