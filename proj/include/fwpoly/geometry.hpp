#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fwpoly/linalg.hpp"

namespace fwpoly {

// Finite point set in R^d. Duplicate points (exact equality) are rejected.
struct PointSet {
    int dim = 0;
    std::vector<Vec> points;

    PointSet() = default;
    PointSet(int d, std::vector<Vec> pts);

    int size() const { return static_cast<int>(points.size()); }
};

struct Facet {
    std::vector<int> vertex_indices;  // sorted, size d (size 1 when d == 1)
    Vec outward_normal;               // unit length
    double offset = 0.0;              // <normal, x> = offset on the facet
};

struct Polytope {
    PointSet point_set;
    std::vector<Facet> facets;
    bool simplicial = true;
};

// Thrown when the input is not in general position; carries the indices of an
// affinely dependent (or hyperplane-coincident) subset.
struct DegenerateInput : std::runtime_error {
    std::vector<int> indices;
    DegenerateInput(const std::string& what, std::vector<int> idx);
};

// Thrown when a documented enumeration cap would be exceeded (subset counts,
// face counts, problem-size limits). The CLI maps this to its guard exit code.
struct CapExceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Facet enumeration by gift wrapping across ridges (BFS from an initial facet).
// Requires n >= d+1 points in general position; degenerate inputs are rejected
// with the offending indices. One-sidedness tolerance is 1e-9 after scaling
// the input to RMS norm 1.
Polytope convex_hull(const PointSet& ps);

// All nonempty proper faces of a simplicial polytope, as sorted vertex-index
// sets (deduplicated subsets of facet vertex sets). Rejects non-simplicial
// input and more than 200000 faces.
std::vector<std::vector<int>> enumerate_faces(const Polytope& p);

// Max pairwise Euclidean distance; needs >= 2 points.
double diameter(const PointSet& ps);

// Centroid of a nondegenerate simplex (d+1 points in R^d) and the radius of
// the largest centered ball that fits: min distance from the centroid to a
// facet's affine hull.
struct CentroidBall {
    Vec center;
    double radius = 0.0;
};
CentroidBall simplex_centroid_ball(const std::vector<Vec>& simplex_points);

}  // namespace fwpoly
