#pragma once

#include <string>
#include <vector>

#include "fwpoly/geometry.hpp"
#include "fwpoly/linalg.hpp"

namespace fwpoly {

// f(x) = 1/2 x^T Q x + c^T x with Q symmetric PSD. mu and L are the extreme
// eigenvalues of Q (strong-convexity and gradient-Lipschitz constants).
struct QuadraticObjective {
    Matrix q;
    Vec c;
    double mu = 0.0;
    double l = 0.0;

    QuadraticObjective(Matrix q_in, Vec c_in);

    // min ||x - b||^2 / 2, i.e. Q = I, c = -b.
    static QuadraticObjective distance_to(const Vec& b);
    // min ||x||^2 / 2.
    static QuadraticObjective min_norm(int dim);

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
};

enum class StepType { fw, away, pairwise, drop };

struct TraceRecord {
    Vec x;
    double objective = 0.0;
    double gap = 0.0;  // max_v <grad, x - v>
    StepType step = StepType::fw;
    double step_length = 0.0;
};

struct RunTrace {
    Vec x0;
    std::vector<TraceRecord> records;
    bool converged = false;
    double final_residual = 0.0;
};

struct Certificate {
    std::vector<int> active_indices;  // lambda_i > 0
    Vec weights;                      // matching active_indices, sums to 1
    double residual = 0.0;
};

struct SolveResult {
    Vec x;
    RunTrace trace;
    Certificate certificate;
};

// Index minimizing <direction, a_i>; ties broken by lowest index.
int lmo(const PointSet& vertices, const Vec& direction);

// Away-step / pairwise / vanilla Frank-Wolfe with exact line search for
// quadratics. x0_weights are convex weights over the vertices; pass empty to
// start at vertex 0. Stops when the duality gap <= tol or after max_iter
// iterations.
SolveResult fw_away(const PointSet& vertices, const QuadraticObjective& obj,
                    Vec x0_weights, int max_iter, double tol);
SolveResult fw_pairwise(const PointSet& vertices, const QuadraticObjective& obj,
                        Vec x0_weights, int max_iter, double tol);
SolveResult fw_vanilla(const PointSet& vertices, const QuadraticObjective& obj,
                       Vec x0_weights, int max_iter, double tol);

// Wolfe's min-norm-point algorithm (major/minor cycles over a corral).
// Termination test is relative: <x, a> >= ||x||^2 - tol * max(1, ||x||^2).
SolveResult wolfe_mnp(const PointSet& vertices, double tol);

// min distance between conv(P) and conv(Q), via the min-norm point of the
// pairwise Minkowski difference conv{p_i - q_j}.
double polytope_distance(const std::vector<Vec>& p_vertices,
                         const std::vector<Vec>& q_vertices, double tol);

}  // namespace fwpoly
