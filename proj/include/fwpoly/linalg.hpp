#pragma once

#include <string>
#include <vector>

namespace fwpoly {

using Vec = std::vector<double>;

// Dense row-major matrix of 64-bit floats. Indexing is (row, col).
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0);

    static Matrix identity(int n);
    static Matrix from_columns(const std::vector<Vec>& columns);
    static Matrix from_rows(const std::vector<Vec>& row_vecs);

    double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    Vec col(int j) const;
    Vec row(int i) const;
    Matrix transposed() const;
    double frobenius_norm() const;
    bool finite() const;
};

// --- small vector helpers -------------------------------------------------

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec sub(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec scaled(const Vec& a, double s);
void axpy(double a, const Vec& x, Vec& y);  // y += a*x

// --- factorizations -------------------------------------------------------

struct SvdResult {
    Matrix u;              // m x k, orthonormal columns, k = min(m, n)
    Vec singular_values;   // nonincreasing, nonnegative, length k
    Matrix v;              // n x k, orthonormal columns
};

// One-sided Jacobi SVD. Intended for small dense matrices (<= ~200x200).
SvdResult svd(const Matrix& m);

// Smallest singular value of a square or tall matrix. Wide input is rejected.
double min_singular_value(const Matrix& m);
double max_singular_value(const Matrix& m);

// Numerical rank at tolerance 1e-10 * sigma_max * max(rows, cols).
int numerical_rank(const Matrix& m);

// Minimum-residual solution of the (possibly rank-deficient) system a x = b,
// via Householder QR with column pivoting. Free variables are set to zero.
Vec solve_least_squares(const Matrix& a, const Vec& b);

// Modified Gram-Schmidt; near-dependent vectors are dropped at drop_tol
// relative to the largest input norm.
std::vector<Vec> orthonormalize(const std::vector<Vec>& vs, double drop_tol = 1e-12);

// --- distances ------------------------------------------------------------

// Euclidean distance from x to span(basis). Rank-deficient bases are fine.
// Snaps to 0 below 1e-12 * ||x|| (absolute floor 1e-14).
double distance_to_span(const Vec& x, const std::vector<Vec>& basis);

// Distance from x to the affine hull of a nonempty point list.
double distance_to_affine_hull(const Vec& x, const std::vector<Vec>& points);

// Shortest vector in the affine hull of d linearly independent points in R^d.
// Returns v = P^-1 1 / ||P^-1 1||^2 with P = (p_1 ... p_d)^T, so that the
// certificate P v = ||v||^2 1 holds. Singular P is rejected.
Vec affine_shortest_vector(const std::vector<Vec>& points);

// min over columns i of dist(a_i, span(a_j : j != i)), for m >= n.
double one_off_distance(const Matrix& m);

}  // namespace fwpoly
