#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fwpoly/geometry.hpp"
#include "fwpoly/linalg.hpp"
#include "fwpoly/rng.hpp"

namespace fwpoly {

struct ExperimentConfig {
    std::string name;
    int d = 0;
    int d_min = 0, d_max = 0;  // sweep experiments
    int n = 0;
    double delta = 0.0;  // d = floor(delta * n) when set
    double sigma = 0.0;
    int trials = 0;
    double epsilon = 0.0;
    long long mc_samples = 1000000;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string output;  // path prefix for CSV outputs
};

// Parse/validate from flat key=value pairs; unknown keys are rejected.
ExperimentConfig parse_experiment_config(const std::map<std::string, std::string>& kv);

// Names accepted by run_experiment.
std::vector<std::string> experiment_names();

struct TrialRecord {
    std::vector<double> values;  // aligned with ExperimentResult::columns
};

struct ExperimentResult {
    std::vector<std::string> columns;
    std::vector<TrialRecord> trials;
    std::vector<std::pair<std::string, double>> summary;
};

// n iid draws N(mu_i, sigma^2 I_d). means may be empty (all-zero means) or
// hold n vectors with norm <= 1.
PointSet gaussian_points(int d, int n, const std::vector<Vec>& means, double sigma,
                         RngStream& stream);

// min over d-column subsets of sigma_d. Exact mode enumerates all C(n,d)
// subsets (cap 2e6); sampled mode draws k uniform subsets and upper-bounds
// the true min.
double min_submatrix_sigma_exact(const Matrix& a);
double min_submatrix_sigma_sampled(const Matrix& a, long long k, RngStream& stream);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Gaussian measure of the epsilon-neighborhood of the union of spans of all
// (d-1)-column subsets, by Monte Carlo. Requires C(n, d-1) <= 1e5.
McEstimate band_union_volume(const Matrix& a, double eps, long long mc_samples,
                             RngStream& stream);

// MC check of the two-band intersection bound
// G(B_S cap B_T) <= eps^2 / sqrt(2 pi (1 - <u,v>^2)) for slabs
// B = {x : c <= <x,u> <= c + eps}. pass = estimate <= bound + 3 SE.
struct BandPairResult {
    bool pass = false;
    double estimate = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
};
BandPairResult band_pair_measure_check(const Vec& u, const Vec& v, double c_s, double c_t,
                                       double eps, long long mc_samples, RngStream& stream);

// Greedy constant-weight code: all weight-w n-bit words in lexicographic
// order, keeping those at Hamming distance >= t from every kept word.
// Guaranteed size >= C(n,w) / sum_{k<=t} C(n,k).
std::vector<std::uint32_t> gv_code(int n, int t, int w);
double gv_lower_bound(int n, int t, int w);

// One smoothed-simplex trial: perturb the d+1 means, record the centroid-ball
// width lower bound, the exact diameter, and (for d <= 6) the exact facial
// distance. Degenerate draws are resampled with a bumped substream.
struct SimplexTrial {
    double minwidth_lb = 0.0;  // 2 * centroid ball radius
    double diam = 0.0;
    double kappa_lb = 0.0;  // minwidth_lb / diam
    double phi = 0.0;       // exact facial distance when computed, else NaN
    int resamples = 0;
    bool valid = false;
};
SimplexTrial smoothed_simplex_trial(int d, double sigma, const std::vector<Vec>& means,
                                    std::uint64_t master, std::uint64_t trial_index);

// Vertices of a regular d-simplex inscribed in the unit sphere (d+1 means).
std::vector<Vec> regular_simplex_means(int d);

// One random-polytope trial: hull of n+1 standard Gaussians in dimension
// d = floor(delta * (n+1))... d = floor(delta * n) per config; records vf,
// diameter and facet count. Degenerate draws resampled (<= 10 attempts).
struct VfTrial {
    double vf = 0.0;
    double diam = 0.0;
    int facet_count = 0;
    int resamples = 0;
    bool valid = false;
};
VfTrial random_polytope_vf_trial(int n, double delta, std::uint64_t master,
                                 std::uint64_t trial_index);

// Probability-toolkit Monte Carlo checks (distribution identities and tail
// bounds used throughout the analysis).
struct CheckResult {
    std::string name;
    bool pass = false;
    double statistic = 0.0;
    double threshold = 0.0;
};
std::vector<CheckResult> stats_toolkit_checks(RngStream& stream);

// Run a named experiment; deterministic in (config, seed).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Shared aggregation used by both run_experiment and the report command.
std::vector<std::pair<std::string, double>> summarize_trials(
    const std::string& experiment, const std::vector<std::string>& columns,
    const std::vector<TrialRecord>& trials);

}  // namespace fwpoly
