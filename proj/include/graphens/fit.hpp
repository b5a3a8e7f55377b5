// The averaging principle at finite n: find theta* with <T>(theta*) = T* by
// maximizing the concave dual theta.T* - psi_n(theta) (safeguarded Newton).
// Includes the exact convex-hull/face geometry needed for constraints on the
// boundary of the achievable set, where the multiplier diverges and the
// canonical ensemble closes onto a face.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "graphens/ensemble.hpp"

namespace graphens {

enum class FitFailure { HullBoundary, Degenerate, NoConvergence };

struct fit_error : numerical_error {
    FitFailure kind;
    fit_error(FitFailure k, const std::string& msg) : numerical_error(msg), kind(k) {}
};

struct FitOptions {
    double tol = 1e-10;   // on ||<T> - T*||_inf
    int max_iter = 300;
    double theta_cap = 1e4; // divergence guard -> HullBoundary
};

struct FitResult {
    std::vector<double> theta;
    int iterations = 0;
    double residual = 0.0;
};

// target is a homomorphism-density vector; must be strictly inside the convex
// hull of achievable densities (exact integer check for m <= 2, divergence
// guard beyond).
FitResult fit_theta(const StatTable& table, const std::vector<double>& target,
                    const FitOptions& opt = {});

// Where a target sits relative to the hull of achievable statistic vectors.
enum class HullPosition { Interior, Boundary, Outside };
HullPosition hull_position(const StatTable& table, const StatKey& key);

struct SignEntry {
    std::string family;
    double theta = 0.0;
    double target = 0.0;
    double uniform_mean = 0.0;        // <T_k> at theta = 0, the exact finite-n threshold
    double asymptotic_threshold = 0.0; // (1/2)^{E_k}: 1/2 edges, 1/8 triangles, ...
    int sign_theta = 0;
    int sign_gap = 0;                 // sign(T_k* - uniform mean)
    bool match = false;
};

struct SignReport {
    std::vector<SignEntry> entries;
    bool all_match = true;
};

// Fits theta* for the target and reports sign(theta_k*) against
// sign(T_k* - <T_k>(0)), plus the limiting thresholds (1/2)^{E_k}.
SignReport sign_check(const StatTable& table, const std::vector<double>& target,
                      const FitOptions& opt = {}, double sign_tol = 1e-9);

// Exact ER(p) homomorphism-density moments at finite n (closed forms; the
// binomial degree moments enter through Stirling numbers).
std::vector<double> er_moments(int n, const std::vector<SubgraphFamily>& families, double p);

struct TrajectoryPoint {
    int n = 0;
    std::vector<double> target;
    std::vector<double> theta;
    bool ok = false;
    std::string error;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    std::vector<double> theta_infinity; // variational-level prediction, NaN if unavailable
};

// Fits theta*_n over an n range for an n-dependent target rule and reports the
// sequence next to the variational prediction. Emits data, claims nothing.
Trajectory theta_trajectory(const std::vector<SubgraphFamily>& families,
                            const std::function<std::vector<double>(int)>& target_rule, int n_min,
                            int n_max, const std::vector<double>& theta_infinity = {});

// Face-aware relative entropy: S_n = -log P_can(T = T*) with the canonical
// ensemble closed onto the minimal face of the hull containing the key.
// Interior keys reduce to fit_theta + relative_entropy; a vertex face gives
// S_n = 0 through an integer-only path. Exact geometry for m <= 2.
struct EnsembleEntropyResult {
    StatKey key;
    std::vector<double> target;   // density vector of the key
    std::vector<double> theta;    // representative multiplier (in-face tilt)
    bool boundary = false;        // face reduction occurred
    int face_dim = 0;             // affine dimension of the minimal face
    std::size_t face_keys = 0;
    std::uint64_t omega = 0;
    double psi_face = 0.0;        // (1/n^2) log sum over the face
    double S_n = 0.0;
    double s_n = 0.0;
    int fit_iterations = 0;
    double fit_residual = 0.0;
};

EnsembleEntropyResult ensemble_entropy(const StatTable& table, const StatKey& key,
                                       const FitOptions& opt = {});

// Nearest achievable key to a real-valued density target (Euclidean in
// density space; ties resolved toward the lexicographically smaller key).
StatKey snap_to_key(const StatTable& table, const std::vector<double>& target);

} // namespace graphens
