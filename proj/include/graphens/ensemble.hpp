// Canonical-ensemble computations over a StatTable: the log-partition psi_n,
// canonical means and covariance of the density operator, and the relative
// entropy of the microcanonical ensemble given a fitted multiplier.
#pragma once

#include <vector>

#include "graphens/stat_table.hpp"

namespace graphens {

// psi_n(theta) = (1/n^2) log sum_keys count * exp(n^2 theta . t(key)),
// evaluated with a max shift so overflow is impossible.
double partition_log(const StatTable& table, const std::vector<double>& theta);

// <T> under the canonical ensemble, = grad psi_n(theta).
std::vector<double> canonical_mean(const StatTable& table, const std::vector<double>& theta);

struct CanonicalMoments {
    std::vector<double> mean; // m
    std::vector<double> cov;  // m*m covariance of t (row-major, symmetric)
    double psi = 0.0;
};

CanonicalMoments canonical_moments(const StatTable& table, const std::vector<double>& theta);

struct EntropyValue {
    double S_n = 0.0; // relative entropy of P_mic w.r.t. P_can
    double s_n = 0.0; // S_n / n^2
};

// S_n = -log Omega - n^2 (theta . t(key) - psi_n(theta)). Requires theta
// already fitted to the key's densities; mean_tol guards against unfitted
// multipliers.
EntropyValue relative_entropy(const StatTable& table, const StatKey& key,
                              const std::vector<double>& theta_fitted, double mean_tol = 1e-6);

} // namespace graphens
