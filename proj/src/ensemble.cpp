#include "graphens/ensemble.hpp"

#include <cmath>
#include <limits>

namespace graphens {

namespace {

// One pass over the table: shifted weights w_i = count_i exp(n^2 theta.t_i - shift).
struct TiltedPass {
    double shift = 0.0;
    double weight_sum = 0.0;
};

template <typename Visitor>
TiltedPass tilted_sweep(const StatTable& table, const std::vector<double>& theta, Visitor&& visit) {
    if (theta.size() != table.families.size()) throw usage_error("theta size does not match families");
    const double n2 = static_cast<double>(table.n) * table.n;
    const std::size_t m = table.families.size();

    std::vector<double> scale(m);
    for (std::size_t k = 0; k < m; ++k) scale[k] = table.density_scale(k);

    auto exponent = [&](std::size_t i) {
        double e = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            e += theta[k] * scale[k] * static_cast<double>(table.keys[i][k]);
        return n2 * e;
    };

    TiltedPass pass;
    pass.shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < table.size(); ++i) pass.shift = std::max(pass.shift, exponent(i));

    std::vector<double> t(m);
    for (std::size_t i = 0; i < table.size(); ++i) {
        double w = static_cast<double>(table.counts[i]) * std::exp(exponent(i) - pass.shift);
        for (std::size_t k = 0; k < m; ++k)
            t[k] = scale[k] * static_cast<double>(table.keys[i][k]);
        pass.weight_sum += w;
        visit(i, w, t);
    }
    return pass;
}

} // namespace

double partition_log(const StatTable& table, const std::vector<double>& theta) {
    TiltedPass pass = tilted_sweep(table, theta, [](std::size_t, double, const std::vector<double>&) {});
    const double n2 = static_cast<double>(table.n) * table.n;
    return (pass.shift + std::log(pass.weight_sum)) / n2;
}

std::vector<double> canonical_mean(const StatTable& table, const std::vector<double>& theta) {
    const std::size_t m = table.families.size();
    std::vector<double> acc(m, 0.0);
    TiltedPass pass = tilted_sweep(table, theta, [&](std::size_t, double w, const std::vector<double>& t) {
        for (std::size_t k = 0; k < m; ++k) acc[k] += w * t[k];
    });
    for (double& a : acc) a /= pass.weight_sum;
    return acc;
}

CanonicalMoments canonical_moments(const StatTable& table, const std::vector<double>& theta) {
    const std::size_t m = table.families.size();
    CanonicalMoments out;
    out.mean = canonical_mean(table, theta);
    out.cov.assign(m * m, 0.0);
    TiltedPass pass = tilted_sweep(table, theta, [&](std::size_t, double w, const std::vector<double>& t) {
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                out.cov[a * m + b] += w * (t[a] - out.mean[a]) * (t[b] - out.mean[b]);
    });
    for (double& c : out.cov) c /= pass.weight_sum;
    const double n2 = static_cast<double>(table.n) * table.n;
    out.psi = (pass.shift + std::log(pass.weight_sum)) / n2;
    return out;
}

EntropyValue relative_entropy(const StatTable& table, const StatKey& key,
                              const std::vector<double>& theta_fitted, double mean_tol) {
    std::uint64_t omega = micro_count(table, key);
    if (omega == 0) throw infeasible_error("constraint key is not realisable by any graph");

    std::vector<double> target = table.density_of(key);
    std::vector<double> mean = canonical_mean(table, theta_fitted);
    for (std::size_t k = 0; k < target.size(); ++k)
        if (std::abs(mean[k] - target[k]) > mean_tol)
            throw numerical_error("multiplier does not realise the soft constraint");

    const double n2 = static_cast<double>(table.n) * table.n;
    double dot = 0.0;
    for (std::size_t k = 0; k < target.size(); ++k) dot += theta_fitted[k] * target[k];
    double psi = partition_log(table, theta_fitted);

    EntropyValue ev;
    ev.S_n = -std::log(static_cast<double>(omega)) - n2 * (dot - psi);
    ev.s_n = ev.S_n / n2;
    return ev;
}

} // namespace graphens
