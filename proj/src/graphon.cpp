#include "graphens/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

namespace graphens {

StepGraphon StepGraphon::constant(double p) {
    StepGraphon h;
    h.widths = {1.0};
    h.values = {p};
    return h;
}

StepGraphon StepGraphon::uniform_blocks(int k, double fill) {
    StepGraphon h;
    h.widths.assign(k, 1.0 / k);
    h.values.assign(static_cast<size_t>(k) * k, fill);
    return h;
}

void StepGraphon::check_valid() const {
    int k = blocks();
    if (k == 0) throw usage_error("step graphon needs at least one block");
    if (values.size() != static_cast<size_t>(k) * k)
        throw usage_error("step graphon value matrix has wrong shape");
    double total = 0.0;
    for (double w : widths) {
        if (!(w > 0.0)) throw usage_error("block widths must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw usage_error("block widths must sum to 1");
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            double v = value(a, b);
            if (!(v >= 0.0 && v <= 1.0)) throw usage_error("graphon values must lie in [0,1]");
            if (v != value(b, a)) throw usage_error("graphon value matrix must be symmetric");
        }
}

StepGraphon graphon_of_graph(const LabeledGraph& g) {
    StepGraphon h = StepGraphon::uniform_blocks(g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            h.value(i, j) = g.has_edge(i, j) ? 1.0 : 0.0;
    return h;
}

double density(const SubgraphFamily& f, const StepGraphon& h) {
    int k = h.blocks();
    switch (f.kind) {
        case FamilyKind::Edge: {
            double acc = 0.0;
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) acc += h.widths[a] * h.widths[b] * h.value(a, b);
            return acc;
        }
        case FamilyKind::Wedge:
        case FamilyKind::Star: {
            int j = (f.kind == FamilyKind::Wedge) ? 2 : f.star_arity;
            double acc = 0.0;
            for (int a = 0; a < k; ++a) {
                double row = 0.0; // marginal M(x) on block a
                for (int b = 0; b < k; ++b) row += h.widths[b] * h.value(a, b);
                acc += h.widths[a] * pow_int(row, j);
            }
            return acc;
        }
        case FamilyKind::Triangle: {
            double acc = 0.0;
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) {
                    double hab = h.value(a, b);
                    if (hab == 0.0) continue;
                    double inner = 0.0;
                    for (int c = 0; c < k; ++c)
                        inner += h.widths[c] * h.value(b, c) * h.value(c, a);
                    acc += h.widths[a] * h.widths[b] * hab * inner;
                }
            return acc;
        }
    }
    return 0.0;
}

double rate_scalar(double u, std::optional<double> p) {
    if (!(u >= 0.0 && u <= 1.0)) throw usage_error("rate function argument outside [0,1]");
    auto xlog = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    if (!p) return 0.5 * (xlog(u) + xlog(1.0 - u));
    double q = *p;
    if (!(q > 0.0 && q < 1.0)) throw usage_error("reference density must lie in (0,1)");
    double a = u > 0.0 ? 0.5 * u * std::log(u / q) : 0.0;
    double b = u < 1.0 ? 0.5 * (1.0 - u) * std::log((1.0 - u) / (1.0 - q)) : 0.0;
    return a + b;
}

double rate_scalar_derivative(double u) {
    if (u <= 0.0) return -std::numeric_limits<double>::infinity();
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    return 0.5 * std::log(u / (1.0 - u));
}

double rate_functional(const StepGraphon& h, std::optional<double> p) {
    int k = h.blocks();
    double acc = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            acc += h.widths[a] * h.widths[b] * rate_scalar(h.value(a, b), p);
    return acc;
}

namespace {

// Common refinement of two step graphons: merged interval boundaries, values
// copied cellwise. Zero-width cells are dropped.
struct Refined {
    std::vector<double> widths;
    std::vector<double> diff; // k*k matrix h1-h2
};

Refined refine_difference(const StepGraphon& h1, const StepGraphon& h2) {
    auto cuts = [](const StepGraphon& h) {
        std::vector<double> c{0.0};
        double acc = 0.0;
        for (double w : h.widths) {
            acc += w;
            c.push_back(acc);
        }
        c.back() = 1.0;
        return c;
    };
    std::vector<double> c1 = cuts(h1), c2 = cuts(h2);
    std::vector<double> merged;
    merged.reserve(c1.size() + c2.size());
    std::merge(c1.begin(), c1.end(), c2.begin(), c2.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 merged.end());

    auto block_of = [](const std::vector<double>& c, double mid) {
        // interval index containing mid
        auto it = std::upper_bound(c.begin(), c.end(), mid);
        int idx = static_cast<int>(it - c.begin()) - 1;
        return std::clamp(idx, 0, static_cast<int>(c.size()) - 2);
    };

    int k = static_cast<int>(merged.size()) - 1;
    Refined r;
    r.widths.resize(k);
    std::vector<int> b1(k), b2(k);
    for (int i = 0; i < k; ++i) {
        r.widths[i] = merged[i + 1] - merged[i];
        double mid = 0.5 * (merged[i] + merged[i + 1]);
        b1[i] = block_of(c1, mid);
        b2[i] = block_of(c2, mid);
    }
    r.diff.resize(static_cast<size_t>(k) * k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            r.diff[static_cast<size_t>(a) * k + b] = h1.value(b1[a], b1[b]) - h2.value(b2[a], b2[b]);
    return r;
}

// Given the S-marginals m_b = sum_{a in S} w_a D_ab w_b, the optimal column
// set is chosen cellwise by sign, separately for each sign of the objective.
double best_columns(const std::vector<double>& marginal) {
    double pos = 0.0, neg = 0.0;
    for (double m : marginal) {
        if (m > 0.0) pos += m;
        else neg += m;
    }
    return std::max(pos, -neg);
}

} // namespace

CutDistanceResult cut_distance(const StepGraphon& h1, const StepGraphon& h2, CutDistanceMode mode,
                               int max_exact_blocks, int restarts, std::uint64_t seed) {
    Refined r = refine_difference(h1, h2);
    int k = static_cast<int>(r.widths.size());
    CutDistanceResult res;
    res.refined_blocks = k;

    bool exact = (mode == CutDistanceMode::Exact) || k <= max_exact_blocks;
    if (mode == CutDistanceMode::Exact && k > 64)
        throw usage_error("exact cut distance limited to 64 refined blocks");

    if (exact) {
        double best = 0.0;
        std::vector<char> in_s(k, 0);
        std::vector<double> marginal(k, 0.0);
        // Gray-order walk over all subsets: one membership flip per step, so
        // the column marginals update in O(k).
        std::uint64_t gray_prev = 0;
        for (std::uint64_t m = 1; m < (1ull << k); ++m) {
            std::uint64_t gray = m ^ (m >> 1);
            int bit = std::countr_zero(gray ^ gray_prev);
            gray_prev = gray;
            in_s[bit] ^= 1;
            double sign = in_s[bit] ? 1.0 : -1.0;
            for (int b = 0; b < k; ++b)
                marginal[b] += sign * r.widths[bit] * r.diff[static_cast<size_t>(bit) * k + b] *
                               r.widths[b];
            best = std::max(best, best_columns(marginal));
        }
        res.value = best;
        res.exact = true;
        return res;
    }

    // Alternating maximization heuristic: certified lower bound only.
    std::mt19937_64 rng(seed);
    double best = 0.0;
    for (int t = 0; t < std::max(restarts, 32); ++t) {
        std::vector<char> in_s(k);
        for (auto& b : in_s) b = static_cast<char>(rng() & 1);
        double cur = 0.0;
        for (int sign : {+1, -1}) {
            std::vector<char> s = in_s, col(k, 0);
            double val = 0.0;
            for (int iter = 0; iter < 64; ++iter) {
                // columns given rows
                for (int b = 0; b < k; ++b) {
                    double m = 0.0;
                    for (int a = 0; a < k; ++a)
                        if (s[a]) m += r.widths[a] * r.diff[static_cast<size_t>(a) * k + b];
                    col[b] = sign * m > 0.0;
                }
                // rows given columns
                for (int a = 0; a < k; ++a) {
                    double m = 0.0;
                    for (int b = 0; b < k; ++b)
                        if (col[b]) m += r.widths[b] * r.diff[static_cast<size_t>(a) * k + b];
                    s[a] = sign * m > 0.0;
                }
                double v = 0.0;
                for (int a = 0; a < k; ++a)
                    if (s[a])
                        for (int b = 0; b < k; ++b)
                            if (col[b])
                                v += r.widths[a] * r.widths[b] * r.diff[static_cast<size_t>(a) * k + b];
                v *= sign;
                if (v <= val + 1e-15) break;
                val = v;
            }
            cur = std::max(cur, val);
        }
        best = std::max(best, cur);
    }
    res.value = best;
    res.exact = false;
    return res;
}

double delta_cut_upper(const StepGraphon& h1, const StepGraphon& h2) {
    int k = h1.blocks();
    if (k != h2.blocks()) throw usage_error("delta_cut_upper needs equal block counts");
    if (k > 8) throw usage_error("delta_cut_upper limited to 8 blocks");
    for (const auto& h : {h1, h2})
        for (double w : h.widths)
            if (std::abs(w - 1.0 / k) > 1e-12)
                throw usage_error("delta_cut_upper needs equal-width blocks");

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        StepGraphon g = h1;
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) g.value(a, b) = h1.value(perm[a], perm[b]);
        best = std::min(best, cut_distance(g, h2).value);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

ScallopGraphon scallop_graphon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0 / 6.0))
        throw infeasible_error("scallop parameter must lie strictly in (0, 1/6)");
    double s = std::sqrt(1.0 - 6.0 * epsilon);
    double c = (2.0 + s) / 6.0;
    double p = 4.0 * c * (1.0 - 2.0 * c) / ((1.0 - c) * (1.0 - c));

    ScallopGraphon out;
    out.epsilon = epsilon;
    out.c = c;
    out.p = p;
    out.h.widths = {c, (1.0 - c) / 2.0, (1.0 - c) / 2.0};
    out.h.values = {0.0, 1.0, 1.0,
                    1.0, 0.0, p,
                    1.0, p, 0.0};
    return out;
}

StepGraphon read_graphon_text(std::istream& in) {
    int k = 0;
    if (!(in >> k) || k <= 0) throw usage_error("graphon file: missing block count");
    StepGraphon h;
    h.widths.resize(k);
    for (double& w : h.widths)
        if (!(in >> w)) throw usage_error("graphon file: missing width");
    h.values.resize(static_cast<size_t>(k) * k);
    for (double& v : h.values)
        if (!(in >> v)) throw usage_error("graphon file: missing value");
    h.check_valid();
    return h;
}

void write_graphon_text(const StepGraphon& h, std::ostream& out) {
    int k = h.blocks();
    out << k << "\n";
    out.precision(17);
    for (int a = 0; a < k; ++a) out << h.widths[a] << (a + 1 == k ? "\n" : " ");
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) out << h.value(a, b) << (b + 1 == k ? "\n" : " ");
}

} // namespace graphens
