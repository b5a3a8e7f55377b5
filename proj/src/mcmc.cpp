#include "graphens/mcmc.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <thread>

namespace graphens {

void SamplerConfig::check() const {
    if (n < 2 || n > 4096) throw usage_error("sampler vertex count must be in [2, 4096]");
    if (families.empty()) throw usage_error("sampler needs at least one family");
    if (theta.size() != families.size()) throw usage_error("theta size does not match families");
    if (total_steps == 0 || burnin_steps >= total_steps)
        throw usage_error("burn-in must be smaller than the total step count");
    if (thin == 0) throw usage_error("thinning interval must be >= 1");
    if (chains < 1) throw usage_error("chain count must be >= 1");
    if (!(init_density >= 0.0 && init_density <= 1.0))
        throw usage_error("initial density must lie in [0,1]");
    if (init_graph && init_graph->n != n) throw usage_error("initial graph has wrong vertex count");
    for (const auto& f : families)
        if (f.kind == FamilyKind::Star && f.star_arity > 11)
            throw usage_error("star arity above 11 overflows the incremental counters");
}

namespace {

// Adjacency with multi-word rows and cached degrees; tracks the raw integer
// statistics of the configured families incrementally.
struct SampleState {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> rows; // n * words
    std::vector<int> deg;
    const std::vector<SubgraphFamily>* families = nullptr;

    std::int64_t edges = 0;
    std::int64_t triangles = 0;           // unordered triangle count
    std::vector<i128> star_sums;          // per star-like family, sum deg^j
    std::vector<int> star_arities;

    std::vector<double> scale;            // t_k = raw_k * scale_k
    std::vector<double> nv;               // n^{V_k}

    void init(const SamplerConfig& cfg, std::mt19937_64& rng) {
        n = cfg.n;
        words = (n + 63) / 64;
        rows.assign(static_cast<std::size_t>(n) * words, 0);
        deg.assign(n, 0);
        families = &cfg.families;

        if (cfg.init_graph) {
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (cfg.init_graph->has_edge(i, j)) set_edge(i, j);
        } else {
            std::bernoulli_distribution coin(cfg.init_density);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (coin(rng)) set_edge(i, j);
        }

        edges = 0;
        for (int v = 0; v < n; ++v) edges += deg[v];
        edges /= 2;
        triangles = count_triangles();

        star_sums.clear();
        star_arities.clear();
        scale.clear();
        nv.clear();
        for (const auto& f : *families) {
            double v = pow_int(static_cast<double>(n), f.vertices());
            nv.push_back(v);
            switch (f.kind) {
                case FamilyKind::Edge: scale.push_back(2.0 / v); break;
                case FamilyKind::Triangle: scale.push_back(6.0 / v); break;
                case FamilyKind::Wedge:
                case FamilyKind::Star: {
                    scale.push_back(1.0 / v);
                    int j = f.kind == FamilyKind::Wedge ? 2 : f.star_arity;
                    star_arities.push_back(j);
                    i128 acc = 0;
                    for (int vtx = 0; vtx < n; ++vtx) acc += ipow_i128(deg[vtx], j);
                    star_sums.push_back(acc);
                    break;
                }
            }
        }
    }

    bool has_edge(int i, int j) const {
        return (rows[static_cast<std::size_t>(i) * words + j / 64] >> (j % 64)) & 1u;
    }

    void set_edge(int i, int j) {
        rows[static_cast<std::size_t>(i) * words + j / 64] |= 1ull << (j % 64);
        rows[static_cast<std::size_t>(j) * words + i / 64] |= 1ull << (i % 64);
        ++deg[i];
        ++deg[j];
    }

    void clear_edge(int i, int j) {
        rows[static_cast<std::size_t>(i) * words + j / 64] &= ~(1ull << (j % 64));
        rows[static_cast<std::size_t>(j) * words + i / 64] &= ~(1ull << (i % 64));
        --deg[i];
        --deg[j];
    }

    int codegree(int i, int j) const {
        const std::uint64_t* ri = rows.data() + static_cast<std::size_t>(i) * words;
        const std::uint64_t* rj = rows.data() + static_cast<std::size_t>(j) * words;
        int c = 0;
        for (int w = 0; w < words; ++w) c += std::popcount(ri[w] & rj[w]);
        return c; // bits i and j never intersect (zero diagonal)
    }

    std::int64_t count_triangles() const {
        std::int64_t walks = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (has_edge(i, j)) walks += codegree(i, j);
        return walks / 3;
    }

    // Hamiltonian delta for toggling {i,j}: n^2 sum_k theta_k dt_k, all local.
    double delta_h(int i, int j, const std::vector<double>& theta, int s, int codeg) const {
        double dh = 0.0;
        std::size_t star_cursor = 0;
        const double n2 = static_cast<double>(n) * n;
        for (std::size_t k = 0; k < families->size(); ++k) {
            double draw;
            switch ((*families)[k].kind) {
                case FamilyKind::Edge: draw = 2.0 * s; break;
                case FamilyKind::Triangle: draw = 6.0 * static_cast<double>(s) * codeg; break;
                default: {
                    int j_ar = star_arities[star_cursor++];
                    i128 di = deg[i], dj = deg[j];
                    i128 d = ipow_i128(di + s, j_ar) - ipow_i128(di, j_ar) +
                             ipow_i128(dj + s, j_ar) - ipow_i128(dj, j_ar);
                    draw = static_cast<double>(d);
                    break;
                }
            }
            dh += theta[k] * draw / nv[k];
        }
        return n2 * dh;
    }

    void apply_toggle(int i, int j, int s, int codeg) {
        std::size_t star_cursor = 0;
        for (std::size_t k = 0; k < families->size(); ++k) {
            switch ((*families)[k].kind) {
                case FamilyKind::Edge: break;
                case FamilyKind::Triangle: break;
                default: {
                    int j_ar = star_arities[star_cursor];
                    i128 di = deg[i], dj = deg[j];
                    star_sums[star_cursor] += ipow_i128(di + s, j_ar) - ipow_i128(di, j_ar) +
                                              ipow_i128(dj + s, j_ar) - ipow_i128(dj, j_ar);
                    ++star_cursor;
                    break;
                }
            }
        }
        edges += s;
        triangles += s * codeg;
        if (s > 0) set_edge(i, j);
        else clear_edge(i, j);
    }

    void densities(std::vector<double>& t) const {
        t.resize(families->size());
        std::size_t star_cursor = 0;
        for (std::size_t k = 0; k < families->size(); ++k) {
            switch ((*families)[k].kind) {
                case FamilyKind::Edge: t[k] = 2.0 * edges / nv[k]; break;
                case FamilyKind::Triangle: t[k] = 6.0 * triangles / nv[k]; break;
                default: t[k] = static_cast<double>(star_sums[star_cursor++]) / nv[k]; break;
            }
        }
    }
};

struct ChainResult {
    std::vector<double> mean;
    std::vector<std::vector<double>> batch_means; // batch x family
    double acceptance = 0.0;
    std::uint64_t samples = 0;
    std::vector<double> m2; // per-family sum of squared deviations (Welford)
};

ChainResult run_single_chain(const SamplerConfig& cfg, int chain_index, const SampleCallback& cb) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(chain_index));
    SampleState st;
    st.init(cfg, rng);

    const std::size_t m = cfg.families.size();
    std::uniform_int_distribution<int> pick(0, cfg.n - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const std::uint64_t recorded_total = (cfg.total_steps - cfg.burnin_steps) / cfg.thin;
    const int nbatches = 32;
    const std::uint64_t batch_len = std::max<std::uint64_t>(1, recorded_total / nbatches);

    ChainResult res;
    res.mean.assign(m, 0.0);
    res.m2.assign(m, 0.0);
    std::vector<double> batch_acc(m, 0.0);
    std::uint64_t batch_count = 0;

    std::uint64_t accepted = 0;
    std::vector<double> t(m);
    std::uint64_t recorded = 0;

    for (std::uint64_t step = 1; step <= cfg.total_steps; ++step) {
        int i = pick(rng), j = pick(rng);
        while (j == i) j = pick(rng);
        int s = st.has_edge(i, j) ? -1 : +1;
        int codeg = st.codegree(i, j);
        double dh = st.delta_h(i, j, cfg.theta, s, codeg);
        if (dh >= 0.0 || unif(rng) < std::exp(dh)) {
            st.apply_toggle(i, j, s, codeg);
            ++accepted;
        }
        if (step > cfg.burnin_steps && (step - cfg.burnin_steps) % cfg.thin == 0) {
            st.densities(t);
            ++recorded;
            for (std::size_t k = 0; k < m; ++k) {
                double d = t[k] - res.mean[k];
                res.mean[k] += d / recorded;
                res.m2[k] += d * (t[k] - res.mean[k]);
                batch_acc[k] += t[k];
            }
            if (cb) cb(chain_index, recorded - 1, t);
            if (++batch_count == batch_len) {
                for (double& b : batch_acc) b /= batch_count;
                res.batch_means.push_back(batch_acc);
                batch_acc.assign(m, 0.0);
                batch_count = 0;
            }
        }
    }
    res.samples = recorded;
    res.acceptance = static_cast<double>(accepted) / cfg.total_steps;
    return res;
}

} // namespace

TraceSummary run_chain(const SamplerConfig& cfg, const SampleCallback& cb) {
    cfg.check();
    const std::size_t m = cfg.families.size();

    std::vector<ChainResult> chains(cfg.chains);
    if (cb || cfg.chains == 1) {
        for (int c = 0; c < cfg.chains; ++c) chains[c] = run_single_chain(cfg, c, cb);
    } else {
        std::vector<std::thread> pool;
        for (int c = 0; c < cfg.chains; ++c)
            pool.emplace_back([&, c] { chains[c] = run_single_chain(cfg, c, nullptr); });
        for (auto& th : pool) th.join();
    }

    TraceSummary out;
    out.mean.assign(m, 0.0);
    out.se.assign(m, 0.0);
    std::uint64_t total = 0;
    double acc = 0.0;
    for (const auto& c : chains) {
        total += c.samples;
        acc += c.acceptance;
        out.chain_mean.push_back(c.mean);
    }
    out.samples = total;
    out.acceptance_rate = acc / cfg.chains;
    for (std::size_t k = 0; k < m; ++k) {
        double s = 0.0;
        for (const auto& c : chains) s += c.mean[k] * c.samples;
        out.mean[k] = s / total;
    }

    // batch-means SE pooled across chains
    std::vector<std::vector<double>> batches;
    for (const auto& c : chains)
        for (const auto& b : c.batch_means) batches.push_back(b);
    if (batches.size() >= 2) {
        double inv = 1.0 / batches.size();
        for (std::size_t k = 0; k < m; ++k) {
            double bm = 0.0;
            for (const auto& b : batches) bm += b[k];
            bm *= inv;
            double v = 0.0;
            for (const auto& b : batches) v += (b[k] - bm) * (b[k] - bm);
            v /= (batches.size() - 1);
            out.se[k] = std::sqrt(v * inv);
        }
    }

    // effective-sample proxy from the first family: sample variance / SE^2
    double m2 = 0.0;
    for (const auto& c : chains) m2 += c.m2.empty() ? 0.0 : c.m2[0];
    if (total > 1 && !out.se.empty() && out.se[0] > 0.0) {
        double svar = m2 / (total - 1);
        out.ess_proxy = svar / (out.se[0] * out.se[0]);
    } else {
        out.ess_proxy = static_cast<double>(total);
    }
    return out;
}

AveragingReport averaging_check(ScalarModel model, int star_j, double target, SamplerConfig cfg) {
    AveragingReport rep;
    InvertResult inv = invert_constraint(model, star_j, target);
    rep.theta = inv.theta;
    rep.u_star = inv.u_star;

    cfg.theta.assign(cfg.families.size(), 0.0);
    if (cfg.families.size() != 1)
        throw usage_error("averaging_check works on single-family scalar models");
    cfg.theta[0] = inv.theta;

    std::vector<int> exps = {cfg.families[0].edges()};
    ScalarSolution sol = scalar_sup({inv.theta}, exps);
    rep.tie_warning = !sol.unique;

    rep.trace = run_chain(cfg);
    rep.expected.assign(1, pow_int(inv.u_star, exps[0]));
    rep.abs_error.assign(1, std::abs(rep.trace.mean[0] - rep.expected[0]));
    return rep;
}

} // namespace graphens
