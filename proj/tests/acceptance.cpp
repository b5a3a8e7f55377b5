// Acceptance suite: one pass/fail line per criterion, each pinned to its
// stated tolerance and runtime budget. Returns the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "graphens/fit.hpp"
#include "graphens/mcmc.hpp"
#include "graphens/phase.hpp"
#include "graphens/variational.hpp"

using namespace graphens;

namespace {

struct Reporter {
    int checks = 0;
    int failures = 0;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failures;
            notes.push_back("FAILED: " + what);
        }
    }
    void info(const std::string& what) { notes.push_back("info: " + what); }
};

int g_failed_criteria = 0;

void run_criterion(const std::string& name, double budget_seconds,
                   const std::function<void(Reporter&)>& body) {
    Reporter rep;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(rep);
    } catch (const std::exception& e) {
        rep.require(false, std::string("unexpected exception: ") + e.what());
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_seconds > 0)
        rep.require(elapsed < budget_seconds,
                    "runtime " + std::to_string(elapsed) + " s exceeds budget " +
                        std::to_string(budget_seconds) + " s");
    bool pass = rep.failures == 0;
    if (!pass) ++g_failed_criteria;
    std::printf("[%s] %s  (%d checks, %.2f s)\n", pass ? "PASS" : "FAIL", name.c_str(), rep.checks,
                elapsed);
    for (const auto& n : rep.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
}

std::string run_cli_capture(const std::string& args) {
    std::string cmd = std::string(GRAPHENS_CLI_PATH) + " " + args + " 2>/dev/null";
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return out;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
    pclose(pipe);
    return out;
}

// reduced integer fraction, for the exact scallop parameter check
struct Frac {
    long long num, den;
    Frac(long long n, long long d) : num(n), den(d) {
        long long g = std::gcd(std::abs(n), std::abs(d));
        if (g) {
            num /= g;
            den /= g;
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
    }
    Frac operator*(const Frac& o) const { return {num * o.num, den * o.den}; }
    Frac operator/(const Frac& o) const { return {num * o.den, den * o.num}; }
    Frac operator+(const Frac& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Frac operator-(const Frac& o) const { return {num * o.den - o.num * den, den * o.den}; }
    double value() const { return static_cast<double>(num) / den; }
};

const std::vector<SubgraphFamily> kEdgeTri = {SubgraphFamily::edge(), SubgraphFamily::triangle()};

void criterion1(Reporter& rep) {
    for (int n = 3; n <= 6; ++n) {
        StatTable t = enumerate_graphs(n, {SubgraphFamily::triangle()});
        EnsembleEntropyResult r = ensemble_entropy(t, {0});
        rep.require(r.S_n == 0.0, "S_n not exactly zero at n=" + std::to_string(n));
    }
    StatTable t4 = enumerate_graphs(4, {SubgraphFamily::triangle()});
    rep.require(micro_count(t4, {0}) == 41, "triangle-free count at n=4 differs from 41");
    // the CLI path must report the exact zero as well
    std::string out = run_cli_capture("entropy --n 4 --families triangle --target 0");
    rep.require(out.find("\"S_n\": 0\n") != std::string::npos ||
                    out.find("\"S_n\": 0,") != std::string::npos,
                "CLI entropy did not print S_n = 0");
    rep.require(out.find("\"omega\": 41") != std::string::npos, "CLI entropy omega differs from 41");
}

void criterion2(Reporter& rep) {
    StatTable t = enumerate_graphs(5, kEdgeTri);
    for (double p : {0.3, 0.5, 0.7}) {
        std::vector<double> target = er_moments(5, kEdgeTri, p);
        FitOptions opt;
        opt.tol = 1e-12;
        FitResult f = fit_theta(t, target, opt);
        double expect = 0.5 * std::log(p / (1.0 - p));
        rep.require(std::abs(f.theta[0] - expect) <= 1e-8,
                    "theta1 off at p=" + std::to_string(p) + ": " + std::to_string(f.theta[0]));
        rep.require(std::abs(f.theta[1]) <= 1e-8,
                    "theta2 not zero at p=" + std::to_string(p) + ": " + std::to_string(f.theta[1]));
    }
}

void criterion3(Reporter& rep) {
    // Faithful form: over all feasible (fit-admissible) keys at n=5, the signs
    // of the fitted multipliers must equal the signs of the gaps to the exact
    // uniform-mean thresholds, with zero exceptions.
    StatTable t = enumerate_graphs(5, kEdgeTri);
    std::vector<double> mu = canonical_mean(t, {0.0, 0.0});
    StatTable t3 = enumerate_graphs(5, {SubgraphFamily::triangle()});
    auto sgn = [](double x) { return x > 1e-9 ? 1 : (x < -1e-9 ? -1 : 0); };

    int tested = 0, exceptions = 0;
    bool combined_ok = true, matched_ok = true;
    std::string first_bad;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (hull_position(t, t.keys[i]) != HullPosition::Interior) continue;
        std::vector<double> target = t.density_of_index(i);
        FitOptions opt;
        opt.tol = 1e-11;
        FitResult f = fit_theta(t, target, opt);
        ++tested;
        bool ok1 = sgn(f.theta[0]) == sgn(target[0] - mu[0]);
        bool ok2 = sgn(f.theta[1]) == sgn(target[1] - mu[1]);
        if (!(ok1 && ok2)) {
            ++exceptions;
            if (first_bad.empty()) {
                char buf[256];
                std::snprintf(buf, sizeof buf,
                              "key (%lld,%lld): theta=(%.4f,%.4f), gaps=(%.4f,%.4f)",
                              static_cast<long long>(t.keys[i][0]),
                              static_cast<long long>(t.keys[i][1]), f.theta[0], f.theta[1],
                              target[0] - mu[0], target[1] - mu[1]);
                first_bad = buf;
            }
        }
        // provable finite-n forms, reported alongside
        double inner =
            f.theta[0] * (target[0] - mu[0]) + f.theta[1] * (target[1] - mu[1]);
        combined_ok = combined_ok && inner >= -1e-9;
        double m2 = er_moments(5, {SubgraphFamily::triangle()}, target[0] * 5.0 / 4.0)[0];
        matched_ok = matched_ok && sgn(f.theta[1]) == sgn(target[1] - m2);
        FitResult trif = fit_theta(t3, {target[1]}, opt);
        double m1 = canonical_mean(t, {0.0, trif.theta[0]})[0];
        matched_ok = matched_ok && sgn(f.theta[0]) == sgn(target[0] - m1);
    }
    rep.require(tested > 0, "no fit-admissible keys found");
    rep.require(exceptions == 0, std::to_string(exceptions) + " of " + std::to_string(tested) +
                                     " keys violate the per-coordinate sign rule; first: " +
                                     first_bad + " (see the 1-D and matched-reference forms below)");
    rep.info(std::string("combined inequality theta.(T*-mu) >= 0: ") +
             (combined_ok ? "holds on all keys" : "VIOLATED"));
    rep.info(std::string("matched-reference sign laws (edge-matched ER for theta2, "
                         "triangle-matched tilt for theta1): ") +
             (matched_ok ? "hold on all keys" : "VIOLATED"));

    // the 1-D models with exact thresholds (the rigorous part of the rule)
    bool oned_ok = true;
    double mu3 = canonical_mean(t3, {0.0})[0];
    for (std::size_t i = 0; i < t3.size(); ++i) {
        if (hull_position(t3, t3.keys[i]) != HullPosition::Interior) continue;
        std::vector<double> target = t3.density_of_index(i);
        FitResult f = fit_theta(t3, target);
        oned_ok = oned_ok && sgn(f.theta[0]) == sgn(target[0] - mu3);
    }
    StatTable t1 = enumerate_graphs(5, {SubgraphFamily::edge()});
    double mu1 = canonical_mean(t1, {0.0})[0];
    for (std::size_t i = 0; i < t1.size(); ++i) {
        if (hull_position(t1, t1.keys[i]) != HullPosition::Interior) continue;
        std::vector<double> target = t1.density_of_index(i);
        FitResult f = fit_theta(t1, target);
        oned_ok = oned_ok && sgn(f.theta[0]) == sgn(target[0] - mu1);
    }
    rep.info(std::string("1-D triangle-only / edge-only exact-threshold sign rule: ") +
             (oned_ok ? "holds on all keys" : "VIOLATED"));
}

void criterion4(Reporter& rep) {
    for (double t2 : {0.125, 0.216, 0.6}) {
        SInfVerdict v = s_inf_triangle(t2);
        rep.require(v.kind == SInfKind::Zero, "triangle t2=" + std::to_string(t2) + " not Zero");
        rep.require(std::abs(v.term_gap) <= 1e-9,
                    "triangle t2=" + std::to_string(t2) + " term gap " + std::to_string(v.term_gap));
    }
    for (auto [j, target] : std::vector<std::pair<int, double>>{{2, 0.49}, {3, 0.343}}) {
        SInfVerdict v = s_inf_star(j, target);
        rep.require(v.kind == SInfKind::Zero, "star j=" + std::to_string(j) + " not Zero");
        rep.require(std::abs(v.term_gap) <= 1e-9,
                    "star j=" + std::to_string(j) + " term gap " + std::to_string(v.term_gap));
    }
    for (double t1 : {0.3, 0.5, 0.7}) {
        SInfVerdict v = s_inf_edge_triangle(t1, t1 * t1 * t1);
        rep.require(v.kind == SInfKind::Zero && v.case_label == "II(a)",
                    "on-curve point t1=" + std::to_string(t1) + " not Zero/II(a)");
        rep.require(std::abs(v.term_gap) <= 1e-9,
                    "on-curve t1=" + std::to_string(t1) + " term gap " + std::to_string(v.term_gap));
    }
}

void criterion5(Reporter& rep) {
    // exact rational derivation at eps = 1/8: s = sqrt(1/4) = 1/2
    Frac s(1, 2);
    Frac c = (Frac(2, 1) + s) / Frac(6, 1);
    Frac one(1, 1);
    Frac p = Frac(4, 1) * c * (one - Frac(2, 1) * c) / ((one - c) * (one - c));
    rep.require(c.num == 5 && c.den == 12, "rational c is not 5/12");
    rep.require(p.num == 40 && p.den == 49, "rational p is not 40/49");

    ScallopGraphon sg = scallop_graphon(0.125);
    rep.require(std::abs(sg.c - c.value()) <= 1e-15, "c differs from 5/12");
    rep.require(std::abs(sg.p - p.value()) <= 1e-15, "p differs from 40/49");
    rep.require(std::abs(density(SubgraphFamily::edge(), sg.h) - 0.625) <= 1e-12,
                "edge density differs from 0.625");
    double rate_expect = 0.5 * (1.0 - c.value()) * (1.0 - c.value()) * rate_scalar(p.value());
    rep.require(std::abs(rate_functional(sg.h) - rate_expect) <= 1e-12,
                "rate value differs from (1-c)^2/2 I(p)");
    rep.require(std::abs(density(SubgraphFamily::triangle(), sg.h) - 25.0 / 144.0) <= 1e-12,
                "triangle integrator differs from 25/144");

    // the normalization note must be emitted with both readings
    std::string out = run_cli_capture("scallop --epsilon 0.125");
    rep.require(out.find("\"note\"") != std::string::npos, "CLI scallop emits no note");
    rep.require(out.find("triangle_subgraph_density") != std::string::npos,
                "CLI scallop lacks the unordered normalization");
    rep.require(out.find("factor 6") != std::string::npos, "note does not state the factor 6");
}

void criterion6(Reporter& rep) {
    std::mt19937_64 rng(20260808);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int k = 1 + static_cast<int>(rng() % 6);
        StepGraphon h;
        h.widths.resize(k);
        double total = 0.0;
        for (double& w : h.widths) {
            w = 0.05 + unif(rng);
            total += w;
        }
        for (double& w : h.widths) w /= total;
        h.values.assign(static_cast<size_t>(k) * k, 0.0);
        for (int a = 0; a < k; ++a)
            for (int b = a; b < k; ++b) {
                double v = unif(rng);
                h.value(a, b) = v;
                h.value(b, a) = v;
            }
        double lhs = rate_functional(h);
        double rhs = rate_scalar(density(SubgraphFamily::edge(), h));
        if (lhs < rhs - 1e-12) ++bad;
    }
    rep.require(bad == 0, std::to_string(bad) + " Jensen violations in 1000 graphons");

    MinRateOptions opt;
    opt.blocks = 4;
    opt.restarts = 8;
    MinRateResult edge = min_rate_on_levelset({SubgraphFamily::edge()}, {0.3}, opt);
    rep.require(std::abs(edge.value - rate_scalar(0.3)) <= 1e-6,
                "edge-only minimum misses I(0.3) by " +
                    std::to_string(std::abs(edge.value - rate_scalar(0.3))));
    MinRateResult star = min_rate_on_levelset({SubgraphFamily::star(2)}, {0.49}, opt);
    rep.require(std::abs(star.value - rate_scalar(0.7)) <= 1e-6,
                "star minimum misses I(0.7) by " +
                    std::to_string(std::abs(star.value - rate_scalar(0.7))));
}

void criterion7(Reporter& rep) {
    // n=6: five random multipliers against the exact canonical means
    StatTable table = enumerate_graphs(6, kEdgeTri);
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> unif(-0.25, 0.25);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> theta = {unif(rng), unif(rng)};
        std::vector<double> exact = canonical_mean(table, theta);
        SamplerConfig cfg;
        cfg.n = 6;
        cfg.families = kEdgeTri;
        cfg.theta = theta;
        cfg.total_steps = 4000000;
        cfg.burnin_steps = 400000;
        cfg.thin = 20;
        cfg.seed = 1000 + trial;
        cfg.chains = 2;
        TraceSummary t = run_chain(cfg);
        for (int k = 0; k < 2; ++k) {
            rep.require(t.se[k] > 0.0, "vanishing SE");
            rep.require(std::abs(t.mean[k] - exact[k]) <= 3.0 * t.se[k],
                        "n=6 trial " + std::to_string(trial) + " family " + std::to_string(k) +
                            ": |" + std::to_string(t.mean[k]) + " - " + std::to_string(exact[k]) +
                            "| > 3 SE (" + std::to_string(3.0 * t.se[k]) + ")");
        }
    }

    // n=200 triangle model at the variational multiplier for u* = 0.6
    SamplerConfig cfg;
    cfg.n = 200;
    cfg.families = {SubgraphFamily::triangle()};
    cfg.theta = {0.187716};
    cfg.total_steps = 10000000;
    cfg.burnin_steps = 2000000;
    cfg.thin = 1000;
    cfg.seed = 31415;
    cfg.chains = 2;
    cfg.init_density = 0.5;
    TraceSummary t = run_chain(cfg);
    rep.require(std::abs(t.mean[0] - 0.216) <= 0.02,
                "n=200 triangle mean " + std::to_string(t.mean[0]) + " misses 0.216 by more than 0.02");
    rep.info("n=200 mean t3 = " + std::to_string(t.mean[0]) + " (target 0.216 = 0.6^3)");
}

void criterion8(Reporter& rep) {
    // broken point (0.5, 0.2): s_n stays bounded away from zero
    std::vector<double> s_broken;
    for (int n = 4; n <= 7; ++n) {
        StatTable t = enumerate_graphs(n, kEdgeTri);
        StatKey key = snap_to_key(t, {0.5, 0.2});
        EnsembleEntropyResult r = ensemble_entropy(t, key);
        s_broken.push_back(r.s_n);
    }
    rep.require(s_broken[0] > 0.0, "s_4 is not positive at the broken point");
    for (std::size_t i = 1; i < s_broken.size(); ++i)
        rep.require(s_broken[i] >= 0.5 * s_broken[0],
                    "s_" + std::to_string(4 + i) + " = " + std::to_string(s_broken[i]) +
                        " dips below 0.5 * s_4 = " + std::to_string(0.5 * s_broken[0]));

    // triangle-only ER-moment targets: s_n non-increasing (p = 0.6 rule)
    double prev = 1e300;
    for (int n = 4; n <= 7; ++n) {
        StatTable t = enumerate_graphs(n, {SubgraphFamily::triangle()});
        double target = 0.216 * (n - 1.0) * (n - 2.0) / (static_cast<double>(n) * n);
        StatKey key = snap_to_key(t, {target});
        EnsembleEntropyResult r = ensemble_entropy(t, key);
        rep.require(r.s_n <= prev + 1e-12,
                    "triangle-only s_" + std::to_string(n) + " = " + std::to_string(r.s_n) +
                        " increased above " + std::to_string(prev));
        prev = r.s_n;
    }
}

void criterion9(Reporter& rep) {
    std::vector<std::vector<SubgraphFamily>> lists = {
        {SubgraphFamily::edge()},
        {SubgraphFamily::triangle()},
        {SubgraphFamily::wedge()},
        kEdgeTri,
    };
    int keys_checked = 0;
    for (int n : {3, 4, 5}) {
        for (const auto& fams : lists) {
            StatTable t = enumerate_graphs(n, fams);
            for (std::size_t i = 0; i < t.size(); ++i) {
                EnsembleEntropyResult r = ensemble_entropy(t, t.keys[i]);
                ++keys_checked;
                if (r.S_n < -1e-9)
                    rep.require(false, "negative S_n at n=" + std::to_string(n) + " key index " +
                                           std::to_string(i));
            }
        }
    }
    rep.require(keys_checked > 100, "suspiciously few keys checked");
    rep.info(std::to_string(keys_checked) + " feasible constraints checked");
}

} // namespace

int main(int argc, char** argv) {
    struct Entry {
        const char* id;
        const char* name;
        double budget;
        void (*body)(Reporter&);
    };
    const Entry entries[] = {
        {"C1", "C1 triangle-free exactness (S_n = 0, n=3..6; 41 at n=4)", 5.0, criterion1},
        {"C2", "C2 ER recovery at n=5 (theta1 = log-odds/2, theta2 = 0, 1e-8)", 60.0, criterion2},
        {"C3", "C3 multiplier sign rule, exact thresholds, all feasible keys at n=5", 0.0, criterion3},
        {"C4", "C4 variational equivalence (I(a), II(a), III; gap <= 1e-9)", 0.0, criterion4},
        {"C5", "C5 scallop formulas at eps = 1/8 (rational c, p; 1e-12)", 0.0, criterion5},
        {"C6", "C6 Jensen floor and constant-minimizer recovery (1e-6)", 0.0, criterion6},
        {"C7", "C7 MCMC consistency (n=6 exact 3 SE; n=200 triangle 0.216 +/- 0.02)", 600.0,
         criterion7},
        {"C8", "C8 relative-entropy trends (broken point; ER-moment rule)", 0.0, criterion8},
        {"C9", "C9 Gibbs positivity, exhaustive n <= 5", 0.0, criterion9},
    };
    const std::string pick = argc > 1 ? argv[1] : "";
    std::printf("acceptance suite%s%s\n", pick.empty() ? "" : ": ", pick.c_str());
    for (const Entry& e : entries)
        if (pick.empty() || pick == e.id) run_criterion(e.name, e.budget, e.body);
    std::printf("%d criterion(s) failed\n", g_failed_criteria);
    return g_failed_criteria;
}
