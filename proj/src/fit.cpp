#include "graphens/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace graphens {

namespace {

// ---- small dense linear algebra (m <= 4) ----------------------------------

std::vector<double> solve_damped(std::vector<double> a, std::vector<double> b, double lambda) {
    const std::size_t m = b.size();
    for (std::size_t i = 0; i < m; ++i) a[i * m + i] += lambda;
    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t best = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r * m + col]) > std::abs(a[best * m + col])) best = r;
        if (best != col) {
            for (std::size_t c = 0; c < m; ++c) std::swap(a[col * m + c], a[best * m + c]);
            std::swap(b[col], b[best]);
        }
        double d = a[col * m + col];
        if (std::abs(d) < 1e-300) throw fit_error(FitFailure::Degenerate, "singular Newton system");
        for (std::size_t r = col + 1; r < m; ++r) {
            double f = a[r * m + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < m; ++c) a[r * m + c] -= f * a[col * m + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(m);
    for (std::size_t i = m; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < m; ++c) acc -= a[i * m + c] * x[c];
        x[i] = acc / a[i * m + i];
    }
    return x;
}

// ---- exact integer hull geometry -------------------------------------------

i128 cross(const StatKey& o, const StatKey& a, const StatKey& b) {
    return static_cast<i128>(a[0] - o[0]) * (b[1] - o[1]) -
           static_cast<i128>(a[1] - o[1]) * (b[0] - o[0]);
}

// Affine rank of the key cloud: exact for m <= 2 (integer cross products),
// floating-point elimination beyond.
int affine_rank(const std::vector<StatKey>& pts) {
    if (pts.size() <= 1) return 0;
    const std::size_t m = pts[0].size();
    if (m == 1) {
        for (const auto& p : pts)
            if (p[0] != pts[0][0]) return 1;
        return 0;
    }
    if (m == 2) {
        std::size_t first_diff = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i] != pts[0]) {
                first_diff = i;
                break;
            }
        if (first_diff == 0) return 0;
        for (std::size_t i = first_diff + 1; i < pts.size(); ++i)
            if (cross(pts[0], pts[first_diff], pts[i]) != 0) return 2;
        return 1;
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        std::vector<double> v(m);
        for (std::size_t k = 0; k < m; ++k) v[k] = static_cast<double>(pts[i][k] - pts[0][k]);
        // eliminate against accepted rows
        for (const auto& r : rows) {
            double num = 0.0, den = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                num += v[k] * r[k];
                den += r[k] * r[k];
            }
            if (den > 0.0) {
                double f = num / den;
                for (std::size_t k = 0; k < m; ++k) v[k] -= f * r[k];
            }
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (norm > 1e-18) rows.push_back(v);
        if (rows.size() == m) break;
    }
    return static_cast<int>(rows.size());
}

// Convex hull of 2-D integer points, counterclockwise, no collinear vertices.
std::vector<StatKey> hull_2d(std::vector<StatKey> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t np = pts.size();
    if (np < 3) return pts;
    std::vector<StatKey> h(2 * np);
    std::size_t k = 0;
    for (std::size_t i = 0; i < np; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    std::size_t lower = k + 1;
    for (std::size_t i = np - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

struct HullLocation {
    HullPosition position = HullPosition::Outside;
    // for Boundary: the supporting edge (indices into hull), or vertex (a == b)
    StatKey edge_a, edge_b;
    bool at_vertex = false;
};

HullLocation locate_in_hull(const std::vector<StatKey>& hull, const StatKey& p) {
    HullLocation loc;
    const std::size_t h = hull.size();
    for (const auto& v : hull)
        if (v == p) {
            loc.position = HullPosition::Boundary;
            loc.at_vertex = true;
            loc.edge_a = loc.edge_b = p;
            return loc;
        }
    if (h == 1) { // single point, p differs
        loc.position = HullPosition::Outside;
        return loc;
    }
    if (h == 2) { // degenerate segment: callers reduce rank first; p on open segment?
        i128 cr = cross(hull[0], hull[1], p);
        if (cr == 0) {
            bool within = std::min(hull[0], hull[1]) <= p && p <= std::max(hull[0], hull[1]);
            loc.position = within ? HullPosition::Boundary : HullPosition::Outside;
            loc.edge_a = hull[0];
            loc.edge_b = hull[1];
            return loc;
        }
        loc.position = HullPosition::Outside;
        return loc;
    }
    bool interior = true;
    for (std::size_t i = 0; i < h; ++i) {
        const StatKey& a = hull[i];
        const StatKey& b = hull[(i + 1) % h];
        i128 cr = cross(a, b, p);
        if (cr < 0) {
            loc.position = HullPosition::Outside;
            return loc;
        }
        if (cr == 0) {
            interior = false;
            loc.edge_a = a;
            loc.edge_b = b;
        }
    }
    loc.position = interior ? HullPosition::Interior : HullPosition::Boundary;
    return loc;
}

// Real-valued interior test (for fit targets): conservative, treats
// near-boundary as boundary.
bool strictly_inside_real(const StatTable& table, const std::vector<double>& target_raw) {
    const std::size_t m = table.families.size();
    if (m == 1) {
        auto [mn, mx] = std::minmax_element(table.keys.begin(), table.keys.end());
        double lo = static_cast<double>((*mn)[0]), hi = static_cast<double>((*mx)[0]);
        double margin = 1e-9 * std::max(1.0, hi - lo);
        return target_raw[0] > lo + margin && target_raw[0] < hi - margin;
    }
    if (m == 2) {
        std::vector<StatKey> hull = hull_2d(table.keys);
        if (hull.size() < 3) return false; // degenerate cloud has no interior
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const StatKey& a = hull[i];
            const StatKey& b = hull[(i + 1) % hull.size()];
            long double ex = static_cast<long double>(b[0] - a[0]);
            long double ey = static_cast<long double>(b[1] - a[1]);
            long double px = target_raw[0] - static_cast<long double>(a[0]);
            long double py = target_raw[1] - static_cast<long double>(a[1]);
            long double cr = ex * py - ey * px;
            long double scale = std::max<long double>(1.0, std::abs(ex) + std::abs(ey));
            if (cr <= 1e-9L * scale * (std::abs(px) + std::abs(py) + 1.0L)) return false;
        }
        return true;
    }
    return true; // m > 2: rely on the divergence guard
}

} // namespace

HullPosition hull_position(const StatTable& table, const StatKey& key) {
    const std::size_t m = table.families.size();
    if (key.size() != m) throw usage_error("key shape does not match table");
    if (m == 0) return HullPosition::Boundary;
    int rank = affine_rank(table.keys);
    if (m == 1 || rank <= 1) {
        if (rank == 0) return table.keys[0] == key ? HullPosition::Boundary : HullPosition::Outside;
        // project on the direction of variation
        std::size_t comp = 0;
        for (std::size_t i = 1; i < table.keys.size(); ++i)
            for (std::size_t k = 0; k < m; ++k)
                if (table.keys[i][k] != table.keys[0][k]) comp = k;
        std::int64_t lo = table.keys[0][comp], hi = lo, x = key[comp];
        for (const auto& k2 : table.keys) {
            lo = std::min(lo, k2[comp]);
            hi = std::max(hi, k2[comp]);
        }
        if (m == 2) {
            // must lie on the line as well
            StatKey a = table.keys.front(), b = table.keys.back();
            if (cross(a, b, key) != 0) return HullPosition::Outside;
        }
        if (x < lo || x > hi) return HullPosition::Outside;
        if (x == lo || x == hi) return HullPosition::Boundary;
        return m == 1 ? HullPosition::Interior : HullPosition::Boundary; // rank<m: no interior
    }
    if (m == 2) return locate_in_hull(hull_2d(table.keys), key).position;
    throw usage_error("hull geometry implemented for up to 2 families");
}

FitResult fit_theta(const StatTable& table, const std::vector<double>& target,
                    const FitOptions& opt) {
    const std::size_t m = table.families.size();
    if (target.size() != m) throw usage_error("target size does not match families");
    if (m == 0) return {{}, 0, 0.0};

    int rank = affine_rank(table.keys);
    if (rank < static_cast<int>(m))
        throw fit_error(FitFailure::Degenerate,
                        "a family is affinely dependent on the others over the support");
    if (m <= 2) {
        std::vector<double> raw(m);
        for (std::size_t k = 0; k < m; ++k) raw[k] = target[k] / table.density_scale(k);
        if (m == 1 || m == 2) {
            if (!strictly_inside_real(table, raw))
                throw fit_error(FitFailure::HullBoundary,
                                "target is not strictly inside the achievable hull");
        }
    }

    const double n2 = static_cast<double>(table.n) * table.n;
    std::vector<double> theta(m, 0.0);
    auto dual = [&](const std::vector<double>& th) {
        double d = 0.0;
        for (std::size_t k = 0; k < m; ++k) d += th[k] * target[k];
        return d - partition_log(table, th);
    };

    double lambda = 0.0;
    double g_cur = dual(theta);
    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        CanonicalMoments mo = canonical_moments(table, theta);
        std::vector<double> grad(m);
        double resid = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            grad[k] = target[k] - mo.mean[k];
            resid = std::max(resid, std::abs(grad[k]));
        }
        if (resid <= opt.tol) return {theta, iter - 1, resid};

        // Hessian of the dual is -n^2 Cov; Newton step solves n^2 Cov d = grad.
        std::vector<double> hess(mo.cov);
        double diag_scale = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            diag_scale = std::max(diag_scale, mo.cov[k * m + k]);
        if (diag_scale < 1e-300)
            throw fit_error(FitFailure::Degenerate, "vanishing covariance on the support");
        for (double& h : hess) h *= n2;

        bool accepted = false;
        for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
            std::vector<double> step;
            try {
                step = solve_damped(hess, grad, lambda * n2 * diag_scale);
            } catch (const fit_error&) {
                lambda = lambda == 0.0 ? 1e-8 : lambda * 10.0;
                continue;
            }
            // backtracking line search on the concave dual
            double t = 1.0;
            for (int ls = 0; ls < 50; ++ls) {
                std::vector<double> cand(m);
                for (std::size_t k = 0; k < m; ++k) cand[k] = theta[k] + t * step[k];
                double g_new = dual(cand);
                if (g_new >= g_cur - 1e-15 * std::abs(g_cur)) {
                    theta = cand;
                    g_cur = g_new;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) lambda = lambda == 0.0 ? 1e-8 : lambda * 10.0;
        }
        if (!accepted)
            throw fit_error(FitFailure::NoConvergence, "line search stalled");
        lambda = std::max(0.0, lambda * 0.25);

        for (double th : theta)
            if (std::abs(th) > opt.theta_cap)
                throw fit_error(FitFailure::HullBoundary,
                                "multiplier diverges: target on or outside the hull");
    }
    throw fit_error(FitFailure::NoConvergence, "no convergence within iteration budget");
}

SignReport sign_check(const StatTable& table, const std::vector<double>& target,
                      const FitOptions& opt, double sign_tol) {
    FitResult fit = fit_theta(table, target, opt);
    std::vector<double> uniform = canonical_mean(table, std::vector<double>(table.families.size(), 0.0));

    auto sgn = [&](double x) { return x > sign_tol ? 1 : (x < -sign_tol ? -1 : 0); };

    SignReport rep;
    for (std::size_t k = 0; k < table.families.size(); ++k) {
        SignEntry e;
        e.family = table.families[k].name();
        e.theta = fit.theta[k];
        e.target = target[k];
        e.uniform_mean = uniform[k];
        e.asymptotic_threshold = pow_int(0.5, table.families[k].edges());
        e.sign_theta = sgn(fit.theta[k]);
        e.sign_gap = sgn(target[k] - uniform[k]);
        e.match = e.sign_theta == e.sign_gap;
        rep.all_match = rep.all_match && e.match;
        rep.entries.push_back(e);
    }
    return rep;
}

std::vector<double> er_moments(int n, const std::vector<SubgraphFamily>& families, double p) {
    if (!(p > 0.0 && p < 1.0)) throw usage_error("ER parameter must lie in (0,1)");
    std::vector<double> out;
    for (const auto& f : families) {
        switch (f.kind) {
            case FamilyKind::Edge:
                out.push_back(p * (n - 1) / n);
                break;
            case FamilyKind::Triangle:
                out.push_back(p * p * p * (n - 1) * (n - 2) / (static_cast<double>(n) * n));
                break;
            case FamilyKind::Wedge:
            case FamilyKind::Star: {
                int j = (f.kind == FamilyKind::Wedge) ? 2 : f.star_arity;
                // E[deg^j] for deg ~ Bin(n-1, p) via Stirling numbers of the
                // second kind: sum_k S2(j,k) (n-1)_k p^k.
                std::vector<std::vector<double>> s2(j + 1, std::vector<double>(j + 1, 0.0));
                s2[0][0] = 1.0;
                for (int a = 1; a <= j; ++a)
                    for (int b = 1; b <= a; ++b) s2[a][b] = b * s2[a - 1][b] + s2[a - 1][b - 1];
                double moment = 0.0;
                for (int k = 1; k <= j; ++k) {
                    double ff = 1.0;
                    for (int i = 0; i < k; ++i) ff *= (n - 1 - i);
                    moment += s2[j][k] * ff * pow_int(p, k);
                }
                out.push_back(moment / pow_int(static_cast<double>(n), j));
                break;
            }
        }
    }
    return out;
}

Trajectory theta_trajectory(const std::vector<SubgraphFamily>& families,
                            const std::function<std::vector<double>(int)>& target_rule, int n_min,
                            int n_max, const std::vector<double>& theta_infinity) {
    Trajectory out;
    out.theta_infinity = theta_infinity;
    for (int n = n_min; n <= n_max; ++n) {
        TrajectoryPoint pt;
        pt.n = n;
        pt.target = target_rule(n);
        try {
            StatTable table = enumerate_graphs(n, families);
            FitResult fit = fit_theta(table, pt.target);
            pt.theta = fit.theta;
            pt.ok = true;
        } catch (const std::exception& ex) {
            pt.error = ex.what();
        }
        out.points.push_back(std::move(pt));
    }
    return out;
}

namespace {

// 1-D exponential tilt over (coordinate, count) atoms: find mu with
// <s>_mu = s_target. Strictly increasing moment map; Newton with a bisection
// safeguard.
struct TiltFit {
    double mu = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

TiltFit fit_scalar_tilt(const std::vector<double>& s, const std::vector<double>& logc,
                        double s_target, double tol) {
    auto mean_at = [&](double mu) {
        double shift = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < s.size(); ++i) shift = std::max(shift, logc[i] + mu * s[i]);
        double wsum = 0.0, msum = 0.0, vsum = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            double w = std::exp(logc[i] + mu * s[i] - shift);
            wsum += w;
            msum += w * s[i];
        }
        double mean = msum / wsum;
        for (std::size_t i = 0; i < s.size(); ++i) {
            double w = std::exp(logc[i] + mu * s[i] - shift);
            vsum += w * (s[i] - mean) * (s[i] - mean);
        }
        return std::make_pair(mean, vsum / wsum);
    };

    TiltFit out;
    double lo = -1.0, hi = 1.0;
    while (mean_at(lo).first > s_target && lo > -1e6) lo *= 2.0;
    while (mean_at(hi).first < s_target && hi < 1e6) hi *= 2.0;
    double mu = 0.0;
    for (int iter = 1; iter <= 200; ++iter) {
        auto [mean, var] = mean_at(mu);
        out.iterations = iter;
        out.residual = std::abs(mean - s_target);
        if (out.residual <= tol) break;
        if (mean < s_target) lo = std::max(lo, mu);
        else hi = std::min(hi, mu);
        double step = var > 1e-300 ? (s_target - mean) / var : 0.0;
        double next = mu + step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        mu = next;
    }
    out.mu = mu;
    return out;
}

} // namespace

EnsembleEntropyResult ensemble_entropy(const StatTable& table, const StatKey& key,
                                       const FitOptions& opt) {
    const std::size_t m = table.families.size();
    EnsembleEntropyResult res;
    res.key = key;
    res.omega = micro_count(table, key);
    if (res.omega == 0) throw infeasible_error("constraint key is not realisable by any graph");
    res.target = table.density_of(key);
    res.theta.assign(m, 0.0);
    const double n2 = static_cast<double>(table.n) * table.n;

    // Collect the minimal face containing the key, as indices into the table.
    std::vector<std::size_t> face;
    int rank = m == 0 ? 0 : affine_rank(table.keys);

    if (m == 0 || rank == 0) {
        face.assign(1, *table.find(key));
        res.face_dim = 0;
        res.boundary = false;
    } else if (m > 2 && rank == static_cast<int>(m)) {
        face.resize(table.size());
        std::iota(face.begin(), face.end(), 0);
        res.face_dim = rank;
    } else if (m > 2) {
        throw usage_error("boundary reduction implemented for up to 2 families");
    } else if (rank == static_cast<int>(m)) {
        bool interior = true;
        if (m == 1) {
            std::int64_t lo = table.keys.front()[0], hi = table.keys.back()[0];
            if (key[0] == lo || key[0] == hi) {
                face.assign(1, *table.find(key));
                res.face_dim = 0;
                res.boundary = true;
                interior = false;
            }
        } else {
            auto loc = locate_in_hull(hull_2d(table.keys), key);
            if (loc.position == HullPosition::Boundary) {
                res.boundary = true;
                interior = false;
                if (loc.at_vertex) {
                    face.assign(1, *table.find(key));
                    res.face_dim = 0;
                } else {
                    for (std::size_t i = 0; i < table.size(); ++i)
                        if (cross(loc.edge_a, loc.edge_b, table.keys[i]) == 0) face.push_back(i);
                    res.face_dim = 1;
                }
            }
        }
        if (interior) {
            face.resize(table.size());
            std::iota(face.begin(), face.end(), 0);
            res.face_dim = static_cast<int>(m);
        }
    } else {
        // rank 1 < m = 2: the whole cloud is a segment; 1-D tilt along it.
        face.resize(table.size());
        std::iota(face.begin(), face.end(), 0);
        res.face_dim = 1;
    }
    res.face_keys = face.size();

    if (res.face_dim == 0) {
        // Vertex face: the canonical limit is uniform on exactly this bucket.
        res.S_n = 0.0;
        res.s_n = 0.0;
        res.psi_face = std::log(static_cast<double>(res.omega)) / n2;
        return res;
    }

    if (res.face_dim == static_cast<int>(m)) {
        FitResult fit = fit_theta(table, res.target, opt);
        res.theta = fit.theta;
        res.fit_iterations = fit.iterations;
        res.fit_residual = fit.residual;
        res.psi_face = partition_log(table, fit.theta);
        EntropyValue ev = relative_entropy(table, key, fit.theta, std::max(1e-6, 10 * opt.tol));
        res.S_n = ev.S_n;
        res.s_n = ev.s_n;
        return res;
    }

    // 1-D face inside a 2-D table: integer coordinates along the primitive
    // direction of the face.
    const StatKey& base = table.keys[face.front()];
    std::int64_t dx = 0, dy = 0;
    for (std::size_t idx : face) {
        dx = table.keys[idx][0] - base[0];
        dy = table.keys[idx][1] - base[1];
        if (dx != 0 || dy != 0) break;
    }
    std::int64_t g = std::gcd(std::abs(dx), std::abs(dy));
    if (g == 0) g = 1;
    dx /= g;
    dy /= g;
    auto coord = [&](const StatKey& k) {
        if (dx != 0) return static_cast<double>((k[0] - base[0]) / dx);
        return static_cast<double>((k[1] - base[1]) / dy);
    };

    std::vector<double> s, logc;
    double s_min = std::numeric_limits<double>::infinity(), s_max = -s_min;
    for (std::size_t idx : face) {
        s.push_back(coord(table.keys[idx]));
        logc.push_back(std::log(static_cast<double>(table.counts[idx])));
        s_min = std::min(s_min, s.back());
        s_max = std::max(s_max, s.back());
    }
    double s_target = coord(key);

    if (s_target == s_min || s_target == s_max) {
        // extreme within the face: a further reduction ends at this vertex
        res.boundary = true;
        res.face_dim = 0;
        res.face_keys = 1;
        res.S_n = 0.0;
        res.s_n = 0.0;
        res.psi_face = std::log(static_cast<double>(res.omega)) / n2;
        return res;
    }

    // convergence in density units: |<s>-s*| * max_k scale_k |d_k| <= tol
    double dens_factor = std::max(table.density_scale(0) * std::abs(static_cast<double>(dx)),
                                  table.density_scale(1) * std::abs(static_cast<double>(dy)));
    TiltFit tf = fit_scalar_tilt(s, logc, s_target, opt.tol / std::max(dens_factor, 1e-300));
    res.fit_iterations = tf.iterations;
    res.fit_residual = tf.residual * dens_factor;

    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i) shift = std::max(shift, logc[i] + tf.mu * s[i]);
    double wsum = 0.0, wkey = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double w = std::exp(logc[i] + tf.mu * s[i] - shift);
        wsum += w;
        if (s[i] == s_target) wkey = w;
    }
    res.S_n = std::log(wsum) - std::log(wkey);
    res.s_n = res.S_n / n2;

    // representative multiplier: normal component zero, in-face tilt mu
    double dd = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
    res.theta[0] = tf.mu * dx / (n2 * table.density_scale(0) * dd);
    res.theta[1] = tf.mu * dy / (n2 * table.density_scale(1) * dd);
    // psi over the face with this representative, consistent with
    // S_n = -log omega - n^2 (theta . t* - psi_face)
    double dot_base = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        dot_base += res.theta[k] * table.density_scale(k) * static_cast<double>(base[k]);
    res.psi_face = (std::log(wsum) + shift) / n2 + dot_base;
    return res;
}

StatKey snap_to_key(const StatTable& table, const std::vector<double>& target) {
    if (target.size() != table.families.size()) throw usage_error("target size does not match families");
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        std::vector<double> t = table.density_of_index(i);
        double d = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) d += (t[k] - target[k]) * (t[k] - target[k]);
        if (d < best - 1e-15) {
            best = d;
            best_idx = i;
        }
        // ties resolve to the lexicographically smaller key: keys are sorted.
    }
    return table.keys[best_idx];
}

} // namespace graphens
