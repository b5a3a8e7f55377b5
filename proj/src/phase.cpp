#include "graphens/phase.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

namespace graphens {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Equivalent: return "Equivalent";
        case Verdict::Broken: return "Broken";
        case Verdict::Unknown: return "Unknown";
        case Verdict::Infeasible: return "Infeasible";
    }
    return "?";
}

double scallop_lower_bound(double t1) {
    if (!(t1 > 0.5 && t1 < 2.0 / 3.0))
        throw usage_error("scallop bound defined for edge density in (1/2, 2/3)");
    ScallopGraphon sg = scallop_graphon(t1 - 0.5);
    return 6.0 * sg.c * sg.c * (1.0 - 2.0 * sg.c);
}

double goodman_lower_bound(double t1) { return std::max(0.0, t1 * (2.0 * t1 - 1.0)); }

double kruskal_katona_upper(double t1) { return std::pow(t1, 1.5); }

double feasible_lower_bound(double t1) {
    if (t1 <= 0.5) return 0.0;
    if (t1 < 2.0 / 3.0) return scallop_lower_bound(t1);
    return goodman_lower_bound(t1);
}

RegionPoint classify(double t1, double t2) {
    if (!(t1 >= 0.0 && t1 <= 1.0 && t2 >= 0.0 && t2 <= 1.0))
        throw usage_error("densities must lie in [0,1]");

    RegionPoint rp;
    rp.t1 = t1;
    rp.t2 = t2;

    if (t2 > kruskal_katona_upper(t1) + 1e-12 || t2 < feasible_lower_bound(t1) - 1e-12) {
        rp.verdict = Verdict::Infeasible;
        return rp;
    }
    if (t1 < 1e-12 || t1 > 1.0 - 1e-12) {
        rp.verdict = Verdict::Unknown; // degenerate edge density, multipliers blow up
        return rp;
    }
    double t1cubed = t1 * t1 * t1;
    if (std::abs(t2 - t1cubed) <= 1e-12) {
        rp.verdict = Verdict::Equivalent;
        rp.case_label = "II(a)";
        return rp;
    }
    if (t2 <= 1e-12 && t1 <= 0.5) {
        rp.verdict = Verdict::Equivalent;
        rp.case_label = "II(e)";
        return rp;
    }
    if (t2 >= 0.125) {
        rp.verdict = Verdict::Broken;
        rp.case_label = "II(b)";
        return rp;
    }
    if (t1 <= 0.5 && t2 > 0.0 && t2 < 0.125) {
        rp.verdict = Verdict::Broken;
        rp.case_label = "II(c)";
        return rp;
    }
    if (t1 > 0.5 && t1 < 2.0 / 3.0 && std::abs(t2 - scallop_lower_bound(t1)) <= 1e-9) {
        rp.verdict = Verdict::Broken;
        rp.case_label = "II(d)";
        return rp;
    }
    rp.verdict = Verdict::Unknown;
    return rp;
}

std::vector<RegionPoint> sweep(int resolution) {
    if (resolution < 2) throw usage_error("sweep resolution must be >= 2");
    std::vector<RegionPoint> pts(static_cast<std::size_t>(resolution) * resolution);
    // grid nodes are independent; parallel map into row-major slots
    int nthreads = std::clamp<int>(std::thread::hardware_concurrency(), 1, 8);
    if (resolution < 64) nthreads = 1;
    auto run_rows = [&](int t0, int stride) {
        for (int i = t0; i < resolution; i += stride)
            for (int j = 0; j < resolution; ++j) {
                double t1 = static_cast<double>(i) / (resolution - 1);
                double t2 = static_cast<double>(j) / (resolution - 1);
                pts[static_cast<std::size_t>(i) * resolution + j] = classify(t1, t2);
            }
    };
    if (nthreads == 1) {
        run_rows(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(run_rows, t, nthreads);
        for (auto& th : pool) th.join();
    }
    return pts;
}

void write_sweep_csv(const std::vector<RegionPoint>& points, std::ostream& out) {
    out << "t1,t2,verdict,case\n";
    out.precision(12);
    for (const auto& p : points)
        out << p.t1 << "," << p.t2 << "," << verdict_name(p.verdict) << "," << p.case_label << "\n";
}

namespace {

const char* verdict_color(Verdict v) {
    switch (v) {
        case Verdict::Equivalent: return "#d62728"; // red
        case Verdict::Broken: return "#5b7fa6";     // blue-grey
        case Verdict::Unknown: return "#ffffff";
        case Verdict::Infeasible: return "#000000";
    }
    return "#ffffff";
}

} // namespace

void write_sweep_svg(const std::vector<RegionPoint>& points, int resolution, std::ostream& out,
                     int width, int height) {
    const double ml = 70, mr = 30, mt = 30, mb = 60;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto X = [&](double t1) { return ml + t1 * pw; };
    auto Y = [&](double t2) { return mt + (1.0 - t2) * ph; };
    double cw = pw / (resolution - 1), ch = ph / (resolution - 1);

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#fafafa\"/>\n";
    for (const auto& p : points) {
        out << "<rect x=\"" << X(p.t1) - cw / 2 << "\" y=\"" << Y(p.t2) - ch / 2 << "\" width=\""
            << cw << "\" height=\"" << ch << "\" fill=\"" << verdict_color(p.verdict) << "\"/>\n";
    }
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">edge density t1</text>\n";
    out << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 18 "
        << mt + ph / 2 << ")\">triangle density t2</text>\n";
    double lx = ml + 8, ly = mt + 8;
    const char* names[4] = {"Equivalent", "Broken", "Unknown", "Infeasible"};
    Verdict vs[4] = {Verdict::Equivalent, Verdict::Broken, Verdict::Unknown, Verdict::Infeasible};
    for (int i = 0; i < 4; ++i) {
        out << "<rect x=\"" << lx << "\" y=\"" << ly + 18 * i << "\" width=\"12\" height=\"12\" fill=\""
            << verdict_color(vs[i]) << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << lx + 18 << "\" y=\"" << ly + 18 * i + 10
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << names[i] << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace graphens
