#pragma once

// One-parameter families: combinatorial type at each sample of s, with a
// table of fiber supports for plotting how points merge and split.

#include "azumaya/model/branches.hpp"
#include "azumaya/model/surrogate.hpp"

#include <atomic>
#include <cstdio>
#include <thread>

namespace azumaya {

/// A specialization of the family at s = value, or the reason it is absent.
struct FamilySample {
    Rat s;
    std::optional<AzMorphism> phi;
    std::string skipped;
};

struct TrajectoryCell {
    Rat s;
    Place t = Place::infinity();
    std::optional<FiberData> fiber;
    std::string error;
};

struct SampleResult {
    Rat s;
    std::string status;  // ok, skipped, undetermined
    std::optional<CombType> type;
    std::vector<std::size_t> surrogate_degrees;
    std::vector<std::string> notes;
};

struct FamilyScan {
    std::vector<SampleResult> samples;
    bool constant = true;
    std::vector<Rat> jumps;
    std::vector<Place> grid;
    std::vector<TrajectoryCell> trajectory;  // grid-major, then sample order
    std::string verdict() const { return constant ? "CONSTANT" : "NOT CONSTANT"; }
};

inline std::vector<Place> default_grid() {
    return {Place::finite(Rat(0)), Place::finite(Rat(1)), Place::finite(Rat(2)), Place::infinity()};
}

namespace detail {

inline SampleResult scan_one(const FamilySample& fs) {
    SampleResult res{fs.s, "ok", std::nullopt, {}, {}};
    if (!fs.phi) {
        res.status = "skipped";
        res.notes.push_back(fs.skipped);
        return res;
    }
    const auto& phi = *fs.phi;
    auto v = morphism_validate(phi);
    for (const auto& issue : v.issues) {
        if (issue.kind == "commutation" || issue.kind == "shape") {
            res.status = "skipped";
            res.notes.push_back(issue.message);
            return res;
        }
        res.notes.push_back(issue.message);
    }
    try {
        res.type = comb_type(phi);
    } catch (const std::domain_error& e) {
        res.status = "undetermined";
        res.notes.push_back(e.what());
    }
    for (const auto& c : surrogate_summary(phi).components) res.surrogate_degrees.push_back(c.generic_degree);
    return res;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads && w < n; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

inline FamilyScan family_scan(const std::vector<FamilySample>& samples, const std::vector<Place>& grid = default_grid(),
                              unsigned threads = 1) {
    if (samples.empty()) throw std::invalid_argument("family scan needs at least one sample");
    FamilyScan scan;
    scan.grid = grid;
    scan.samples.resize(samples.size());
    scan.trajectory.resize(grid.size() * samples.size());
    detail::parallel_for(samples.size(), threads, [&](std::size_t i) {
        scan.samples[i] = detail::scan_one(samples[i]);
        std::optional<ChartAtlas> atlas;
        if (samples[i].phi) atlas.emplace(samples[i].phi->tuples.at(0), samples[i].phi->r);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            TrajectoryCell cell{samples[i].s, grid[g], std::nullopt, ""};
            if (!samples[i].phi) {
                cell.error = "sample skipped";
            } else {
                try {
                    cell.fiber = fiber_from_charts(*atlas, samples[i].phi->r, 0, grid[g]);
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
            }
            scan.trajectory[g * samples.size() + i] = std::move(cell);
        }
    });
    std::optional<CombType> ref;
    for (const auto& s : scan.samples) {
        if (!s.type) continue;
        if (!ref) ref = s.type;
        else if (!(*s.type == *ref)) {
            scan.constant = false;
            scan.jumps.push_back(s.s);
        }
    }
    return scan;
}

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    return s == "-0.00" ? "0.00" : s;
}

inline std::string xml_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

/// Real values of the first affine coordinate over a fiber, with multiplicity.
inline std::vector<double> fiber_values(const FiberData& f) {
    std::vector<double> out;
    for (const auto& p : f.points) {
        if (p.coords) {
            const auto& y = *p.coords;
            if (y.size() < 2 || y[0].is_zero()) continue;
            for (unsigned l = 0; l < p.length; ++l) out.push_back((y[1] / y[0]).to_double());
        } else if (f.chart == "chart 0" && !p.cluster.factors.empty()) {
            const auto& fac = p.cluster.factors[0];
            std::vector<double> roots = fac.root ? std::vector<double>{fac.root->to_double()}
                                                 : real_roots_approx(fac.factor);
            for (double r : roots)
                for (unsigned l = 0; l < p.length; ++l) out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Trajectories of fiber points over the first grid value, one polyline per
/// tracked point; coincident points are circled.
inline std::string emit_svg_scan(const FamilyScan& scan) {
    const int w = 640, h = 400, margin = 60;
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(w) +
           "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
           "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
           "\" fill=\"white\"/>\n";
    std::size_t n = scan.samples.size();
    std::vector<std::vector<double>> values(n);
    std::size_t tracks = 0;
    std::string t_label;
    if (!scan.grid.empty() && n > 0) {
        t_label = scan.grid[0].str();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& cell = scan.trajectory[i];
            if (cell.fiber) values[i] = detail::fiber_values(*cell.fiber);
            tracks = std::max(tracks, values[i].size());
        }
    }
    if (tracks == 0) {
        out += "<text x=\"" + std::to_string(w / 2) + "\" y=\"" + std::to_string(h / 2) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">no data</text>\n</svg>\n";
        return out;
    }
    double lo = 0, hi = 0;
    bool first = true;
    for (const auto& v : values)
        for (double x : v) {
            if (first) lo = hi = x, first = false;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    if (hi - lo < 1e-12) lo -= 1, hi += 1;
    double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
    auto px = [&](std::size_t i) {
        return n == 1 ? w / 2.0 : margin + static_cast<double>(i) * (w - 2.0 * margin) / static_cast<double>(n - 1);
    };
    auto py = [&](double v) { return h - margin - (v - lo) / (hi - lo) * (h - 2.0 * margin); };
    out += "<text x=\"" + std::to_string(w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">support at " + detail::xml_escape(t_label) + " across samples of s</text>\n";
    out += "<line x1=\"" + std::to_string(margin) + "\" y1=\"" + std::to_string(h - margin) + "\" x2=\"" +
           std::to_string(w - margin) + "\" y2=\"" + std::to_string(h - margin) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + std::to_string(margin) + "\" y1=\"" + std::to_string(margin) + "\" x2=\"" +
           std::to_string(margin) + "\" y2=\"" + std::to_string(h - margin) + "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < n; ++i)
        out += "<text x=\"" + detail::fmt(px(i)) + "\" y=\"" + std::to_string(h - margin + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">s=" +
               detail::xml_escape(scan.samples[i].s.str()) + "</text>\n";
    out += "<text x=\"" + std::to_string(margin - 6) + "\" y=\"" + detail::fmt(py(lo + pad)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + detail::fmt(lo + pad) + "</text>\n";
    out += "<text x=\"" + std::to_string(margin - 6) + "\" y=\"" + detail::fmt(py(hi - pad)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + detail::fmt(hi - pad) + "</text>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    for (std::size_t tr = 0; tr < tracks; ++tr) {
        std::string pts;
        for (std::size_t i = 0; i < n; ++i) {
            if (tr >= values[i].size()) continue;
            pts += (pts.empty() ? "" : " ") + detail::fmt(px(i)) + "," + detail::fmt(py(values[i][tr]));
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(colors[tr % 6]) + "\" stroke-width=\"2\" points=\"" +
               pts + "\"/>\n";
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j + 1 < values[i].size(); ++j) {
            if (std::abs(values[i][j] - values[i][j + 1]) > 1e-9) continue;
            if (j > 0 && std::abs(values[i][j - 1] - values[i][j]) <= 1e-9) continue;
            out += "<circle cx=\"" + detail::fmt(px(i)) + "\" cy=\"" + detail::fmt(py(values[i][j])) +
                   "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
        }
    out += "</svg>\n";
    return out;
}

}  // namespace azumaya
