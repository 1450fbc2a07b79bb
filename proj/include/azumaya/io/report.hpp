#pragma once

// Canonical JSON for analysis results. Rationals are "p/q" strings,
// polynomials carry their coefficient list (constant term first) and a
// pretty form, and keys keep insertion order.

#include "azumaya/io/document.hpp"

namespace azumaya::report {

inline Json rat(const Rat& x) { return x.str(); }

inline Json rats(const std::vector<Rat>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(x.str());
    return a;
}

inline Json poly(const QPoly& p, const std::string& var = "t") {
    Json c = Json::array();
    for (const auto& x : p.coeffs()) c.push_back(x.str());
    return {{"coeffs", c}, {"pretty", p.str(var)}};
}

inline Json qt_poly(const QtPoly& p) {
    Json c = Json::array();
    for (const auto& x : p.coeffs()) c.push_back(x.str());
    return {{"coeffs", c}, {"pretty", p.str("l")}};
}

inline Json matrix(const QMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

inline Json matrix(const KMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

inline Json place(const Place& p) { return place_text(p); }

inline Json tristate(Tristate t) { return tristate_str(t); }

inline Json comb_type(const CombType& c) { return {{"g", c.g}, {"r", c.r}, {"chi", c.chi}, {"beta", c.beta}}; }

inline Json hilbert(const HilbertPoly& h) {
    return {{"slope", std::to_string(h.slope)}, {"constant", std::to_string(h.constant)}, {"pretty", h.str()}};
}

inline Json support_point(const SupportPoint& p) {
    Json j;
    if (p.rational()) {
        j["point"] = rats(p.coordinates());
    } else {
        std::string s;
        for (std::size_t i = 0; i < p.factors.size(); ++i) {
            const auto& f = p.factors[i];
            if (p.factors.size() > 1) s += (i ? "; " : "") + std::string("y") + std::to_string(i + 1) + ": ";
            s += f.root ? "l - " + f.root->str() : f.factor.str("l");
        }
        j["cluster"] = s;
    }
    j["length"] = p.length;
    j["degree"] = p.degree;
    return j;
}

inline Json support(const SupportCycle& c) {
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(support_point(p));
    return {{"points", pts}};
}

inline Json d0_validation(const D0Validation& v) {
    Json pairs = Json::array();
    for (const auto& [a, b] : v.failing_pairs) pairs.push_back(Json::array({a + 1, b + 1}));
    return {{"valid", v.valid}, {"noncommuting_pairs", pairs}};
}

inline Json d0_classification(const D0Classification& c) {
    Json j;
    j["chow"] = c.chow;
    j["hilb"] = tristate(c.hilb);
    j["singleton"] = c.singleton;
    j["algebra_dim"] = c.algebra_dim;
    j["radical_dim"] = c.radical_dim;
    j["cyclic_vector"] = c.cyclic_vector ? rats(*c.cyclic_vector) : Json(nullptr);
    return j;
}

inline Json d0_iso(const D0IsoResult& r) {
    Json j;
    j["isomorphic"] = r.isomorphic;
    j["certified"] = r.certified;
    j["reason"] = r.reason;
    j["witness"] = r.witness ? matrix(*r.witness) : Json(nullptr);
    return j;
}

inline Json fiber(const FiberData& f, const PrestableCurve& c) {
    Json pts = Json::array();
    for (const auto& p : f.points) {
        Json j;
        if (p.coords) {
            j["point"] = rats(*p.coords);
            j["length"] = p.length;
            j["degree"] = p.degree;
        } else {
            j = support_point(p.cluster);
            j["length"] = p.length;
            j["degree"] = p.degree;
        }
        pts.push_back(j);
    }
    return {{"component", c.components()[f.component].label},
            {"place", place(f.place)},
            {"chart", f.chart},
            {"points", pts},
            {"total_length", f.total_length()}};
}

inline Json validation(const MorphismValidation& v, const PrestableCurve& c) {
    Json issues = Json::array();
    for (const auto& i : v.issues) {
        Json j;
        j["kind"] = i.kind;
        j["message"] = i.message;
        if (i.component) j["component"] = c.components()[*i.component].label;
        if (i.pair) j["pair"] = Json::array({i.pair->first, i.pair->second});
        if (i.node) j["node"] = *i.node;
        if (i.place) j["place"] = *i.place;
        issues.push_back(j);
    }
    Json poles = Json::object();
    for (std::size_t k = 0; k < v.poles.size(); ++k) {
        Json a = Json::array();
        for (const auto& p : v.poles[k]) a.push_back(place(p));
        poles[c.components()[k].label] = a;
    }
    Json nodes = Json::array();
    for (const auto& n : v.nodes) {
        Json sa = Json::array(), sb = Json::array();
        for (const auto& p : n.side_a) sa.push_back(rats(p));
        for (const auto& p : n.side_b) sb.push_back(rats(p));
        nodes.push_back({{"node", n.node}, {"agree", n.agree}, {"side_a", sa}, {"side_b", sb}});
    }
    return {{"valid", v.valid}, {"issues", issues}, {"warnings", v.warnings}, {"poles", poles}, {"nodes", nodes}};
}

inline Json branches(const BranchModel& m, const PrestableCurve& c) {
    Json list = Json::array();
    for (const auto& b : m.branches) {
        Json j;
        j["component"] = c.components()[b.component].label;
        j["mode"] = mode_str(b.mode);
        if (b.mode == BranchMode::exact) {
            Json p = Json::array();
            for (const auto& f : b.param) p.push_back(f.str());
            j["param"] = p;
        } else if (b.mode == BranchMode::cluster) {
            j["cluster"] = qt_poly(b.cluster);
        } else {
            Json f = Json::array();
            for (const auto& q : b.factors) f.push_back(qt_poly(q));
            j["factors"] = f;
        }
        j["length"] = b.length;
        j["sheets"] = b.sheets;
        j["map_degree"] = b.map_degree ? Json(*b.map_degree) : Json(nullptr);
        j["confirmed"] = b.confirmed;
        list.push_back(j);
    }
    return {{"branches", list}, {"notes", m.notes}};
}

inline Json surrogate(const SurrogateSummary& s, const PrestableCurve& c) {
    Json comps = Json::array();
    for (std::size_t i = 0; i < s.components.size(); ++i) {
        const auto& sc = s.components[i];
        Json drops = Json::array();
        for (const auto& d : sc.drops)
            drops.push_back({{"place", place(d.place)},
                             {"chart", d.chart},
                             {"evaluated_dim", d.evaluated_dim},
                             {"lost", d.lost},
                             {"nilpotent", d.nilpotent}});
        comps.push_back({{"component", c.components()[i].label},
                         {"generic_degree", sc.generic_degree},
                         {"drops", drops},
                         {"notes", sc.notes}});
    }
    return comps;
}

inline Json bounds(const SupportBounds& b, const PrestableCurve& c) {
    Json inter = Json::array();
    for (const auto& i : b.intersections)
        inter.push_back({{"where", i.where},
                         {"component_a", c.components()[i.component_a].label},
                         {"component_b", c.components()[i.component_b].label},
                         {"branch_a", i.branch_a},
                         {"branch_b", i.branch_b},
                         {"count", i.count}});
    Json rows = Json::array();
    for (const auto& r : b.rows)
        rows.push_back({{"m", r.m}, {"support", rat(r.support)}, {"total", rat(r.total)}, {"holds", r.holds}});
    Json j;
    j["support_hilbert"] = {{"slope", std::to_string(b.alpha)}, {"constant", std::to_string(b.chi)},
                            {"pretty", HilbertPoly{b.alpha, b.chi}.str()}};
    j["intersections"] = inter;
    j["rows"] = rows;
    j["inequalities_hold"] = b.inequalities_hold;
    j["alpha_max"] = b.alpha_max;
    j["alpha_in_range"] = b.alpha_in_range;
    j["m0"] = b.m0;
    j["genus"] = b.genus;
    j["genus_lower"] = rat(b.genus_lower);
    j["genus_upper"] = rat(b.genus_upper);
    j["genus_in_interval"] = b.genus_in_interval;
    return j;
}

inline Json family(const FamilyScan& f, const PrestableCurve& c) {
    Json samples = Json::array();
    for (const auto& s : f.samples) {
        Json j;
        j["s"] = rat(s.s);
        j["status"] = s.status;
        j["comb_type"] = s.type ? comb_type(*s.type) : Json(nullptr);
        j["surrogate_degrees"] = s.surrogate_degrees;
        j["notes"] = s.notes;
        samples.push_back(j);
    }
    Json grid = Json::array();
    for (const auto& p : f.grid) grid.push_back(place(p));
    Json traj = Json::array();
    for (const auto& cell : f.trajectory) {
        Json j;
        j["s"] = rat(cell.s);
        j["t"] = place(cell.t);
        if (cell.fiber) j["fiber"] = fiber(*cell.fiber, c);
        else j["error"] = cell.error;
        traj.push_back(j);
    }
    return {{"verdict", f.verdict()}, {"samples", samples}, {"jumps", rats(f.jumps)}, {"grid", grid}, {"trajectory", traj}};
}

inline Json admissibility(const AdmissibilityReport& a, const PrestableCurve& c) {
    Json issues = Json::array();
    for (const auto& i : a.issues) {
        Json j;
        j["section"] = i.section;
        if (i.node) j["node"] = *i.node;
        if (i.component) j["component"] = c.components()[*i.component].label;
        j["condition"] = i.condition;
        j["message"] = i.message;
        issues.push_back(j);
    }
    Json orders = Json::array();
    for (const auto& o : a.orders) orders.push_back({{"section", o.section}, {"node", o.node}, {"relation", o.relation}});
    return {{"admissible", a.admissible}, {"issues", issues}, {"node_orders", orders}};
}

inline Json condition(const ConditionResult& c) { return {{"holds", c.holds}, {"witnesses", c.witnesses}}; }

inline Json atlas(const AtlasReport& a) {
    return {{"verdict", a.verdict()},
            {"commuting", condition(a.commuting)},
            {"condition_1", condition(a.c1)},
            {"condition_2", condition(a.c2)},
            {"condition_3", condition(a.c3)},
            {"condition_4", condition(a.c4)},
            {"places_checked", a.places_checked}};
}

inline Json nondegeneracy(const NondegeneracyReport& n) {
    Json hs = Json::array();
    for (const auto& h : n.hyperplanes)
        hs.push_back({{"hyperplane", "H_" + std::to_string(h.index)},
                      {"nondegenerate", tristate(h.nondegenerate)},
                      {"reasons", h.reasons}});
    return {{"overall", tristate(n.overall)}, {"hyperplanes", hs}};
}

inline Json strong(const StrongReport& s) { return {{"strong", tristate(s.strong)}, {"reasons", s.reasons}}; }

inline Json spectral(const SpectralCurve& s) {
    Json coeffs = Json::array();
    for (const auto& q : s.coeffs) coeffs.push_back(poly(q));
    Json char_c = Json::array(), min_c = Json::array();
    for (const auto& x : s.char_poly.coeffs()) char_c.push_back(x.str());
    for (const auto& x : s.min_poly.coeffs()) min_c.push_back(x.str());
    return {{"curve", s.str()},
            {"l_coeffs", coeffs},
            {"denominator", poly(s.denominator)},
            {"char_poly", {{"coeffs", char_c}, {"pretty", s.char_poly.str("l")}}},
            {"min_poly", {{"coeffs", min_c}, {"pretty", s.min_poly.str("l")}}},
            {"strict_subscheme", s.strict}};
}

}  // namespace azumaya::report
