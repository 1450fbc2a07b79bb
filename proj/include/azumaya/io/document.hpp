#pragma once

// Versioned JSON documents for curves, D0 points, morphisms, families and
// chart presentations. Matrix entries are strings in the expression grammar,
// flattened row-major.

#include "azumaya/io/expr.hpp"
#include "azumaya/model/family.hpp"
#include "azumaya/model/presentation.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace azumaya {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

class DocumentError : public std::runtime_error {
public:
    DocumentError(const std::string& path, const std::string& msg)
        : std::runtime_error((path.empty() ? "/" : path) + ": " + msg), path_(path.empty() ? "/" : path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// A morphism whose entries may mention s, kept as syntax trees so each
/// sample value is substituted before normalizing.
struct FamilyDoc {
    PrestableCurve curve;
    std::size_t r = 0, k = 0;
    long deg_e = 0;
    std::vector<std::vector<std::vector<ExprPtr>>> entries;  // [component][j-1][r*r]
    std::vector<Rat> samples;

    AzMorphism at(const Rat& s) const {
        AzMorphism phi{curve, r, k, {}, deg_e};
        for (const auto& comp : entries) {
            std::vector<KMatrix> tuple;
            for (const auto& m : comp) {
                std::vector<RatFunc> e;
                for (const auto& x : m) e.push_back(to_ratfunc(*x, s));
                tuple.emplace_back(r, r, std::move(e));
            }
            phi.tuples.push_back(std::move(tuple));
        }
        return phi;
    }

    std::vector<FamilySample> sample_all(const std::vector<Rat>& values) const {
        std::vector<FamilySample> out;
        for (const auto& s : values) {
            try {
                out.push_back({s, at(s), ""});
            } catch (const std::exception& e) {
                out.push_back({s, std::nullopt, e.what()});
            }
        }
        return out;
    }
};

struct Document {
    int schema = schema_version;
    std::string kind;
    std::optional<PrestableCurve> curve;
    std::optional<Polarization> polarization;
    std::optional<DZeroPoint> d0, compare;
    std::optional<AzMorphism> morphism;
    std::optional<FamilyDoc> family;
    std::optional<ChartPresentation> presentation;
};

inline std::string place_text(const Place& p) {
    if (p.is_infinity()) return "inf";
    if (p.is_finite()) return p.coordinate().str();
    return p.polynomial().str("t");
}

namespace detail {

class Reader {
public:
    explicit Reader(const Json& root) : root_(root) {}

    const Json& at(const Json& obj, const std::string& key, const std::string& path) const {
        if (!obj.is_object()) throw DocumentError(path, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) throw DocumentError(path + "/" + key, "missing field");
        return *it;
    }
    const Json* opt(const Json& obj, const std::string& key) const {
        auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }
    long integer(const Json& j, const std::string& path) const {
        if (!j.is_number_integer()) throw DocumentError(path, "expected an integer");
        return j.get<long>();
    }
    std::size_t count(const Json& j, const std::string& path) const {
        long v = integer(j, path);
        if (v < 0) throw DocumentError(path, "expected a nonnegative integer");
        return static_cast<std::size_t>(v);
    }
    std::string text(const Json& j, const std::string& path) const {
        if (!j.is_string()) throw DocumentError(path, "expected a string");
        return j.get<std::string>();
    }
    const Json& array(const Json& j, const std::string& path) const {
        if (!j.is_array()) throw DocumentError(path, "expected an array");
        return j;
    }
    Rat rational(const Json& j, const std::string& path) const {
        if (j.is_number_integer()) return Rat(j.get<long>());
        try {
            RatFunc f = parse_ratfunc(text(j, path), {});
            return f.constant();
        } catch (const DocumentError&) {
            throw;
        } catch (const std::exception& e) {
            throw DocumentError(path, e.what());
        }
    }
    Place place(const Json& j, const std::string& path) const {
        if (j.is_string() && j.get<std::string>() == "inf") return Place::infinity();
        return Place::finite(rational(j, path));
    }
    ExprPtr expr(const Json& j, const std::string& path, const std::set<char>& vars) const {
        try {
            return parse_expr(text(j, path), vars);
        } catch (const ParseError& e) {
            throw DocumentError(path, e.what());
        }
    }
    RatFunc ratfunc(const Json& j, const std::string& path) const {
        auto e = expr(j, path, {'t'});
        try {
            return to_ratfunc(*e);
        } catch (const std::exception& ex) {
            throw DocumentError(path, ex.what());
        }
    }
    template <class F, class Fn>
    std::vector<F> flat(const Json& j, const std::string& path, std::size_t r, Fn entry) const {
        array(j, path);
        if (j.size() != r * r)
            throw DocumentError(path, "entries: expected " + std::to_string(r * r) + ", found " + std::to_string(j.size()));
        std::vector<F> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(entry(j[i], path + "/" + std::to_string(i)));
        return out;
    }
    QMatrix qmatrix(const Json& j, const std::string& path, std::size_t r) const {
        return QMatrix(r, r, flat<Rat>(j, path, r, [&](const Json& x, const std::string& p) { return rational(x, p); }));
    }
    KMatrix kmatrix(const Json& j, const std::string& path, std::size_t r) const {
        return KMatrix(r, r, flat<RatFunc>(j, path, r, [&](const Json& x, const std::string& p) { return ratfunc(x, p); }));
    }

    PrestableCurve curve(const Json& j, const std::string& path) const {
        CurveSpec spec;
        const auto& comps = array(at(j, "components", path), path + "/components");
        for (std::size_t i = 0; i < comps.size(); ++i) {
            std::string p = path + "/components/" + std::to_string(i);
            Component c{text(at(comps[i], "label", p), p + "/label"), 1};
            if (auto d = opt(comps[i], "degree")) c.degree = static_cast<int>(integer(*d, p + "/degree"));
            spec.components.push_back(c);
        }
        auto index = [&](const Json& x, const std::string& p) {
            std::string label = text(x, p);
            for (std::size_t i = 0; i < spec.components.size(); ++i)
                if (spec.components[i].label == label) return i;
            throw DocumentError(p, "unknown component '" + label + "'");
        };
        if (auto nodes = opt(j, "nodes")) {
            array(*nodes, path + "/nodes");
            for (std::size_t i = 0; i < nodes->size(); ++i) {
                std::string p = path + "/nodes/" + std::to_string(i);
                const auto& n = (*nodes)[i];
                spec.nodes.push_back(Node{index(at(n, "a", p), p + "/a"), place(at(n, "place_a", p), p + "/place_a"),
                                          index(at(n, "b", p), p + "/b"), place(at(n, "place_b", p), p + "/place_b")});
            }
        }
        return build_curve(spec);
    }

    PrestableCurve curve_or_line(const Json& j) const {
        if (auto c = opt(j, "curve")) return curve(*c, "/curve");
        return projective_line();
    }

    Polarization polarization(const Json& j, const PrestableCurve& c) const {
        Polarization pol = Polarization::of(c);
        if (auto p = opt(j, "polarization")) {
            if (!p->is_object()) throw DocumentError("/polarization", "expected an object");
            for (auto it = p->begin(); it != p->end(); ++it) {
                std::size_t i = c.find(it.key());
                if (i == c.size()) throw DocumentError("/polarization/" + it.key(), "unknown component");
                long d = integer(it.value(), "/polarization/" + it.key());
                if (d < 1) throw DocumentError("/polarization/" + it.key(), "degree must be >= 1");
                pol.degrees[i] = static_cast<int>(d);
            }
        }
        return pol;
    }

    /// Per-component lists under `key`, in component order.
    const Json& per_component(const std::string& key, const std::string& label) const {
        const auto& maps = at(root_, key, "");
        if (!maps.is_object()) throw DocumentError("/" + key, "expected an object keyed by component label");
        auto it = maps.find(label);
        if (it == maps.end()) throw DocumentError("/" + key + "/" + label, "missing component");
        return *it;
    }

    void no_extra_components(const std::string& key, const PrestableCurve& c) const {
        const auto& maps = at(root_, key, "");
        if (!maps.is_object()) throw DocumentError("/" + key, "expected an object keyed by component label");
        for (auto it = maps.begin(); it != maps.end(); ++it)
            if (c.find(it.key()) == c.size()) throw DocumentError("/" + key + "/" + it.key(), "unknown component");
    }

private:
    const Json& root_;
};

}  // namespace detail

inline Document parse_document(const Json& j) {
    detail::Reader rd(j);
    if (!j.is_object()) throw DocumentError("", "expected an object");
    Document doc;
    doc.schema = static_cast<int>(rd.integer(rd.at(j, "schema", ""), "/schema"));
    if (doc.schema != schema_version)
        throw DocumentError("/schema", "unsupported schema version " + std::to_string(doc.schema));
    doc.kind = rd.text(rd.at(j, "kind", ""), "/kind");
    const auto& kind = doc.kind;

    if (kind == "curve") {
        doc.curve = rd.curve(j, "");
        doc.polarization = rd.polarization(j, *doc.curve);
        return doc;
    }
    if (kind == "d0") {
        auto read = [&](const std::string& key, std::size_t r) {
            DZeroPoint p{r, {}};
            const auto& ms = rd.array(rd.at(j, key, ""), "/" + key);
            for (std::size_t i = 0; i < ms.size(); ++i)
                p.matrices.push_back(rd.qmatrix(ms[i], "/" + key + "/" + std::to_string(i), r));
            d0_validate(p);
            return p;
        };
        std::size_t r = rd.count(rd.at(j, "r", ""), "/r");
        if (r == 0) throw DocumentError("/r", "rank must be >= 1");
        doc.d0 = read("matrices", r);
        if (rd.opt(j, "compare")) doc.compare = read("compare", r);
        return doc;
    }
    if (kind == "morphism" || kind == "family" || kind == "presentation") {
        doc.curve = rd.curve_or_line(j);
        doc.polarization = rd.polarization(j, *doc.curve);
    }
    const auto& curve = *doc.curve;
    std::size_t r = 0, k = 0;
    if (kind == "morphism" || kind == "family" || kind == "presentation") {
        r = rd.count(rd.at(j, "r", ""), "/r");
        k = rd.count(rd.at(j, "k", ""), "/k");
        if (r == 0) throw DocumentError("/r", "rank must be >= 1");
        if (k == 0) throw DocumentError("/k", "target dimension must be >= 1");
    }
    long deg_e = 0;
    if (auto d = rd.opt(j, "degE")) deg_e = rd.integer(*d, "/degE");

    if (kind == "morphism" || kind == "family") {
        rd.no_extra_components("maps", curve);
        bool fam = kind == "family";
        FamilyDoc fd{curve, r, k, deg_e, {}, {}};
        AzMorphism phi{curve, r, k, {}, deg_e};
        for (const auto& comp : curve.components()) {
            std::string base = "/maps/" + comp.label;
            const auto& list = rd.array(rd.per_component("maps", comp.label), base);
            if (list.size() != k)
                throw DocumentError(base, "matrices: expected " + std::to_string(k) + ", found " + std::to_string(list.size()));
            std::vector<KMatrix> tuple;
            std::vector<std::vector<ExprPtr>> trees;
            for (std::size_t m = 0; m < k; ++m) {
                std::string p = base + "/" + std::to_string(m);
                if (fam) {
                    trees.push_back(rd.flat<ExprPtr>(list[m], p, r, [&](const Json& x, const std::string& q) {
                        return rd.expr(x, q, {'t', 's'});
                    }));
                } else {
                    tuple.push_back(rd.kmatrix(list[m], p, r));
                }
            }
            phi.tuples.push_back(std::move(tuple));
            fd.entries.push_back(std::move(trees));
        }
        if (fam) {
            if (auto s = rd.opt(j, "samples")) {
                rd.array(*s, "/samples");
                for (std::size_t i = 0; i < s->size(); ++i)
                    fd.samples.push_back(rd.rational((*s)[i], "/samples/" + std::to_string(i)));
            }
            doc.family = std::move(fd);
        } else {
            check_shapes(phi);
            doc.morphism = std::move(phi);
        }
        return doc;
    }
    if (kind == "presentation") {
        ChartPresentation p{curve, r, k, {}, {}};
        const auto& ids = rd.array(rd.at(j, "idempotents", ""), "/idempotents");
        if (ids.size() != k + 1)
            throw DocumentError("/idempotents", "expected " + std::to_string(k + 1) + " sections, found " +
                                                    std::to_string(ids.size()));
        for (std::size_t i = 0; i < ids.size(); ++i) {
            std::string base = "/idempotents/" + std::to_string(i);
            PseudoSection s;
            for (const auto& comp : curve.components()) {
                std::string pc = base + "/" + comp.label;
                const auto& e = rd.at(ids[i], comp.label, base);
                s.values.push_back(rd.qmatrix(rd.at(e, "matrix", pc), pc + "/matrix", r));
                s.ranks.push_back(rd.count(rd.at(e, "rank", pc), pc + "/rank"));
            }
            p.e.push_back(std::move(s));
        }
        rd.no_extra_components("charts", curve);
        for (const auto& comp : curve.components()) {
            std::string base = "/charts/" + comp.label;
            const auto& rows = rd.array(rd.per_component("charts", comp.label), base);
            if (rows.size() != k + 1)
                throw DocumentError(base, "chart rows: expected " + std::to_string(k + 1) + ", found " +
                                              std::to_string(rows.size()));
            std::vector<std::vector<KMatrix>> mats;
            for (std::size_t i = 0; i <= k; ++i) {
                std::string pr = base + "/" + std::to_string(i);
                const auto& row = rd.array(rows[i], pr);
                if (row.size() != k + 1)
                    throw DocumentError(pr, "matrices: expected " + std::to_string(k + 1) + ", found " +
                                                std::to_string(row.size()));
                std::vector<KMatrix> ms;
                for (std::size_t jj = 0; jj <= k; ++jj) ms.push_back(rd.kmatrix(row[jj], pr + "/" + std::to_string(jj), r));
                mats.push_back(std::move(ms));
            }
            p.m.push_back(std::move(mats));
        }
        check_presentation_shape(p);
        doc.presentation = std::move(p);
        return doc;
    }
    throw DocumentError("/kind", "unknown document kind '" + kind + "'");
}

inline Document parse_document(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DocumentError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_document(j);
}

inline Document parse_document(const char* text) { return parse_document(std::string(text)); }

namespace detail {

inline Json emit_curve(const PrestableCurve& c) {
    Json comps = Json::array(), nodes = Json::array();
    for (const auto& comp : c.components()) comps.push_back({{"label", comp.label}, {"degree", comp.degree}});
    for (const auto& n : c.nodes())
        nodes.push_back({{"a", c.components()[n.comp_a].label},
                         {"place_a", place_text(n.place_a)},
                         {"b", c.components()[n.comp_b].label},
                         {"place_b", place_text(n.place_b)}});
    return {{"components", comps}, {"nodes", nodes}};
}

template <class M>
Json flat_strings(const M& m) {
    Json out = Json::array();
    for (const auto& x : m.entries()) out.push_back(field_str(x));
    return out;
}

inline Json emit_polarization(const PrestableCurve& c, const Polarization& p) {
    Json out = Json::object();
    for (std::size_t i = 0; i < c.size(); ++i) out[c.components()[i].label] = p.degrees.at(i);
    return out;
}

}  // namespace detail

/// Canonical JSON for a document; parse_document inverts it.
inline Json emit_document(const Document& d) {
    Json j;
    j["schema"] = d.schema;
    j["kind"] = d.kind;
    if (d.kind == "curve") {
        auto c = detail::emit_curve(*d.curve);
        j["components"] = c["components"];
        j["nodes"] = c["nodes"];
        if (d.polarization) j["polarization"] = detail::emit_polarization(*d.curve, *d.polarization);
        return j;
    }
    if (d.kind == "d0") {
        j["r"] = d.d0->r;
        auto mats = [](const DZeroPoint& p) {
            Json a = Json::array();
            for (const auto& m : p.matrices) a.push_back(detail::flat_strings(m));
            return a;
        };
        j["matrices"] = mats(*d.d0);
        if (d.compare) j["compare"] = mats(*d.compare);
        return j;
    }
    j["curve"] = detail::emit_curve(*d.curve);
    if (d.polarization) j["polarization"] = detail::emit_polarization(*d.curve, *d.polarization);
    const auto& comps = d.curve->components();
    if (d.kind == "morphism") {
        const auto& phi = *d.morphism;
        j["r"] = phi.r;
        j["k"] = phi.k;
        j["degE"] = phi.deg_e;
        Json maps = Json::object();
        for (std::size_t c = 0; c < comps.size(); ++c) {
            Json list = Json::array();
            for (const auto& m : phi.tuples[c]) list.push_back(detail::flat_strings(m));
            maps[comps[c].label] = list;
        }
        j["maps"] = maps;
    } else if (d.kind == "family") {
        const auto& f = *d.family;
        j["r"] = f.r;
        j["k"] = f.k;
        j["degE"] = f.deg_e;
        Json maps = Json::object();
        for (std::size_t c = 0; c < comps.size(); ++c) {
            Json list = Json::array();
            for (const auto& m : f.entries[c]) {
                Json e = Json::array();
                for (const auto& x : m) e.push_back(expr_str(*x));
                list.push_back(e);
            }
            maps[comps[c].label] = list;
        }
        j["maps"] = maps;
        Json s = Json::array();
        for (const auto& v : f.samples) s.push_back(v.str());
        j["samples"] = s;
    } else if (d.kind == "presentation") {
        const auto& p = *d.presentation;
        j["r"] = p.r;
        j["k"] = p.k;
        Json ids = Json::array();
        for (const auto& s : p.e) {
            Json sec = Json::object();
            for (std::size_t c = 0; c < comps.size(); ++c)
                sec[comps[c].label] = {{"rank", s.ranks[c]}, {"matrix", detail::flat_strings(s.values[c])}};
            ids.push_back(sec);
        }
        j["idempotents"] = ids;
        Json charts = Json::object();
        for (std::size_t c = 0; c < comps.size(); ++c) {
            Json rows = Json::array();
            for (const auto& row : p.m[c]) {
                Json r = Json::array();
                for (const auto& m : row) r.push_back(detail::flat_strings(m));
                rows.push_back(r);
            }
            charts[comps[c].label] = rows;
        }
        j["charts"] = charts;
    }
    return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace azumaya
