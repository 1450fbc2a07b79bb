#pragma once

// Nodal curves whose components are all P^1, recorded as a dual graph.

#include "azumaya/exact/place.hpp"
#include "azumaya/model/errors.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace azumaya {

struct Component {
    std::string label;
    int degree = 1;  // degree of O_C(1) on this component
};

struct Node {
    std::size_t comp_a = 0;
    Place place_a = Place::finite(Rat(0));
    std::size_t comp_b = 0;
    Place place_b = Place::finite(Rat(0));
};

struct CurveSpec {
    std::vector<Component> components;
    std::vector<Node> nodes;
};

class PrestableCurve {
public:
    const std::vector<Component>& components() const { return comps_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t size() const { return comps_.size(); }
    /// Index of a component by label, or size() when absent.
    std::size_t find(const std::string& label) const {
        for (std::size_t i = 0; i < comps_.size(); ++i)
            if (comps_[i].label == label) return i;
        return comps_.size();
    }
    /// Points of component c that are attached to a node.
    std::vector<Place> node_places(std::size_t c) const {
        std::vector<Place> out;
        for (const auto& n : nodes_) {
            if (n.comp_a == c) out.push_back(n.place_a);
            if (n.comp_b == c) out.push_back(n.place_b);
        }
        return out;
    }

private:
    friend PrestableCurve build_curve(const CurveSpec&);
    std::vector<Component> comps_;
    std::vector<Node> nodes_;
};

inline PrestableCurve build_curve(const CurveSpec& spec) {
    std::vector<std::string> issues;
    std::size_t n = spec.components.size();
    if (n == 0) issues.push_back("curve has no components");
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.components[i].degree < 1)
            issues.push_back("component " + std::to_string(i) + ": polarization degree must be >= 1");
        for (std::size_t j = 0; j < i; ++j)
            if (spec.components[i].label == spec.components[j].label)
                issues.push_back("duplicate component label '" + spec.components[i].label + "'");
    }
    std::vector<std::pair<std::size_t, Place>> seen;
    auto attach = [&](std::size_t node, std::size_t c, const Place& p) {
        if (c >= n) {
            issues.push_back("node " + std::to_string(node) + ": unknown component " + std::to_string(c));
            return;
        }
        if (!p.is_rational())
            issues.push_back("node " + std::to_string(node) + ": attachment place must be rational or infinity");
        for (const auto& [sc, sp] : seen)
            if (sc == c && sp == p) {
                issues.push_back("duplicate attachment point " + p.str() + " on component " +
                                 spec.components[c].label);
                return;
            }
        seen.emplace_back(c, p);
    };
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
        const auto& nd = spec.nodes[i];
        attach(i, nd.comp_a, nd.place_a);
        attach(i, nd.comp_b, nd.place_b);
    }
    if (issues.empty() && n > 0) {
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto root = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& nd : spec.nodes) parent[root(nd.comp_a)] = root(nd.comp_b);
        for (std::size_t i = 1; i < n; ++i)
            if (root(i) != root(0)) {
                issues.push_back("dual graph is disconnected");
                break;
            }
    }
    if (!issues.empty()) throw ValidationError(issues);
    PrestableCurve c;
    c.comps_ = spec.components;
    c.nodes_ = spec.nodes;
    return c;
}

/// P^1 with polarization degree `degree`.
inline PrestableCurve projective_line(int degree = 1) {
    return build_curve(CurveSpec{{Component{"C0", degree}}, {}});
}

/// First Betti number of the dual graph.
inline int arithmetic_genus(const PrestableCurve& c) {
    return static_cast<int>(c.nodes().size()) - static_cast<int>(c.size()) + 1;
}

/// chi(E) = deg E + r (1 - g).
inline long euler_char(const PrestableCurve& c, int r, long deg_e) {
    if (r < 1) throw std::invalid_argument("rank must be >= 1");
    return deg_e + static_cast<long>(r) * (1 - arithmetic_genus(c));
}

struct Polarization {
    std::vector<int> degrees;  // per component
    static Polarization of(const PrestableCurve& c) {
        Polarization p;
        for (const auto& comp : c.components()) p.degrees.push_back(comp.degree);
        return p;
    }
    long total() const {
        long s = 0;
        for (int d : degrees) s += d;
        return s;
    }
};

}  // namespace azumaya
