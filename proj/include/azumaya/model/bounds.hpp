#pragma once

// Hilbert polynomial of the reduced support of the graph when it is a
// transverse union of smooth rational branches, checked against the
// Hilbert polynomial of O_{C x P^k}.

#include "azumaya/model/branches.hpp"

#include <climits>
#include <optional>

namespace azumaya {

struct BranchIntersection {
    std::string where;  // description of the locus
    std::size_t component_a = 0, component_b = 0;
    std::size_t branch_a = 0, branch_b = 0;
    long count = 0;     // geometric points
};

struct BoundsRow {
    long m = 0;
    Rat support, total;
    bool holds = false;
};

struct SupportBounds {
    long alpha = 0;
    long chi = 0;  // chi of the reduced support
    std::vector<BranchIntersection> intersections;
    std::vector<BoundsRow> rows;
    bool inequalities_hold = true;
    long alpha_max = 0;  // r deg(C) + beta . H
    bool alpha_in_range = false;
    long m0 = 0;
    long genus = 0;  // 1 - chi of the reduced support
    Rat genus_lower, genus_upper;
    bool genus_in_interval = false;
};

inline Rat binomial(long n, long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rat(b);
}

/// P(O_{C x P^k}, m) = (deg(C) m + 1 - g) binom(m + k, k).
inline Rat product_hilbert(long deg_c, int g, std::size_t k, long m) {
    return Rat(deg_c * m + 1 - g) * binomial(m + static_cast<long>(k), static_cast<long>(k));
}

class TangencyError : public std::domain_error {
public:
    TangencyError() : std::domain_error("intersection multiplicity > 1 unsupported") {}
};

/// Where two parametrized branches meet: the monic gcd of the 2x2 minors of
/// their homogeneous coordinates, and the order of contact over t = inf.
struct IntersectionLocus {
    QPoly finite;
    int at_infinity = 0;
};

inline std::optional<IntersectionLocus> intersection_locus(const Homogenized& ha, const Homogenized& hb) {
    const auto& fa = ha.coords;
    const auto& fb = hb.coords;
    int total_deg = ha.degree + hb.degree;
    QPoly g;
    int at_inf = INT_MAX;
    for (std::size_t i = 0; i < fa.size(); ++i)
        for (std::size_t j = i + 1; j < fa.size(); ++j) {
            QPoly minor = fa[i] * fb[j] - fa[j] * fb[i];
            if (minor.is_zero()) continue;
            g = g.is_zero() ? minor : gcd(g, minor);
            at_inf = std::min(at_inf, total_deg - minor.degree());
        }
    if (g.is_zero()) return std::nullopt;
    return IntersectionLocus{g.monic(), at_inf};
}

inline SupportBounds support_bounds_check(const AzMorphism& phi, const BranchModel& model, const Polarization& pol,
                                          long m_max, long m0) {
    for (const auto& b : model.branches)
        if (b.mode != BranchMode::exact)
            throw std::domain_error("support bounds require exact parametrized branches");
    SupportBounds out;
    const auto& br = model.branches;
    std::vector<Homogenized> hom;
    for (const auto& b : br) hom.push_back(homogenize(b.param));
    long intersections = 0;
    for (std::size_t a = 0; a < br.size(); ++a)
        for (std::size_t b = a + 1; b < br.size(); ++b) {
            if (br[a].component != br[b].component) continue;
            auto loc = intersection_locus(hom[a], hom[b]);
            if (!loc) throw std::domain_error("two branches coincide");
            const QPoly& g = loc->finite;
            int at_inf = loc->at_infinity;
            if (gcd(g, g.derivative()).degree() > 0 || at_inf > 1) throw TangencyError();
            if (g.degree() > 0)
                out.intersections.push_back({"zeros of " + g.str("t"), br[a].component, br[b].component, a, b, g.degree()});
            if (at_inf == 1) out.intersections.push_back({"inf", br[a].component, br[b].component, a, b, 1});
            intersections += g.degree() + (at_inf == 1 ? 1 : 0);
        }
    const auto& nodes = phi.curve.nodes();
    for (std::size_t n = 0; n < nodes.size(); ++n)
        for (std::size_t a = 0; a < br.size(); ++a)
            for (std::size_t b = 0; b < br.size(); ++b) {
                if (br[a].component != nodes[n].comp_a || br[b].component != nodes[n].comp_b) continue;
                if (homogeneous_value(hom[a], nodes[n].place_a) != homogeneous_value(hom[b], nodes[n].place_b))
                    continue;
                out.intersections.push_back({"node " + std::to_string(n), br[a].component, br[b].component, a, b, 1});
                ++intersections;
            }
    for (std::size_t a = 0; a < br.size(); ++a)
        out.alpha += static_cast<long>(br[a].sheets) * pol.degrees.at(br[a].component) + *br[a].map_degree;
    out.chi = static_cast<long>(br.size()) - intersections;
    int g = arithmetic_genus(phi.curve);
    long beta = image_degree(model);
    out.alpha_max = static_cast<long>(phi.r) * pol.total() + beta;
    out.alpha_in_range = 1 <= out.alpha && out.alpha <= out.alpha_max;
    for (long m = 1; m <= m_max; ++m) {
        BoundsRow row{m, Rat(out.alpha * m + out.chi), product_hilbert(pol.total(), g, phi.k, m), false};
        row.holds = Rat(0) <= row.support && row.support <= row.total;
        out.inequalities_hold = out.inequalities_hold && row.holds;
        out.rows.push_back(std::move(row));
    }
    out.m0 = m0;
    out.genus = 1 - out.chi;
    out.genus_lower = Rat(1) - product_hilbert(pol.total(), g, phi.k, m0) + Rat(m0);
    out.genus_upper = Rat(1) + Rat(out.alpha_max * m0);
    out.genus_in_interval = out.genus_lower <= Rat(out.genus) && Rat(out.genus) <= out.genus_upper;
    return out;
}

}  // namespace azumaya
