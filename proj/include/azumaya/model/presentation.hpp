#pragma once

// Presentations of a morphism to P^k by chart algebras A_(i) with
// idempotents e_(i): admissibility, the gluing conditions, nondegeneracy
// with respect to the coordinate hyperplanes, and spectral curves.

#include "azumaya/exact/local.hpp"
#include "azumaya/model/bounds.hpp"

#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace azumaya {

/// One constant idempotent per component of C.
struct PseudoSection {
    std::vector<QMatrix> values;
    std::vector<std::size_t> ranks;
};

/// e' <= e, tested as e e' = e' e = e'.
inline bool subordinate(const QMatrix& e_small, const QMatrix& e_big) {
    return e_big * e_small == e_small && e_small * e_big == e_small;
}

struct AdmissibilityIssue {
    std::size_t section = 0;
    std::optional<std::size_t> node, component;
    std::string condition;  // idempotent, rank, commute, subordinate
    std::string message;
};

struct NodeOrder {
    std::size_t section = 0, node = 0;
    std::string relation;  // "equal", "a<=b", "b<=a", "none"
};

struct AdmissibilityReport {
    bool admissible = true;
    std::vector<AdmissibilityIssue> issues;
    std::vector<NodeOrder> orders;
};

inline AdmissibilityReport check_admissible(const std::vector<PseudoSection>& sections, const PrestableCurve& curve,
                                            std::size_t r) {
    std::vector<std::string> shape;
    for (std::size_t s = 0; s < sections.size(); ++s) {
        const auto& e = sections[s];
        if (e.values.size() != curve.size() || e.ranks.size() != curve.size())
            shape.push_back("section " + std::to_string(s) + ": expected " + std::to_string(curve.size()) +
                            " components, found " + std::to_string(e.values.size()));
        for (const auto& v : e.values)
            if (v.rows() != r || v.cols() != r)
                shape.push_back("section " + std::to_string(s) + ": idempotent is not " + std::to_string(r) + "x" +
                                std::to_string(r));
    }
    if (!shape.empty()) throw ValidationError(shape);
    AdmissibilityReport rep;
    auto issue = [&](AdmissibilityIssue i) {
        rep.admissible = false;
        rep.issues.push_back(std::move(i));
    };
    const auto& comps = curve.components();
    for (std::size_t s = 0; s < sections.size(); ++s) {
        const auto& e = sections[s];
        for (std::size_t c = 0; c < curve.size(); ++c) {
            if (e.values[c] * e.values[c] != e.values[c])
                issue({s, std::nullopt, c, "idempotent", "e^2 != e on " + comps[c].label});
            else if (rank(e.values[c]) != e.ranks[c])
                issue({s, std::nullopt, c, "rank",
                       "rank " + std::to_string(rank(e.values[c])) + " on " + comps[c].label + ", declared " +
                           std::to_string(e.ranks[c])});
        }
        const auto& nodes = curve.nodes();
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            const auto& a = e.values[nodes[n].comp_a];
            const auto& b = e.values[nodes[n].comp_b];
            NodeOrder ord{s, n, "none"};
            if (a * b != b * a) {
                issue({s, n, std::nullopt, "commute", "e_i(p) and e_j(p) do not commute at node " + std::to_string(n)});
            } else {
                bool ab = subordinate(a, b), ba = subordinate(b, a);
                ord.relation = ab && ba ? "equal" : ab ? "a<=b" : ba ? "b<=a" : "none";
                if (!ab && !ba)
                    issue({s, n, std::nullopt, "subordinate",
                           "neither idempotent is subordinate to the other at node " + std::to_string(n)});
            }
            rep.orders.push_back(ord);
        }
    }
    return rep;
}

/// Chart data {(A_(i), e_(i))}: m[c][i][j] = m_(i),j on component c, with
/// m_(i),i = e_(i).
struct ChartPresentation {
    PrestableCurve curve;
    std::size_t r = 0, k = 0;
    std::vector<PseudoSection> e;
    std::vector<std::vector<std::vector<KMatrix>>> m;
};

inline KMatrix lift(const QMatrix& q) {
    return q.map<RatFunc>([](const Rat& x) { return RatFunc(x); });
}

inline void check_presentation_shape(const ChartPresentation& p) {
    std::vector<std::string> issues;
    if (p.e.size() != p.k + 1)
        issues.push_back("idempotents: expected " + std::to_string(p.k + 1) + ", found " + std::to_string(p.e.size()));
    if (p.m.size() != p.curve.size())
        issues.push_back("matrices: expected " + std::to_string(p.curve.size()) + " components, found " +
                         std::to_string(p.m.size()));
    if (!issues.empty()) throw ValidationError(issues);
    for (std::size_t i = 0; i < p.e.size(); ++i)
        if (p.e[i].values.size() != p.curve.size())
            issues.push_back("idempotent " + std::to_string(i) + ": expected " + std::to_string(p.curve.size()) +
                             " components");
    for (std::size_t c = 0; c < p.m.size(); ++c) {
        const auto& label = p.curve.components()[c].label;
        if (p.m[c].size() != p.k + 1) {
            issues.push_back(label + ": expected " + std::to_string(p.k + 1) + " chart rows");
            continue;
        }
        for (std::size_t i = 0; i <= p.k; ++i) {
            if (p.m[c][i].size() != p.k + 1) {
                issues.push_back(label + ": row " + std::to_string(i) + " needs " + std::to_string(p.k + 1) + " matrices");
                continue;
            }
            for (const auto& x : p.m[c][i])
                if (x.rows() != p.r || x.cols() != p.r) issues.push_back(label + ": matrix is not r x r");
        }
    }
    if (!issues.empty()) throw ValidationError(issues);
    for (std::size_t c = 0; c < p.m.size(); ++c)
        for (std::size_t i = 0; i <= p.k; ++i)
            if (p.e[i].values[c].rows() != p.r || p.m[c][i][i] != lift(p.e[i].values[c]))
                issues.push_back(p.curve.components()[c].label + ": m_(" + std::to_string(i) + ")," +
                                 std::to_string(i) + " must equal e_(" + std::to_string(i) + ")");
    if (!issues.empty()) throw ValidationError(issues);
}

struct ConditionResult {
    bool holds = true;
    std::vector<std::string> witnesses;

    void fail(std::string w) {
        holds = false;
        witnesses.push_back(std::move(w));
    }
};

struct AtlasReport {
    ConditionResult commuting, c1, c2, c3, c4;
    std::size_t places_checked = 0;

    bool pass() const { return commuting.holds && c1.holds && c2.holds && c3.holds && c4.holds; }
    std::string verdict() const {
        if (!commuting.holds) return "FAIL(commuting)";
        if (!c1.holds) return "FAIL(1)";
        if (!c2.holds) return "FAIL(2)";
        if (!c3.holds) return "FAIL(3)";
        if (!c4.holds) return "FAIL(4)";
        return "PASS";
    }
};

namespace detail {

inline std::string idx(std::size_t i) { return std::to_string(i); }

/// e_I times the product of (1 - e_j) over j outside I.
inline QMatrix subset_projector(const ChartPresentation& p, std::size_t c, unsigned mask) {
    QMatrix out = QMatrix::identity(p.r);
    for (std::size_t i = 0; i <= p.k; ++i) {
        const auto& e = p.e[i].values[c];
        out = (mask >> i) & 1u ? out * e : out * (QMatrix::identity(p.r) - e);
    }
    return out;
}

inline std::vector<KVec> times(const std::vector<KVec>& basis, const KMatrix& g, std::size_t r) {
    std::vector<KVec> out;
    for (const auto& v : basis) out.push_back(flatten(KMatrix(r, r, v) * g));
    return out;
}

/// O_x-lattice spanned by the monomials of total degree <= cap in the
/// generators of A_(i), multiplied by a constant projector.
inline std::vector<KVec> chart_lattice(const ChartPresentation& p, std::size_t c, std::size_t i, const Place& x,
                                       std::size_t cap) {
    std::vector<KVec> basis = local_span({flatten(p.m[c][i][i])}, x);
    for (std::size_t d = 0; d < cap; ++d) {
        std::vector<KVec> more;
        for (std::size_t j = 0; j <= p.k; ++j)
            if (j != i)
                for (auto& v : times(basis, p.m[c][i][j], p.r))
                    if (!lattice_contains(basis, v, x)) more.push_back(std::move(v));
        if (more.empty()) break;
        more.insert(more.end(), basis.begin(), basis.end());
        basis = local_span(std::move(more), x);
    }
    return basis;
}

}  // namespace detail

inline std::vector<Place> presentation_candidates(const ChartPresentation& p, std::size_t c) {
    QPoly den(Rat(1));
    std::vector<Place> out;
    for (const auto& row : p.m[c])
        for (const auto& x : row)
            for (const auto& f : x.entries())
                if (!f.is_zero()) den = (den / gcd(den, f.den())) * f.den();
    for (const auto& q : places_of(den)) add_place(out, q);
    for (std::size_t i = 0; i <= p.k; ++i)
        for (std::size_t j = 0; j <= p.k; ++j) {
            RatFunc d = determinant(p.m[c][j][j] * p.m[c][i][j]);
            if (d.is_zero()) continue;
            for (const auto& q : places_of(d.num())) add_place(out, q);
        }
    add_place(out, Place::infinity());
    std::sort(out.begin(), out.end());
    return out;
}

inline AtlasReport check_atlas_conditions(const ChartPresentation& p) {
    check_presentation_shape(p);
    AtlasReport rep;
    const auto& comps = p.curve.components();
    std::size_t n = p.k + 1;
    for (std::size_t c = 0; c < p.curve.size(); ++c) {
        const auto& label = comps[c].label;
        const auto& m = p.m[c];
        std::vector<std::pair<std::size_t, std::size_t>> all;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) all.emplace_back(i, j);
        for (std::size_t a = 0; a < all.size(); ++a)
            for (std::size_t b = a + 1; b < all.size(); ++b) {
                const auto& x = m[all[a].first][all[a].second];
                const auto& y = m[all[b].first][all[b].second];
                if (x * y != y * x)
                    rep.commuting.fail(label + ": m_(" + detail::idx(all[a].first) + ")," + detail::idx(all[a].second) +
                                       " and m_(" + detail::idx(all[b].first) + ")," + detail::idx(all[b].second) +
                                       " do not commute");
            }

        QMatrix rest = detail::subset_projector(p, c, 0);
        if (!rest.is_zero())
            rep.c1.fail(label + ": 1 - sum of inclusion-exclusion terms = " + rest.str());

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                KMatrix lhs = (m[j][j] * m[i][j]) * (m[j][j] * m[j][i]);
                if (lhs != m[i][i] * m[j][j])
                    rep.c2.fail(label + ": (i, j) = (" + detail::idx(i) + ", " + detail::idx(j) + ")");
                for (std::size_t b = 0; b < n; ++b)
                    if (m[j][j] * m[i][b] != m[j][b] * (m[j][j] * m[i][j]))
                        rep.c3.fail(label + ": (i, j, l) = (" + detail::idx(i) + ", " + detail::idx(j) + ", " +
                                    detail::idx(b) + ")");
            }

        if (!rest.is_zero()) {
            rep.c4.fail(label + ": the empty index set contributes a non-regular summand");
            continue;
        }
        std::size_t cap = p.r * p.r;
        for (const auto& x : presentation_candidates(p, c)) {
            ++rep.places_checked;
            std::vector<KVec> sum;
            for (unsigned mask = 1; mask < (1u << n); ++mask) {
                KMatrix proj = lift(detail::subset_projector(p, c, mask));
                if (proj.is_zero()) continue;
                std::optional<std::vector<KVec>> inter;
                for (std::size_t i = 0; i < n; ++i) {
                    if (!((mask >> i) & 1u)) continue;
                    auto lat = local_span(detail::times(detail::chart_lattice(p, c, i, x, cap), proj, p.r), x);
                    inter = inter ? local_intersection(*inter, lat, x) : lat;
                }
                sum.insert(sum.end(), inter->begin(), inter->end());
            }
            for (const auto& v : local_span(std::move(sum), x))
                if (!vec_integral(v, x)) {
                    rep.c4.fail(label + " at " + x.str() + ": " + KMatrix(p.r, p.r, v).str() + " has valuation " +
                                std::to_string(vec_valuation(v, x)));
                    break;
                }
        }
    }
    return rep;
}

/// Chart-0 data of a morphism written with every e_(i) = 1:
/// m_(i),j = m_j m_i^{-1}, m_0 = 1. Needs each m_j generically invertible.
inline std::optional<ChartPresentation> embed_presentation(const AzMorphism& phi) {
    ChartPresentation p{phi.curve, phi.r, phi.k, {}, {}};
    PseudoSection one;
    for (std::size_t c = 0; c < phi.curve.size(); ++c) {
        one.values.push_back(QMatrix::identity(phi.r));
        one.ranks.push_back(phi.r);
    }
    p.e.assign(phi.k + 1, one);
    for (const auto& tuple : phi.tuples) {
        std::vector<KMatrix> mj{KMatrix::identity(phi.r)};
        mj.insert(mj.end(), tuple.begin(), tuple.end());
        std::vector<KMatrix> inv;
        for (const auto& x : mj) {
            auto xi = inverse(x);
            if (!xi) return std::nullopt;
            inv.push_back(*xi);
        }
        std::vector<std::vector<KMatrix>> rows(phi.k + 1);
        for (std::size_t i = 0; i <= phi.k; ++i)
            for (std::size_t j = 0; j <= phi.k; ++j) rows[i].push_back(i == j ? KMatrix::identity(phi.r) : mj[j] * inv[i]);
        p.m.push_back(std::move(rows));
    }
    return p;
}

struct HyperplaneVerdict {
    std::size_t index = 0;
    Tristate nondegenerate = Tristate::yes;
    std::vector<std::string> reasons;
};

struct NondegeneracyReport {
    std::vector<HyperplaneVerdict> hyperplanes;
    Tristate overall = Tristate::yes;
};

namespace detail {

inline bool place_on_locus(const IntersectionLocus& loc, const Place& x) {
    if (x.is_infinity()) return loc.at_infinity >= 1;
    if (x.is_finite()) return loc.finite(x.coordinate()).is_zero();
    return gcd(loc.finite, x.polynomial()).degree() > 0;
}

inline std::vector<Place> zero_places(const QPoly& f, int degree) {
    auto out = places_of(f);
    if (f.degree() < degree) out.push_back(Place::infinity());
    return out;
}

inline Tristate combine(Tristate a, Tristate b) {
    if (a == Tristate::no || b == Tristate::no) return Tristate::no;
    if (a == Tristate::undetermined || b == Tristate::undetermined) return Tristate::undetermined;
    return Tristate::yes;
}

}  // namespace detail

inline NondegeneracyReport check_nondegenerate(const AzMorphism& phi, const BranchModel& model) {
    NondegeneracyReport rep;
    const auto& br = model.branches;
    std::vector<std::optional<Homogenized>> hom;
    for (const auto& b : br) hom.push_back(b.mode == BranchMode::exact ? std::optional(homogenize(b.param)) : std::nullopt);
    for (std::size_t i = 0; i <= phi.k; ++i) {
        HyperplaneVerdict v{i, Tristate::yes, {}};
        auto mark = [&](Tristate t, std::string why) {
            v.nondegenerate = detail::combine(v.nondegenerate, t);
            v.reasons.push_back(std::move(why));
        };
        for (std::size_t b = 0; b < br.size(); ++b) {
            if (!hom[b]) {
                mark(Tristate::undetermined, "branch " + std::to_string(b) + " is not exactly parametrized");
                continue;
            }
            const auto& h = *hom[b];
            if (h.coords[i].is_zero()) {
                mark(Tristate::no, "branch " + std::to_string(b) + " lies in H_" + std::to_string(i));
                continue;
            }
            auto nodes = phi.curve.node_places(br[b].component);
            for (const auto& x : detail::zero_places(h.coords[i], h.degree)) {
                for (const auto& q : nodes)
                    if (q == x)
                        mark(Tristate::no, "branch " + std::to_string(b) + " meets H_" + std::to_string(i) +
                                               " over a node at " + x.str());
                for (std::size_t o = 0; o < br.size(); ++o) {
                    if (o == b || br[o].component != br[b].component || !hom[o]) continue;
                    auto loc = intersection_locus(h, *hom[o]);
                    if (!loc || detail::place_on_locus(*loc, x))
                        mark(Tristate::no, "branch " + std::to_string(b) + " meets H_" + std::to_string(i) + " at " +
                                               x.str() + ", where it crosses branch " + std::to_string(o));
                }
            }
        }
        rep.overall = detail::combine(rep.overall, v.nondegenerate);
        rep.hyperplanes.push_back(std::move(v));
    }
    return rep;
}

inline NondegeneracyReport check_nondegenerate(const AzMorphism& phi) {
    return check_nondegenerate(phi, branch_model(phi));
}

struct StrongReport {
    Tristate strong = Tristate::yes;
    std::vector<std::string> reasons;
};

inline StrongReport check_strongly_nondegenerate(const AzMorphism& phi, const BranchModel& model) {
    StrongReport rep;
    auto nd = check_nondegenerate(phi, model);
    if (nd.overall != Tristate::yes) {
        rep.strong = nd.overall;
        rep.reasons.push_back(nd.overall == Tristate::no ? "not nondegenerate" : "nondegeneracy undetermined");
        return rep;
    }
    for (std::size_t b = 0; b < model.branches.size(); ++b) {
        auto h = homogenize(model.branches[b].param);
        for (std::size_t i = 0; i <= phi.k; ++i)
            for (std::size_t j = i + 1; j <= phi.k; ++j) {
                std::string pair = "branch " + std::to_string(b) + ": y_" + std::to_string(i) + " and y_" + std::to_string(j);
                QPoly g = gcd(h.coords[i], h.coords[j]);
                if (g.degree() > 0) {
                    rep.strong = Tristate::no;
                    rep.reasons.push_back(pair + " vanish together at zeros of " + g.monic().str("t"));
                }
                if (h.coords[i].degree() < h.degree && h.coords[j].degree() < h.degree) {
                    rep.strong = Tristate::no;
                    rep.reasons.push_back(pair + " vanish together at inf");
                }
            }
    }
    return rep;
}

inline StrongReport check_strongly_nondegenerate(const AzMorphism& phi) {
    return check_strongly_nondegenerate(phi, branch_model(phi));
}

/// det(l - a) with denominators cleared: coeffs[i] is the integral,
/// jointly content-free coefficient of l^i.
struct SpectralCurve {
    std::vector<QPoly> coeffs;
    QPoly denominator;
    Poly<RatFunc> char_poly, min_poly;
    bool strict = false;  // min poly is a proper divisor of char poly

    std::string str() const {
        std::string out;
        for (std::size_t i = coeffs.size(); i-- > 0;)
            for (int j = coeffs[i].degree(); j >= 0; --j) {
                Rat c = coeffs[i].coeff(static_cast<std::size_t>(j));
                if (c.is_zero()) continue;
                std::string body;
                if (j > 0) body = j == 1 ? "t" : "t^" + std::to_string(j);
                if (i > 0) body += std::string(body.empty() ? "" : "*") + (i == 1 ? "l" : "l^" + std::to_string(i));
                Rat a = c.abs();
                std::string term = body.empty() ? a.str() : a == Rat(1) ? body : a.str() + "*" + body;
                if (out.empty()) out = c.sign() < 0 ? "-" + term : term;
                else out += (c.sign() < 0 ? " - " : " + ") + term;
            }
        return out.empty() ? "0" : out;
    }
};

inline SpectralCurve spectral_curve(const KMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("spectral curve needs a square matrix");
    SpectralCurve s;
    s.char_poly = char_poly(a);
    s.min_poly = min_poly(a);
    s.strict = s.min_poly.degree() < s.char_poly.degree();
    QPoly l(Rat(1));
    for (int i = 0; i <= s.char_poly.degree(); ++i) {
        const auto& c = s.char_poly.coeff(static_cast<std::size_t>(i));
        if (!c.is_zero()) l = (l / gcd(l, c.den())) * c.den();
    }
    s.denominator = l.monic();
    for (int i = 0; i <= s.char_poly.degree(); ++i) {
        const auto& c = s.char_poly.coeff(static_cast<std::size_t>(i));
        s.coeffs.push_back(c.is_zero() ? QPoly() : c.num() * (s.denominator / c.den()));
    }
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& q : s.coeffs)
        for (int j = 0; j <= q.degree(); ++j) {
            const Rat& x = q.coeff(static_cast<std::size_t>(j));
            if (!x.is_zero()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.den().get_mpz_t());
        }
    for (auto& q : s.coeffs) {
        q = q.scaled(Rat(den_lcm));
        for (int j = 0; j <= q.degree(); ++j) {
            const Rat& x = q.coeff(static_cast<std::size_t>(j));
            if (!x.is_zero()) mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), x.num().get_mpz_t());
        }
    }
    Rat fix(mpz_class(1), num_gcd);
    if (s.coeffs.back().lc().sign() < 0) fix = -fix;
    for (auto& q : s.coeffs) q = q.scaled(fix);
    return s;
}

}  // namespace azumaya
