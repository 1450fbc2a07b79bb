#pragma once

// The surrogate algebra A_phi generated over O_C by the chart coordinates,
// its generic degree, and the places where the evaluated algebra is smaller.

#include "azumaya/exact/local.hpp"
#include "azumaya/exact/residue.hpp"
#include "azumaya/model/morphism.hpp"

namespace azumaya {

/// O_x-basis of the algebra generated by matrices regular at x.
inline std::vector<KMatrix> local_algebra(const std::vector<KMatrix>& gens, std::size_t r, const Place& p) {
    auto to_vec = [](const KMatrix& m) { return flatten(m); };
    auto to_mat = [r](const KVec& v) { return KMatrix(r, r, v); };
    std::vector<KVec> span{to_vec(KMatrix::identity(r))};
    for (const auto& g : gens) {
        std::vector<KMatrix> powers{KMatrix::identity(r)};
        for (std::size_t e = 1; e < r; ++e) powers.push_back(powers.back() * g);
        std::vector<KVec> cand;
        for (const auto& s : span)
            for (const auto& pw : powers) cand.push_back(to_vec(to_mat(s) * pw));
        span = local_span(std::move(cand), p);
    }
    std::vector<KMatrix> out;
    for (const auto& v : span) out.push_back(to_mat(v));
    return out;
}

struct DropPlace {
    Place place = Place::infinity();
    std::string chart;
    std::size_t evaluated_dim = 0;
    std::size_t lost = 0;
    bool nilpotent = false;  // every lost direction is nilpotent in A (x) k(x)
};

struct SurrogateComponent {
    std::size_t generic_degree = 0;
    std::vector<KMatrix> basis;  // over Q(t)
    std::vector<DropPlace> drops;
    std::vector<std::string> notes;
};

struct SurrogateSummary {
    std::vector<SurrogateComponent> components;
};

namespace detail {

/// Evaluates a local basis into the residue field G and measures the rank.
/// Lost directions are tested for nilpotency in the fiber algebra L/mL,
/// whose structure constants are the reduced coordinates of b_i b_j.
template <class G, class ToField>
std::optional<DropPlace> measure_drop(const std::vector<KMatrix>& basis, std::size_t r, const Place& p,
                                      ToField&& to_field) {
    std::size_t n = basis.size();
    Matrix<G> ev(r * r, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < r * r; ++i) ev(i, j) = to_field(basis[j].entries()[i]);
    auto ker = kernel(ev);
    if (ker.empty()) return std::nullopt;
    DropPlace d;
    d.place = p;
    d.lost = ker.size();
    d.evaluated_dim = n - ker.size();
    SpanBuilder<RatFunc> span(r * r);
    for (const auto& b : basis) span.add(flatten(b));
    std::vector<Matrix<G>> mult(n, Matrix<G>(n, n));  // mult[i](l, j) = coefficient of b_l in b_i b_j
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            auto coords = span.coordinates(flatten(basis[i] * basis[j]));
            if (!coords) return d;  // not closed under products: nilpotent stays false
            for (std::size_t l = 0; l < n; ++l) {
                const auto& x = (*coords)[l];
                if (!x.is_zero() && valuation_at(x, p) < 0) return d;
                mult[i](l, j) = mult[j](l, i) = x.is_zero() ? G(0) : to_field(x);
            }
        }
    d.nilpotent = true;
    for (const auto& c : ker) {
        Matrix<G> m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            if (!field_is_zero(c[i])) m += mult[i].scaled(c[i]);
        if (!m.pow(static_cast<unsigned>(n)).is_zero()) d.nilpotent = false;
    }
    return d;
}

/// One generator g regular at x: O_x[g] is free on 1, g, ..., g^(n-1) since
/// the minimal polynomial is monic over O_x, so the fiber is k(x)[l]/(mu mod x).
/// Its image k(x)[g(x)] is cut out by the minimal polynomial of g(x), which
/// has the same roots, so lost directions are always nilpotent.
template <class G, class ToField>
std::optional<DropPlace> measure_single(const KMatrix& g, std::size_t n, std::size_t r, const Place& p,
                                        ToField&& to_field) {
    Matrix<G> gx(r, r);
    for (std::size_t i = 0; i < r * r; ++i) gx(i / r, i % r) = to_field(g.entries()[i]);
    Matrix<G> ev(r * r, n), pw = Matrix<G>::identity(r);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < r * r; ++i) ev(i, j) = pw(i / r, i % r);
        pw = pw * gx;
    }
    std::size_t lost = kernel(ev).size();
    if (lost == 0) return std::nullopt;
    DropPlace d;
    d.place = p;
    d.lost = lost;
    d.evaluated_dim = n - lost;
    d.nilpotent = true;
    return d;
}

}  // namespace detail

inline SurrogateComponent surrogate_component(const std::vector<KMatrix>& tuple, std::size_t r,
                                              std::uint64_t seed = 0) {
    SurrogateComponent out;
    out.basis = algebra_closure(tuple, r);
    std::size_t n = out.generic_degree = out.basis.size();
    if (n == 1) return out;
    auto atlas = chart_atlas(tuple, r);

    std::vector<Place> rational;
    std::vector<QPoly> irreducible;
    for (const auto& p : pole_places(tuple)) {
        if (p.is_rational()) rational.push_back(p);
        else irreducible.push_back(p.polynomial());
    }
    // Rank drops of the Q(t)-basis lie on zeros of random maximal minors.
    Rng rng(seed);
    QPoly g;
    for (int trial = 0; trial < 2; ++trial) {
        KMatrix proj(n, r * r);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < r * r; ++j) proj(i, j) = RatFunc(rng.integer_rat(5));
        KMatrix cols(r * r, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < r * r; ++i) cols(i, j) = out.basis[j].entries()[i];
        RatFunc d = determinant(proj * cols);
        if (!d.is_zero()) g = g.is_zero() ? d.num() : gcd(g, d.num());
    }
    if (!g.is_zero())
        for (const auto& p : places_of(g)) {
            if (p.is_rational()) add_place(rational, p);
            else irreducible.push_back(p.polynomial());
        }

    auto check = [&](const Place& p) {
        const Chart* c = regular_chart(atlas, p);
        if (!c) {
            out.notes.push_back("no regular chart at " + p.str());
            return;
        }
        std::optional<DropPlace> d;
        if (c->coords.size() == 1) {
            if (p.is_rational()) {
                d = detail::measure_single<Rat>(c->coords[0], n, r, p, [&](const RatFunc& f) { return value_at(f, p); });
            } else {
                auto mod = std::make_shared<const QPoly>(p.polynomial());
                d = detail::measure_single<Residue>(c->coords[0], n, r, p,
                                                    [&](const RatFunc& f) { return residue_of(f, mod); });
            }
        } else if (auto local = local_algebra(c->coords, r, p); p.is_rational()) {
            d = detail::measure_drop<Rat>(local, r, p, [&](const RatFunc& f) { return value_at(f, p); });
        } else {
            auto mod = std::make_shared<const QPoly>(p.polynomial());
            d = detail::measure_drop<Residue>(local, r, p, [&](const RatFunc& f) { return residue_of(f, mod); });
        }
        if (d) {
            d->chart = c->name;
            out.drops.push_back(std::move(*d));
        }
    };
    for (const auto& p : rational) check(p);
    while (!irreducible.empty()) {
        QPoly q = irreducible.back();
        irreducible.pop_back();
        try {
            if (q.degree() == 1) check(Place::finite(-q.coeff(0) / q.coeff(1)));
            else check(Place::irreducible(q));
        } catch (const ZeroDivisorFound& z) {
            irreducible.push_back(z.factor.monic());
            irreducible.push_back((q / z.factor).monic());
        }
    }
    std::sort(out.drops.begin(), out.drops.end(), [](const DropPlace& a, const DropPlace& b) { return a.place < b.place; });
    return out;
}

inline SurrogateSummary surrogate_summary(const AzMorphism& phi, std::uint64_t seed = 0) {
    check_shapes(phi);
    SurrogateSummary s;
    for (const auto& t : phi.tuples) s.components.push_back(surrogate_component(t, phi.r, seed));
    return s;
}

}  // namespace azumaya
