#pragma once

// Morphisms from an Azumaya curve with trivial fundamental module to P^k,
// stored per component as commuting k-tuples of r x r matrices over Q(t)
// in the affine chart y_0 != 0.

#include "azumaya/exact/linalg.hpp"
#include "azumaya/exact/place.hpp"
#include "azumaya/exact/qt_roots.hpp"
#include "azumaya/model/curve.hpp"
#include "azumaya/model/dzero.hpp"

#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace azumaya {

using KMatrix = Matrix<RatFunc>;

namespace detail {

using PolyVec = std::vector<QPoly>;

/// Row-major polynomial matrix with D * m = out, D the lcm of denominators.
inline PolyVec clear_matrix(const KMatrix& m) {
    QPoly l(Rat(1));
    for (const auto& x : m.entries()) l = (l / gcd(l, x.den())) * x.den();
    PolyVec out;
    for (const auto& x : m.entries()) out.push_back(x.num() * (l / x.den()));
    return out;
}

inline PolyVec poly_mat_mul(const PolyVec& a, const PolyVec& b, std::size_t n) {
    PolyVec out(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
            const QPoly& x = a[i * n + l];
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!b[l * n + j].is_zero()) out[i * n + j] += x * b[l * n + j];
        }
    return out;
}

/// Q(t)-span of polynomial vectors kept as primitive echelon rows over Q[t].
class PolySpan {
public:
    /// Adds v if independent over Q(t); returns true if added.
    bool add(PolyVec v) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            std::size_t p = pivots_[i];
            if (v[p].is_zero()) continue;
            QPoly f = v[p];
            const QPoly& lc = rows_[i][p];
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (!v[j].is_zero()) v[j] = v[j] * lc;
                if (!rows_[i][j].is_zero()) v[j] -= f * rows_[i][j];
            }
            make_primitive(v);
        }
        std::size_t p = 0;
        while (p < v.size() && v[p].is_zero()) ++p;
        if (p == v.size()) return false;
        make_primitive(v);
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        return true;
    }

private:
    static void make_primitive(PolyVec& v) {
        QPoly g;
        for (const auto& x : v)
            if (!x.is_zero()) g = g.is_zero() ? x : gcd(g, x);
        if (g.is_zero()) return;
        std::size_t p = 0;
        while (v[p].is_zero()) ++p;
        Rat s = Rat(1) / (v[p] / g).lc();
        for (auto& x : v)
            if (!x.is_zero()) x = (x / g).scaled(s);
    }

    std::vector<PolyVec> rows_;
    std::vector<std::size_t> pivots_;
};

struct Leverrier {
    QPoly denominator;           // D with D * m polynomial
    std::vector<QPoly> charpoly;  // det(l I - D m), lowest degree first
    PolyVec adj_part;             // M_n, with (D m)^-1 = -M_n / c_0
};

/// Faddeev-LeVerrier on the denominator-cleared matrix: only polynomial
/// products and division by integers.
inline Leverrier leverrier(const KMatrix& m) {
    std::size_t n = m.rows();
    Leverrier out;
    QPoly l(Rat(1));
    for (const auto& x : m.entries()) l = (l / gcd(l, x.den())) * x.den();
    out.denominator = l;
    PolyVec g = clear_matrix(m);
    out.charpoly.assign(n + 1, QPoly());
    out.charpoly[n] = QPoly(Rat(1));
    PolyVec mk(n * n);
    for (std::size_t k = 1; k <= n; ++k) {
        PolyVec next = poly_mat_mul(g, mk, n);
        for (std::size_t i = 0; i < n; ++i) next[i * n + i] += out.charpoly[n - k + 1];
        mk = std::move(next);
        PolyVec gm = poly_mat_mul(g, mk, n);
        QPoly tr;
        for (std::size_t i = 0; i < n; ++i) tr += gm[i * n + i];
        out.charpoly[n - k] = tr.scaled(Rat(-1, static_cast<long>(k)));
    }
    out.adj_part = std::move(mk);
    return out;
}

}  // namespace detail

inline RatFunc determinant(const KMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return RatFunc(Rat(1));
    auto lv = detail::leverrier(m);
    QPoly d = lv.charpoly[0];
    if (n % 2 == 1) d = -d;
    return RatFunc(d, lv.denominator.pow(static_cast<unsigned>(n)));
}

inline std::optional<KMatrix> inverse(const KMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return KMatrix(0, 0);
    auto lv = detail::leverrier(m);
    const QPoly& c0 = lv.charpoly[0];
    if (c0.is_zero()) return std::nullopt;
    std::vector<RatFunc> e;
    for (const auto& x : lv.adj_part) e.emplace_back(-(x * lv.denominator), c0);
    return KMatrix(n, n, std::move(e));
}

/// det(l I - m) over Q(t).
inline Poly<RatFunc> char_poly(const KMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("char_poly of non-square matrix");
    std::size_t n = m.rows();
    auto lv = detail::leverrier(m);
    // det(l I - G/D) = D^-n det(D l I - G): coefficient of l^i is c_i D^(i-n)
    std::vector<RatFunc> c;
    for (std::size_t i = 0; i <= n; ++i)
        c.emplace_back(lv.charpoly[i], lv.denominator.pow(static_cast<unsigned>(n - i)));
    return Poly<RatFunc>(std::move(c));
}

/// Q(t)-basis of the algebra generated by commuting matrices over Q(t): the
/// identity, then monomials in the denominator-cleared generators. Scaling by
/// nonzero rational functions leaves the span unchanged, so independence is
/// decided by fraction-free elimination over Q[t].
inline std::vector<KMatrix> algebra_closure(const std::vector<KMatrix>& gens, std::size_t n) {
    for (const auto& g : gens)
        if (!g.is_square() || g.rows() != n) throw std::invalid_argument("generator shape mismatch");
    std::vector<detail::PolyVec> cleared;
    for (const auto& g : gens) cleared.push_back(detail::clear_matrix(g));
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (detail::poly_mat_mul(cleared[i], cleared[j], n) != detail::poly_mat_mul(cleared[j], cleared[i], n))
                throw std::invalid_argument("generators do not commute");
    detail::PolyVec id(n * n);
    for (std::size_t i = 0; i < n; ++i) id[i * n + i] = QPoly(Rat(1));
    std::vector<detail::PolyVec> basis{id};
    detail::PolySpan span;
    span.add(id);
    for (std::size_t next = 0; next < basis.size() && basis.size() < n * n; ++next) {
        for (const auto& g : cleared) {
            auto p = detail::poly_mat_mul(g, basis[next], n);
            if (span.add(p)) basis.push_back(std::move(p));
            if (basis.size() == n * n) break;
        }
    }
    std::vector<KMatrix> out;
    for (const auto& b : basis) {
        std::vector<RatFunc> e;
        for (const auto& x : b) e.emplace_back(x);
        out.emplace_back(n, n, std::move(e));
    }
    return out;
}

struct AzMorphism {
    PrestableCurve curve = projective_line();
    std::size_t r = 1;
    std::size_t k = 1;
    std::vector<std::vector<KMatrix>> tuples;  // [component][j-1] = m_j
    long deg_e = 0;
};

/// Distinct places of the zero locus of a nonzero polynomial: rational
/// roots, then one irreducible place per rootless squarefree factor.
inline std::vector<Place> places_of(const QPoly& p) {
    std::vector<Place> out;
    if (p.degree() <= 0) return out;
    QPoly s = squarefree_part(p);
    QPoly rest = s;
    for (const auto& r : squarefree_rational_roots(s)) {
        out.push_back(Place::finite(r));
        rest = rest / QPoly::linear(r);
    }
    if (rest.degree() >= 2) out.push_back(Place::irreducible(rest));
    return out;
}

inline void add_place(std::vector<Place>& v, const Place& p) {
    for (const auto& q : v)
        if (q == p) return;
    v.push_back(p);
}

/// Poles of any entry of the tuple, infinity included, sorted.
inline std::vector<Place> pole_places(const std::vector<KMatrix>& tuple) {
    QPoly den(Rat(1));
    bool at_infinity = false;
    for (const auto& m : tuple)
        for (const auto& f : m.entries()) {
            if (f.is_zero()) continue;
            den = (den / gcd(den, f.den())) * f.den();
            if (f.num().degree() > f.den().degree()) at_infinity = true;
        }
    auto out = places_of(den);
    if (at_infinity) out.push_back(Place::infinity());
    std::sort(out.begin(), out.end());
    return out;
}

inline bool regular_at(const std::vector<KMatrix>& tuple, const Place& p) {
    for (const auto& m : tuple)
        for (const auto& f : m.entries())
            if (!regular_at(f, p)) return false;
    return true;
}

inline QMatrix evaluate(const KMatrix& m, const Place& p) {
    return m.map<Rat>([&](const RatFunc& f) { return value_at(f, p); });
}

/// One affine chart of P^k and the matrices of its coordinates. Charts are
/// chart 0 (y_j/y_0), the standard charts y_j/y_i, then generic charts with
/// coordinates y_j / (y_0 + sum c_i y_i).
struct Chart {
    std::string name;
    std::size_t index = 0;    // standard chart index; unused for generic ones
    std::vector<Rat> weights;  // generic charts only
    std::vector<KMatrix> coords;

    /// Homogeneous coordinates of an affine point of this chart.
    std::vector<Rat> homogeneous(const std::vector<Rat>& z) const {
        std::size_t k = z.size();
        std::vector<Rat> y(k + 1, Rat(0));
        if (!weights.empty()) {
            y[0] = Rat(1);
            for (std::size_t j = 0; j < k; ++j) {
                y[0] -= weights[j] * z[j];
                y[j + 1] = z[j];
            }
        } else {
            std::size_t a = 0;
            for (std::size_t j = 0; j <= k; ++j) y[j] = j == index ? Rat(1) : z[a++];
        }
        return y;
    }
};

inline std::vector<Rat> normalize_homogeneous(std::vector<Rat> y) {
    for (const auto& v : y)
        if (!v.is_zero()) {
            Rat inv = v.inverse();
            for (auto& w : y) w *= inv;
            break;
        }
    return y;
}

/// Charts in a fixed order, built on first use so that a place regular in an
/// early chart never pays for the inverses behind the later ones.
class ChartAtlas {
public:
    ChartAtlas(std::vector<KMatrix> tuple, std::size_t r, int generic = 6, std::uint64_t seed = 0)
        : tuple_(std::move(tuple)), r_(r) {
        Rng rng(seed);
        for (int g = 0; g < generic; ++g) {
            std::vector<Rat> w(tuple_.size());
            for (auto& x : w) x = Rat(rng.integer(1, 5) * (rng.integer(0, 1) ? 1 : -1));
            weights_.push_back(std::move(w));
        }
        built_.push_back(Chart{"chart 0", 0, {}, tuple_});
    }

    /// The i-th chart that exists, or null past the end.
    const Chart* at(std::size_t i) const {
        std::lock_guard<std::mutex> lock(mu_);
        while (built_.size() <= i && next_ < tuple_.size() + weights_.size()) build(next_++);
        return i < built_.size() ? &built_[i] : nullptr;
    }

private:
    void build(std::size_t step) const {
        std::size_t k = tuple_.size();
        auto id = KMatrix::identity(r_);
        if (step < k) {
            std::size_t i = step + 1;
            auto inv = inverse(tuple_[i - 1]);
            if (!inv) return;
            Chart c{"chart " + std::to_string(i), i, {}, {}};
            for (std::size_t j = 0; j <= k; ++j) {
                if (j == i) continue;
                c.coords.push_back((j == 0 ? id : tuple_[j - 1]) * *inv);
            }
            built_.push_back(std::move(c));
            return;
        }
        std::size_t g = step - k;
        const auto& w = weights_[g];
        KMatrix l = id;
        for (std::size_t j = 0; j < k; ++j) l += tuple_[j].scaled(RatFunc(w[j]));
        auto inv = inverse(l);
        if (!inv) return;
        Chart c{"generic chart " + std::to_string(g), 0, w, {}};
        for (const auto& m : tuple_) c.coords.push_back(m * *inv);
        built_.push_back(std::move(c));
    }

    std::vector<KMatrix> tuple_;
    std::size_t r_;
    std::vector<std::vector<Rat>> weights_;
    mutable std::deque<Chart> built_;
    mutable std::size_t next_ = 0;
    mutable std::mutex mu_;
};

inline ChartAtlas chart_atlas(const std::vector<KMatrix>& tuple, std::size_t r, int generic = 6,
                              std::uint64_t seed = 0) {
    return ChartAtlas(tuple, r, generic, seed);
}

/// First chart whose coordinate matrices are regular at p.
inline const Chart* regular_chart(const ChartAtlas& atlas, const Place& p) {
    for (std::size_t i = 0;; ++i) {
        const Chart* c = atlas.at(i);
        if (!c || regular_at(c->coords, p)) return c;
    }
}

struct FiberPoint {
    std::optional<std::vector<Rat>> coords;  // homogeneous, first nonzero entry 1
    SupportPoint cluster;                     // chart-affine factor data when coords is empty
    unsigned length = 0;
    unsigned degree = 1;
};

struct FiberData {
    std::size_t component = 0;
    Place place = Place::infinity();
    std::string chart;
    std::vector<FiberPoint> points;
    std::size_t total_length() const {
        std::size_t s = 0;
        for (const auto& p : points) s += static_cast<std::size_t>(p.length) * p.degree;
        return s;
    }
    std::vector<std::vector<Rat>> reduced_rational() const {
        std::vector<std::vector<Rat>> out;
        for (const auto& p : points)
            if (p.coords) out.push_back(*p.coords);
        std::sort(out.begin(), out.end());
        return out;
    }
    std::vector<std::string> reduced_clusters() const {
        std::vector<std::string> out;
        for (const auto& p : points) {
            if (p.coords) continue;
            std::string s = chart + ":";
            for (const auto& f : p.cluster.factors) s += (f.root ? "l - " + f.root->str() : f.factor.str("l")) + ";";
            out.push_back(s);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

class FiberError : public std::runtime_error {
public:
    explicit FiberError(const std::string& place) : std::runtime_error("fiber not proper at " + place) {}
};

inline FiberData fiber_from_charts(const ChartAtlas& atlas, std::size_t r, std::size_t comp,
                                   const Place& p) {
    if (!p.is_rational()) throw std::invalid_argument("fiber_at needs a rational place or infinity");
    const Chart* c = regular_chart(atlas, p);
    if (!c) throw FiberError(p.str());
    std::vector<QMatrix> ev;
    for (const auto& m : c->coords) ev.push_back(evaluate(m, p));
    FiberData fd{comp, p, c->name, {}};
    for (auto& sp : d0_support(ev, r).points) {
        FiberPoint fp;
        fp.length = sp.length;
        fp.degree = sp.degree;
        if (sp.rational()) fp.coords = normalize_homogeneous(c->homogeneous(sp.coordinates()));
        else fp.cluster = std::move(sp);
        fd.points.push_back(std::move(fp));
    }
    std::stable_sort(fd.points.begin(), fd.points.end(), [](const FiberPoint& a, const FiberPoint& b) {
        if (a.coords.has_value() != b.coords.has_value()) return a.coords.has_value();
        return a.coords && *a.coords < *b.coords;
    });
    return fd;
}

inline FiberData fiber_at(const AzMorphism& phi, std::size_t comp, const Place& p) {
    return fiber_from_charts(chart_atlas(phi.tuples.at(comp), phi.r), phi.r, comp, p);
}

struct MorphismIssue {
    std::string kind;  // shape, commutation, node, properness
    std::string message;
    std::optional<std::size_t> component;
    std::optional<std::pair<std::size_t, std::size_t>> pair;
    std::optional<std::size_t> node;
    std::optional<std::string> place;
};

struct NodeCheck {
    std::size_t node = 0;
    std::vector<std::vector<Rat>> side_a, side_b;
    bool agree = false;
};

struct MorphismValidation {
    bool valid = true;
    std::vector<MorphismIssue> issues;
    std::vector<std::string> warnings;
    std::vector<std::vector<Place>> poles;  // per component
    std::vector<NodeCheck> nodes;
};

/// Throws ValidationError on shape problems only.
inline void check_shapes(const AzMorphism& phi) {
    std::vector<std::string> issues;
    if (phi.r == 0) issues.push_back("rank must be >= 1");
    if (phi.k == 0) issues.push_back("target dimension must be >= 1");
    if (phi.tuples.size() != phi.curve.size())
        issues.push_back("expected " + std::to_string(phi.curve.size()) + " component tuples, found " +
                         std::to_string(phi.tuples.size()));
    for (std::size_t c = 0; c < phi.tuples.size(); ++c) {
        if (phi.tuples[c].size() != phi.k)
            issues.push_back("component " + std::to_string(c) + ": expected " + std::to_string(phi.k) +
                             " matrices, found " + std::to_string(phi.tuples[c].size()));
        for (std::size_t j = 0; j < phi.tuples[c].size(); ++j)
            if (phi.tuples[c][j].rows() != phi.r || phi.tuples[c][j].cols() != phi.r)
                issues.push_back("component " + std::to_string(c) + " matrix " + std::to_string(j + 1) +
                                 ": expected " + std::to_string(phi.r) + "x" + std::to_string(phi.r));
    }
    if (!issues.empty()) throw ValidationError(issues);
}

inline MorphismValidation morphism_validate(const AzMorphism& phi) {
    check_shapes(phi);
    MorphismValidation out;
    auto fail = [&](MorphismIssue i) {
        out.valid = false;
        out.issues.push_back(std::move(i));
    };
    std::size_t n = phi.curve.size();
    std::vector<bool> commuting(n, true);
    for (std::size_t c = 0; c < n; ++c) {
        const auto& t = phi.tuples[c];
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j)
                if (!commute(t[i], t[j])) {
                    commuting[c] = false;
                    fail({"commutation",
                          "component " + std::to_string(c) + ": m" + std::to_string(i + 1) + " and m" +
                              std::to_string(j + 1) + " do not commute",
                          c, std::make_pair(i + 1, j + 1), std::nullopt, std::nullopt});
                }
        for (std::size_t j = 0; j < t.size(); ++j)
            if (determinant(t[j]).is_zero())
                out.warnings.push_back("component " + std::to_string(c) + ": m" + std::to_string(j + 1) +
                                       " is not generically invertible");
        out.poles.push_back(pole_places(t));
    }
    std::deque<ChartAtlas> atlases;
    for (std::size_t c = 0; c < n; ++c) atlases.emplace_back(phi.tuples[c], phi.r);
    for (std::size_t c = 0; c < n; ++c) {
        if (!commuting[c]) continue;
        for (const auto& p : out.poles[c])
            if (!regular_chart(atlases[c], p))
                fail({"properness", "component " + std::to_string(c) + ": fiber not proper at " + p.str(), c,
                      std::nullopt, std::nullopt, p.str()});
    }
    const auto& nodes = phi.curve.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& nd = nodes[i];
        if (!commuting[nd.comp_a] || !commuting[nd.comp_b]) continue;
        NodeCheck nc;
        nc.node = i;
        try {
            auto fa = fiber_from_charts(atlases[nd.comp_a], phi.r, nd.comp_a, nd.place_a);
            auto fb = fiber_from_charts(atlases[nd.comp_b], phi.r, nd.comp_b, nd.place_b);
            nc.side_a = fa.reduced_rational();
            nc.side_b = fb.reduced_rational();
            nc.agree = nc.side_a == nc.side_b && fa.reduced_clusters() == fb.reduced_clusters();
        } catch (const FiberError& e) {
            fail({"properness", "node " + std::to_string(i) + ": " + e.what(), std::nullopt, std::nullopt, i,
                  std::nullopt});
            out.nodes.push_back(nc);
            continue;
        }
        if (!nc.agree)
            fail({"node", "node " + std::to_string(i) + ": reduced fibers differ", std::nullopt, std::nullopt, i,
                  nd.place_a.str() + " ~ " + nd.place_b.str()});
        out.nodes.push_back(std::move(nc));
    }
    return out;
}

}  // namespace azumaya
