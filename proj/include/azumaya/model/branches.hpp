#pragma once

// The graph of a morphism as a union of branches over each component, with
// generic lengths and map degrees, and the invariants built from them.

#include "azumaya/model/morphism.hpp"

#include <map>
#include <set>

namespace azumaya {

enum class BranchMode { exact, cluster, sampled };

inline std::string mode_str(BranchMode m) {
    switch (m) {
        case BranchMode::exact: return "exact";
        case BranchMode::cluster: return "cluster";
        default: return "sampled";
    }
}

/// Fiber statistics of one branch at a rational parameter value.
struct FiberSample {
    Rat t;
    std::vector<std::pair<unsigned, unsigned>> points;  // (length, degree)
};

struct Branch {
    std::size_t component = 0;
    BranchMode mode = BranchMode::exact;
    std::vector<RatFunc> param;      // exact: the affine chart-0 coordinates
    QtPoly cluster;                  // cluster: monic irreducible factor in l over Q(t)
    std::vector<QtPoly> factors;     // sampled: the coprime factor of each coordinate
    unsigned length = 0;             // generic length
    unsigned sheets = 1;             // degree of the branch over its component
    std::optional<int> map_degree;   // degree of the map to P^k
    bool confirmed = false;          // generic length seen at three generic samples
    std::vector<FiberSample> samples;
};

struct BranchModel {
    std::vector<Branch> branches;
    std::vector<std::string> notes;
    bool exact() const {
        for (const auto& b : branches)
            if (b.mode == BranchMode::sampled) return false;
        return true;
    }
};

/// Coprime homogeneous coordinates (F_0 : ... : F_k) of (1 : f_1 : ... : f_k).
struct Homogenized {
    std::vector<QPoly> coords;
    int degree = 0;
};

inline Homogenized homogenize(const std::vector<RatFunc>& param) {
    QPoly l(Rat(1));
    for (const auto& f : param) l = (l / gcd(l, f.den())) * f.den();
    Homogenized h;
    h.coords.push_back(l);
    for (const auto& f : param) h.coords.push_back(f.num() * (l / f.den()));
    QPoly g;
    for (const auto& c : h.coords)
        if (!c.is_zero()) g = g.is_zero() ? c : gcd(g, c);
    for (auto& c : h.coords) {
        c = c / g;
        h.degree = std::max(h.degree, c.degree());
    }
    return h;
}

/// Value of the binary forms of degree h.degree at a rational place.
inline std::vector<Rat> homogeneous_value(const Homogenized& h, const Place& p) {
    std::vector<Rat> y;
    for (const auto& c : h.coords)
        y.push_back(p.is_finite() ? c(p.coordinate()) : c.coeff(static_cast<std::size_t>(h.degree)));
    return normalize_homogeneous(std::move(y));
}

inline std::string param_key(const std::vector<RatFunc>& param) {
    std::string s;
    for (const auto& f : param) s += f.str() + ",";
    return s;
}

namespace detail {

inline std::vector<Rat> sample_parameters(std::size_t count) {
    std::vector<Rat> out;
    std::set<Rat> seen;
    for (long i = 0; out.size() < count; ++i) {
        Rat t(((i / 2) + 2) * (i % 2 ? -1 : 1), 1 + (i / 6) % 3);
        if (seen.insert(t).second) out.push_back(t);
    }
    return out;
}

inline bool is_node_place(const PrestableCurve& c, std::size_t comp, const Rat& t) {
    for (const auto& p : c.node_places(comp))
        if (p.is_finite() && p.coordinate() == t) return true;
    return false;
}

inline std::optional<std::vector<QMatrix>> evaluate_tuple(const std::vector<KMatrix>& tuple, const Rat& t) {
    Place p = Place::finite(t);
    if (!regular_at(tuple, p)) return std::nullopt;
    std::vector<QMatrix> ev;
    for (const auto& m : tuple) ev.push_back(evaluate(m, p));
    return ev;
}

}  // namespace detail

inline BranchModel branch_model(const AzMorphism& phi) {
    check_shapes(phi);
    BranchModel model;
    auto samples = detail::sample_parameters(80);
    for (std::size_t c = 0; c < phi.curve.size(); ++c) {
        const auto& tuple = phi.tuples[c];
        auto pieces = joint_decompose<RatFunc>(tuple, phi.r, [](const QtPoly& p) { return coprime_factors(p); });
        std::vector<Branch> comp_branches;
        for (auto& piece : pieces) {
            Branch b;
            b.component = c;
            auto dim = static_cast<unsigned>(piece.basis.size());
            bool all_roots = true;
            for (const auto& f : piece.factors) all_roots = all_roots && f.root.has_value();
            if (all_roots) {
                for (const auto& f : piece.factors) b.param.push_back(*f.root);
                b.length = dim;
                b.map_degree = homogenize(b.param).degree;
            } else if (phi.k == 1 && piece.factors[0].factor.degree() == 2) {
                b.mode = BranchMode::cluster;
                b.cluster = piece.factors[0].factor;
                b.sheets = 2;
                b.length = dim / 2;
                int d = 0;
                for (const auto& q : clear_denominators(b.cluster)) d = std::max(d, q.degree());
                b.map_degree = d;
            } else {
                b.mode = BranchMode::sampled;
                for (const auto& f : piece.factors) b.factors.push_back(f.factor);
                std::vector<KMatrix> restricted;
                for (const auto& m : tuple) restricted.push_back(restrict_to(m, piece.basis));
                unsigned best_points = 0;
                for (const auto& t : samples) {
                    if (b.samples.size() >= 5) break;
                    auto ev = detail::evaluate_tuple(restricted, t);
                    if (!ev) continue;
                    FiberSample fs{t, {}};
                    unsigned pts = 0;
                    for (const auto& sp : d0_support(*ev, piece.basis.size()).points) {
                        fs.points.emplace_back(sp.length, sp.degree);
                        pts += sp.degree;
                    }
                    if (pts > best_points) best_points = pts;
                    b.samples.push_back(std::move(fs));
                }
                b.sheets = best_points ? best_points : 1;
                b.length = dim / b.sheets;
                model.notes.push_back("component " + std::to_string(c) + ": a branch of degree " +
                                      std::to_string(b.sheets) + " over the component is handled by sampling");
            }
            comp_branches.push_back(std::move(b));
        }
        // Generic length confirmation against whole fibers.
        unsigned expected_points = 0;
        std::multiset<unsigned> other_lengths;
        for (const auto& b : comp_branches) {
            expected_points += b.sheets;
            if (b.mode != BranchMode::exact)
                for (unsigned s = 0; s < b.sheets; ++s) other_lengths.insert(b.length);
        }
        int good = 0;
        bool failed = false;
        for (const auto& t : samples) {
            if (good >= 3 || failed) break;
            if (detail::is_node_place(phi.curve, c, t)) continue;
            auto ev = detail::evaluate_tuple(tuple, t);
            if (!ev) continue;
            bool regular = true;
            for (const auto& b : comp_branches)
                for (const auto& f : b.param) regular = regular && regular_at(f, Place::finite(t));
            if (!regular) continue;
            auto sup = d0_support(*ev, phi.r);
            unsigned pts = 0;
            for (const auto& sp : sup.points) pts += sp.degree;
            if (pts != expected_points) continue;
            std::vector<bool> used(sup.points.size(), false);
            bool ok = true;
            for (const auto& b : comp_branches) {
                if (b.mode != BranchMode::exact) continue;
                std::vector<Rat> v;
                for (const auto& f : b.param) v.push_back(f(t));
                bool found = false;
                for (std::size_t i = 0; i < sup.points.size(); ++i)
                    if (!used[i] && sup.points[i].rational() && sup.points[i].coordinates() == v) {
                        used[i] = true;
                        found = sup.points[i].length == b.length;
                        break;
                    }
                ok = ok && found;
            }
            std::multiset<unsigned> rest;
            for (std::size_t i = 0; i < sup.points.size(); ++i)
                if (!used[i])
                    for (unsigned s = 0; s < sup.points[i].degree; ++s) rest.insert(sup.points[i].length);
            ok = ok && rest == other_lengths;
            if (ok) ++good;
            else failed = true;
        }
        for (auto& b : comp_branches) b.confirmed = good >= 3 && !failed;
        if (failed)
            model.notes.push_back("component " + std::to_string(c) +
                                  ": generic lengths disagree with a sampled fiber (possible nilpotent arc "
                                  "linking distinct points)");
        std::stable_sort(comp_branches.begin(), comp_branches.end(), [](const Branch& a, const Branch& b) {
            if (a.mode != b.mode) return a.mode < b.mode;
            if (a.mode == BranchMode::exact) return param_key(a.param) < param_key(b.param);
            return a.cluster.str("l") < b.cluster.str("l");
        });
        for (auto& b : comp_branches) model.branches.push_back(std::move(b));
    }
    return model;
}

/// beta . H = sum over branches of length * map degree.
inline long image_degree(const BranchModel& b) {
    long s = 0;
    for (const auto& br : b.branches) {
        if (br.mode == BranchMode::sampled || !br.map_degree)
            throw std::domain_error("image degree requires exact branches");
        s += static_cast<long>(br.length) * *br.map_degree;
    }
    return s;
}

struct CombType {
    int g = 0;
    long r = 0;
    long chi = 0;
    long beta = 0;
    friend bool operator==(const CombType&, const CombType&) = default;
    std::string str() const {
        return "(" + std::to_string(g) + ", " + std::to_string(r) + ", " + std::to_string(chi) + " | " +
               std::to_string(beta) + ")";
    }
};

inline CombType comb_type(const AzMorphism& phi, const BranchModel& b) {
    return CombType{arithmetic_genus(phi.curve), static_cast<long>(phi.r),
                    euler_char(phi.curve, static_cast<int>(phi.r), phi.deg_e), image_degree(b)};
}

inline CombType comb_type(const AzMorphism& phi) { return comb_type(phi, branch_model(phi)); }

struct HilbertPoly {
    long slope = 0;
    long constant = 0;
    long operator()(long m) const { return slope * m + constant; }
    std::string str() const {
        std::string s = slope == 1 ? "m" : slope == -1 ? "-m" : std::to_string(slope) + "m";
        if (constant > 0) s += " + " + std::to_string(constant);
        if (constant < 0) s += " - " + std::to_string(-constant);
        if (constant == 0) s += " + 0";
        return s;
    }
};

/// P(E~, m) = (r deg(C) + beta . H) m + chi.
inline HilbertPoly hilbert_poly(const CombType& ct, const Polarization& pol) {
    return HilbertPoly{ct.r * pol.total() + ct.beta, ct.chi};
}

inline HilbertPoly hilbert_poly(const AzMorphism& phi, const Polarization& pol) {
    return hilbert_poly(comb_type(phi), pol);
}

enum class NilpotencyStyle { split, jordan };

struct BranchSpec {
    std::vector<RatFunc> param;
    unsigned length = 1;
    NilpotencyStyle style = NilpotencyStyle::split;
};

/// Block-diagonal tuples realizing the given branches on each component.
inline AzMorphism from_branches(const PrestableCurve& curve, const std::vector<std::vector<BranchSpec>>& specs,
                                std::size_t k, long deg_e = 0) {
    if (specs.size() != curve.size()) throw std::invalid_argument("one branch list per component is required");
    std::optional<std::size_t> rank;
    for (const auto& comp : specs) {
        std::size_t s = 0;
        for (const auto& b : comp) {
            if (b.param.size() != k) throw std::invalid_argument("parametrization must have k coordinates");
            if (b.length == 0) throw std::invalid_argument("length mismatch: lengths must be positive");
            s += b.length;
        }
        if (rank && *rank != s) throw std::invalid_argument("length mismatch");
        rank = s;
    }
    if (!rank || *rank == 0) throw std::invalid_argument("length mismatch");
    AzMorphism phi{curve, *rank, k, {}, deg_e};
    for (const auto& comp : specs) {
        std::vector<KMatrix> tuple(k, KMatrix(*rank, *rank));
        std::size_t off = 0;
        for (const auto& b : comp) {
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t i = 0; i < b.length; ++i) {
                    tuple[j](off + i, off + i) = b.param[j];
                    if (j == 0 && b.style == NilpotencyStyle::jordan && i + 1 < b.length)
                        tuple[j](off + i, off + i + 1) = RatFunc(1);
                }
            off += b.length;
        }
        phi.tuples.push_back(std::move(tuple));
    }
    return phi;
}

}  // namespace azumaya
