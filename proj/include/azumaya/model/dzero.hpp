#pragma once

// Length-r zero-dimensional sheaves on an affine chart A^k, presented as
// commuting k-tuples of r x r rational matrices.

#include "azumaya/exact/linalg.hpp"
#include "azumaya/exact/random.hpp"
#include "azumaya/exact/roots.hpp"
#include "azumaya/model/errors.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace azumaya {

using QMatrix = Matrix<Rat>;

struct DZeroPoint {
    std::size_t r = 0;
    std::vector<QMatrix> matrices;
};

struct D0Validation {
    bool valid = true;
    std::vector<std::pair<std::size_t, std::size_t>> failing_pairs;
};

/// Shape problems throw; commutation failures are listed pair by pair.
inline D0Validation d0_validate(const DZeroPoint& p) {
    std::vector<std::string> issues;
    if (p.r == 0) issues.push_back("rank must be >= 1");
    if (p.matrices.empty()) issues.push_back("at least one matrix is required");
    for (std::size_t i = 0; i < p.matrices.size(); ++i)
        if (p.matrices[i].rows() != p.r || p.matrices[i].cols() != p.r)
            issues.push_back("matrix " + std::to_string(i) + ": expected " + std::to_string(p.r) + "x" +
                             std::to_string(p.r));
    if (!issues.empty()) throw ValidationError(issues);
    D0Validation out;
    for (std::size_t i = 0; i < p.matrices.size(); ++i)
        for (std::size_t j = i + 1; j < p.matrices.size(); ++j)
            if (!commute(p.matrices[i], p.matrices[j])) out.failing_pairs.emplace_back(i, j);
    out.valid = out.failing_pairs.empty();
    return out;
}

/// One support point: a Q-point, or a Galois orbit of `degree` conjugate
/// points when some coordinate is a root of an irreducible factor.
struct SupportPoint {
    std::vector<CoprimeFactor<Rat>> factors;  // one per coordinate
    unsigned length = 0;                      // per geometric point
    unsigned degree = 1;                      // number of geometric points
    std::size_t dimension = 0;                // dimension of the joint generalized eigenspace
    bool rational() const {
        for (const auto& f : factors)
            if (!f.root) return false;
        return true;
    }
    std::vector<Rat> coordinates() const {
        std::vector<Rat> c;
        for (const auto& f : factors) c.push_back(*f.root);
        return c;
    }
};

struct SupportCycle {
    std::vector<SupportPoint> points;
    std::size_t total_length() const {
        std::size_t s = 0;
        for (const auto& p : points) s += static_cast<std::size_t>(p.length) * p.degree;
        return s;
    }
};

/// Joint generalized eigenspaces of a commuting rational tuple. Points are
/// sorted: rational points by coordinates first, clusters after.
inline SupportCycle d0_support(const std::vector<QMatrix>& mats, std::size_t r) {
    auto pieces = joint_decompose<Rat>(mats, r, [](const QPoly& p) { return coprime_factors(p); });
    SupportCycle out;
    for (auto& piece : pieces) {
        SupportPoint pt;
        pt.factors = std::move(piece.factors);
        pt.dimension = piece.basis.size();
        if (pt.rational()) {
            pt.length = static_cast<unsigned>(pt.dimension);
        } else {
            std::vector<QMatrix> restricted;
            for (const auto& m : mats) restricted.push_back(restrict_to(m, piece.basis));
            auto alg = algebra_closure(restricted, pt.dimension);
            auto rad = trace_radical(alg);
            pt.degree = static_cast<unsigned>(alg.size() - rad.size());
            pt.length = static_cast<unsigned>(pt.dimension / pt.degree);
        }
        out.points.push_back(std::move(pt));
    }
    auto key = [](const SupportPoint& p) {
        std::vector<std::pair<int, std::string>> k;
        for (const auto& f : p.factors) k.emplace_back(f.root ? 0 : 1, f.root ? "" : f.factor.str("l"));
        return k;
    };
    std::stable_sort(out.points.begin(), out.points.end(), [&](const SupportPoint& a, const SupportPoint& b) {
        if (a.rational() != b.rational()) return a.rational();
        if (a.rational()) return a.coordinates() < b.coordinates();
        return key(a) < key(b);
    });
    return out;
}

inline SupportCycle d0_support(const DZeroPoint& p) { return d0_support(p.matrices, p.r); }

enum class Tristate { no, yes, undetermined };

inline std::string tristate_str(Tristate t) {
    switch (t) {
        case Tristate::yes: return "true";
        case Tristate::no: return "false";
        default: return "undetermined";
    }
}

struct D0Classification {
    bool chow = false;
    Tristate hilb = Tristate::no;
    bool singleton = false;
    std::size_t algebra_dim = 0;
    std::size_t radical_dim = 0;
    std::optional<std::vector<Rat>> cyclic_vector;
};

/// A vector v with A v = Q^r, searched over the standard basis and then
/// `tries` seeded random vectors.
inline std::optional<std::vector<Rat>> find_cyclic_vector(const std::vector<QMatrix>& basis, std::size_t r,
                                                          Rng& rng, int tries = 20) {
    auto cyclic = [&](const std::vector<Rat>& v) {
        SpanBuilder<Rat> s(r);
        std::size_t n = 0;
        for (const auto& a : basis)
            if (s.add(mat_vec(a, v)) && ++n == r) return true;
        return n == r;
    };
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<Rat> e(r, Rat(0));
        e[i] = Rat(1);
        if (cyclic(e)) return e;
    }
    for (int t = 0; t < tries; ++t) {
        std::vector<Rat> v(r);
        for (auto& x : v) x = rng.integer_rat(10);
        if (cyclic(v)) return v;
    }
    return std::nullopt;
}

inline D0Classification d0_classify(const DZeroPoint& p, std::uint64_t seed = 0) {
    D0Classification c;
    auto alg = algebra_closure(p.matrices, p.r);
    auto rad = trace_radical(alg);
    c.algebra_dim = alg.size();
    c.radical_dim = rad.size();
    c.chow = rad.empty();
    if (alg.size() == p.r) {
        Rng rng(seed);
        c.cyclic_vector = find_cyclic_vector(alg, p.r, rng);
        c.hilb = c.cyclic_vector ? Tristate::yes : Tristate::undetermined;
    }
    auto support = d0_support(p);
    c.singleton = support.points.size() == 1 && support.points[0].degree == 1;
    return c;
}

struct D0IsoResult {
    bool isomorphic = false;
    bool certified = false;
    std::string reason;
    std::optional<QMatrix> witness;
};

namespace detail {

/// Products of generators along random index words of length 1..3, plus
/// random linear combinations; the same sequence is applied to both tuples.
inline std::vector<std::pair<std::vector<std::size_t>, std::vector<Rat>>> random_words(std::size_t k, Rng& rng,
                                                                                       int count) {
    std::vector<std::pair<std::vector<std::size_t>, std::vector<Rat>>> out;
    for (int i = 0; i < count; ++i) {
        std::vector<std::size_t> word(static_cast<std::size_t>(rng.integer(1, 3)));
        for (auto& w : word) w = static_cast<std::size_t>(rng.integer(0, static_cast<long>(k) - 1));
        std::vector<Rat> comb(k);
        for (auto& c : comb) c = rng.integer_rat(3);
        out.emplace_back(std::move(word), std::move(comb));
    }
    return out;
}

inline QMatrix eval_word(const std::vector<QMatrix>& m, const std::vector<std::size_t>& word,
                         const std::vector<Rat>& comb) {
    QMatrix p = QMatrix::identity(m.front().rows());
    for (auto w : word) p = p * m[w];
    for (std::size_t i = 0; i < m.size(); ++i) p += m[i].scaled(comb[i]);
    return p;
}

}  // namespace detail

/// Whether S a_i = b_i S has an invertible solution S.
inline D0IsoResult d0_iso(const DZeroPoint& a, const DZeroPoint& b, std::uint64_t seed = 0) {
    if (a.r != b.r) throw std::invalid_argument("rank mismatch");
    if (a.matrices.size() != b.matrices.size()) throw std::invalid_argument("chart dimension mismatch");
    std::size_t r = a.r, k = a.matrices.size();
    D0IsoResult res;
    for (std::size_t i = 0; i < k; ++i) {
        if (char_poly(a.matrices[i]) != char_poly(b.matrices[i]) ||
            min_poly(a.matrices[i]) != min_poly(b.matrices[i])) {
            res.certified = true;
            res.reason = "invariant mismatch on generator " + std::to_string(i);
            return res;
        }
    }
    Rng rng(seed);
    for (const auto& [word, comb] : detail::random_words(k, rng, 10)) {
        if (char_poly(detail::eval_word(a.matrices, word, comb)) != char_poly(detail::eval_word(b.matrices, word, comb))) {
            res.certified = true;
            res.reason = "invariant mismatch on a random word";
            return res;
        }
    }
    // Unknown S in row-major order; row (i, p, q) encodes (S a_i - b_i S)_{pq}.
    std::size_t n = r * r;
    QMatrix sys(k * n, n);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& ai = a.matrices[i];
        const auto& bi = b.matrices[i];
        for (std::size_t p = 0; p < r; ++p)
            for (std::size_t q = 0; q < r; ++q) {
                std::size_t row = i * n + p * r + q;
                for (std::size_t l = 0; l < r; ++l) {
                    sys(row, p * r + l) += ai(l, q);
                    sys(row, l * r + q) -= bi(p, l);
                }
            }
    }
    auto ker = kernel(sys);
    if (ker.empty()) {
        res.certified = true;
        res.reason = "intertwiner space is zero";
        return res;
    }
    auto to_matrix = [&](const std::vector<Rat>& coef) {
        std::vector<Rat> e(n, Rat(0));
        for (std::size_t j = 0; j < ker.size(); ++j)
            if (!coef[j].is_zero())
                for (std::size_t l = 0; l < n; ++l) e[l] += coef[j] * ker[j][l];
        return QMatrix(r, r, std::move(e));
    };
    auto accept = [&](const QMatrix& s) {
        if (determinant(s).is_zero()) return false;
        for (std::size_t i = 0; i < k; ++i)
            if (s * a.matrices[i] != b.matrices[i] * s) return false;
        res.isomorphic = res.certified = true;
        res.witness = s;
        res.reason = "invertible intertwiner found";
        return true;
    };
    std::size_t d = ker.size();
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Rat> c(d, Rat(0));
        c[j] = Rat(1);
        if (accept(to_matrix(c))) return res;
    }
    std::size_t tries = 50 + (d + 1) * (d + 1);
    for (std::size_t t = 0; t < tries; ++t) {
        std::vector<Rat> c(d);
        for (auto& x : c) x = rng.integer_rat(t < 50 ? 5 : 100);
        if (accept(to_matrix(c))) return res;
    }
    res.certified = true;
    res.reason = "determinant vanishes at every sampled intertwiner";
    return res;
}

}  // namespace azumaya
