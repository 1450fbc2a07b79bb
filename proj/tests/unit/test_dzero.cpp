#include "azumaya/model/dzero.hpp"

#include <gtest/gtest.h>

using namespace azumaya;

namespace {

QMatrix m2(long a, long b, long c, long d) { return QMatrix(2, 2, {Rat(a), Rat(b), Rat(c), Rat(d)}); }
QMatrix diag(std::vector<long> d) {
    std::vector<Rat> v(d.begin(), d.end());
    return QMatrix::diagonal(v);
}
DZeroPoint pt(std::vector<QMatrix> m) { return DZeroPoint{m.front().rows(), std::move(m)}; }

QMatrix random_matrix(Rng& rng, std::size_t n, long bound) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.integer_rat(bound);
    return m;
}

QMatrix random_invertible(Rng& rng, std::size_t n) {
    for (;;) {
        auto s = random_matrix(rng, n, 3);
        if (!determinant(s).is_zero()) return s;
    }
}

// A commuting tuple: polynomials in one upper triangular matrix with
// deliberately repeated eigenvalues, conjugated by a random matrix.
DZeroPoint random_point(Rng& rng, std::size_t r, std::size_t k) {
    QMatrix base(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        base(i, i) = Rat(rng.integer(0, 2));
        for (std::size_t j = i + 1; j < r; ++j) base(i, j) = Rat(rng.integer(0, 1));
    }
    auto s = random_invertible(rng, r);
    auto si = *inverse(s);
    DZeroPoint p{r, {}};
    for (std::size_t i = 0; i < k; ++i) {
        QPoly q(std::vector<Rat>{rng.integer_rat(2), rng.integer_rat(2), rng.integer_rat(1)});
        p.matrices.push_back(s * poly_at_matrix(q, base) * si);
    }
    return p;
}

DZeroPoint conjugate(const DZeroPoint& p, const QMatrix& s) {
    auto si = *inverse(s);
    DZeroPoint q{p.r, {}};
    for (const auto& m : p.matrices) q.matrices.push_back(s * m * si);
    return q;
}

}  // namespace

TEST(D0Validate, Examples) {
    EXPECT_TRUE(d0_validate(pt({diag({1, 2}), diag({3, 4})})).valid);
    auto bad = d0_validate(pt({m2(0, 1, 0, 0), m2(0, 0, 1, 0)}));
    EXPECT_FALSE(bad.valid);
    ASSERT_EQ(bad.failing_pairs.size(), 1u);
    EXPECT_EQ(bad.failing_pairs[0], std::make_pair(std::size_t{0}, std::size_t{1}));
    EXPECT_TRUE(d0_validate(pt({QMatrix::identity(2)})).valid);
}

TEST(D0Validate, ShapeMismatchThrows) {
    DZeroPoint p{2, {QMatrix::identity(2), QMatrix::identity(3)}};
    EXPECT_THROW(d0_validate(p), ValidationError);
}

TEST(D0Support, SimultaneousDiagonal) {
    auto s = d0_support(pt({diag({1, 1, 2}), diag({3, 4, 5})}));
    ASSERT_EQ(s.points.size(), 3u);
    std::vector<std::vector<Rat>> want{{Rat(1), Rat(3)}, {Rat(1), Rat(4)}, {Rat(2), Rat(5)}};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(s.points[i].coordinates(), want[i]);
        EXPECT_EQ(s.points[i].length, 1u);
    }
}

TEST(D0Support, JordanBlock) {
    auto s = d0_support(pt({m2(0, 1, 0, 0)}));
    ASSERT_EQ(s.points.size(), 1u);
    EXPECT_EQ(s.points[0].coordinates(), std::vector<Rat>{Rat(0)});
    EXPECT_EQ(s.points[0].length, 2u);
}

TEST(D0Support, IrreducibleCluster) {
    auto s = d0_support(pt({m2(0, 2, 1, 0)}));
    ASSERT_EQ(s.points.size(), 1u);
    const auto& p = s.points[0];
    EXPECT_FALSE(p.rational());
    EXPECT_EQ(p.factors[0].factor.str("l"), "l^2 - 2");
    EXPECT_EQ(p.degree, 2u);
    EXPECT_EQ(p.length, 1u);
    EXPECT_EQ(s.total_length(), 2u);
}

TEST(D0Support, ClusterWithMultiplicity) {
    // Companion block of l^2 - 2 doubled into a 4x4 nonderogatory matrix.
    QMatrix c(4, 4);
    c(0, 1) = Rat(2);
    c(1, 0) = Rat(1);
    c(2, 3) = Rat(2);
    c(3, 2) = Rat(1);
    c(0, 2) = Rat(1);
    auto s = d0_support(pt({c}));
    ASSERT_EQ(s.points.size(), 1u);
    EXPECT_EQ(s.points[0].degree, 2u);
    EXPECT_EQ(s.points[0].length, 2u);
}

TEST(D0Classify, Examples) {
    auto a = d0_classify(pt({diag({1, 2})}));
    EXPECT_TRUE(a.chow);
    EXPECT_EQ(a.hilb, Tristate::yes);
    EXPECT_FALSE(a.singleton);
    auto b = d0_classify(pt({m2(0, 1, 0, 0)}));
    EXPECT_FALSE(b.chow);
    EXPECT_EQ(b.hilb, Tristate::yes);
    EXPECT_TRUE(b.singleton);
    auto c = d0_classify(pt({QMatrix(2, 2)}));
    EXPECT_TRUE(c.chow);
    EXPECT_EQ(c.hilb, Tristate::no);
    EXPECT_TRUE(c.singleton);
}

TEST(D0Classify, ClusterIsNotSingleton) {
    auto c = d0_classify(pt({m2(0, 2, 1, 0)}));
    EXPECT_TRUE(c.chow);
    EXPECT_FALSE(c.singleton);
}

TEST(D0Properties, ConjugationInvarianceAndLength) {
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t r = 2 + static_cast<std::size_t>(trial % 3);
        auto p = random_point(rng, r, 1 + static_cast<std::size_t>(trial % 2));
        auto q = conjugate(p, random_invertible(rng, r));
        auto sp = d0_support(p), sq = d0_support(q);
        EXPECT_EQ(sp.total_length(), r);
        ASSERT_EQ(sp.points.size(), sq.points.size());
        for (std::size_t i = 0; i < sp.points.size(); ++i) {
            EXPECT_EQ(sp.points[i].length, sq.points[i].length);
            if (sp.points[i].rational()) {
                EXPECT_EQ(sp.points[i].coordinates(), sq.points[i].coordinates());
            }
        }
        auto cp = d0_classify(p), cq = d0_classify(q);
        EXPECT_EQ(cp.chow, cq.chow);
        EXPECT_EQ(cp.hilb, cq.hilb);
        EXPECT_EQ(cp.singleton, cq.singleton);
        if (cp.hilb == Tristate::yes) {
            EXPECT_EQ(cp.algebra_dim, r);
        }
        if (cp.singleton && cp.chow) {
            for (const auto& m : p.matrices) EXPECT_TRUE(m.is_scalar());
        }
    }
}

TEST(D0Iso, Examples) {
    auto t = d0_iso(pt({diag({1, 2})}), pt({m2(1, 1, 0, 2)}));
    EXPECT_TRUE(t.isomorphic);
    ASSERT_TRUE(t.witness);
    auto f = d0_iso(pt({QMatrix(2, 2)}), pt({m2(0, 1, 0, 0)}));
    EXPECT_FALSE(f.isomorphic);
    EXPECT_TRUE(f.certified);
}

TEST(D0Iso, ConjugatesAreIsomorphic) {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t r = 2 + static_cast<std::size_t>(trial % 3);
        auto p = random_point(rng, r, 2);
        auto s0 = random_invertible(rng, r);
        auto q = conjugate(p, s0);
        auto res = d0_iso(p, q);
        ASSERT_TRUE(res.isomorphic);
        const auto& s = *res.witness;
        EXPECT_FALSE(determinant(s).is_zero());
        for (std::size_t i = 0; i < p.matrices.size(); ++i) EXPECT_EQ(s * p.matrices[i], q.matrices[i] * s);
        EXPECT_TRUE(d0_iso(q, p).isomorphic);
        EXPECT_TRUE(d0_iso(p, p).isomorphic);
    }
}

TEST(D0Iso, SameCharPolyDifferentJordanType) {
    // (l)^3 with Jordan types (2,1) and (3).
    QMatrix a(3, 3), b(3, 3);
    a(0, 1) = Rat(1);
    b(0, 1) = Rat(1);
    b(1, 2) = Rat(1);
    EXPECT_FALSE(d0_iso(pt({a}), pt({b})).isomorphic);
}

TEST(D0Iso, MismatchThrows) {
    EXPECT_THROW(d0_iso(pt({diag({1, 2})}), pt({diag({1, 2, 3})})), std::invalid_argument);
}
