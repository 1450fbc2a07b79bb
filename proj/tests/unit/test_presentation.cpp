#include "azumaya/model/dzero.hpp"
#include "azumaya/model/presentation.hpp"

#include <gtest/gtest.h>

using namespace azumaya;

namespace {

const RatFunc T = RatFunc::var();
RatFunc c(long v) { return RatFunc(Rat(v)); }
Place fin(long v) { return Place::finite(Rat(v)); }

KMatrix km(std::size_t n, std::vector<RatFunc> e) { return KMatrix(n, n, std::move(e)); }
KMatrix kdiag(std::vector<RatFunc> d) { return KMatrix::diagonal(d); }
QMatrix qdiag(std::vector<long> d) { return QMatrix::diagonal(std::vector<Rat>(d.begin(), d.end())); }

AzMorphism on_line(std::size_t r, std::vector<KMatrix> tuple) {
    return AzMorphism{projective_line(), r, tuple.size(), {std::move(tuple)}, 0};
}

PrestableCurve two_lines() { return build_curve(CurveSpec{{{"A", 1}, {"B", 1}}, {Node{0, fin(0), 1, fin(0)}}}); }

PseudoSection section(std::vector<QMatrix> e) {
    PseudoSection s{e, {}};
    for (const auto& m : e) s.ranks.push_back(rank(m));
    return s;
}

/// k = 1, r = 1 presentation with m_(0),1 = f and m_(1),0 = 1/f.
ChartPresentation rank_one(const RatFunc& f) {
    PseudoSection one = section({QMatrix::identity(1)});
    return ChartPresentation{projective_line(), 1, 1, {one, one}, {{{km(1, {c(1)}), km(1, {f})}, {km(1, {f.inverse()}), km(1, {c(1)})}}}};
}

}  // namespace

TEST(Admissible, Examples) {
    auto curve = two_lines();
    auto id = QMatrix::identity(2);
    auto r1 = check_admissible({section({id, id})}, curve, 2);
    EXPECT_TRUE(r1.admissible);
    EXPECT_EQ(r1.orders.at(0).relation, "equal");

    auto r2 = check_admissible({section({qdiag({1, 0}), id})}, curve, 2);
    EXPECT_TRUE(r2.admissible);
    EXPECT_EQ(r2.orders.at(0).relation, "a<=b");

    auto r3 = check_admissible({section({qdiag({1, 0}), qdiag({0, 1})})}, curve, 2);
    EXPECT_FALSE(r3.admissible);
    ASSERT_EQ(r3.issues.size(), 1u);
    EXPECT_EQ(r3.issues[0].condition, "subordinate");
    EXPECT_EQ(*r3.issues[0].node, 0u);
}

TEST(Admissible, NonCommutingAndBadRank) {
    auto curve = two_lines();
    QMatrix p(2, 2, {Rat(1), Rat(1), Rat(0), Rat(0)});
    auto r = check_admissible({section({qdiag({1, 0}), p})}, curve, 2);
    EXPECT_FALSE(r.admissible);
    EXPECT_EQ(r.issues.at(0).condition, "commute");
    PseudoSection bad{{qdiag({1, 0}), qdiag({1, 0})}, {2, 1}};
    auto r2 = check_admissible({bad}, curve, 2);
    EXPECT_EQ(r2.issues.at(0).condition, "rank");
    EXPECT_THROW(check_admissible({section({qdiag({1, 0})})}, curve, 2), ValidationError);
}

TEST(Admissible, SubordinationIsPartialOrder) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 4;
        QMatrix s(n, n);
        do {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) s(i, j) = rng.integer_rat(2);
        } while (determinant(s).is_zero());
        QMatrix si = *inverse(s);
        std::vector<QMatrix> es;
        for (int e = 0; e < 3; ++e) {
            std::vector<Rat> d;
            for (std::size_t i = 0; i < n; ++i) d.push_back(Rat(rng.integer(0, 1)));
            es.push_back(s * QMatrix::diagonal(d) * si);
        }
        for (const auto& a : es) {
            EXPECT_TRUE(subordinate(a, a));
            for (const auto& b : es) {
                if (subordinate(a, b) && subordinate(b, a)) {
                    EXPECT_EQ(a, b);
                }
                for (const auto& cc : es) {
                    if (subordinate(a, b) && subordinate(b, cc)) {
                        EXPECT_TRUE(subordinate(a, cc));
                    }
                }
            }
        }
    }
}

TEST(AtlasConditions, EmbeddedStrongInputPasses) {
    auto p = embed_presentation(on_line(2, {km(2, {c(0), T, c(1), c(0)})}));
    ASSERT_TRUE(p);
    auto rep = check_atlas_conditions(*p);
    EXPECT_TRUE(rep.pass()) << rep.verdict();
    EXPECT_GT(rep.places_checked, 0u);
}

TEST(AtlasConditions, ConditionOneFails) {
    PseudoSection e = section({qdiag({1, 0})});
    KMatrix ek = lift(qdiag({1, 0}));
    ChartPresentation p{projective_line(), 2, 1, {e, e}, {{{ek, ek}, {ek, ek}}}};
    auto rep = check_atlas_conditions(p);
    EXPECT_FALSE(rep.c1.holds);
    EXPECT_EQ(rep.verdict(), "FAIL(1)");
}

TEST(AtlasConditions, RankOneLaurentPolynomialIsRegular) {
    // A = O[t + 1/t] meets O[t/(t^2 + 1)] in O_C at every place.
    auto rep = check_atlas_conditions(rank_one(T + T.inverse()));
    EXPECT_TRUE(rep.c1.holds && rep.c2.holds && rep.c3.holds);
    EXPECT_TRUE(rep.c4.holds);
}

TEST(AtlasConditions, NilpotentPoleFailsFour) {
    KMatrix n = km(2, {c(0), T.inverse(), c(0), c(0)});
    KMatrix id = KMatrix::identity(2);
    PseudoSection one = section({QMatrix::identity(2)});
    ChartPresentation p{projective_line(), 2, 1, {one, one}, {{{id, id + n}, {id - n, id}}}};
    auto rep = check_atlas_conditions(p);
    EXPECT_TRUE(rep.c1.holds && rep.c2.holds && rep.c3.holds);
    EXPECT_EQ(rep.verdict(), "FAIL(4)");
    ASSERT_EQ(rep.c4.witnesses.size(), 1u);
    EXPECT_NE(rep.c4.witnesses[0].find("t=0"), std::string::npos);
}

TEST(AtlasConditions, ShapeErrors) {
    auto p = rank_one(T);
    p.m[0][0][0] = km(1, {c(2)});
    EXPECT_THROW(check_atlas_conditions(p), ValidationError);
}

TEST(AtlasConditions, EmbeddingConsistency) {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = RatFunc(QPoly({rng.integer_rat(2), Rat(rng.integer(1, 2))}));
        auto g = RatFunc(QPoly({rng.integer_rat(2), rng.integer_rat(2), Rat(1)}));
        AzMorphism phi = on_line(2, {kdiag({f, g}), kdiag({g, f + c(1)})});
        ASSERT_TRUE(morphism_validate(phi).valid);
        auto p = embed_presentation(phi);
        if (!p) continue;
        auto rep = check_atlas_conditions(*p);
        EXPECT_TRUE(rep.commuting.holds && rep.c1.holds && rep.c2.holds && rep.c3.holds);
    }
    EXPECT_FALSE(embed_presentation(on_line(2, {kdiag({T, c(0)})})));
}

TEST(Nondegenerate, Examples) {
    auto a = check_nondegenerate(on_line(2, {kdiag({T, T * T})}));
    EXPECT_EQ(a.hyperplanes.at(1).nondegenerate, Tristate::no);
    auto b = check_nondegenerate(on_line(2, {kdiag({T + c(1), T * T})}));
    EXPECT_EQ(b.hyperplanes.at(1).nondegenerate, Tristate::yes);
    // Both branches pass through (0:1) over t = inf.
    EXPECT_EQ(b.hyperplanes.at(0).nondegenerate, Tristate::no);
    auto z = check_nondegenerate(on_line(1, {kdiag({c(0)})}));
    EXPECT_EQ(z.hyperplanes.at(1).nondegenerate, Tristate::no);
    EXPECT_EQ(z.overall, Tristate::no);
}

TEST(Nondegenerate, SampledBranchIsUndetermined) {
    KMatrix m = km(3, {c(0), c(0), T, c(1), c(0), c(0), c(0), c(1), c(0)});
    EXPECT_EQ(check_nondegenerate(on_line(3, {m})).overall, Tristate::undetermined);
}

TEST(StronglyNondegenerate, Examples) {
    auto line = on_line(1, {kdiag({T})});
    EXPECT_EQ(check_nondegenerate(line).overall, Tristate::yes);
    EXPECT_EQ(check_strongly_nondegenerate(line).strong, Tristate::yes);
    auto twist = on_line(1, {kdiag({T}), kdiag({T - c(1)})});
    EXPECT_EQ(check_strongly_nondegenerate(twist).strong, Tristate::yes);
    auto meet = on_line(1, {kdiag({T}), kdiag({T})});
    EXPECT_EQ(check_nondegenerate(meet).overall, Tristate::yes);
    auto s = check_strongly_nondegenerate(meet);
    EXPECT_EQ(s.strong, Tristate::no);
    EXPECT_NE(s.reasons.at(0).find("y_1 and y_2"), std::string::npos);
    EXPECT_EQ(check_strongly_nondegenerate(on_line(2, {kdiag({T, T * T})})).strong, Tristate::no);
}

TEST(Spectral, Examples) {
    auto a = spectral_curve(km(2, {c(0), T, c(1), c(0)}));
    EXPECT_EQ(a.str(), "l^2 - t");
    EXPECT_FALSE(a.strict);
    auto b = spectral_curve(kdiag({T, T}));
    EXPECT_EQ(b.str(), "l^2 - 2*t*l + t^2");
    EXPECT_TRUE(b.strict);
    EXPECT_EQ(b.min_poly.degree(), 1);
    auto d = spectral_curve(km(2, {c(0), T / (T + c(1)), c(1), c(0)}));
    EXPECT_EQ(d.str(), "t*l^2 + l^2 - t");
    EXPECT_EQ(d.denominator.str("t"), "t + 1");
    auto e = spectral_curve(km(1, {RatFunc(QPoly({Rat(1, 2)}), QPoly({Rat(0), Rat(3)}))}));
    EXPECT_EQ(e.str(), "6*t*l - 1");
}

TEST(Spectral, ConjugationInvarianceAndCyclicity) {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        KMatrix a(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) a(i, j) = RatFunc(QPoly({rng.integer_rat(2), rng.integer_rat(2)}));
        QMatrix s(2, 2);
        do {
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) s(i, j) = rng.integer_rat(3);
        } while (determinant(s).is_zero());
        KMatrix b = lift(s) * a * lift(*inverse(s));
        auto sa = spectral_curve(a), sb = spectral_curve(b);
        EXPECT_EQ(sa.str(), sb.str());
        EXPECT_EQ(sa.strict, sb.strict);
        if (sa.strict) continue;
        int checked = 0;
        for (long x = -10; x <= 10 && checked < 20; ++x) {
            QMatrix q(2, 2);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) q(i, j) = a(i, j)(Rat(x));
            if (min_poly(q).degree() < 2) continue;
            ++checked;
            auto cls = d0_classify(DZeroPoint{2, {q}});
            EXPECT_EQ(cls.hilb, Tristate::yes);
        }
    }
}
