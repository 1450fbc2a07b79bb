#include "azumaya/model/bounds.hpp"
#include "azumaya/model/family.hpp"

#include <gtest/gtest.h>

using namespace azumaya;

namespace {

const RatFunc T = RatFunc::var();
RatFunc c(long v) { return RatFunc(Rat(v)); }
Place fin(long v) { return Place::finite(Rat(v)); }

KMatrix km(std::size_t n, std::vector<RatFunc> e) { return KMatrix(n, n, std::move(e)); }
KMatrix kdiag(std::vector<RatFunc> d) { return KMatrix::diagonal(d); }

AzMorphism on_line(std::size_t r, std::vector<KMatrix> tuple) {
    return AzMorphism{projective_line(), r, tuple.size(), {std::move(tuple)}, 0};
}

AzMorphism chain(KMatrix a, KMatrix b) {
    auto curve = build_curve(CurveSpec{{{"A", 1}, {"B", 1}}, {Node{0, fin(0), 1, fin(0)}}});
    return AzMorphism{curve, a.rows(), 1, {{std::move(a)}, {std::move(b)}}, 0};
}

std::vector<Rat> pt(std::vector<long> v) { return std::vector<Rat>(v.begin(), v.end()); }

QMatrix random_invertible(Rng& rng, std::size_t n) {
    for (;;) {
        QMatrix s(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s(i, j) = rng.integer_rat(2);
        if (!determinant(s).is_zero()) return s;
    }
}

AzMorphism conjugate(const AzMorphism& phi, const QMatrix& s) {
    auto ks = s.map<RatFunc>([](const Rat& x) { return RatFunc(x); });
    auto ki = inverse(s)->map<RatFunc>([](const Rat& x) { return RatFunc(x); });
    AzMorphism out = phi;
    for (auto& t : out.tuples)
        for (auto& m : t) m = ks * m * ki;
    return out;
}

RatFunc random_param(Rng& rng) {
    std::vector<Rat> num;
    int d = static_cast<int>(rng.integer(0, 3));
    for (int i = 0; i <= d; ++i) num.push_back(rng.integer_rat(3));
    QPoly den(Rat(1));
    if (rng.integer(0, 3) == 0) den = QPoly(std::vector<Rat>{Rat(rng.integer(1, 3)), Rat(1)});
    return RatFunc(QPoly(num), den);
}

}  // namespace

TEST(MorphismValidate, CommutingSingleMatrix) {
    auto v = morphism_validate(on_line(2, {km(2, {c(0), T, c(1), c(0)})}));
    EXPECT_TRUE(v.valid);
}

TEST(MorphismValidate, NodeFibersDiffer) {
    auto v = morphism_validate(chain(kdiag({T, c(2) * T}), kdiag({T, c(1) + T})));
    EXPECT_FALSE(v.valid);
    ASSERT_EQ(v.nodes.size(), 1u);
    EXPECT_FALSE(v.nodes[0].agree);
    EXPECT_EQ(v.nodes[0].side_a, (std::vector<std::vector<Rat>>{pt({1, 0})}));
    EXPECT_EQ(v.nodes[0].side_b, (std::vector<std::vector<Rat>>{pt({1, 0}), pt({1, 1})}));
    bool witnessed = false;
    for (const auto& i : v.issues) witnessed = witnessed || (i.kind == "node" && i.node == 0u);
    EXPECT_TRUE(witnessed);
}

TEST(MorphismValidate, NodeFibersAgree) {
    auto v = morphism_validate(chain(kdiag({T, c(2) * T}), kdiag({T, c(2) * T * T})));
    EXPECT_TRUE(v.valid);
}

TEST(MorphismValidate, NonCommutingPairWitness) {
    auto v = morphism_validate(on_line(2, {km(2, {c(0), c(1), c(0), c(0)}), km(2, {c(0), c(0), c(1), c(0)})}));
    EXPECT_FALSE(v.valid);
    ASSERT_FALSE(v.issues.empty());
    EXPECT_EQ(v.issues[0].kind, "commutation");
    EXPECT_EQ(*v.issues[0].pair, std::make_pair(std::size_t{1}, std::size_t{2}));
}

TEST(MorphismValidate, ImproperFiberReported) {
    // Nilpotent with a pole at infinity: no chart contains the fiber there.
    auto v = morphism_validate(on_line(2, {km(2, {c(0), c(0), T, c(0)})}));
    EXPECT_FALSE(v.valid);
    EXPECT_EQ(v.issues.at(0).kind, "properness");
    EXPECT_FALSE(v.warnings.empty());
}

TEST(FiberAt, Examples) {
    auto phi = on_line(2, {km(2, {c(0), T, c(1), c(0)})});
    auto f4 = fiber_at(phi, 0, fin(4));
    ASSERT_EQ(f4.points.size(), 2u);
    EXPECT_EQ(*f4.points[0].coords, pt({1, -2}));
    EXPECT_EQ(*f4.points[1].coords, pt({1, 2}));
    EXPECT_EQ(f4.points[0].length, 1u);
    auto f0 = fiber_at(phi, 0, fin(0));
    ASSERT_EQ(f0.points.size(), 1u);
    EXPECT_EQ(*f0.points[0].coords, pt({1, 0}));
    EXPECT_EQ(f0.points[0].length, 2u);
    auto inf = fiber_at(on_line(2, {kdiag({T, T})}), 0, Place::infinity());
    ASSERT_EQ(inf.points.size(), 1u);
    EXPECT_EQ(*inf.points[0].coords, pt({0, 1}));
    EXPECT_EQ(inf.points[0].length, 2u);
    EXPECT_EQ(inf.chart, "chart 1");
}

TEST(FiberAt, GenericChartNeededAtInfinity) {
    // diag(t, 0): neither chart 0 nor chart 1 is regular at infinity.
    auto f = fiber_at(on_line(2, {kdiag({T, c(0)})}), 0, Place::infinity());
    EXPECT_EQ(f.chart.rfind("generic", 0), 0u);
    ASSERT_EQ(f.points.size(), 2u);
    EXPECT_EQ(*f.points[0].coords, pt({0, 1}));
    EXPECT_EQ(*f.points[1].coords, pt({1, 0}));
}

TEST(FiberAt, ImproperThrows) {
    auto phi = on_line(2, {km(2, {c(0), c(0), T, c(0)})});
    try {
        fiber_at(phi, 0, Place::infinity());
        FAIL();
    } catch (const FiberError& e) {
        EXPECT_STREQ(e.what(), "fiber not proper at inf");
    }
}

TEST(BranchModel, TwoExactBranches) {
    auto b = branch_model(on_line(2, {kdiag({T, T * T})}));
    ASSERT_EQ(b.branches.size(), 2u);
    std::map<std::string, int> degs;
    for (const auto& br : b.branches) {
        EXPECT_EQ(br.mode, BranchMode::exact);
        EXPECT_EQ(br.length, 1u);
        EXPECT_TRUE(br.confirmed);
        degs[br.param[0].str()] = *br.map_degree;
    }
    EXPECT_EQ(degs["t"], 1);
    EXPECT_EQ(degs["t^2"], 2);
}

TEST(BranchModel, JordanBlockHasLengthTwo) {
    auto b = branch_model(on_line(2, {km(2, {T, c(1), c(0), T})}));
    ASSERT_EQ(b.branches.size(), 1u);
    EXPECT_EQ(b.branches[0].param[0], T);
    EXPECT_EQ(b.branches[0].length, 2u);
    EXPECT_EQ(*b.branches[0].map_degree, 1);
}

TEST(BranchModel, ClusterBranch) {
    auto b = branch_model(on_line(2, {km(2, {c(0), T, c(1), c(0)})}));
    ASSERT_EQ(b.branches.size(), 1u);
    const auto& br = b.branches[0];
    EXPECT_EQ(br.mode, BranchMode::cluster);
    EXPECT_EQ(br.cluster.str("l"), "l^2 - t");
    EXPECT_EQ(br.length, 1u);
    EXPECT_EQ(br.sheets, 2u);
    EXPECT_EQ(*br.map_degree, 1);
    EXPECT_TRUE(br.confirmed);
}

TEST(BranchModel, CubicResidualIsSampled) {
    KMatrix m = km(3, {c(0), c(0), T, c(1), c(0), c(0), c(0), c(1), c(0)});
    auto b = branch_model(on_line(3, {m}));
    ASSERT_EQ(b.branches.size(), 1u);
    EXPECT_EQ(b.branches[0].mode, BranchMode::sampled);
    EXPECT_EQ(b.branches[0].sheets, 3u);
    EXPECT_EQ(b.branches[0].length, 1u);
    EXPECT_GE(b.branches[0].samples.size(), 5u);
    EXPECT_THROW(image_degree(b), std::domain_error);
}

TEST(FromBranches, Examples) {
    auto p1 = projective_line();
    auto split = from_branches(p1, {{{{T}, 1}, {{T * T}, 1}}}, 1);
    EXPECT_EQ(split.tuples[0][0], kdiag({T, T * T}));
    auto jordan = from_branches(p1, {{{{T}, 2, NilpotencyStyle::jordan}}}, 1);
    EXPECT_EQ(jordan.tuples[0][0], km(2, {T, c(1), c(0), T}));
    auto doubled = from_branches(p1, {{{{T}, 2, NilpotencyStyle::split}}}, 1);
    EXPECT_EQ(doubled.tuples[0][0], kdiag({T, T}));
    auto b = branch_model(doubled);
    ASSERT_EQ(b.branches.size(), 1u);
    EXPECT_EQ(b.branches[0].length, 2u);
}

TEST(FromBranches, LengthMismatch) {
    auto curve = build_curve(CurveSpec{{{"A", 1}, {"B", 1}}, {Node{0, fin(0), 1, fin(0)}}});
    EXPECT_THROW(from_branches(curve, {{{{T}, 1}}, {{{T}, 2}}}, 1), std::invalid_argument);
}

TEST(ImageDegree, Examples) {
    EXPECT_EQ(image_degree(branch_model(on_line(1, {kdiag({T * T})}))), 2);
    EXPECT_EQ(image_degree(branch_model(on_line(2, {kdiag({c(1), c(-1)})}))), 0);
    EXPECT_EQ(image_degree(branch_model(on_line(2, {km(2, {c(0), T, c(1), c(0)})}))), 1);
}

TEST(CombType, Examples) {
    EXPECT_EQ(comb_type(on_line(2, {kdiag({T, T * T})})), (CombType{0, 2, 2, 3}));
    EXPECT_EQ(comb_type(on_line(2, {km(2, {c(0), T, c(1), c(0)})})), (CombType{0, 2, 2, 1}));
    auto cyc = build_curve(CurveSpec{{{"A", 1}, {"B", 1}}, {Node{0, fin(1), 1, fin(1)}, Node{0, fin(2), 1, fin(2)}}});
    AzMorphism phi{cyc, 2, 1, {{kdiag({T, T})}, {kdiag({T, T})}}, 0};
    EXPECT_TRUE(morphism_validate(phi).valid);
    EXPECT_EQ(comb_type(phi), (CombType{1, 2, 0, 4}));
    EXPECT_EQ(hilbert_poly(phi, Polarization::of(cyc)).str(), "8m + 0");
}

TEST(HilbertPoly, Examples) {
    auto p1 = Polarization::of(projective_line());
    EXPECT_EQ(hilbert_poly(CombType{0, 2, 2, 3}, p1).str(), "5m + 2");
    EXPECT_EQ(hilbert_poly(CombType{0, 1, 1, 0}, p1).str(), "m + 1");
    auto phi = on_line(2, {kdiag({T, T * T})});
    auto h = hilbert_poly(phi, p1);
    EXPECT_EQ(h(0), euler_char(phi.curve, 2, 0));
    EXPECT_EQ(h.constant, euler_char(phi.curve, 2, 0));
}

TEST(Surrogate, Examples) {
    auto s = surrogate_summary(on_line(2, {kdiag({T, T * T})})).components[0];
    EXPECT_EQ(s.generic_degree, 2u);
    std::vector<std::string> where;
    for (const auto& d : s.drops) {
        where.push_back(d.place.str());
        EXPECT_EQ(d.evaluated_dim, 1u);
        EXPECT_TRUE(d.nilpotent);
    }
    // The two graphs also meet over infinity, at (0:1).
    EXPECT_EQ(where, (std::vector<std::string>{"t=0", "t=1", "inf"}));

    auto scalar = surrogate_summary(on_line(2, {kdiag({T, T})})).components[0];
    EXPECT_EQ(scalar.generic_degree, 1u);
    EXPECT_TRUE(scalar.drops.empty());

    auto jordan = surrogate_summary(on_line(2, {km(2, {T, c(1), c(0), T})})).components[0];
    EXPECT_EQ(jordan.generic_degree, 2u);
    // At infinity the chart coordinate is u - u^2 N, so the N direction evaluates to zero.
    ASSERT_EQ(jordan.drops.size(), 1u);
    EXPECT_TRUE(jordan.drops[0].place.is_infinity());
    EXPECT_EQ(jordan.drops[0].lost, 1u);
    EXPECT_TRUE(jordan.drops[0].nilpotent);
}

TEST(Surrogate, IrrationalDropPlace) {
    auto s = surrogate_summary(on_line(2, {kdiag({T * T, c(2)})})).components[0];
    bool found = false;
    for (const auto& d : s.drops)
        if (d.place.kind() == Place::Kind::irreducible) {
            EXPECT_EQ(d.place.polynomial().str("t"), "t^2 - 2");
            EXPECT_TRUE(d.nilpotent);
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Surrogate, SingleGeneratorMatchesLattice) {
    Rng rng(77);
    std::size_t compared = 0;
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t r = static_cast<std::size_t>(rng.integer(2, 3));
        KMatrix m(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i; j < r; ++j) {
                QPoly num(std::vector<Rat>{rng.integer_rat(2), rng.integer_rat(2), rng.integer_rat(1)});
                m(i, j) = RatFunc(num, QPoly::linear(Rat(rng.integer(-1, 1))));
            }
        QMatrix s = random_invertible(rng, r);
        auto phi = conjugate(on_line(r, {m}), s);
        auto sur = surrogate_summary(phi).components[0];
        auto atlas = chart_atlas(phi.tuples[0], r);
        for (const auto& d : sur.drops) {
            if (!d.place.is_rational()) continue;
            const Chart* ch = regular_chart(atlas, d.place);
            ASSERT_NE(ch, nullptr);
            auto lattice = local_algebra(ch->coords, r, d.place);
            auto full = detail::measure_drop<Rat>(lattice, r, d.place,
                                                  [&](const RatFunc& f) { return value_at(f, d.place); });
            ASSERT_TRUE(full.has_value()) << d.place.str();
            EXPECT_EQ(full->lost, d.lost);
            EXPECT_EQ(full->evaluated_dim, d.evaluated_dim);
            EXPECT_EQ(full->nilpotent, d.nilpotent);
            ++compared;
        }
    }
    EXPECT_GE(compared, 10u);
}

TEST(SupportBounds, Examples) {
    auto p1 = Polarization::of(projective_line());
    auto phi = on_line(2, {kdiag({T, T * T})});
    auto b = support_bounds_check(phi, branch_model(phi), p1, 5, 10);
    EXPECT_EQ(b.alpha, 5);
    EXPECT_EQ(b.chi, -1);  // meets at t = 0, 1 and infinity
    EXPECT_TRUE(b.inequalities_hold);
    EXPECT_EQ(b.rows.size(), 5u);

    auto id = on_line(2, {kdiag({T, T})});
    auto bi = support_bounds_check(id, branch_model(id), p1, 5, 10);
    EXPECT_EQ(bi.alpha, 2);
    EXPECT_EQ(bi.chi, 1);
    for (const auto& row : bi.rows) EXPECT_EQ(row.total, Rat((row.m + 1) * (row.m + 1)));
    EXPECT_TRUE(bi.inequalities_hold);

    auto zero = on_line(1, {kdiag({c(0)})});
    auto bz = support_bounds_check(zero, branch_model(zero), p1, 5, 10);
    EXPECT_EQ(bz.alpha, 1);
    EXPECT_EQ(bz.chi, 1);
    EXPECT_TRUE(bz.inequalities_hold);
    EXPECT_TRUE(bz.genus_in_interval);
}

TEST(SupportBounds, TangencyRejected) {
    auto phi = on_line(2, {kdiag({T * T, c(0)})});
    auto p1 = Polarization::of(projective_line());
    EXPECT_THROW(support_bounds_check(phi, branch_model(phi), p1, 5, 10), TangencyError);
}

TEST(FamilyScan, MergingEigenvalues) {
    std::vector<FamilySample> fam;
    for (auto s : {Rat(1), Rat(1, 2), Rat(0)}) {
        fam.push_back({s, on_line(2, {km(2, {c(0), c(1), RatFunc(s * s), c(0)})}), ""});
    }
    auto scan = family_scan(fam);
    EXPECT_TRUE(scan.constant);
    for (const auto& r : scan.samples) EXPECT_EQ(*r.type, (CombType{0, 2, 2, 0}));
    auto svg = emit_svg_scan(scan);
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
    EXPECT_NE(svg.find("<circle"), std::string::npos);
}

TEST(FamilyScan, SurrogateDropsWhileTypeHolds) {
    std::vector<FamilySample> fam;
    for (auto s : {Rat(1), Rat(0)}) fam.push_back({s, on_line(2, {km(2, {T, RatFunc(s), c(0), T})}), ""});
    auto scan = family_scan(fam);
    EXPECT_TRUE(scan.constant);
    EXPECT_EQ(*scan.samples[0].type, (CombType{0, 2, 2, 2}));
    EXPECT_EQ(scan.samples[0].surrogate_degrees[0], 2u);
    EXPECT_EQ(scan.samples[1].surrogate_degrees[0], 1u);
}

TEST(FamilyScan, NonFlatLimitJumps) {
    std::vector<FamilySample> fam;
    for (auto s : {Rat(1), Rat(0)}) fam.push_back({s, on_line(2, {km(2, {c(0), RatFunc(s), T, c(0)})}), ""});
    auto scan = family_scan(fam, default_grid(), 2);
    EXPECT_FALSE(scan.constant);
    EXPECT_EQ(*scan.samples[0].type, (CombType{0, 2, 2, 1}));
    EXPECT_EQ(*scan.samples[1].type, (CombType{0, 2, 2, 0}));
    ASSERT_EQ(scan.jumps.size(), 1u);
    EXPECT_EQ(scan.jumps[0], Rat(0));
}

TEST(FamilyScan, EmptyThrowsAndEmptySvg) {
    EXPECT_THROW(family_scan({}), std::invalid_argument);
    FamilyScan empty;
    EXPECT_NE(emit_svg_scan(empty).find("no data"), std::string::npos);
}

TEST(FamilyScan, ThreadCountDoesNotChangeResults) {
    std::vector<FamilySample> fam;
    for (long i = 0; i < 6; ++i) {
        Rat s(i, 2);
        fam.push_back({s, on_line(2, {km(2, {T, RatFunc(s), c(0), T * T})}), ""});
    }
    auto a = family_scan(fam, default_grid(), 1), b = family_scan(fam, default_grid(), 4);
    EXPECT_EQ(emit_svg_scan(a), emit_svg_scan(b));
    for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(*a.samples[i].type, *b.samples[i].type);
}

TEST(MorphismProperties, RoundTripFiberConservationAndConjugation) {
    Rng rng(31);
    auto p1 = projective_line();
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<BranchSpec> specs;
        std::set<std::string> keys;
        int count = static_cast<int>(rng.integer(1, 3));
        for (int i = 0; i < count; ++i) {
            BranchSpec b{{random_param(rng)}, static_cast<unsigned>(rng.integer(1, 2)),
                         rng.integer(0, 1) ? NilpotencyStyle::jordan : NilpotencyStyle::split};
            if (!keys.insert(param_key(b.param)).second) continue;
            specs.push_back(b);
        }
        auto phi = from_branches(p1, {specs}, 1);
        auto model = branch_model(phi);
        ASSERT_EQ(model.branches.size(), specs.size());
        for (const auto& s : specs) {
            bool found = false;
            for (const auto& b : model.branches)
                if (b.param == s.param) {
                    EXPECT_EQ(b.length, s.length);
                    EXPECT_EQ(*b.map_degree, homogenize(s.param).degree);
                    found = true;
                }
            EXPECT_TRUE(found);
        }
        for (long x = -3; x <= 3; ++x) {
            auto p = Place::finite(Rat(x));
            if (!regular_at(phi.tuples[0], p)) continue;
            EXPECT_EQ(fiber_at(phi, 0, p).total_length(), phi.r);
        }
        auto conj = conjugate(phi, random_invertible(rng, phi.r));
        EXPECT_EQ(comb_type(conj), comb_type(phi));
        auto sur = surrogate_summary(phi).components[0];
        EXPECT_LE(sur.generic_degree, phi.r * phi.r);
        for (const auto& d : sur.drops) EXPECT_TRUE(d.nilpotent);
    }
}
