#include "azumaya/model/curve.hpp"

#include <gtest/gtest.h>

using namespace azumaya;

namespace {

Node node(std::size_t a, Place pa, std::size_t b, Place pb) { return Node{a, std::move(pa), b, std::move(pb)}; }
Place fin(long x) { return Place::finite(Rat(x)); }

CurveSpec chain(std::size_t n) {
    CurveSpec s;
    for (std::size_t i = 0; i < n; ++i) s.components.push_back({"C" + std::to_string(i), 1});
    for (std::size_t i = 0; i + 1 < n; ++i) s.nodes.push_back(node(i, Place::infinity(), i + 1, fin(0)));
    return s;
}

}  // namespace

TEST(BuildCurve, ProjectiveLine) {
    auto c = build_curve(chain(1));
    EXPECT_EQ(arithmetic_genus(c), 0);
}

TEST(BuildCurve, TwoComponentChain) {
    EXPECT_EQ(arithmetic_genus(build_curve(chain(2))), 0);
}

TEST(BuildCurve, SelfNodeHasGenusOne) {
    CurveSpec s{{{"C0", 1}}, {node(0, fin(0), 0, Place::infinity())}};
    EXPECT_EQ(arithmetic_genus(build_curve(s)), 1);
}

TEST(BuildCurve, Disconnected) {
    CurveSpec s{{{"A", 1}, {"B", 1}}, {}};
    try {
        build_curve(s);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.issues().at(0), "dual graph is disconnected");
    }
}

TEST(BuildCurve, DuplicateAttachment) {
    CurveSpec s{{{"A", 1}, {"B", 1}}, {node(0, fin(0), 1, fin(0)), node(0, fin(0), 1, fin(1))}};
    EXPECT_THROW(build_curve(s), ValidationError);
    CurveSpec self{{{"A", 1}}, {node(0, fin(2), 0, fin(2))}};
    EXPECT_THROW(build_curve(self), ValidationError);
}

TEST(BuildCurve, IrrationalAttachmentRejected) {
    CurveSpec s{{{"A", 1}},
                {node(0, Place::irreducible(QPoly(std::vector<Rat>{Rat(1), Rat(0), Rat(1)})), 0, fin(0))}};
    EXPECT_THROW(build_curve(s), ValidationError);
}

TEST(ArithmeticGenus, Examples) {
    EXPECT_EQ(arithmetic_genus(build_curve(chain(3))), 0);
    auto cyc = chain(3);
    cyc.nodes.push_back(node(2, Place::infinity(), 0, fin(1)));
    EXPECT_EQ(arithmetic_genus(build_curve(cyc)), 1);
    CurveSpec two{{{"C0", 1}}, {node(0, fin(0), 0, Place::infinity()), node(0, fin(1), 0, fin(-1))}};
    auto c = build_curve(two);
    EXPECT_EQ(arithmetic_genus(c), 2);
    // chi(O) through the normalization sequence: #components - #nodes = 1 - g.
    long chi_o = static_cast<long>(c.size()) - static_cast<long>(c.nodes().size());
    EXPECT_EQ(1 - chi_o, arithmetic_genus(c));
}

TEST(ArithmeticGenus, ZeroExactlyForTrees) {
    for (std::size_t n = 1; n <= 5; ++n) {
        auto s = chain(n);
        EXPECT_EQ(arithmetic_genus(build_curve(s)), 0);
        for (std::size_t extra = 0; extra < 3; ++extra) {
            s.nodes.push_back(node(0, fin(10 + static_cast<long>(extra)), n - 1, fin(20 + static_cast<long>(extra))));
            int g = arithmetic_genus(build_curve(s));
            EXPECT_EQ(g, static_cast<int>(extra) + 1);
            EXPECT_GT(g, 0);
        }
    }
}

TEST(EulerChar, Examples) {
    auto p1 = build_curve(chain(1));
    EXPECT_EQ(euler_char(p1, 2, 0), 2);
    CurveSpec s{{{"C0", 1}}, {node(0, fin(0), 0, Place::infinity())}};
    EXPECT_EQ(euler_char(build_curve(s), 3, 0), 0);
    EXPECT_EQ(euler_char(p1, 1, 5), 6);
}

TEST(EulerChar, IncrementsWithDegree) {
    auto c = build_curve(chain(2));
    for (long d = -3; d < 3; ++d)
        for (int r = 1; r < 4; ++r) EXPECT_EQ(euler_char(c, r, d + 1), euler_char(c, r, d) + 1);
}

TEST(Polarization, TotalDegree) {
    auto s = chain(3);
    s.components[1].degree = 4;
    EXPECT_EQ(Polarization::of(build_curve(s)).total(), 6);
}
