#include <gtest/gtest.h>

#include "tlc/error.hpp"
#include "tlc/normalize.hpp"
#include "tlc/random.hpp"
#include "tlc/syntax.hpp"

using namespace tlc;

namespace {
const Type p = Type::atom("p");
const Type pp = Type::arrow(p, p);

Term nf(const std::string& s, const Context& ctx = {}) { return beta_eta_nf(parse_term(s, ctx)).term; }
Term lnf(const std::string& s, const Context& ctx = {}) { return long_nf(parse_term(s, ctx)).term; }
}  // namespace

TEST(Normalize, BetaStep) {
    Context ctx{{"y", p}};
    EXPECT_EQ(nf("(\\x:p. x) y", ctx), var("y", p));
}

TEST(Normalize, EtaStep) {
    Context ctx{{"f", pp}};
    EXPECT_EQ(nf("\\x:p. f x", ctx), var("f", pp));
    EXPECT_EQ(nf("\\x:p. \\y:p. f y", ctx), lam("x", p, var("f", pp)));
}

TEST(Normalize, SurjectivePairing) {
    Context ctx{{"c", Type::product(p, pp)}};
    EXPECT_EQ(nf("<p1 c, p2 c>", ctx), var("c", Type::product(p, pp)));
    EXPECT_EQ(nf("p1 <p2 c (p1 c), c>", ctx), parse_term("p2 c (p1 c)", ctx));
}

TEST(Normalize, LongForms) {
    EXPECT_EQ(lnf("f", {{"f", pp}}), lam("x", p, app(var("f", pp), var("x", p))));
    EXPECT_EQ(lnf("x", {{"x", Type::terminal()}}), unit());
    Type pxp = Type::product(p, p);
    EXPECT_EQ(lnf("x", {{"x", pxp}}), parse_term("<p1 x, p2 x>", {{"x", pxp}}));
    // A variable of type p -> p*T expands under both constructors.
    Type t = parse_type("p->p*T");
    EXPECT_EQ(lnf("g", {{"g", t}}), parse_term("\\y:p. <p1 (g y), k>", {{"g", t}}));
}

TEST(Normalize, TerminalCollapses) {
    Context ctx{{"x", Type::terminal()}, {"f", parse_type("p->T")}};
    EXPECT_EQ(nf("x", ctx), unit());
    EXPECT_TRUE(decide_eq(parse_term("x", ctx), unit()));
    EXPECT_EQ(nf("f", ctx), parse_term("\\y:p. k"));
}

TEST(Normalize, DecideEq) {
    Term one = parse_term("\\x:p->p. \\y:p. x y");
    Term two = parse_term("\\x:p->p. \\y:p. x (x y)");
    EXPECT_FALSE(decide_eq(one, two));
    EXPECT_TRUE(decide_eq(one, parse_term("\\x:p->p. x")));
    Type x = parse_type("(p->p)->p");
    Term a = parse_term("\\x:(p->p)->p. x (\\y:p. x (\\z:p. y))");
    Term b = parse_term("\\x:(p->p)->p. x (\\y:p. x (\\z:p. z))");
    EXPECT_EQ(a.type(), Type::arrow(x, p));
    EXPECT_FALSE(decide_eq(a, b));
    EXPECT_TRUE(decide_eq(a, a));
    EXPECT_THROW(decide_eq(one, a), TypeMismatch);
}

TEST(Normalize, DerivedAlpha) {
    Context ctx{{"f", Type::arrow(p, pp)}, {"z", p}};
    Term a = parse_term("f z", ctx);
    Term l1 = lam("x", p, app(a, var("x", p)));
    Term l2 = lam("y", p, app(a, var("y", p)));
    EXPECT_TRUE(decide_eq(l1, l2));
    EXPECT_TRUE(decide_eq(l1, lam("y", p, app(l1, var("y", p)))));
}

TEST(Normalize, BetaOnlyKeepsEtaRedexes) {
    Term t = parse_term("\\f:p->p. \\x:p. f x");
    EXPECT_EQ(beta_nf(t), t);
    EXPECT_NE(beta_eta_nf(t).term, t);
}

TEST(Normalize, BudgetExhaustion) {
    // Squaring a Church numeral four times: 2^16 applications of g.
    Type n = parse_type("(p->p)->p->p");
    Term sq = parse_term("\\n:(p->p)->p->p. \\f:p->p. n (n f)");
    Term big = parse_term("\\f:p->p. \\x:p. f (f x)");
    for (int i = 0; i < 4; ++i) big = app(sq, big);
    ASSERT_EQ(big.type(), n);
    std::size_t before = live_cells();
    {
        CellBudgetScope scope(64);
        EXPECT_THROW(beta_eta_nf(big), ResourceExhausted);
    }
    EXPECT_EQ(live_cells(), before);
    Term r = beta_eta_nf(big).term;
    EXPECT_EQ(r.size(), 2u * 65536u + 3u);
}

class NormalizeRandom : public ::testing::TestWithParam<int> {};

TEST_P(NormalizeRandom, StrategiesAgreeAndFormsAreCoherent) {
    Rng rng(GetParam());
    TypeGenOptions topt;
    topt.atoms = {"p", "q"};
    topt.products = true;
    topt.terminal = true;
    topt.max_depth = 2;
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Context ctx{{"a", Type::atom("p")}, {"b", Type::atom("q")}};
        ctx.add("f", random_type(rng, topt));
        ctx.add("g", random_type(rng, topt));
        Type t = random_type(rng, topt);
        auto term = random_term(rng, t, ctx, {4, 0.35, true});
        if (!term) continue;
        ++checked;
        Term long_eval = long_nf(*term).term;
        Term long_rewrite = long_nf(*term, Strategy::Rewriting).term;
        ASSERT_EQ(long_eval, long_rewrite) << to_string(*term);
        Term contracted = beta_eta_nf(*term).term;
        EXPECT_EQ(contracted, eta_contract(long_eval)) << to_string(*term);
        EXPECT_EQ(contracted, beta_eta_nf(*term, Strategy::Rewriting).term);
        EXPECT_EQ(long_nf(long_eval).term, long_eval);
        EXPECT_EQ(long_nf(contracted).term, long_eval);
        EXPECT_TRUE(decide_eq(*term, contracted));
    }
    EXPECT_GT(checked, 10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, NormalizeRandom, ::testing::Range(1, 9));
