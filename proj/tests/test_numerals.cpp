#include <gtest/gtest.h>

#include <cmath>

#include "tlc/error.hpp"
#include "tlc/normalize.hpp"
#include "tlc/numerals.hpp"
#include "tlc/syntax.hpp"

using namespace tlc;

namespace {
using K = CombinatorKind;

Term C(K k, unsigned i, unsigned d = 0) { return combinator(k, i, d); }

bool eq_num(const Term& t, unsigned n, unsigned i) { return decide_eq(t, church(n, i)); }

unsigned ipow(unsigned b, unsigned e) {
    unsigned r = 1;
    while (e--) r *= b;
    return r;
}
}  // namespace

TEST(Numerals, ChurchShapes) {
    EXPECT_EQ(church(0, 0), parse_term("\\x:p->p. \\y:p. y"));
    EXPECT_EQ(church(2, 0), parse_term("\\x:p->p. \\y:p. x (x y)"));
    EXPECT_EQ(church(5, 3).type(), Type::numeral(3));
    EXPECT_EQ(church(5, 3).type(), Type::tower(5));
    EXPECT_EQ(church_value(church(7, 2)), 7);
    EXPECT_EQ(church_value(parse_term("\\x:p->p. x")), -1);
}

TEST(Numerals, CombinatorTypes) {
    for (unsigned i = 0; i < 4; ++i) {
        Type n = Type::numeral(i), n1 = Type::numeral(i + 1), n3 = Type::numeral(i + 3);
        EXPECT_EQ(C(K::Cond, i).type(), arrows({n, n, n}, n));
        EXPECT_EQ(C(K::Lower, i).type(), Type::arrow(n1, n));
        EXPECT_EQ(C(K::Expo, i).type(), arrows({n1, n1}, n));
        EXPECT_EQ(C(K::Add, i).type(), arrows({n, n}, n));
        EXPECT_EQ(C(K::Mul, i).type(), arrows({n, n}, n));
        EXPECT_EQ(C(K::Pair, i).type(), arrows({n, n}, n1));
        EXPECT_EQ(C(K::Proj1, i).type(), Type::arrow(n1, n));
        EXPECT_EQ(C(K::AuxT, i).type(), Type::arrow(n1, n1));
        EXPECT_EQ(C(K::AuxH, i).type(), Type::arrow(n3, n1));
        EXPECT_EQ(C(K::Pred, i).type(), Type::arrow(n3, n));
        EXPECT_EQ(C(K::Raise, i + 1).type(), Type::arrow(n, n1));
        EXPECT_EQ(C(K::Check, i).type(), Type::arrow(n, n));
        EXPECT_TRUE(C(K::Pred, i).is_closed());
    }
}

TEST(Numerals, LiteralDefinitions) {
    EXPECT_EQ(C(K::Cond, 0),
              parse_term("\\x:(p->p)->p->p. \\y:(p->p)->p->p. \\z:(p->p)->p->p. \\u:p->p. \\v:p. "
                         "x (\\w:p. z u v) (y u v)"));
    EXPECT_EQ(C(K::Lower, 0),
              parse_term("\\x:((p->p)->p->p)->(p->p)->p->p. \\y:p->p. x (\\z:p->p. \\u:p. y (z u)) (\\v:p. v)"));
    EXPECT_EQ(C(K::Raise, 1),
              parse_term("\\x:(p->p)->p->p. \\y:(p->p)->p->p. \\z:p->p. \\u:p. x (\\v:p. y z u) (z u)"));
}

TEST(Numerals, SideConditions) {
    EXPECT_THROW(combinator(K::Raise, 0), SideConditionViolated);
    EXPECT_THROW(combinator(K::Check, 5, 2), SideConditionViolated);
    EXPECT_NO_THROW(combinator(K::Check, 6, 2));
    EXPECT_THROW(lowering_pair(1), LevelTooSmall);
}

TEST(Numerals, Conditional) {
    for (unsigned i = 0; i < 3; ++i) {
        Term a = church(4, i), b = church(7, i);
        EXPECT_TRUE(decide_eq(app(C(K::Cond, i), {church(0, i), a, b}), a));
        for (unsigned n = 1; n < 4; ++n) EXPECT_TRUE(decide_eq(app(C(K::Cond, i), {church(n, i), a, b}), b));
    }
}

TEST(Numerals, ArithmeticExhaustive) {
    for (unsigned i = 0; i <= 4; ++i)
        for (unsigned n = 0; n <= 3; ++n)
            for (unsigned m = 0; m <= 3; ++m) {
                EXPECT_TRUE(eq_num(app(C(K::Add, i), {church(n, i), church(m, i)}), n + m, i));
                EXPECT_TRUE(eq_num(app(C(K::Mul, i), {church(n, i), church(m, i)}), n * m, i));
                EXPECT_TRUE(eq_num(app(C(K::Expo, i), {church(n, i + 1), church(m, i + 1)}), ipow(m, n), i))
                    << n << " " << m << " " << i;
                EXPECT_FALSE(eq_num(app(C(K::Add, i), {church(n, i), church(m, i)}), n + m + 1, i));
            }
}

TEST(Numerals, LowerAndExpoExamples) {
    EXPECT_TRUE(eq_num(app(C(K::Lower, 2), church(3, 3)), 3, 2));
    EXPECT_TRUE(eq_num(app(C(K::Expo, 1), {church(2, 2), church(3, 2)}), 9, 1));
}

TEST(Numerals, PairingLaws) {
    for (unsigned i = 0; i < 3; ++i)
        for (unsigned a = 0; a < 3; ++a)
            for (unsigned b = 0; b < 3; ++b) {
                Term pr = app(C(K::Pair, i), {church(a, i), church(b, i)});
                EXPECT_TRUE(eq_num(app(C(K::Proj1, i), pr), a, i));
                EXPECT_TRUE(eq_num(app(C(K::Proj2, i), pr), b, i));
            }
}

TEST(Numerals, Predecessor) {
    for (unsigned i = 0; i < 3; ++i) {
        EXPECT_TRUE(eq_num(app(C(K::Pred, i), church(0, i + 3)), 0, i));
        for (unsigned n = 1; n <= 6; ++n) EXPECT_TRUE(eq_num(app(C(K::Pred, i), church(n, i + 3)), n - 1, i));
    }
}

TEST(Numerals, RaiseNeedsEta) {
    for (unsigned i = 0; i < 4; ++i) {
        EXPECT_TRUE(eq_num(app(C(K::Raise, i + 1), church(0, i)), 0, i + 1));
        EXPECT_TRUE(eq_num(app(C(K::Raise, i + 1), church(1, i)), 1, i + 1));
        // Without eta, [0] comes out as \y z u. z u rather than \y z. z.
        EXPECT_NE(beta_nf(app(C(K::Raise, i + 1), church(0, i))), church(0, i + 1));
        EXPECT_NE(beta_nf(app(C(K::Raise, i + 1), church(1, i))), church(1, i + 1));
    }
    // For n >= 2 Z does not raise n.
    EXPECT_FALSE(eq_num(app(C(K::Raise, 1), church(2, 0)), 2, 1));
}

TEST(Numerals, CheckCombinators) {
    for (unsigned n = 0; n <= 5; ++n) {
        EXPECT_TRUE(eq_num(app(C(K::Check, 0, 0), church(n, 0)), n == 0 ? 0 : 1, 0));
        EXPECT_TRUE(eq_num(app(C(K::Check, 3, 1), church(n, 3)), n == 1 ? 0 : 1, 3));
        EXPECT_TRUE(eq_num(app(C(K::Check, 6, 2), church(n, 6)), n == 2 ? 0 : 1, 6)) << n;
    }
    EXPECT_TRUE(eq_num(app(C(K::Check, 7, 2), church(2, 7)), 0, 7));
    EXPECT_TRUE(eq_num(app(C(K::Check, 9, 3), church(3, 9)), 0, 9));
    EXPECT_TRUE(eq_num(app(C(K::Check, 9, 3), church(4, 9)), 1, 9));
}

TEST(Numerals, LoweringPair) {
    for (unsigned i = 2; i <= 6; ++i) {
        auto [c1, c2] = lowering_pair(i);
        EXPECT_TRUE(eq_num(app(church(0, i), {c1, c2}), 0, i - 2));
        EXPECT_TRUE(eq_num(app(church(1, i), {c1, c2}), 1, i - 2));
        EXPECT_FALSE(eq_num(app(church(2, i), {c1, c2}), 2, i - 2));
    }
}

TEST(Numerals, AbbreviatedPrinting) {
    Term t = app(C(K::Expo, 0), {church(2, 1), church(3, 1)});
    EXPECT_EQ(to_string_abbreviated(t), "([3]_1)^([2]_1)");
    Term m = app(C(K::Mul, 0), {church(2, 0), church(3, 0)});
    EXPECT_EQ(to_string_abbreviated(m), "[2]_0.[3]_0");
    EXPECT_EQ(to_string_abbreviated(app(C(K::Pred, 0), church(1, 3))), "P_0 [1]_3");
}

TEST(Numerals, KindNames) {
    EXPECT_EQ(parse_combinator_kind("D"), K::Check);
    EXPECT_EQ(parse_combinator_kind("pred"), K::Pred);
    EXPECT_EQ(combinator_symbol(K::Pair), "Pi");
    EXPECT_THROW(parse_combinator_kind("Q"), ParseError);
}
