#include <gtest/gtest.h>

#include "tlc/error.hpp"
#include "tlc/syntax.hpp"
#include "tlc/term.hpp"

using namespace tlc;

namespace {
const Type p = Type::atom("p");
const Type pp = Type::arrow(p, p);
}  // namespace

TEST(Term, AlphaEquivalentTermsAreEqual) {
    Term a = lam("x", p, var("x", p));
    Term b = lam("y", p, var("y", p));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.type(), pp);
    EXPECT_NE(lam("x", p, lam("y", p, var("x", p))), lam("x", p, lam("y", p, var("y", p))));
}

TEST(Term, ConstructorsTypeCheck) {
    EXPECT_THROW(app(var("x", p), var("y", p)), IllTyped);
    EXPECT_THROW(app(var("f", pp), var("y", pp)), IllTyped);
    EXPECT_THROW(fst(var("x", p)), IllTyped);
    EXPECT_EQ(pair(var("x", p), unit()).type(), Type::product(p, Type::terminal()));
    EXPECT_EQ(snd(pair(var("x", p), unit())).type(), Type::terminal());
}

TEST(Term, LamChecksVariableTypes) {
    EXPECT_THROW(lam("x", pp, var("x", p)), TypeMismatch);
}

TEST(Term, OpenCloseInverse) {
    Term body = app(var("f", pp), var("x", p));
    Term closed = close(body, "x", p);
    EXPECT_EQ(closed.loose(), 1u);
    EXPECT_EQ(open(closed, var("x", p)), body);
}

TEST(Term, SubstitutionAvoidsCapture) {
    // (\y. x) [x := y] must not capture y.
    Term t = lam("y", p, var("x", p));
    Term r = substitute_term(t, "x", var("y", p));
    ASSERT_EQ(r.kind(), TermKind::Lam);
    EXPECT_EQ(r.body(), var("y", p));
    EXPECT_TRUE(occurs_free(r, "y"));
}

TEST(Term, ShiftMovesOnlyLooseIndices) {
    Term t = lam_raw("x", p, app(bound(1, pp), bound(0, p)));
    Term s = shift(t, 2);
    EXPECT_EQ(s.body().fun().index(), 3u);
    EXPECT_EQ(s.body().arg().index(), 0u);
    EXPECT_THROW(shift(bound(0, p), -1), IndexOutOfRange);
}

TEST(Term, FreeVarsLeftmostOrder) {
    Term t = app(app(var("g", Type::arrow(p, pp)), var("b", p)), var("a", p));
    auto fv = free_vars(t);
    ASSERT_EQ(fv.size(), 3u);
    EXPECT_EQ(fv[0].first, "g");
    EXPECT_EQ(fv[1].first, "b");
    EXPECT_EQ(fv[2].first, "a");
}

TEST(Term, TypeOfChecksContext) {
    Term t = app(var("f", pp), var("x", p));
    EXPECT_EQ(type_of(t, Context{{"f", pp}, {"x", p}}), p);
    EXPECT_THROW(type_of(t, Context{{"f", pp}}), UnboundVariable);
    EXPECT_THROW(type_of(t, Context{{"f", pp}, {"x", pp}}), TypeMismatch);
}

TEST(Term, TypeSubstitutionRewritesAnnotations) {
    Term t = lam("x", p, var("x", p));
    Term r = substitute_types(t, {{"p", pp}});
    EXPECT_EQ(r.type(), Type::arrow(pp, pp));
    EXPECT_EQ(r, lam("z", pp, var("z", pp)));
}

TEST(Term, FreshName) {
    EXPECT_EQ(fresh_name("x", {"y"}), "x");
    EXPECT_EQ(fresh_name("x", {"x", "x1"}), "x2");
}
