#include <gtest/gtest.h>

#include "tlc/error.hpp"
#include "tlc/syntax.hpp"

using namespace tlc;

namespace {
const Type p = Type::atom("p");
const Type pp = Type::arrow(p, p);
}  // namespace

TEST(Syntax, ParsesChurchNumeral) {
    Term t = parse_term("\\f:p->p. \\x:p. f (f x)");
    Term expected = lam("f", pp, lam("x", p, app(var("f", pp), app(var("f", pp), var("x", p)))));
    EXPECT_EQ(t, expected);
    EXPECT_EQ(parse_term("λf:p->p. λx:p. f (f x)"), expected);
}

TEST(Syntax, ApplicationIsLeftAssociative) {
    Context ctx{{"g", Type::arrow(p, pp)}, {"a", p}, {"b", p}};
    EXPECT_EQ(parse_term("g a b", ctx), app(app(var("g", Type::arrow(p, pp)), var("a", p)), var("b", p)));
}

TEST(Syntax, ProjectionsPairsAndUnit) {
    Context ctx{{"x", Type::product(p, pp)}};
    Term t = parse_term("<p2 x (p1 x), k>", ctx);
    EXPECT_EQ(t.type(), Type::product(p, Type::terminal()));
    EXPECT_EQ(parse_term("p1 <k, k>").type(), Type::terminal());
}

TEST(Syntax, TrailingLambdaArgument) {
    Context ctx{{"h", Type::arrow(pp, p)}};
    EXPECT_EQ(parse_term("h \\x:p. x", ctx), app(var("h", Type::arrow(pp, p)), lam("x", p, var("x", p))));
}

TEST(Syntax, Errors) {
    EXPECT_THROW(parse_term("\\x:p. y"), UnboundVariable);
    EXPECT_THROW(parse_term("\\x:p. x x"), IllTyped);
    EXPECT_THROW(parse_term("\\x:p x"), ParseError);
    EXPECT_THROW(parse_term("(\\x:p. x"), ParseError);
    EXPECT_THROW(parse_term("\\k:p. k"), ParseError);
    EXPECT_THROW(parse_term("$"), ParseError);
    EXPECT_THROW(parse_type("p->"), ParseError);
    EXPECT_THROW(parse_type("#3"), ParseError);
}

TEST(Syntax, ParseContext) {
    Context ctx = parse_context("x:p, f:p->p*q");
    ASSERT_EQ(ctx.size(), 2u);
    EXPECT_EQ(*ctx.lookup("f"), parse_type("p->p*q"));
    EXPECT_TRUE(parse_context("").empty());
}

TEST(Syntax, FreeNamesOfSurface) {
    auto s = parse_surface("\\x:p. f x (g y) x");
    EXPECT_EQ(free_names(*s), (std::vector<std::string>{"f", "g", "y"}));
}

TEST(Syntax, PrintRoundTrip) {
    Context ctx{{"f", pp}, {"x", p}, {"u", Type::product(p, pp)}};
    for (const char* s : {"\\x:p. x", "\\f:p->p. \\x:p. f (f x)", "f x", "(\\y:p. y) x",
                          "<p1 u, p2 u>", "p2 u (p1 u)", "\\y:p->p. y (f x)", "k",
                          "\\z:p*(p->p). p2 z"}) {
        Term t = parse_term(s, ctx);
        EXPECT_EQ(parse_term(to_string(t), ctx), t) << s << " printed as " << to_string(t);
    }
}

TEST(Syntax, PrinterAvoidsCapture) {
    // A binder with hint x under a free x must be renamed.
    Term t = lam("x", p, var("y", p));
    t = substitute_term(t, "y", var("x", p));
    std::string s = to_string(t);
    EXPECT_EQ(s, "\\x1:p. x");
    EXPECT_EQ(parse_term(s, Context{{"x", p}}), t);
}

TEST(Syntax, PrintWithTypeTable) {
    TypeTable table(6);
    Type big = Type::numeral(3);
    Term t = lam("x", big, var("x", big));
    std::string s = to_string(t, &table);
    auto refs = TypeTable::resolve(table.entries());
    EXPECT_EQ(parse_term(s, {}, &refs), t);
}

TEST(InferContext, FreeVariablesGetTypes) {
    const Type p = Type::atom("p");
    auto s = parse_surface("(\\x:p. x) y");
    Context ctx = infer_context({s.get()});
    EXPECT_EQ(ctx.lookup("y"), p);
    EXPECT_EQ(elaborate(*s, ctx).type(), p);

    auto pr = parse_surface("p1 <a, b>");
    Context c2 = infer_context({pr.get()});
    EXPECT_EQ(c2.lookup("a"), p);
    EXPECT_EQ(c2.lookup("b"), p);

    auto f = parse_surface("f (g x) k");
    Context c3 = infer_context({f.get()}, parse_context("x:q"));
    EXPECT_EQ(c3.lookup("g"), Type::arrow(Type::atom("q"), p));
    EXPECT_EQ(c3.lookup("f"), Type::arrow(p, Type::arrow(Type::terminal(), p)));
}

TEST(InferContext, JointAndFailing) {
    auto a = parse_surface("\\y:q. f y");
    auto b = parse_surface("f");
    Context ctx = infer_context({a.get(), b.get()});
    EXPECT_EQ(ctx.lookup("f"), Type::arrow(Type::atom("q"), Type::atom("p")));
    auto bad = parse_surface("x x");
    EXPECT_THROW(infer_context({bad.get()}), IllTyped);
    auto clash = parse_surface("(\\z:p. z) k");
    EXPECT_THROW(elaborate(*clash, infer_context({clash.get()})), IllTyped);
    auto mixed = parse_surface("<p1 x, x k>");
    EXPECT_THROW(infer_context({mixed.get()}), IllTyped);
}
