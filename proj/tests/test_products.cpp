#include <gtest/gtest.h>

#include <set>

#include "tlc/error.hpp"
#include "tlc/normalize.hpp"
#include "tlc/products.hpp"
#include "tlc/random.hpp"
#include "tlc/syntax.hpp"

using namespace tlc;

namespace {
const Type p = Type::atom("p");

// Direct recursion on long double; only used where values stay small.
long double ref_measure(Type t, long double w) {
    if (t.is_atom() || t.is_terminal()) return w;
    long double l = ref_measure(t.left(), w), r = ref_measure(t.right(), w);
    return t.is_product() ? (l + 1) * r : std::pow(r, l);
}

// Every rewrite of every redex, anywhere in the type.
void one_step(Type t, std::vector<Type>& out) {
    if (auto r = redex_rule(t)) {
        for (TypeRule rule : {TypeRule::CurryCod, TypeRule::CurryDom, TypeRule::Assoc, TypeRule::ArrT,
                              TypeRule::TArr, TypeRule::ProdT, TypeRule::TProd}) {
            try {
                out.push_back(contract(t, rule));
            } catch (const IllTyped&) {
            }
        }
    }
    if (t.is_arrow() || t.is_product()) {
        std::vector<Type> ls, rs;
        one_step(t.left(), ls);
        one_step(t.right(), rs);
        for (Type l : ls) out.push_back(t.is_arrow() ? Type::arrow(l, t.right()) : Type::product(l, t.right()));
        for (Type r : rs) out.push_back(t.is_arrow() ? Type::arrow(t.left(), r) : Type::product(t.left(), r));
    }
}

std::set<Type> all_normal_forms(Type t) {
    std::set<Type> seen{t}, normal;
    std::vector<Type> todo{t};
    while (!todo.empty()) {
        Type c = todo.back();
        todo.pop_back();
        std::vector<Type> next;
        one_step(c, next);
        if (next.empty()) normal.insert(c);
        for (Type n : next)
            if (seen.insert(n).second) todo.push_back(n);
    }
    return normal;
}

bool lambda_type(Type t) { return is_product_free(t); }

bool normal_shape(Type t) {
    if (t.is_terminal()) return true;
    while (t.is_product()) {
        if (!lambda_type(t.right())) return false;
        t = t.left();
    }
    return lambda_type(t);
}

TypeGenOptions product_types() {
    TypeGenOptions o;
    o.atoms = {"p", "q"};
    o.max_depth = 4;
    o.products = true;
    o.terminal = true;
    return o;
}
}  // namespace

TEST(Products, MeasureExamples) {
    EXPECT_EQ(measure(p), 2);
    EXPECT_EQ(measure(parse_type("p->p*p")), 36);
    EXPECT_EQ(measure(parse_type("(p->p)*(p->p)")), 20);
    EXPECT_EQ(measure(parse_type("p*T")), 6);
    EXPECT_EQ(measure(parse_type("p->p"), 3), 27);
    EXPECT_THROW(measure(p, 1), SideConditionViolated);
    EXPECT_THROW(measure(parse_type("((p->p)->p)->p"), 3), Overflow);
}

TEST(Products, MeasureAgreesWithDirectRecursion) {
    Rng rng(5);
    TypeGenOptions o = product_types();
    o.max_depth = 3;
    int n = 0;
    for (int k = 0; k < 300; ++k) {
        Type t = random_type(rng, o);
        for (unsigned w : {2u, 3u}) {
            long double ref = ref_measure(t, w);
            if (ref > 1e15L) continue;
            EXPECT_EQ(measure(t, w).get_d(), static_cast<double>(ref)) << t.to_string();
            ++n;
        }
    }
    EXPECT_GT(n, 200);
}

TEST(Products, RuleTable) {
    EXPECT_EQ(type_nf(parse_type("(p*p)->q")).output, parse_type("p->p->q"));
    EXPECT_EQ(type_nf(parse_type("p->T")).output, Type::terminal());
    EXPECT_EQ(type_nf(parse_type("p->q*T")).output, parse_type("p->q"));
    EXPECT_EQ(type_nf(parse_type("p->q*r")).output, parse_type("(p->q)*(p->r)"));
    EXPECT_EQ(type_nf(parse_type("p*(q*r)")).output, parse_type("(p*q)*r"));
    EXPECT_EQ(type_nf(parse_type("T->q")).output, parse_type("q"));
    EXPECT_EQ(type_nf(parse_type("T*q")).output, parse_type("q"));
    auto trace = type_nf(parse_type("p->q*T"));
    ASSERT_EQ(trace.steps.size(), 1u);
    EXPECT_EQ(trace.steps[0].rule, TypeRule::ProdT);
    EXPECT_EQ(trace.steps[0].position, "R");
    EXPECT_TRUE(type_nf(parse_type("p->q")).steps.empty());
}

TEST(Products, RuleNames) {
    for (TypeRule r : {TypeRule::CurryCod, TypeRule::CurryDom, TypeRule::Assoc, TypeRule::ArrT, TypeRule::TArr,
                       TypeRule::ProdT, TypeRule::TProd})
        EXPECT_EQ(parse_rule(rule_name(r)), r);
    EXPECT_EQ(rule_name(TypeRule::TArr), "Tarr");
    EXPECT_THROW(parse_rule("beta"), SchemaError);
}

TEST(Products, NormalFormIsUniqueAndDecreasing) {
    Rng rng(17);
    TypeGenOptions o = product_types();
    o.max_depth = 3;
    for (int k = 0; k < 200; ++k) {
        Type t = random_type(rng, o);
        auto in = type_nf(t, {ReductionOrder::Innermost, 3, true, 1u << 16});
        auto out = type_nf(t, {ReductionOrder::Outermost, 2, true, 1u << 16});
        EXPECT_EQ(in.output, out.output) << t.to_string();
        EXPECT_TRUE(is_product_normal(in.output));
        EXPECT_TRUE(normal_shape(in.output)) << in.output.to_string();
        auto every = all_normal_forms(t);
        ASSERT_EQ(every.size(), 1u) << t.to_string();
        EXPECT_EQ(*every.begin(), in.output);
        for (const auto* trace : {&in, &out})
            for (const auto& s : trace->steps)
                if (s.measure_before && s.measure_after) EXPECT_LT(*s.measure_after, *s.measure_before);
    }
}

TEST(Products, IsoExamples) {
    auto id = build_iso(parse_type("p->q"));
    EXPECT_EQ(id.forward, parse_term("\\x:p->q. x"));
    EXPECT_EQ(id.backward, parse_term("\\x:p->q. x"));

    auto unit = build_iso(parse_type("p*T"));
    EXPECT_EQ(unit.target, p);
    EXPECT_EQ(unit.forward, parse_term("\\x:p*T. p1 x"));
    EXPECT_EQ(unit.backward, parse_term("\\y:p. <y, k>"));
    EXPECT_TRUE(check_iso(unit));

    auto curry = build_iso(parse_type("(p*p)->q"));
    EXPECT_EQ(curry.target, parse_type("p->p->q"));
    EXPECT_TRUE(check_iso(curry));
}

TEST(Products, EveryRuleIsoRoundTrips) {
    for (const char* s : {"p->q*r", "(p*q)->r", "p*(q*r)", "p->T", "T->q", "p*T", "T*q"}) {
        Type t = parse_type(s);
        auto w = rule_iso(t, *redex_rule(t));
        EXPECT_TRUE(check_iso(w)) << s;
    }
}

TEST(Products, RandomIsos) {
    Rng rng(23);
    for (int k = 0; k < 40; ++k) {
        Type t = random_type(rng, product_types());
        auto w = build_iso(t);
        EXPECT_EQ(w.target, type_nf(t).output);
        EXPECT_TRUE(w.forward.is_closed());
        EXPECT_TRUE(check_iso(w)) << t.to_string();
    }
}

TEST(Products, Split) {
    EXPECT_TRUE(split(unit()).unit);
    Term f = parse_term("\\x:p. x");
    auto single = split(f);
    ASSERT_EQ(single.parts.size(), 1u);
    EXPECT_EQ(single.parts[0], f);
    Term g = parse_term("\\y:p->p. y");
    auto two = split(pair(parse_term("\\x:p->p. x"), g));
    ASSERT_EQ(two.parts.size(), 2u);
    EXPECT_EQ(two.parts[1], long_nf(g).term);
    EXPECT_THROW(split(parse_term("\\x:p*p. x")), IllTyped);
    EXPECT_THROW(split(var("z", p)), IllTyped);

    auto three = split(parse_term("<<\\x:p. x, \\y:q. y>, \\z:r. z>"));
    EXPECT_EQ(three.parts.size(), 3u);
    for (const auto& part : three.parts) EXPECT_TRUE(is_product_free(part));
}

TEST(Products, DifferingComponent) {
    Term a = parse_term("\\x:p*p. <p1 x, p2 x>");
    Term b = parse_term("\\x:p*p. <p2 x, p1 x>");
    auto h = build_iso(a.type());
    EXPECT_EQ(h.target, parse_type("(p->p->p)*(p->p->p)"));
    EXPECT_EQ(differing_component(a, b, h), 1u);
    Term c = parse_term("\\x:p*p. <p1 x, p1 x>");
    EXPECT_EQ(differing_component(a, c, h), 2u);
    EXPECT_THROW(differing_component(a, a, h), EqualTerms);
    auto h1 = build_iso(parse_type("p->p->p"));
    EXPECT_EQ(differing_component(parse_term("\\x:p. \\y:p. x"), parse_term("\\x:p. \\y:p. y"), h1), 1u);
}

TEST(Products, Projector) {
    EXPECT_EQ(projector(1, 1, p), parse_term("\\x:p. x"));
    Type t3 = parse_type("(p*q)*r");
    EXPECT_EQ(projector(3, 3, t3), parse_term("\\x:(p*q)*r. p2 x"));
    EXPECT_EQ(projector(3, 1, t3), parse_term("\\x:(p*q)*r. p1 (p1 x)"));
    EXPECT_EQ(projector(3, 2, t3), parse_term("\\x:(p*q)*r. p2 (p1 x)"));
    EXPECT_THROW(projector(3, 0, t3), IndexOutOfRange);
    EXPECT_THROW(projector(3, 4, t3), IndexOutOfRange);
    EXPECT_THROW(projector(4, 1, t3), IllTyped);
}

TEST(Products, SwapPairSeparation) {
    Term a = parse_term("\\x:p*p. <p1 x, p2 x>");
    Term b = parse_term("\\x:p*p. <p2 x, p1 x>");
    auto cert = separate_prod(a, b);
    EXPECT_EQ(cert.index, 1u);
    EXPECT_EQ(cert.arity, 2u);
    EXPECT_TRUE(verify(cert));
    EXPECT_TRUE(verify(cert.component));

    auto swapped = cert;
    std::swap(swapped.a_prime, swapped.b_prime);
    EXPECT_FALSE(verify(swapped));
}

TEST(Products, ProductFreePairDegenerates) {
    Term a = parse_term("\\x:p. \\y:p. x");
    Term b = parse_term("\\x:p. \\y:p. y");
    auto cert = separate_prod(a, b);
    EXPECT_EQ(cert.arity, 1u);
    EXPECT_EQ(cert.index, 1u);
    EXPECT_TRUE(cert.iso.forward.kind() == TermKind::Lam && cert.iso.forward.body().kind() == TermKind::Bound);
    EXPECT_TRUE(verify(cert));
}

TEST(Products, MoreProductPairs) {
    const char* pairs[][2] = {
        {"\\f:p*T->p. \\x:p. f <x, k>", "\\f:p*T->p. \\x:p. x"},
        {"\\x:p*(q*q). <p1 x, <p1 (p2 x), p2 (p2 x)>>", "\\x:p*(q*q). <p1 x, <p2 (p2 x), p1 (p2 x)>>"},
        {"\\f:p->p*p. \\x:p. p1 (f x)", "\\f:p->p*p. \\x:p. p2 (f x)"},
    };
    for (const auto& pr : pairs) {
        Term a = parse_term(pr[0]), b = parse_term(pr[1]);
        auto cert = separate_prod(a, b);
        EXPECT_TRUE(verify(cert)) << pr[0];
    }
    Term a = parse_term("\\x:p*T. p1 x");
    EXPECT_THROW(separate_prod(a, parse_term("\\y:p*T. p1 <p1 y, k>")), EqualTerms);
    EXPECT_THROW(separate_prod(parse_term("\\x:p->T. x"), parse_term("\\x:p->T. \\y:p. k")), EqualTerms);
}

TEST(Products, StepChecksByScope) {
    TypeNFOptions o;
    o.record_measures = false;
    auto small = type_nf(parse_type("(p*p)->q"), o);
    ASSERT_EQ(small.steps.size(), 1u);
    StepCheck c = check_step(small.steps[0]);
    EXPECT_TRUE(c.decreases);
    EXPECT_EQ(c.scope, MeasureScope::WholeType);

    // The enclosing type is far beyond the bit budget, the redex is not.
    Type huge = parse_type("(((p->p)->p)->p)->p");
    Type wrapped = Type::arrow(huge, parse_type("(p*p)->q"));
    auto tr = type_nf(wrapped, o);
    ASSERT_EQ(tr.steps.size(), 1u);
    c = check_step(tr.steps[0], 3, 256);
    EXPECT_TRUE(c.decreases);
    EXPECT_EQ(c.scope, MeasureScope::Redex);

    auto big_redex = type_nf(Type::arrow(huge, Type::terminal()), o);
    ASSERT_EQ(big_redex.steps.size(), 1u);
    c = check_step(big_redex.steps[0], 3, 256);
    EXPECT_TRUE(c.decreases);
    EXPECT_EQ(c.scope, MeasureScope::RuleInequality);

    TypeStep forged = small.steps[0];
    forged.after = parse_type("((p*p)*p)->q");
    EXPECT_FALSE(check_step(forged).decreases);
    forged = big_redex.steps[0];
    forged.after = Type::atom("p");
    EXPECT_EQ(check_step(forged, 3, 256).scope, MeasureScope::Undetermined);
}
