#include <gtest/gtest.h>

#include <functional>

#include "tlc/error.hpp"
#include "tlc/models.hpp"
#include "tlc/normalize.hpp"
#include "tlc/numerals.hpp"
#include "tlc/random.hpp"
#include "tlc/syntax.hpp"

using namespace tlc;

namespace {
const Type p = Type::atom("p");
const Type pp = Type::arrow(p, p);
const PModel two{2};

// Reference semantics: every value is a full table code, abstractions are
// tabulated eagerly by enumerating the domain.
struct TooBig {};

std::uint64_t card(unsigned h, Type t) {
    if (t.is_atom()) return h;
    std::uint64_t r = 1;
    for (std::uint64_t k = 0; k < card(h, t.dom()); ++k) {
        r *= card(h, t.cod());
        if (r > (1u << 20)) throw TooBig{};
    }
    return r;
}

std::uint64_t oracle(const Term& t, unsigned h, std::vector<std::uint64_t>& env,
                     const std::map<std::string, std::uint64_t>& free) {
    switch (t.kind()) {
    case TermKind::Bound:
        return env[env.size() - 1 - t.index()];
    case TermKind::Free:
        return free.at(t.name());
    case TermKind::App: {
        std::uint64_t f = oracle(t.fun(), h, env, free), x = oracle(t.arg(), h, env, free);
        std::uint64_t radix = card(h, t.type());
        for (std::uint64_t k = 0; k < x; ++k) f /= radix;
        return f % radix;
    }
    case TermKind::Lam: {
        card(h, t.type());
        std::uint64_t n = card(h, t.binder()), radix = card(h, t.body().type()), code = 0, w = 1;
        for (std::uint64_t a = 0; a < n; ++a) {
            env.push_back(a);
            code += oracle(t.body(), h, env, free) * w;
            env.pop_back();
            w *= radix;
        }
        return code;
    }
    default:
        throw std::logic_error("oracle: unexpected node");
    }
}

Functional fn(Type t, std::uint64_t c) { return {t, c}; }
}  // namespace

TEST(Models, Cardinalities) {
    EXPECT_EQ(cardinality(two, p), 2u);
    EXPECT_EQ(cardinality(two, pp), 4u);
    EXPECT_EQ(cardinality(two, parse_type("(p->p)->p")), 16u);
    EXPECT_EQ(cardinality(PModel{3}, parse_type("p->p->p")), 19683u);
    EXPECT_EQ(cardinality(two, parse_type("q->p")), 4u);
    EXPECT_THROW(cardinality(two, Type::tower(4)), Overflow);
    EXPECT_THROW(cardinality(two, parse_type("p*p")), IllTyped);
}

TEST(Models, CanonicalOrderOfUnaryFunctions) {
    auto fs = enumerate(two, pp);
    ASSERT_EQ(fs.size(), 4u);
    EXPECT_EQ(table(two, fs[0]), (std::vector<std::uint64_t>{0, 0}));
    EXPECT_EQ(table(two, fs[1]), (std::vector<std::uint64_t>{1, 0}));
    EXPECT_EQ(table(two, fs[2]), (std::vector<std::uint64_t>{0, 1}));
    EXPECT_EQ(table(two, fs[3]), (std::vector<std::uint64_t>{1, 1}));
    EXPECT_EQ(enumerate(two, parse_type("(p->p)->p")).size(), 16u);
    EXPECT_EQ(describe(two, fs[1]), "[0 -> 1, 1 -> 0]");
}

TEST(Models, TableRoundTrip) {
    for (unsigned h : {2u, 3u})
        for (const char* s : {"p", "p->p", "p->p->p", "(p->p)->p"}) {
            Type t = parse_type(s);
            if (h == 3 && std::string(s) == "(p->p)->p") continue;
            for (const auto& f : enumerate(PModel{h}, t)) {
                if (t.is_atom()) continue;
                EXPECT_EQ(from_table(PModel{h}, t, table(PModel{h}, f)), f);
            }
        }
    EXPECT_EQ(cardinality(PModel{3}, parse_type("(p->p)->p")), 7625597484987u);
}

TEST(Models, EvalExamples) {
    EXPECT_EQ(table(two, eval(parse_term("\\x:p. x"), two)), (std::vector<std::uint64_t>{0, 1}));
    EXPECT_EQ(table(two, eval(church(1, 0), two)), (std::vector<std::uint64_t>{0, 1, 2, 3}));
    Functional k = eval(parse_term("\\x:p. \\y:p. x"), two);
    EXPECT_EQ(apply(two, apply(two, k, fn(p, 1)), fn(p, 0)).code, 1u);
    EXPECT_EQ(eval(parse_term("f y", {{"f", pp}, {"y", p}}), two, {{"f", fn(pp, 1)}, {"y", fn(p, 0)}}).code, 1u);
    EXPECT_THROW(eval(parse_term("f", {{"f", pp}}), two), UnboundVariable);
}

TEST(Models, SectionSixExampleValues) {
    Term a = parse_term("\\x:(p->p)->p. x (\\y:p. x (\\z:p. y))");
    Term b = parse_term("\\x:(p->p)->p. x (\\y:p. x (\\z:p. z))");
    // phi sends the constant-0 function to 1 and everything else to 0.
    Type t = parse_type("(p->p)->p");
    Functional phi = from_table(two, t, {1, 0, 0, 0});
    EXPECT_EQ(eval_apply(a, two, {phi}).code, 0u);
    EXPECT_EQ(eval_apply(b, two, {phi}).code, 1u);
    auto d = distinguish(a, b);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->model.base, 2u);
    ASSERT_EQ(d->args.size(), 1u);
    EXPECT_EQ(d->args[0], phi);
    EXPECT_EQ(d->relabeling, (std::vector<unsigned>{0, 1}));
}

TEST(Models, ChurchOneVersusTwo) {
    auto d = distinguish(church(1, 0), church(2, 0));
    ASSERT_TRUE(d);
    EXPECT_EQ(d->model.base, 2u);
    ASSERT_EQ(d->args.size(), 2u);
    EXPECT_EQ(table(two, d->args[0]), (std::vector<std::uint64_t>{1, 0}));
    EXPECT_EQ(d->args[1].code, 1u);
    EXPECT_EQ(d->relabeling, (std::vector<unsigned>{1, 0}));
    EXPECT_EQ(eval_apply(church(1, 0), two, d->args).code, 0u);
    EXPECT_EQ(eval_apply(church(2, 0), two, d->args).code, 1u);

    // Exhaustive check of the claim: among all 8 argument tuples, the
    // lexicographically first one that separates is (negation, 0).
    int first = -1;
    for (int c = 0; c < 8 && first < 0; ++c) {
        std::vector<Functional> args{fn(pp, c / 2), fn(p, c % 2)};
        if (eval_apply(church(1, 0), two, args) != eval_apply(church(2, 0), two, args)) first = c;
    }
    EXPECT_EQ(first, 2);
}

TEST(Models, EqualTermsAreNotDistinguished) {
    Term a = church(2, 0);
    EXPECT_FALSE(distinguish(a, a, {3}).has_value());
    Term eta = parse_term("\\f:p->p. \\y:p. (\\g:p->p. g) f (f y)");
    EXPECT_FALSE(distinguish(a, eta, {3}).has_value());
}

TEST(Models, DistinguishBudget) {
    Term a = parse_term("\\x:((p->p)->p)->p. \\y:(p->p)->p. x y");
    DistinguishOptions opts;
    opts.max_base = 2;
    opts.tuple_budget = 10;
    EXPECT_THROW(distinguish(a, a, opts), Overflow);
}

TEST(Models, ParallelSearchMatchesSequential) {
    Term a = church(2, 0), b = church(3, 0);
    DistinguishOptions seq, par;
    par.jobs = 3;
    auto x = distinguish(a, b, seq), y = distinguish(a, b, par);
    ASSERT_TRUE(x && y);
    EXPECT_EQ(x->args, y->args);
    EXPECT_EQ(x->model.base, y->model.base);
}

TEST(Models, RelabelIsFunctorial) {
    PModel three{3};
    std::vector<unsigned> s{2, 0, 1}, inv{1, 2, 0};
    for (const auto& f : enumerate(three, parse_type("p->p->p"))) {
        Functional g = relabel(three, f, s);
        EXPECT_EQ(relabel(three, g, inv), f);
        for (unsigned x = 0; x < 3; ++x)
            for (unsigned y = 0; y < 3; ++y) {
                auto fx = apply(three, apply(three, f, fn(p, x)), fn(p, y));
                auto gx = apply(three, apply(three, g, fn(p, s[x])), fn(p, s[y]));
                EXPECT_EQ(gx.code, s[fx.code]);
            }
    }
}

TEST(Models, EvalAgreesWithReferenceSemantics) {
    Rng rng(7);
    TypeGenOptions topt;
    topt.max_depth = 2;
    int n = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Type t = random_type(rng, topt);
        Type ft = random_type(rng, topt);
        Context ctx{{"f", ft}, {"z", p}};
        auto term = random_term(rng, t, ctx, {3, 0.3});
        if (!term) continue;
        for (unsigned h : {2u, 3u}) {
            PModel m{h};
            std::uint64_t cf;
            try {
                cf = cardinality(m, ft);
                cardinality(m, t);
            } catch (const Overflow&) {
                continue;
            }
            if (cf > 4096) continue;
            std::uint64_t fcode = cf - 1;
            std::vector<std::uint64_t> env;
            std::uint64_t expect;
            try {
                if (card(h, t) > 4096) continue;
                expect = oracle(*term, h, env, {{"f", fcode}, {"z", 1}});
            } catch (const TooBig&) {
                continue;
            }
            EXPECT_EQ(eval(*term, m, {{"f", fn(ft, fcode)}, {"z", fn(p, 1)}}).code, expect) << to_string(*term);
            ++n;
        }
    }
    EXPECT_GT(n, 50);
}

TEST(Models, SoundnessOfDecideEq) {
    Rng rng(11);
    TypeGenOptions topt;
    topt.max_depth = 2;
    int n = 0;
    for (int trial = 0; trial < 150; ++trial) {
        Type t = Type::arrow(random_type(rng, topt), random_type(rng, topt));
        auto a = random_term(rng, t, {}, {4, 0.4});
        if (!a) continue;
        Term b = beta_eta_nf(*a).term;
        DistinguishOptions o;
        o.max_base = 3;
        o.tuple_budget = 1 << 16;
        try {
            EXPECT_FALSE(distinguish(*a, b, o).has_value());
            ++n;
        } catch (const Overflow&) {
        }
    }
    EXPECT_GT(n, 30);
}

TEST(Models, Primes) {
    EXPECT_EQ(nth_prime(1), 2u);
    EXPECT_EQ(nth_prime(4), 7u);
    EXPECT_EQ(nth_prime(100), 541u);
    EXPECT_THROW(nth_prime(0), IndexOutOfRange);
}

TEST(Models, KappaValues) {
    EXPECT_EQ(kappa(two, fn(p, 1)), 0u);
    for (const auto& f : enumerate(two, pp)) EXPECT_EQ(kappa(two, f), 7u);
    Type t = parse_type("(p->p)->p");
    Functional phi = from_table(two, t, {1, 0, 0, 0});
    EXPECT_EQ(kappa(two, phi), 19u);
    // psi1..psi4 listed as constant-0, constant-1, identity, negation.
    std::vector<Functional> order{from_table(two, pp, {0, 0}), from_table(two, pp, {1, 1}),
                                  from_table(two, pp, {0, 1}), from_table(two, pp, {1, 0})};
    EXPECT_EQ(argument_codes(two, pp, order), (std::vector<std::uint64_t>{1, 6, 3, 2}));
    EXPECT_EQ(argument_codes(two, pp), (std::vector<std::uint64_t>{1, 2, 3, 6}));
    EXPECT_EQ(argument_codes(two, p), (std::vector<std::uint64_t>{1, 2}));
    EXPECT_THROW(argument_codes(two, pp, {order[0], order[0], order[1], order[2]}), TypeMismatch);
}

TEST(Models, KappaAtBaseThree) {
    PModel three{3};
    // n codes for P -> P at base 3 are 2^0, 2^1, 2^2.
    for (const auto& f : enumerate(three, pp)) EXPECT_EQ(kappa(three, f), 13u);
}

TEST(Models, DefinerForOrdinals) {
    EXPECT_EQ(define_functional(two, fn(p, 1), 5), church(1, 5));
    EXPECT_EQ(define_functional(PModel{4}, fn(p, 3), 0), church(3, 0));
}

TEST(Models, SectionSixDefinerMatchesDisplayedTerm) {
    const unsigned i = 20;
    Type t = parse_type("(p->p)->p");
    Functional phi = from_table(two, t, {1, 0, 0, 0});
    std::vector<Functional> order{from_table(two, pp, {0, 0}), from_table(two, pp, {1, 1}),
                                  from_table(two, pp, {0, 1}), from_table(two, pp, {1, 0})};
    Term got = define_functional(two, phi, i, {order});

    using K = CombinatorKind;
    Term x1 = var("x1", Type::arrow(Type::numeral(i), Type::numeral(i)));
    Term E = combinator(K::Expo, i - 1), M = combinator(K::Mul, i - 1);
    Term tt = app(M, {app(E, {app(x1, church(0, i)), church(2, i)}), app(E, {app(x1, church(1, i)), church(3, i)})});
    auto q = [&](unsigned n, Term then, Term rest) {
        return app(combinator(K::Cond, i),
                   {app(combinator(K::Raise, i), app(combinator(K::Check, i - 1, n), tt)), then, rest});
    };
    Term body = q(1, church(1, i), q(6, church(0, i), q(3, church(0, i), church(0, i))));
    EXPECT_EQ(got, lam("x1", x1.type(), body));
    EXPECT_THROW(define_functional(two, phi, 18), LevelTooSmall);
}

TEST(Models, UnaryDefinersAtSmallLevels) {
    for (const auto& psi : enumerate(two, pp))
        for (unsigned i : {7u, 8u}) {
            Term d = define_functional(two, psi, i);
            for (unsigned m = 0; m < 2; ++m)
                EXPECT_TRUE(decide_eq(app(d, church(m, i)), church(static_cast<unsigned>(table(two, psi)[m]), i)));
        }
}

TEST(Models, IDefinesCheck) {
    EXPECT_TRUE(i_defines_check(church(3, 2), PModel{4}, fn(p, 3), 2));
    EXPECT_FALSE(i_defines_check(church(0, 2), two, fn(p, 1), 2));
    Term neg = define_functional(two, from_table(two, pp, {1, 0}), 7);
    EXPECT_TRUE(i_defines_check(neg, two, from_table(two, pp, {1, 0}), 7));
    EXPECT_FALSE(i_defines_check(neg, two, from_table(two, pp, {0, 1}), 7));
    // Witnesses for elements of P->P only exist from level 7 on.
    Type n5 = Type::numeral(5);
    Term at_zero = lam("f", Type::arrow(n5, n5), app(var("f", Type::arrow(n5, n5)), church(0, 5)));
    EXPECT_THROW(i_defines_check(at_zero, two, fn(parse_type("(p->p)->p"), 0), 5), LevelTooSmall);
}

TEST(Models, LemmaFiveTwoSmallScale) {
    // Closed terms over one atom: the N_i instance i-defines the denotation.
    Rng rng(3);
    const unsigned i = 7;
    int n = 0;
    for (int trial = 0; trial < 60 && n < 12; ++trial) {
        Type t = trial % 2 ? parse_type("(p->p)->p->p") : parse_type("p->p->p");
        auto a = random_term(rng, t, {}, {4, 0.3});
        if (!a) continue;
        Functional v = eval(*a, two);
        Term inst = substitute_types(*a, {{"p", Type::numeral(i)}});
        EXPECT_TRUE(i_defines_check(inst, two, v, i)) << to_string(*a);
        ++n;
    }
    EXPECT_GE(n, 12);
}
