// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "tlc/ccc.hpp"
#include "tlc/error.hpp"
#include "tlc/models.hpp"
#include "tlc/normalize.hpp"
#include "tlc/numerals.hpp"
#include "tlc/products.hpp"
#include "tlc/random.hpp"
#include "tlc/separator.hpp"
#include "tlc/stack.hpp"
#include "tlc/syntax.hpp"

using namespace tlc;

namespace {

// Pinned tolerances.
constexpr double kCombinatorSeconds = 60.0;
constexpr double kExampleSeconds = 300.0;
constexpr double kTypeNFMillis = 10.0;
constexpr std::size_t kMemBudgetMiB = 2048;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

const Type p = Type::atom("p");
const PModel two{2};

// ---- 1 ---------------------------------------------------------------------

Outcome combinators() {
    using K = CombinatorKind;
    auto start = Clock::now();
    int checked = 0, failed = 0;
    std::string first_failure;
    auto expect = [&](const Term& lhs, const Term& rhs, const std::string& what) {
        ++checked;
        if (!decide_eq(lhs, rhs)) {
            if (failed++ == 0) first_failure = what;
        }
    };
    auto num = [](unsigned n, unsigned i) { return church(n, i); };
    for (unsigned i = 0; i <= 4; ++i) {
        Type ni = Type::numeral(i);
        Term a = var("a", ni), b = var("b", ni);
        std::string at = "_" + std::to_string(i);
        for (unsigned n = 0; n <= 3; ++n) {
            std::string sn = " n=" + std::to_string(n);
            expect(app(combinator(K::Cond, i), {num(n, i), a, b}), n == 0 ? a : b, "C" + at + sn);
            expect(app(combinator(K::Lower, i), num(n, i + 1)), num(n, i), "R" + at + sn);
            for (unsigned m = 0; m <= 3; ++m) {
                std::string snm = sn + " m=" + std::to_string(m);
                unsigned power = 1;
                for (unsigned k = 0; k < n; ++k) power *= m;
                expect(app(combinator(K::Expo, i), {num(n, i + 1), num(m, i + 1)}), num(power, i), "E" + at + snm);
                expect(app(combinator(K::Add, i), {num(n, i), num(m, i)}), num(n + m, i), "S" + at + snm);
                expect(app(combinator(K::Mul, i), {num(n, i), num(m, i)}), num(n * m, i), "M" + at + snm);
            }
            if (i <= 1) expect(app(combinator(K::Pred, i), num(n, i + 3)), num(n == 0 ? 0 : n - 1, i), "P" + at + sn);
            expect(app(combinator(K::Check, i, 0), num(n, i)), num(n == 0 ? 0 : 1, i), "D^0" + at + sn);
            if (i >= 3) expect(app(combinator(K::Check, i, 1), num(n, i)), num(n == 1 ? 0 : 1, i), "D^1" + at + sn);
        }
        Term pr = app(combinator(K::Pair, i), {a, b});
        expect(app(combinator(K::Proj1, i), pr), a, "pi^1" + at);
        expect(app(combinator(K::Proj2, i), pr), b, "pi^2" + at);
        for (unsigned n = 0; n <= 1; ++n)
            expect(app(combinator(K::Raise, i + 1), num(n, i)), num(n, i + 1), "Z_" + std::to_string(i + 1));
    }
    double secs = seconds_since(start);
    std::ostringstream os;
    os << checked << " equalities, " << failed << " failures, " << secs << " s (limit " << kCombinatorSeconds << " s)";
    if (failed) os << ", first: " << first_failure;
    return {failed == 0 && secs < kCombinatorSeconds, os.str()};
}

// ---- 2 ---------------------------------------------------------------------

Term nested(bool second) {
    return parse_term(second ? "\\x:(p->p)->p. x (\\y:p. x (\\z:p. z))" : "\\x:(p->p)->p. x (\\y:p. x (\\z:p. y))");
}

Outcome section_six_example() {
    auto start = Clock::now();
    Term a = nested(false), b = nested(true);
    Type pp = Type::arrow(p, p), t = Type::arrow(pp, p);
    auto d = distinguish(a, b);
    if (!d) return {false, "distinguish found no model"};
    // psi_1..psi_4 in the listed order: constant 0, constant 1, identity, negation.
    std::vector<Functional> psi{from_table(two, pp, {0, 0}), from_table(two, pp, {1, 1}), from_table(two, pp, {0, 1}),
                                from_table(two, pp, {1, 0})};
    Functional phi = from_table(two, t, {1, 0, 0, 0});
    bool model_ok = d->model.base == 2 && d->args.size() == 1 && d->args[0] == phi;
    for (std::size_t j = 0; j < psi.size(); ++j)
        model_ok = model_ok && apply(two, phi, psi[j]).code == (j == 0 ? 1u : 0u);
    auto codes = argument_codes(two, pp, psi);
    bool codes_ok = codes == std::vector<std::uint64_t>{1, 6, 3, 2};
    std::uint64_t k = kappa(two, phi);

    const unsigned i = 20;
    Term definer = define_functional(two, phi, i);
    TypeSubstitution to_level{{"p", Type::numeral(i)}};
    bool zero = decide_eq(app(substitute_types(a, to_level), definer), church(0, i));
    bool one = decide_eq(app(substitute_types(b, to_level), definer), church(1, i));
    double secs = seconds_since(start);

    std::ostringstream os;
    os << "P=" << d->model.base << ", phi(psi1)=1 others 0: " << (model_ok ? "yes" : "no") << ", codes (";
    for (std::size_t j = 0; j < codes.size(); ++j) os << (j ? "," : "") << codes[j];
    os << "), kappa=" << k << ", a phi = [0]_20: " << (zero ? "yes" : "no") << ", b phi = [1]_20: " << (one ? "yes" : "no")
       << ", " << secs << " s (limit " << kExampleSeconds << " s)";
    return {model_ok && codes_ok && k == 19 && zero && one && secs < kExampleSeconds, os.str()};
}

// ---- 3 ---------------------------------------------------------------------

Outcome lemma_exhaustive() {
    auto start = Clock::now();
    Type pp = Type::arrow(p, p);
    int checked = 0, failed = 0;
    std::ostringstream fails;
    for (Type t : {p, pp, Type::arrow(pp, p)})
        for (const auto& phi : enumerate(two, t)) {
            unsigned i = static_cast<unsigned>(kappa(two, phi));
            ++checked;
            if (!i_defines_check(define_functional(two, phi, i), two, phi, i)) {
                ++failed;
                fails << " " << describe(two, phi);
            }
        }
    std::ostringstream os;
    os << checked << " functionals (2+4+16 expected) at i = kappa, full depth, " << failed << " failures, "
       << seconds_since(start) << " s";
    if (failed) os << ":" << fails.str();
    return {checked == 22 && failed == 0, os.str()};
}

// ---- 4 ---------------------------------------------------------------------

Outcome two_valued_separation() {
    const char* pairs[][2] = {
        {"\\x:p->p. \\y:p. x y", "\\x:p->p. \\y:p. x (x y)"},
        {"\\x:(p->p)->p. x (\\y:p. x (\\z:p. y))", "\\x:(p->p)->p. x (\\y:p. x (\\z:p. z))"},
        {"\\x:p. \\y:p. x", "\\x:p. \\y:p. y"},
        {"\\f:p->p->p. \\x:p. \\y:p. f x y", "\\f:p->p->p. \\x:p. \\y:p. f y x"},
        {"\\x:p->p. \\y:p. y", "\\x:p->p. \\y:p. x (x (x y))"},
        {"\\f:(p->p)->p. \\g:p->p. f g", "\\f:(p->p)->p. \\g:p->p. f (\\z:p. g (g z))"},
    };
    Term e = var("e", p), f = var("f", p);
    int ok = 0, total = 0;
    std::ostringstream os;
    for (const auto& pr : pairs) {
        ++total;
        try {
            auto cert = separate_two(parse_term(pr[0]), parse_term(pr[1]));
            bool good = verify(cert) && decide_eq(app(applied_side(cert, false), {e, f}), e) &&
                        decide_eq(app(applied_side(cert, true), {e, f}), f);
            if (good) ++ok;
            os << (total > 1 ? ", " : "") << "level " << cert.level << (good ? " ok" : " FAILED");
        } catch (const Error& err) {
            os << (total > 1 ? ", " : "") << "error: " << err.what();
        }
    }
    std::ostringstream head;
    head << ok << "/" << total << " pairs verified with K a e f = e and K b e f = f (" << os.str() << ")";
    return {ok == total && total >= 5, head.str()};
}

// ---- 5 ---------------------------------------------------------------------

Outcome type_normal_forms() {
    Rng rng(2024);
    TypeGenOptions gen;
    gen.atoms = {"p", "q", "r"};
    gen.max_depth = 5;
    gen.products = true;
    gen.terminal = true;
    int types = 0, bad_steps = 0, disagree = 0, not_normal = 0;
    std::size_t steps = 0, by_whole = 0, by_redex = 0, by_rule = 0, undetermined = 0;
    double worst_ms = 0;
    while (types < 1000) {
        Type t = random_type(rng, gen);
        if (tree_size(t) > 30) continue;
        ++types;
        for (unsigned w : {2u, 3u}) {
            TypeNFOptions inner;
            inner.atom_weight = w;
            inner.record_measures = false;
            auto start = Clock::now();
            auto tr = type_nf(t, inner);
            worst_ms = std::max(worst_ms, seconds_since(start) * 1000);
            TypeNFOptions outer = inner;
            outer.order = ReductionOrder::Outermost;
            if (type_nf(t, outer).output != tr.output) ++disagree;
            if (!is_product_normal(tr.output)) ++not_normal;
            for (const auto& st : tr.steps) {
                ++steps;
                StepCheck c = check_step(st, w);
                switch (c.scope) {
                case MeasureScope::WholeType: ++by_whole; break;
                case MeasureScope::Redex: ++by_redex; break;
                case MeasureScope::RuleInequality: ++by_rule; break;
                case MeasureScope::Undetermined: ++undetermined; break;
                }
                if (!c.decreases) ++bad_steps;
            }
        }
    }
    std::ostringstream os;
    os << types << " types x weights {2,3}, " << steps << " steps, " << bad_steps
       << " not decreasing (exact on whole type " << by_whole << ", on redex " << by_redex << ", by rule inequality "
       << by_rule << ", undetermined " << undetermined << "), strategy disagreements " << disagree
       << ", non-normal outputs " << not_normal << ", worst " << worst_ms << " ms/type (limit " << kTypeNFMillis
       << " ms)";
    return {bad_steps == 0 && disagree == 0 && not_normal == 0 && worst_ms < kTypeNFMillis, os.str()};
}

// ---- 6 ---------------------------------------------------------------------

Outcome isomorphisms() {
    Rng rng(61);
    TypeGenOptions gen;
    gen.atoms = {"p", "q"};
    gen.max_depth = 3;
    gen.products = true;
    gen.terminal = true;
    int ok = 0, total = 0;
    auto start = Clock::now();
    for (; total < 50; ++total)
        if (check_iso(build_iso(random_type(rng, gen)))) ++ok;
    std::ostringstream os;
    os << ok << "/" << total << " random types: both round trips equal the identity, " << seconds_since(start) << " s";
    return {ok == total, os.str()};
}

// ---- 7 ---------------------------------------------------------------------

Outcome product_separation() {
    const char* pairs[][2] = {
        {"\\x:p*p. <p1 x, p2 x>", "\\x:p*p. <p2 x, p1 x>"},
        {"\\x:(p*p)*p. <p2 (p1 x), p1 (p1 x)>", "\\x:(p*p)*p. <p1 (p1 x), p2 x>"},
        {"\\f:p*T->p. \\x:p. f <x, k>", "\\f:p*T->p. \\x:p. x"},
        {"\\x:p*(q*q). <p1 x, <p1 (p2 x), p2 (p2 x)>>", "\\x:p*(q*q). <p1 x, <p2 (p2 x), p1 (p2 x)>>"},
        {"\\f:p->p*p. \\x:p. p1 (f x)", "\\f:p->p*p. \\x:p. p2 (f x)"},
    };
    int ok = 0, total = 0;
    std::ostringstream os;
    for (const auto& pr : pairs) {
        ++total;
        try {
            auto cert = separate_prod(parse_term(pr[0]), parse_term(pr[1]));
            // pi^i (h a') h_1 .. h_l (p1 x) (p2 x) against p1 x and p2 x.
            Term x = var("x", Type::product(cert.slot, cert.slot));
            bool ends = true;
            for (bool second : {false, true}) {
                Term lhs = product_side(cert, second);
                for (const auto& h : cert.component.head_args) lhs = app(lhs, h);
                ends = ends && decide_eq(app(lhs, {fst(x), snd(x)}), second ? snd(x) : fst(x));
            }
            bool good = ends && verify(cert);
            if (good) ++ok;
            os << (total > 1 ? ", " : "") << "i=" << cert.index << "/" << cert.arity << (good ? " ok" : " FAILED");
        } catch (const Error& err) {
            os << (total > 1 ? ", " : "") << "error: " << err.what();
        }
    }
    std::ostringstream head;
    head << ok << "/" << total << " pairs (swap pair first) verified ending in p1 x / p2 x (" << os.str() << ")";
    return {ok == total && total >= 4, head.str()};
}

// ---- 8 ---------------------------------------------------------------------

Outcome ccc() {
    auto report = check_axioms({20, 8});
    bool axioms = report.size() == 7;
    std::ostringstream os;
    for (const auto& r : report) {
        axioms = axioms && r.instances == 20 && r.passed == 20;
        os << r.name << " " << r.passed << "/" << r.instances << ", ";
    }
    auto cert = collapse(proj1_arrow(p, p), proj2_arrow(p, p));
    bool collapsed = verify(cert) && cert.target1 == proj1_arrow(cert.object, cert.object) &&
                     cert.target2 == proj2_arrow(cert.object, cert.object);

    Rng rng(88);
    TypeGenOptions gen;
    gen.atoms = {"p", "q"};
    gen.max_depth = 2;
    gen.products = true;
    gen.terminal = true;
    int functorial = 0;
    for (int k = 0; k < 200; ++k) {
        Type s = random_type(rng, gen);
        Arrow f = random_arrow(rng, s, 2, gen);
        Arrow g = random_arrow(rng, f.target(), 2, gen);
        Term x = var("x", s);
        Term composed = lam("x", s, app(to_lambda(g), app(to_lambda(f), x)));
        if (decide_eq(to_lambda(compose(g, f)), composed) && decide_eq(to_lambda(compile(composed)), composed))
            ++functorial;
    }
    os << "collapse of p1[p,p], p2[p,p] replays: " << (collapsed ? "yes" : "no") << ", functoriality " << functorial
       << "/200";
    return {axioms && collapsed && functorial == 200, os.str()};
}

// ---- 9 ---------------------------------------------------------------------

Outcome oracle_cross_check() {
    Rng rng(9);
    TypeGenOptions gen;
    gen.max_depth = 3;
    TermGenOptions terms{4, 0.3, false};
    DistinguishOptions search;
    search.max_base = 3;
    int pairs = 0, equal = 0, separated = 0, violations = 0, inconclusive = 0;
    while (pairs < 200) {
        Type t = random_type(rng, gen);
        auto a = random_term(rng, t, {}, terms);
        if (!a) continue;
        std::optional<Term> b;
        switch (rng() % 3) {
        case 0: b = long_nf(*a).term; break;
        default: b = random_term(rng, t, {}, terms);
        }
        if (!b) continue;
        std::optional<Distinction> d;
        try {
            d = distinguish(*a, *b, search);
        } catch (const Overflow&) {
            ++inconclusive;
            continue;
        }
        ++pairs;
        bool eq = decide_eq(*a, *b);
        equal += eq;
        separated += d.has_value();
        if (eq && d) ++violations;
    }
    std::ostringstream os;
    os << pairs << " pairs (" << equal << " equal, " << separated << " separated by a model of size <= 3), "
       << violations << " violations, " << inconclusive << " resampled because the model search exceeded its budget";
    return {violations == 0, os.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, combinators},  {2, section_six_example}, {3, lemma_exhaustive}, {4, two_valued_separation},
        {5, type_normal_forms}, {6, isomorphisms}, {7, product_separation}, {8, ccc},
        {9, oracle_cross_check},
    };
    int failures = 0;
    run_with_stack([&] {
        CellBudgetScope budget(kMemBudgetMiB * (std::size_t{1} << 20) / kCellBytes);
        for (const auto& [n, run] : criteria) {
            Outcome o;
            try {
                o = run();
            } catch (const std::exception& e) {
                o = {false, std::string("error: ") + e.what()};
            }
            if (!o.pass) ++failures;
            std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
        }
    });
    std::cout << (failures ? "acceptance: FAIL" : "acceptance: PASS") << " (" << 9 - failures << "/9)" << std::endl;
    return failures ? 1 : 0;
}
