#include "tlc/products.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "tlc/error.hpp"
#include "tlc/normalize.hpp"

namespace tlc {

namespace {

const Type kT = Type::terminal();

struct RuleName {
    TypeRule rule;
    const char* name;
};

constexpr RuleName kRuleNames[] = {
    {TypeRule::CurryCod, "curryCod"}, {TypeRule::CurryDom, "curryDom"}, {TypeRule::Assoc, "assoc"},
    {TypeRule::ArrT, "arrT"},         {TypeRule::TArr, "Tarr"},         {TypeRule::ProdT, "prodT"},
    {TypeRule::TProd, "Tprod"},
};

mpz_class measure_rec(Type t, const mpz_class& weight, std::size_t max_bits,
                      std::unordered_map<std::uint32_t, mpz_class>& memo) {
    if (t.is_atom() || t.is_terminal()) return weight;
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    mpz_class l = measure_rec(t.left(), weight, max_bits, memo);
    mpz_class r = measure_rec(t.right(), weight, max_bits, memo);
    mpz_class out;
    if (t.is_product()) {
        out = (l + 1) * r;
    } else {
        std::size_t base_bits = mpz_sizeinbase(r.get_mpz_t(), 2);
        // r^l >= 2^(l * (base_bits - 1))
        if (!l.fits_ulong_p() || (base_bits > 1 && l.get_ui() > max_bits / (base_bits - 1)))
            throw Overflow("measure of " + t.brief() + " exceeds " + std::to_string(max_bits) + " bits");
        mpz_pow_ui(out.get_mpz_t(), r.get_mpz_t(), l.get_ui());
    }
    if (mpz_sizeinbase(out.get_mpz_t(), 2) > max_bits)
        throw Overflow("measure of " + t.brief() + " exceeds " + std::to_string(max_bits) + " bits");
    memo.emplace(t.id(), out);
    return out;
}

bool find_redex(Type t, ReductionOrder order, TypePath& path) {
    bool root = redex_rule(t).has_value();
    if (order == ReductionOrder::Outermost && root) return true;
    if (t.is_arrow() || t.is_product()) {
        path.push_back('L');
        if (find_redex(t.left(), order, path)) return true;
        path.back() = 'R';
        if (find_redex(t.right(), order, path)) return true;
        path.pop_back();
    }
    return root;
}

Term compose(const IsoWitness& first, const Term& second_forward, Type source) {
    Term x = var("x", source);
    return lam("x", source, app(second_forward, app(first.forward, x)));
}

IsoWitness lift(Type type, const TypePath& path, std::size_t at, const IsoWitness& local) {
    if (at == path.size()) return local;
    bool left = path[at] == 'L';
    IsoWitness inner = lift(left ? type.left() : type.right(), path, at + 1, local);
    IsoWitness out;
    out.source = type;
    if (type.is_arrow()) {
        Type dom = type.dom(), cod = type.cod();
        if (left) {
            out.target = Type::arrow(inner.target, cod);
            Term h = var("h", type), k = var("k", out.target);
            Term x = var("x", inner.target), y = var("y", dom);
            out.forward = lam("h", type, lam("x", inner.target, app(h, app(inner.backward, x))));
            out.backward = lam("k", out.target, lam("y", dom, app(k, app(inner.forward, y))));
        } else {
            out.target = Type::arrow(dom, inner.target);
            Term h = var("h", type), k = var("k", out.target), x = var("x", dom);
            out.forward = lam("h", type, lam("x", dom, app(inner.forward, app(h, x))));
            out.backward = lam("k", out.target, lam("x", dom, app(inner.backward, app(k, x))));
        }
        return out;
    }
    if (!type.is_product()) throw IllTyped("path leaves the type");
    out.target = left ? Type::product(inner.target, type.right()) : Type::product(type.left(), inner.target);
    Term s = var("s", type), q = var("q", out.target);
    if (left) {
        out.forward = lam("s", type, pair(app(inner.forward, fst(s)), snd(s)));
        out.backward = lam("q", out.target, pair(app(inner.backward, fst(q)), snd(q)));
    } else {
        out.forward = lam("s", type, pair(fst(s), app(inner.forward, snd(s))));
        out.backward = lam("q", out.target, pair(fst(q), app(inner.backward, snd(q))));
    }
    return out;
}

Term normalized(const Term& t) { return beta_eta_nf(t).term; }

}  // namespace

std::string rule_name(TypeRule rule) {
    for (const auto& r : kRuleNames)
        if (r.rule == rule) return r.name;
    return "?";
}

TypeRule parse_rule(const std::string& name) {
    for (const auto& r : kRuleNames)
        if (name == r.name) return r.rule;
    throw SchemaError("unknown type rule '" + name + "'");
}

mpz_class measure(Type type, unsigned atom_weight, std::size_t max_bits) {
    if (atom_weight < 2) throw SideConditionViolated("atom weight must be at least 2");
    std::unordered_map<std::uint32_t, mpz_class> memo;
    return measure_rec(type, mpz_class(atom_weight), max_bits, memo);
}

Type subtype_at(Type type, const TypePath& path) {
    for (char c : path) {
        if (!type.is_arrow() && !type.is_product()) throw IllTyped("path leaves the type");
        type = c == 'L' ? type.left() : type.right();
    }
    return type;
}

Type replace_at(Type type, const TypePath& path, Type replacement) {
    auto go = [&](auto& self, Type t, std::size_t at) -> Type {
        if (at == path.size()) return replacement;
        if (!t.is_arrow() && !t.is_product()) throw IllTyped("path leaves the type");
        Type l = t.left(), r = t.right();
        if (path[at] == 'L') l = self(self, l, at + 1);
        else r = self(self, r, at + 1);
        return t.is_arrow() ? Type::arrow(l, r) : Type::product(l, r);
    };
    return go(go, type, 0);
}

std::optional<TypeRule> redex_rule(Type t) {
    if (t.is_arrow()) {
        if (t.cod().is_product()) return TypeRule::CurryCod;
        if (t.dom().is_product()) return TypeRule::CurryDom;
        if (t.cod().is_terminal()) return TypeRule::ArrT;
        if (t.dom().is_terminal()) return TypeRule::TArr;
    } else if (t.is_product()) {
        if (t.right().is_product()) return TypeRule::Assoc;
        if (t.right().is_terminal()) return TypeRule::ProdT;
        if (t.left().is_terminal()) return TypeRule::TProd;
    }
    return std::nullopt;
}

Type contract(Type t, TypeRule rule) {
    auto bad = [&]() -> Type { throw IllTyped("rule " + rule_name(rule) + " does not apply to " + t.brief()); };
    switch (rule) {
    case TypeRule::CurryCod:
        if (!t.is_arrow() || !t.cod().is_product()) return bad();
        return Type::product(Type::arrow(t.dom(), t.cod().left()), Type::arrow(t.dom(), t.cod().right()));
    case TypeRule::CurryDom:
        if (!t.is_arrow() || !t.dom().is_product()) return bad();
        return Type::arrow(t.dom().left(), Type::arrow(t.dom().right(), t.cod()));
    case TypeRule::Assoc:
        if (!t.is_product() || !t.right().is_product()) return bad();
        return Type::product(Type::product(t.left(), t.right().left()), t.right().right());
    case TypeRule::ArrT:
        if (!t.is_arrow() || !t.cod().is_terminal()) return bad();
        return kT;
    case TypeRule::TArr:
        if (!t.is_arrow() || !t.dom().is_terminal()) return bad();
        return t.cod();
    case TypeRule::ProdT:
        if (!t.is_product() || !t.right().is_terminal()) return bad();
        return t.left();
    case TypeRule::TProd:
        if (!t.is_product() || !t.left().is_terminal()) return bad();
        return t.right();
    }
    return bad();
}

bool is_product_normal(Type type) {
    std::unordered_map<std::uint32_t, bool> memo;
    auto go = [&](auto& self, Type t) -> bool {
        if (!t.is_arrow() && !t.is_product()) return true;
        if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
        bool ok = !redex_rule(t) && self(self, t.left()) && self(self, t.right());
        memo.emplace(t.id(), ok);
        return ok;
    };
    return go(go, type);
}

TypeNFTrace type_nf(Type type, const TypeNFOptions& options) {
    TypeNFTrace trace;
    trace.input = type;
    auto weigh = [&](Type t) -> std::optional<mpz_class> {
        if (!options.record_measures) return std::nullopt;
        try {
            return measure(t, options.atom_weight, options.max_bits);
        } catch (const Overflow&) {
            return std::nullopt;
        }
    };
    Type cur = type;
    std::optional<mpz_class> cur_measure = weigh(cur);
    for (;;) {
        TypePath path;
        if (!find_redex(cur, options.order, path)) break;
        Type sub = subtype_at(cur, path);
        TypeRule rule = *redex_rule(sub);
        Type next = replace_at(cur, path, contract(sub, rule));
        TypeStep step{path, rule, cur, next, cur_measure, weigh(next)};
        cur_measure = step.measure_after;
        trace.steps.push_back(std::move(step));
        cur = next;
    }
    trace.output = cur;
    return trace;
}

StepCheck check_step(const TypeStep& step, unsigned atom_weight, std::size_t max_bits) {
    auto compare = [&](Type before, Type after, MeasureScope scope) -> std::optional<StepCheck> {
        try {
            return StepCheck{measure(after, atom_weight, max_bits) < measure(before, atom_weight, max_bits), scope};
        } catch (const Overflow&) {
            return std::nullopt;
        }
    };
    if (auto r = compare(step.before, step.after, MeasureScope::WholeType)) return *r;
    Type redex = subtype_at(step.before, step.position);
    if (auto r = compare(redex, subtype_at(step.after, step.position), MeasureScope::Redex)) return *r;

    // Exact value when it fits, otherwise 2^max_bits, which it exceeds.
    auto lower = [&](Type t) -> mpz_class {
        try {
            return measure(t, atom_weight, max_bits);
        } catch (const Overflow&) {
            mpz_class out;
            mpz_ui_pow_ui(out.get_mpz_t(), 2, max_bits);
            return out;
        }
    };
    try {
        if (contract(redex, step.rule) != subtype_at(step.after, step.position)) return {};
    } catch (const IllTyped&) {
        return {};
    }
    bool holds = true;
    switch (step.rule) {
    case TypeRule::CurryCod:
        holds = lower(redex.dom()) >= 2;
        break;
    case TypeRule::CurryDom:
        holds = lower(redex.dom().right()) >= 1 && lower(redex.cod()) >= 2;
        break;
    case TypeRule::ArrT:
        holds = lower(redex.dom()) >= 2;
        break;
    case TypeRule::TArr:
        holds = lower(redex.cod()) >= 2 && atom_weight >= 2;
        break;
    case TypeRule::Assoc:
    case TypeRule::ProdT:
    case TypeRule::TProd:
        break;
    }
    return {holds, MeasureScope::RuleInequality};
}

IsoWitness rule_iso(Type t, TypeRule rule) {
    IsoWitness w;
    w.source = t;
    w.target = contract(t, rule);
    Type y = w.target;
    switch (rule) {
    case TypeRule::CurryCod: {
        Type a = t.dom();
        Term h = var("h", t), q = var("q", y), x = var("a", a);
        w.forward = lam("h", t, pair(lam("a", a, fst(app(h, x))), lam("a", a, snd(app(h, x)))));
        w.backward = lam("q", y, lam("a", a, pair(app(fst(q), x), app(snd(q), x))));
        break;
    }
    case TypeRule::CurryDom: {
        Type a1 = t.dom().left(), a2 = t.dom().right();
        Term h = var("h", t), k = var("k", y), x = var("x", a1), u = var("y", a2), z = var("z", t.dom());
        w.forward = lam("h", t, lam("x", a1, lam("y", a2, app(h, pair(x, u)))));
        w.backward = lam("k", y, lam("z", t.dom(), app(k, {fst(z), snd(z)})));
        break;
    }
    case TypeRule::Assoc: {
        Term s = var("s", t), r = var("r", y);
        w.forward = lam("s", t, pair(pair(fst(s), fst(snd(s))), snd(snd(s))));
        w.backward = lam("r", y, pair(fst(fst(r)), pair(snd(fst(r)), snd(r))));
        break;
    }
    case TypeRule::ArrT: {
        Term u = var("u", kT);
        w.forward = lam("h", t, unit());
        w.backward = lam("u", kT, lam("a", t.dom(), u));
        break;
    }
    case TypeRule::TArr: {
        Term h = var("h", t), b = var("b", y);
        w.forward = lam("h", t, app(h, unit()));
        w.backward = lam("b", y, lam("u", kT, b));
        break;
    }
    case TypeRule::ProdT: {
        Term s = var("s", t), a = var("a", y);
        w.forward = lam("s", t, fst(s));
        w.backward = lam("a", y, pair(a, unit()));
        break;
    }
    case TypeRule::TProd: {
        Term s = var("s", t), a = var("a", y);
        w.forward = lam("s", t, snd(s));
        w.backward = lam("a", y, pair(unit(), a));
        break;
    }
    }
    return w;
}

IsoWitness build_iso(Type type) {
    Term x = var("x", type);
    IsoWitness total{type, type, lam("x", type, x), lam("x", type, x)};
    for (const auto& step : type_nf(type, {ReductionOrder::Innermost, 2, false}).steps) {
        IsoWitness local = lift(step.before, step.position, 0, rule_iso(subtype_at(step.before, step.position), step.rule));
        Term fwd = compose(total, local.forward, type);
        Term y = var("y", local.target);
        Term bwd = lam("y", local.target, app(total.backward, app(local.backward, y)));
        total = {type, local.target, normalized(fwd), normalized(bwd)};
    }
    return total;
}

bool check_iso(const IsoWitness& iso) {
    Term x = var("x", iso.source), y = var("y", iso.target);
    return decide_eq(lam("x", iso.source, app(iso.backward, app(iso.forward, x))), lam("x", iso.source, x)) &&
           decide_eq(lam("y", iso.target, app(iso.forward, app(iso.backward, y))), lam("y", iso.target, y));
}

Components split(const Term& term) {
    if (!term.is_closed()) throw IllTyped("split needs a closed term");
    Type ty = term.type();
    if (!is_product_normal(ty)) throw IllTyped("type " + ty.brief() + " is not in product normal form");
    Components out;
    if (ty.is_terminal()) {
        out.unit = true;
        return out;
    }
    Term t = long_nf(term).term;
    while (ty.is_product()) {
        if (t.kind() != TermKind::Pair) throw IllTyped("long normal form is not a pair");
        out.parts.push_back(t.second());
        t = t.first();
        ty = ty.left();
    }
    out.parts.push_back(t);
    std::reverse(out.parts.begin(), out.parts.end());
    return out;
}

std::size_t differing_component(const Term& a, const Term& b, const IsoWitness& iso) {
    if (a.type() != b.type()) throw TypeMismatch("comparing " + a.type().brief() + " with " + b.type().brief());
    if (a.type() != iso.source)
        throw TypeMismatch("isomorphism starts at " + iso.source.brief() + ", terms have " + a.type().brief());
    Components ca = split(app(iso.forward, a)), cb = split(app(iso.forward, b));
    if (ca.unit || cb.unit) throw EqualTerms();
    if (ca.parts.size() != cb.parts.size()) throw IllTyped("component counts differ");
    for (std::size_t i = 0; i < ca.parts.size(); ++i)
        if (!decide_eq(ca.parts[i], cb.parts[i])) return i + 1;
    throw EqualTerms();
}

Term projector(std::size_t n, std::size_t i, Type type) {
    if (n == 0 || i == 0 || i > n)
        throw IndexOutOfRange("component " + std::to_string(i) + " of " + std::to_string(n));
    Term x = var("x", type);
    Term body = x;
    for (std::size_t m = n; m > 1; --m) {
        if (!body.type().is_product())
            throw IllTyped(body.type().brief() + " has fewer than " + std::to_string(n) + " components");
        if (i == m) {
            body = snd(body);
            break;
        }
        body = fst(body);
    }
    return lam("x", type, body);
}

ProductCertificate separate_prod(const Term& a, const Term& b, const SeparateOptions& options) {
    if (a.type() != b.type()) throw TypeMismatch("separating " + a.type().brief() + " from " + b.type().brief());
    if (!a.is_closed() || !b.is_closed()) throw IllTyped("product separation needs closed terms");
    if (decide_eq(a, b)) throw EqualTerms();

    IsoWitness iso = build_iso(a.type());
    std::size_t index = differing_component(a, b, iso);
    Components ca = split(app(iso.forward, a)), cb = split(app(iso.forward, b));

    ProductCertificate cert;
    cert.a = a;
    cert.b = b;
    cert.slot = Type::atom("p");
    cert.arity = ca.parts.size();
    cert.index = index;
    cert.component = separate_two(ca.parts[index - 1], cb.parts[index - 1], cert.slot, options);

    Type instance = substitute(Type::numeral(cert.component.level), {{"p", cert.component.c.type()}});
    std::vector<std::string> names = term_atoms(a);
    for (const auto& n : term_atoms(b)) names.push_back(n);
    for (const auto& n : atoms(iso.target)) names.push_back(n);
    TypeSubstitution sub;
    for (const auto& n : names) sub.emplace(n, instance);
    cert.substitution = sub;
    cert.a_prime = substitute_types(a, sub);
    cert.b_prime = substitute_types(b, sub);
    cert.iso = {substitute(iso.source, sub), substitute(iso.target, sub), substitute_types(iso.forward, sub),
                substitute_types(iso.backward, sub)};
    return cert;
}

Term product_side(const ProductCertificate& cert, bool second) {
    const Term& t = second ? cert.b_prime : cert.a_prime;
    if (!t || !cert.iso.forward) throw IllTyped("incomplete product certificate");
    return app(projector(cert.arity, cert.index, cert.iso.target), app(cert.iso.forward, t));
}

bool verify(const ProductCertificate& cert) {
    if (!cert.slot) throw IllTyped("product certificate lacks a slot type");
    if (cert.a && !is_type_instance(cert.a, cert.a_prime)) return false;
    if (cert.b && !is_type_instance(cert.b, cert.b_prime)) return false;
    if (!cert.a_prime.is_closed() || !cert.b_prime.is_closed() || !cert.iso.forward.is_closed()) return false;
    for (const auto& h : cert.component.head_args)
        if (!h.is_closed()) return false;
    Type xt = Type::product(cert.slot, cert.slot);
    Term x = var("x", xt);
    for (bool second : {false, true}) {
        Term lhs = product_side(cert, second);
        for (const auto& h : cert.component.head_args) lhs = app(lhs, h);
        lhs = app(lhs, {fst(x), snd(x)});
        if (lhs.type() != cert.slot) return false;
        if (!decide_eq(lhs, second ? snd(x) : fst(x))) return false;
    }
    return true;
}

}  // namespace tlc
