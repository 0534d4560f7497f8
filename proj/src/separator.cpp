#include "tlc/separator.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "tlc/error.hpp"
#include "tlc/normalize.hpp"
#include "tlc/numerals.hpp"

namespace tlc {

namespace {

const Type kP = Type::atom("p");

void collect_atoms(const Term& t, std::set<std::string>& out) {
    auto add = [&](Type ty) {
        auto s = atoms(ty);
        out.insert(s.begin(), s.end());
    };
    add(t.type());
    switch (t.kind()) {
    case TermKind::Lam:
        add(t.binder());
        collect_atoms(t.body(), out);
        break;
    case TermKind::App:
        collect_atoms(t.fun(), out);
        collect_atoms(t.arg(), out);
        break;
    case TermKind::Pair:
        collect_atoms(t.first(), out);
        collect_atoms(t.second(), out);
        break;
    case TermKind::Fst:
    case TermKind::Snd:
        collect_atoms(t.arg(), out);
        break;
    default:
        break;
    }
}

TypeSubstitution all_atoms_to(const std::vector<std::string>& names, Type target) {
    TypeSubstitution sub;
    for (const auto& n : names) sub.emplace(n, target);
    return sub;
}

Term abstract_all(Term body, const std::vector<std::pair<std::string, Type>>& vars) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = lam(it->first, it->second, body);
    return body;
}

Term selector(Type slot, bool second) {
    Term x = var("x", slot), y = var("y", slot);
    return lam("x", slot, lam("y", slot, second ? y : x));
}

bool match_type(Type g, Type t, TypeSubstitution& sub) {
    switch (g.kind()) {
    case TypeKind::Atom: {
        auto [it, fresh] = sub.emplace(g.name(), t);
        return fresh || it->second == t;
    }
    case TypeKind::Terminal:
        return t.is_terminal();
    case TypeKind::Arrow:
        return t.is_arrow() && match_type(g.dom(), t.dom(), sub) && match_type(g.cod(), t.cod(), sub);
    case TypeKind::Product:
        return t.is_product() && match_type(g.left(), t.left(), sub) && match_type(g.right(), t.right(), sub);
    }
    return false;
}

bool match_term(const Term& g, const Term& t, TypeSubstitution& sub) {
    if (g.kind() != t.kind()) return false;
    switch (g.kind()) {
    case TermKind::Bound:
        return g.index() == t.index() && match_type(g.type(), t.type(), sub);
    case TermKind::Free:
        return g.name() == t.name() && match_type(g.type(), t.type(), sub);
    case TermKind::Lam:
        return match_type(g.binder(), t.binder(), sub) && match_term(g.body(), t.body(), sub);
    case TermKind::App:
        return match_term(g.fun(), t.fun(), sub) && match_term(g.arg(), t.arg(), sub);
    case TermKind::Pair:
        return match_term(g.first(), t.first(), sub) && match_term(g.second(), t.second(), sub);
    case TermKind::Fst:
    case TermKind::Snd:
        return match_term(g.arg(), t.arg(), sub);
    case TermKind::Unit:
        return true;
    }
    return false;
}

unsigned choose_level(const std::vector<std::uint64_t>& kappas, const SeparateOptions& options) {
    std::uint64_t need = 0;
    for (auto k : kappas) need = std::max(need, k);
    if (options.level) {
        unsigned i = *options.level;
        if (i % 2 != 0) throw SideConditionViolated("level " + std::to_string(i) + " is odd");
        if (i < need)
            throw LevelTooSmall("level " + std::to_string(i) + " is below kappa = " + std::to_string(need));
        need = i;
    }
    if (need % 2 != 0) ++need;
    if (need > options.max_level)
        throw ResourceExhausted("separation needs level " + std::to_string(need) + ", above the limit " +
                                std::to_string(options.max_level));
    return static_cast<unsigned>(need);
}

}  // namespace

std::vector<std::string> term_atoms(const Term& term) {
    std::set<std::string> s;
    collect_atoms(term, s);
    return {s.begin(), s.end()};
}

bool is_type_instance(const Term& general, const Term& instance) {
    TypeSubstitution sub;
    return match_term(general, instance, sub);
}

SeparationCertificate separate(const Term& a, const Term& b, const Term& c, const Term& d,
                               const SeparateOptions& options) {
    if (a.type() != b.type())
        throw TypeMismatch("separating " + a.type().brief() + " from " + b.type().brief());
    if (c.type() != d.type())
        throw TypeMismatch("targets have types " + c.type().brief() + " and " + d.type().brief());
    if (!is_product_free(a) || !is_product_free(b)) throw IllTyped("separation needs product-free terms");
    if (decide_eq(a, b)) throw EqualTerms();

    std::set<std::string> atom_set;
    collect_atoms(a, atom_set);
    collect_atoms(b, atom_set);
    std::vector<std::string> atom_names(atom_set.begin(), atom_set.end());

    TypeSubstitution to_p = all_atoms_to(atom_names, kP);
    Term a1 = substitute_types(a, to_p), b1 = substitute_types(b, to_p);

    auto free = free_vars(a1);
    for (const auto& v : free_vars(b1))
        if (std::none_of(free.begin(), free.end(), [&](const auto& w) { return w.first == v.first; }))
            free.push_back(v);
    Term a2 = abstract_all(a1, free), b2 = abstract_all(b1, free);

    std::optional<Distinction> found;
    try {
        found = distinguish(a2, b2, options.search);
    } catch (const Overflow& e) {
        throw NotSeparable(options.search.max_base, std::string("model search exceeded its budget: ") + e.what());
    }
    if (!found) throw NotSeparable(options.search.max_base, "no distinguishing model up to the maximal base");

    SeparationCertificate cert;
    cert.a = a;
    cert.b = b;
    cert.c = c;
    cert.d = d;
    cert.model = {found->model.base, found->args, found->relabeling};
    for (const auto& phi : found->args) cert.kappas.push_back(kappa(found->model, phi));
    unsigned level = choose_level(cert.kappas, options);
    cert.level = level;

    std::vector<Term> definers;
    for (const auto& phi : found->args) definers.push_back(define_functional(found->model, phi, level));

    if (options.check_intermediate) {
        TypeSubstitution to_numeral{{"p", Type::numeral(level)}};
        Term under_a = app(substitute_types(a2, to_numeral), definers);
        Term under_b = app(substitute_types(b2, to_numeral), definers);
        if (!decide_eq(under_a, church(0, level)) || !decide_eq(under_b, church(1, level)))
            throw SideConditionViolated("defined arguments do not reproduce the model's values");
    }

    Type target = c.type();
    TypeSubstitution to_target{{"p", target}};
    auto lift = [&](const Term& t) { return target == kP ? t : substitute_types(t, to_target); };

    for (const auto& t : definers) cert.head_args.push_back(lift(t));
    cert.definer_count = definers.size();
    for (unsigned j = level; j >= 2; j -= 2) {
        auto [c1, c2] = lowering_pair(j);
        cert.head_args.push_back(lift(c1));
        cert.head_args.push_back(lift(c2));
    }
    cert.head_args.push_back(lam_raw("u", target, d));
    cert.head_args.push_back(c);

    Type instance = substitute(Type::numeral(level), to_target);
    TypeSubstitution to_instance = all_atoms_to(atom_names, instance);
    cert.a_prime = substitute_types(a, to_instance);
    cert.b_prime = substitute_types(b, to_instance);
    for (const auto& [name, type] : free) cert.bound_vars.emplace_back(name, substitute(type, {{"p", instance}}));
    return cert;
}

SeparationCertificate separate_two(const Term& a, const Term& b, Type slot, const SeparateOptions& options) {
    SeparationCertificate cert = separate(a, b, selector(slot, false), selector(slot, true), options);
    cert.two_valued = true;
    return cert;
}

namespace {

Term closed_side(const SeparationCertificate& cert, bool second) {
    const Term& body = second ? cert.b_prime : cert.a_prime;
    if (!body) throw IllTyped("certificate lacks a primed term");
    for (const auto& [name, type] : cert.bound_vars)
        if (!type) throw IllTyped("bound variable " + name + " has no type");
    return abstract_all(body, cert.bound_vars);
}

}  // namespace

Term applied_side(const SeparationCertificate& cert, bool second) {
    Term head = closed_side(cert, second);
    for (const auto& h : cert.head_args) {
        if (!h) throw IllTyped("empty head argument");
        head = app(head, h);
    }
    return head;
}

bool verify(const SeparationCertificate& cert) {
    if (!cert.c || !cert.d) throw IllTyped("certificate lacks targets");
    if (cert.a && !is_type_instance(cert.a, cert.a_prime)) return false;
    if (cert.b && !is_type_instance(cert.b, cert.b_prime)) return false;
    if (!closed_side(cert, false).is_closed() || !closed_side(cert, true).is_closed()) return false;
    Term left = applied_side(cert, false);
    Term right = applied_side(cert, true);
    if (left.type() != cert.c.type() || right.type() != cert.d.type()) return false;
    if (!decide_eq(left, cert.c) || !decide_eq(right, cert.d)) return false;
    if (cert.two_valued) {
        Type ty = cert.c.type();
        if (!ty.is_arrow() || !ty.cod().is_arrow() || ty.dom() != ty.cod().dom() || ty.dom() != ty.cod().cod())
            return false;
        Type slot = ty.dom();
        Term e = var("e", slot), f = var("f", slot);
        for (const auto& h : cert.head_args)
            if (!h.is_closed()) return false;
        if (!decide_eq(app(left, {e, f}), e) || !decide_eq(app(right, {e, f}), f)) return false;
    }
    return true;
}

}  // namespace tlc
