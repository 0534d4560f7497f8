#include "tlc/term.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "tlc/error.hpp"

namespace tlc {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

TermKind Term::kind() const { return node_->kind; }
Type Term::type() const { return node_->type; }
std::uint32_t Term::index() const { return node_->index; }
const std::string& Term::name() const { return node_->name; }
Type Term::binder() const { return node_->binder; }
const Term& Term::body() const { return node_->a; }
const Term& Term::fun() const { return node_->a; }
const Term& Term::arg() const { return node_->kind == TermKind::App ? node_->b : node_->a; }
const Term& Term::first() const { return node_->a; }
const Term& Term::second() const { return node_->b; }
std::uint32_t Term::loose() const { return node_->loose; }
bool Term::has_free() const { return node_->has_free; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hash; }

Term make_node(TermNode&& n) {
    std::size_t h = mix(static_cast<std::size_t>(n.kind), n.type.id());
    switch (n.kind) {
    case TermKind::Bound:
        h = mix(h, n.index);
        n.loose = n.index + 1;
        break;
    case TermKind::Free:
        h = mix(h, std::hash<std::string>{}(n.name));
        n.has_free = true;
        break;
    case TermKind::Lam:
        h = mix(mix(h, n.binder.id()), n.a.hash());
        n.loose = n.a.loose() > 0 ? n.a.loose() - 1 : 0;
        n.has_free = n.a.has_free();
        n.size = 1 + n.a.size();
        break;
    case TermKind::App:
    case TermKind::Pair:
        h = mix(mix(h, n.a.hash()), n.b.hash());
        n.loose = std::max(n.a.loose(), n.b.loose());
        n.has_free = n.a.has_free() || n.b.has_free();
        n.size = 1 + n.a.size() + n.b.size();
        break;
    case TermKind::Fst:
    case TermKind::Snd:
        h = mix(h, n.a.hash());
        n.loose = n.a.loose();
        n.has_free = n.a.has_free();
        n.size = 1 + n.a.size();
        break;
    case TermKind::Unit:
        break;
    }
    n.hash = h;
    return Term(std::make_shared<const TermNode>(std::move(n)));
}

bool operator==(const Term& x, const Term& y) {
    if (x.node_ == y.node_) return true;
    if (!x.node_ || !y.node_) return false;
    const TermNode& a = *x.node_;
    const TermNode& b = *y.node_;
    if (a.hash != b.hash || a.kind != b.kind || a.type != b.type || a.size != b.size) return false;
    switch (a.kind) {
    case TermKind::Bound:
        return a.index == b.index;
    case TermKind::Free:
        return a.name == b.name;
    case TermKind::Lam:
        return a.binder == b.binder && a.a == b.a;
    case TermKind::App:
    case TermKind::Pair:
        return a.a == b.a && a.b == b.b;
    case TermKind::Fst:
    case TermKind::Snd:
        return a.a == b.a;
    case TermKind::Unit:
        return true;
    }
    return false;
}

Term var(std::string name, Type type) {
    TermNode n;
    n.kind = TermKind::Free;
    n.type = type;
    n.name = std::move(name);
    return make_node(std::move(n));
}

Term bound(std::uint32_t index, Type type) {
    TermNode n;
    n.kind = TermKind::Bound;
    n.type = type;
    n.index = index;
    return make_node(std::move(n));
}

Term lam_raw(std::string hint, Type type, Term body) {
    TermNode n;
    n.kind = TermKind::Lam;
    n.type = Type::arrow(type, body.type());
    n.name = std::move(hint);
    n.binder = type;
    n.a = std::move(body);
    return make_node(std::move(n));
}

Term lam(const std::string& name, Type type, const Term& body) {
    return lam_raw(name, type, close(body, name, type));
}

Term app(Term fun, Term arg) {
    Type ft = fun.type();
    if (!ft.is_arrow())
        throw IllTyped("applying a term of non-arrow type " + ft.brief());
    if (ft.dom() != arg.type())
        throw IllTyped("argument of type " + arg.type().brief() + " where " +
                       ft.dom().brief() + " expected");
    TermNode n;
    n.kind = TermKind::App;
    n.type = ft.cod();
    n.a = std::move(fun);
    n.b = std::move(arg);
    return make_node(std::move(n));
}

Term app(Term fun, std::initializer_list<Term> args) {
    for (const auto& a : args) fun = app(std::move(fun), a);
    return fun;
}

Term app(Term fun, const std::vector<Term>& args) {
    for (const auto& a : args) fun = app(std::move(fun), a);
    return fun;
}

Term pair(Term first, Term second) {
    TermNode n;
    n.kind = TermKind::Pair;
    n.type = Type::product(first.type(), second.type());
    n.a = std::move(first);
    n.b = std::move(second);
    return make_node(std::move(n));
}

Term fst(Term arg) {
    if (!arg.type().is_product())
        throw IllTyped("first projection of non-product type " + arg.type().brief());
    TermNode n;
    n.kind = TermKind::Fst;
    n.type = arg.type().left();
    n.a = std::move(arg);
    return make_node(std::move(n));
}

Term snd(Term arg) {
    if (!arg.type().is_product())
        throw IllTyped("second projection of non-product type " + arg.type().brief());
    TermNode n;
    n.kind = TermKind::Snd;
    n.type = arg.type().right();
    n.a = std::move(arg);
    return make_node(std::move(n));
}

Term unit() {
    static const Term k = [] {
        TermNode n;
        n.type = Type::terminal();
        return make_node(std::move(n));
    }();
    return k;
}

namespace {

// Rebuild a node with new children, keeping kind, annotations and hints.
Term rebuild(const Term& t, Term a, Term b = {}) {
    switch (t.kind()) {
    case TermKind::Lam:
        return lam_raw(t.name(), t.binder(), std::move(a));
    case TermKind::App:
        return app(std::move(a), std::move(b));
    case TermKind::Pair:
        return pair(std::move(a), std::move(b));
    case TermKind::Fst:
        return fst(std::move(a));
    case TermKind::Snd:
        return snd(std::move(a));
    default:
        return t;
    }
}

struct PairHash {
    std::size_t operator()(const std::pair<const TermNode*, std::uint32_t>& k) const noexcept {
        return mix(std::hash<const void*>{}(k.first), k.second);
    }
};

// Structure-preserving map over the term DAG with a depth-indexed memo, so
// shared subterms are rewritten once per binder depth.
class DepthMap {
public:
    using Leaf = std::function<Term(const Term&, std::uint32_t)>;
    using Skip = std::function<bool(const Term&, std::uint32_t)>;

    DepthMap(Leaf leaf, Skip skip) : leaf_(std::move(leaf)), skip_(std::move(skip)) {}

    Term operator()(const Term& t, std::uint32_t depth) {
        if (skip_(t, depth)) return t;
        auto key = std::make_pair(t.node(), depth);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Term r;
        switch (t.kind()) {
        case TermKind::Bound:
        case TermKind::Free:
        case TermKind::Unit:
            r = leaf_(t, depth);
            break;
        case TermKind::Lam:
            r = rebuild(t, (*this)(t.body(), depth + 1));
            break;
        case TermKind::App:
            r = rebuild(t, (*this)(t.fun(), depth), (*this)(t.arg(), depth));
            break;
        case TermKind::Pair:
            r = rebuild(t, (*this)(t.first(), depth), (*this)(t.second(), depth));
            break;
        case TermKind::Fst:
        case TermKind::Snd:
            r = rebuild(t, (*this)(t.arg(), depth));
            break;
        }
        memo_.emplace(key, r);
        return r;
    }

private:
    Leaf leaf_;
    Skip skip_;
    std::unordered_map<std::pair<const TermNode*, std::uint32_t>, Term, PairHash> memo_;
};

}  // namespace

Term open(const Term& body, const Term& replacement) {
    DepthMap map(
        [&](const Term& t, std::uint32_t depth) -> Term {
            if (t.kind() != TermKind::Bound) return t;
            if (t.index() == depth) return replacement;
            if (t.index() > depth) return bound(t.index() - 1, t.type());
            return t;
        },
        [](const Term& t, std::uint32_t depth) { return t.loose() <= depth; });
    return map(body, 0);
}

Term close(const Term& term, const std::string& name, Type type) {
    DepthMap map(
        [&](const Term& t, std::uint32_t depth) -> Term {
            if (t.kind() == TermKind::Free && t.name() == name) {
                if (t.type() != type)
                    throw TypeMismatch("variable " + name + " used at " + t.type().brief() +
                                       " but bound at " + type.brief());
                return bound(depth, type);
            }
            if (t.kind() == TermKind::Bound && t.index() >= depth) return bound(t.index() + 1, t.type());
            return t;
        },
        [](const Term& t, std::uint32_t depth) { return !t.has_free() && t.loose() <= depth; });
    return map(term, 0);
}

Term shift(const Term& term, int delta, std::uint32_t cutoff) {
    if (delta == 0) return term;
    DepthMap map(
        [&](const Term& t, std::uint32_t depth) -> Term {
            if (t.kind() == TermKind::Bound && t.index() >= cutoff + depth) {
                auto idx = static_cast<long long>(t.index()) + delta;
                if (idx < 0) throw IndexOutOfRange("negative de Bruijn index after shift");
                return bound(static_cast<std::uint32_t>(idx), t.type());
            }
            return t;
        },
        [&](const Term& t, std::uint32_t depth) { return t.loose() <= cutoff + depth; });
    return map(term, 0);
}

bool occurs_loose(const Term& term, std::uint32_t index) {
    if (term.loose() <= index) return false;
    switch (term.kind()) {
    case TermKind::Bound:
        return term.index() == index;
    case TermKind::Lam:
        return occurs_loose(term.body(), index + 1);
    case TermKind::App:
    case TermKind::Pair:
        return occurs_loose(term.node()->a, index) || occurs_loose(term.node()->b, index);
    case TermKind::Fst:
    case TermKind::Snd:
        return occurs_loose(term.arg(), index);
    default:
        return false;
    }
}

std::vector<std::pair<std::string, Type>> free_vars(const Term& term) {
    std::vector<std::pair<std::string, Type>> out;
    std::unordered_set<std::string> seen;
    std::unordered_set<const TermNode*> visited;
    std::function<void(const Term&)> go = [&](const Term& t) {
        if (!t.has_free() || !visited.insert(t.node()).second) return;
        switch (t.kind()) {
        case TermKind::Free:
            if (seen.insert(t.name()).second) out.emplace_back(t.name(), t.type());
            break;
        case TermKind::Lam:
            go(t.body());
            break;
        case TermKind::App:
        case TermKind::Pair:
            go(t.node()->a);
            go(t.node()->b);
            break;
        case TermKind::Fst:
        case TermKind::Snd:
            go(t.arg());
            break;
        default:
            break;
        }
    };
    go(term);
    return out;
}

bool occurs_free(const Term& term, const std::string& name) {
    for (const auto& [n, _] : free_vars(term))
        if (n == name) return true;
    return false;
}

Term substitute_term(const Term& term, const std::string& name, const Term& replacement) {
    if (replacement.loose() != 0) throw IllTyped("substituted term has dangling bound indices");
    DepthMap map(
        [&](const Term& t, std::uint32_t) -> Term {
            if (t.kind() == TermKind::Free && t.name() == name) {
                if (t.type() != replacement.type())
                    throw TypeMismatch("substituting " + replacement.type().brief() + " for " + name +
                                       " : " + t.type().brief());
                return replacement;
            }
            return t;
        },
        [](const Term& t, std::uint32_t) { return !t.has_free(); });
    return map(term, 0);
}

Term substitute_types(const Term& term, const TypeSubstitution& sub) {
    std::unordered_map<const TermNode*, Term> memo;
    std::unordered_map<std::uint32_t, Type> tmemo;
    auto ty = [&](Type t) {
        if (auto it = tmemo.find(t.id()); it != tmemo.end()) return it->second;
        Type r = substitute(t, sub);
        tmemo.emplace(t.id(), r);
        return r;
    };
    std::function<Term(const Term&)> go = [&](const Term& t) -> Term {
        if (auto it = memo.find(t.node()); it != memo.end()) return it->second;
        Term r;
        switch (t.kind()) {
        case TermKind::Bound:
            r = bound(t.index(), ty(t.type()));
            break;
        case TermKind::Free:
            r = var(t.name(), ty(t.type()));
            break;
        case TermKind::Unit:
            r = t;
            break;
        case TermKind::Lam:
            r = lam_raw(t.name(), ty(t.binder()), go(t.body()));
            break;
        default:
            r = rebuild(t, go(t.node()->a), t.node()->b ? go(t.node()->b) : Term{});
            break;
        }
        memo.emplace(t.node(), r);
        return r;
    };
    return go(term);
}

bool is_product_free(const Term& term) {
    std::unordered_set<const TermNode*> visited;
    std::function<bool(const Term&)> go = [&](const Term& t) -> bool {
        if (!visited.insert(t.node()).second) return true;
        if (!is_product_free(t.type())) return false;
        switch (t.kind()) {
        case TermKind::Pair:
        case TermKind::Fst:
        case TermKind::Snd:
        case TermKind::Unit:
            return false;
        case TermKind::Lam:
            return is_product_free(t.binder()) && go(t.body());
        case TermKind::App:
            return go(t.fun()) && go(t.arg());
        default:
            return true;
        }
    };
    return go(term);
}

Context::Context(std::initializer_list<std::pair<std::string, Type>> entries) {
    for (const auto& [n, t] : entries) add(n, t);
}

void Context::add(const std::string& name, Type type) {
    if (contains(name)) throw TypeMismatch("duplicate context entry " + name);
    entries_.emplace_back(name, type);
}

std::optional<Type> Context::lookup(const std::string& name) const {
    for (const auto& [n, t] : entries_)
        if (n == name) return t;
    return std::nullopt;
}

Type type_of(const Term& term, const Context& ctx) {
    if (term.loose() != 0) throw IllTyped("term has dangling bound indices");
    for (const auto& [name, type] : free_vars(term)) {
        auto declared = ctx.lookup(name);
        if (!declared) throw UnboundVariable(name);
        if (*declared != type)
            throw TypeMismatch(name + " declared " + declared->brief() + " but used at " +
                               type.brief());
    }
    return term.type();
}

std::string fresh_name(const std::string& hint, const std::vector<std::string>& avoid) {
    auto taken = [&](const std::string& s) { return std::find(avoid.begin(), avoid.end(), s) != avoid.end(); };
    if (!taken(hint)) return hint;
    for (unsigned n = 1;; ++n) {
        std::string candidate = hint + std::to_string(n);
        if (!taken(candidate)) return candidate;
    }
}

}  // namespace tlc
