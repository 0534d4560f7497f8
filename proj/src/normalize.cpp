#include "tlc/normalize.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>

#include "tlc/error.hpp"

namespace tlc {

namespace {

std::atomic<std::size_t> g_budget{0};
thread_local std::size_t t_live = 0;

void claim_cell() {
    std::size_t budget = g_budget.load(std::memory_order_relaxed);
    if (budget != 0 && t_live >= budget)
        throw ResourceExhausted("evaluator exceeded " + std::to_string(budget) + " live cells");
    ++t_live;
}

struct Value;
struct Thunk;
struct EnvNode;
using V = std::shared_ptr<const Value>;
using Lazy = std::shared_ptr<Thunk>;
using Env = std::shared_ptr<const EnvNode>;

struct Counted {
    Counted() { claim_cell(); }
    Counted(const Counted&) = delete;
    ~Counted() { --t_live; }
};

struct EnvNode : Counted {
    Lazy value;
    Env next;
    EnvNode(Lazy v, Env n) : value(std::move(v)), next(std::move(n)) {}
};

enum class VKind : std::uint8_t { Closure, Pair, Unit, Var, Free, App, Fst, Snd };

struct Value : Counted {
    VKind kind;
    Type type;      // neutrals only
    std::uint32_t level = 0;
    Term term;      // Closure: the abstraction; Free: the variable
    Env env;
    V head;         // App, Fst, Snd: the neutral being eliminated
    Lazy a, b;      // App: a is the argument; Pair: components
    Value(VKind k, Type t) : kind(k), type(t) {}
};

V eval(const Term& t, const Env& env);

// Suspended evaluation, run at most once.
struct Thunk : Counted {
    Term term;
    Env env;
    V value;
    explicit Thunk(V v) : value(std::move(v)) {}
    Thunk(Term t, Env e) : term(std::move(t)), env(std::move(e)) {}

    const V& force() {
        if (!value) {
            value = eval(term, env);
            term = Term{};
            env.reset();
        }
        return value;
    }
};

bool is_neutral(const Value& v) { return v.kind >= VKind::Var; }

V make(VKind k, Type t = {}) { return std::make_shared<Value>(k, t); }

V unit_value() {
    thread_local V u = make(VKind::Unit);
    return u;
}

Lazy ready(V v) { return std::make_shared<Thunk>(std::move(v)); }

const Lazy& lookup(const Env& env, std::uint32_t index) {
    const EnvNode* e = env.get();
    for (std::uint32_t i = 0; i < index; ++i) e = e->next.get();
    return e->value;
}

V apply_value(const V& f, const Lazy& arg) {
    if (f->kind == VKind::Closure)
        return eval(f->term.body(), std::make_shared<EnvNode>(arg, f->env));
    auto n = std::make_shared<Value>(VKind::App, f->type.cod());
    n->head = f;
    n->a = arg;
    return n;
}

V project(const V& p, bool second) {
    if (p->kind == VKind::Pair) return second ? p->b->force() : p->a->force();
    auto n = std::make_shared<Value>(second ? VKind::Snd : VKind::Fst,
                                     second ? p->type.right() : p->type.left());
    n->head = p;
    return n;
}

Lazy delay(const Term& t, const Env& env) {
    switch (t.kind()) {
    case TermKind::Bound:
        return lookup(env, t.index());
    case TermKind::Lam:
    case TermKind::Free:
    case TermKind::Unit:
        return ready(eval(t, env));
    default:
        return std::make_shared<Thunk>(t, env);
    }
}

V eval(const Term& t, const Env& env) {
    switch (t.kind()) {
    case TermKind::Bound:
        return lookup(env, t.index())->force();
    case TermKind::Free: {
        auto n = std::make_shared<Value>(VKind::Free, t.type());
        n->term = t;
        return n;
    }
    case TermKind::Lam: {
        auto c = std::make_shared<Value>(VKind::Closure, Type{});
        c->term = t;
        c->env = env;
        return c;
    }
    case TermKind::App: {
        V f = eval(t.fun(), env);
        return apply_value(f, delay(t.arg(), env));
    }
    case TermKind::Pair: {
        auto p = std::make_shared<Value>(VKind::Pair, Type{});
        p->a = delay(t.first(), env);
        p->b = delay(t.second(), env);
        return p;
    }
    case TermKind::Fst:
        return project(eval(t.arg(), env), false);
    case TermKind::Snd:
        return project(eval(t.arg(), env), true);
    case TermKind::Unit:
        return unit_value();
    }
    throw IllTyped("unknown term node");
}

bool transparent(Type t) {
    thread_local std::unordered_map<std::uint32_t, bool> memo;
    if (t.is_terminal()) return false;
    if (t.is_atom()) return true;
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    bool r = transparent(t.left()) && transparent(t.right());
    memo.emplace(t.id(), r);
    return r;
}

std::string hint(std::uint32_t level) { return "x" + std::to_string(level + 1); }

class Reader {
public:
    explicit Reader(bool contract) : contract_(contract) {}

    Term read(const V& v, Type type, std::uint32_t depth) {
        if (type.is_terminal()) return unit();
        if (contract_ && is_neutral(*v) && transparent(type)) return neutral(*v, depth);
        if (type.is_arrow()) {
            auto x = std::make_shared<Value>(VKind::Var, type.dom());
            x->level = depth;
            Term body = read(apply_value(v, ready(x)), type.cod(), depth + 1);
            if (contract_ && body.kind() == TermKind::App && body.arg().kind() == TermKind::Bound &&
                body.arg().index() == 0 && !occurs_loose(body.fun(), 0))
                return shift(body.fun(), -1);
            return lam_raw(hint(depth), type.dom(), body);
        }
        if (type.is_product()) {
            Term a = read(project(v, false), type.left(), depth);
            Term b = read(project(v, true), type.right(), depth);
            if (contract_ && a.kind() == TermKind::Fst && b.kind() == TermKind::Snd && a.arg() == b.arg())
                return a.arg();
            return pair(a, b);
        }
        if (!is_neutral(*v)) throw IllTyped("non-neutral value at atomic type " + type.brief());
        return neutral(*v, depth);
    }

private:
    Term neutral(const Value& v, std::uint32_t depth) {
        switch (v.kind) {
        case VKind::Var:
            return bound(depth - 1 - v.level, v.type);
        case VKind::Free:
            return v.term;
        case VKind::App: {
            Term f = neutral(*v.head, depth);
            return app(f, read(v.a->force(), f.type().dom(), depth));
        }
        case VKind::Fst:
            return fst(neutral(*v.head, depth));
        case VKind::Snd:
            return snd(neutral(*v.head, depth));
        default:
            throw IllTyped("value is not neutral");
        }
    }

    bool contract_;
};

Term evaluate_and_read(const Term& term, bool contract) {
    if (term.loose() != 0) throw IllTyped("term has dangling bound indices");
    V v = eval(term, nullptr);
    return Reader(contract).read(v, term.type(), 0);
}

// ---- Rewriting strategy -------------------------------------------------

// body[0 := arg] for a binder body; arg lives outside the binder.
Term instantiate(const Term& body, const Term& arg) {
    std::map<std::pair<const TermNode*, std::uint32_t>, Term> memo;
    auto go = [&](auto& self, const Term& t, std::uint32_t depth) -> Term {
        if (t.loose() <= depth) return t;
        auto key = std::make_pair(t.node(), depth);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Term r;
        switch (t.kind()) {
        case TermKind::Bound:
            if (t.index() == depth) r = shift(arg, static_cast<int>(depth));
            else r = bound(t.index() - 1, t.type());
            break;
        case TermKind::Lam:
            r = lam_raw(t.name(), t.binder(), self(self, t.body(), depth + 1));
            break;
        case TermKind::App:
            r = app(self(self, t.fun(), depth), self(self, t.arg(), depth));
            break;
        case TermKind::Pair:
            r = pair(self(self, t.first(), depth), self(self, t.second(), depth));
            break;
        case TermKind::Fst:
            r = fst(self(self, t.arg(), depth));
            break;
        case TermKind::Snd:
            r = snd(self(self, t.arg(), depth));
            break;
        default:
            r = t;
        }
        memo.emplace(key, r);
        return r;
    };
    return go(go, body, 0);
}

Term whnf(const Term& t) {
    switch (t.kind()) {
    case TermKind::App: {
        Term f = whnf(t.fun());
        if (f.kind() == TermKind::Lam) return whnf(instantiate(f.body(), t.arg()));
        return app(f, t.arg());
    }
    case TermKind::Fst:
    case TermKind::Snd: {
        Term p = whnf(t.arg());
        if (p.kind() == TermKind::Pair) return whnf(t.kind() == TermKind::Fst ? p.first() : p.second());
        return t.kind() == TermKind::Fst ? fst(p) : snd(p);
    }
    default:
        return t;
    }
}

Term rewrite_nf(const Term& t) {
    Term w = whnf(t);
    switch (w.kind()) {
    case TermKind::Lam:
        return lam_raw(w.name(), w.binder(), rewrite_nf(w.body()));
    case TermKind::Pair:
        return pair(rewrite_nf(w.first()), rewrite_nf(w.second()));
    case TermKind::App:
        return app(rewrite_nf(w.fun()), rewrite_nf(w.arg()));
    case TermKind::Fst:
        return fst(rewrite_nf(w.arg()));
    case TermKind::Snd:
        return snd(rewrite_nf(w.arg()));
    default:
        return w;
    }
}

Term expand(const Term& t, Type type, std::uint32_t depth);

Term expand_neutral(const Term& t, std::uint32_t depth) {
    switch (t.kind()) {
    case TermKind::App:
        return app(expand_neutral(t.fun(), depth), expand(t.arg(), t.arg().type(), depth));
    case TermKind::Fst:
        return fst(expand_neutral(t.arg(), depth));
    case TermKind::Snd:
        return snd(expand_neutral(t.arg(), depth));
    default:
        return t;
    }
}

// Type-directed eta expansion of a beta-normal term; depth only names binders.
Term expand(const Term& t, Type type, std::uint32_t depth) {
    if (type.is_terminal()) return unit();
    if (type.is_arrow()) {
        Term body = t.kind() == TermKind::Lam ? t.body() : app(shift(t, 1), bound(0, type.dom()));
        return lam_raw(hint(depth), type.dom(), expand(body, type.cod(), depth + 1));
    }
    if (type.is_product()) {
        if (t.kind() == TermKind::Pair)
            return pair(expand(t.first(), type.left(), depth), expand(t.second(), type.right(), depth));
        return pair(expand(fst(t), type.left(), depth), expand(snd(t), type.right(), depth));
    }
    return expand_neutral(t, depth);
}

}  // namespace

void set_cell_budget(std::size_t cells) { g_budget.store(cells, std::memory_order_relaxed); }
std::size_t cell_budget() { return g_budget.load(std::memory_order_relaxed); }
std::size_t live_cells() { return t_live; }

Term beta_nf(const Term& term) {
    if (term.loose() != 0) throw IllTyped("term has dangling bound indices");
    return rewrite_nf(term);
}

Term eta_contract(const Term& t) {
    switch (t.kind()) {
    case TermKind::Lam: {
        Term body = eta_contract(t.body());
        if (body.kind() == TermKind::App && body.arg().kind() == TermKind::Bound && body.arg().index() == 0 &&
            !occurs_loose(body.fun(), 0))
            return shift(body.fun(), -1);
        return lam_raw(t.name(), t.binder(), body);
    }
    case TermKind::Pair: {
        Term a = eta_contract(t.first());
        Term b = eta_contract(t.second());
        if (a.kind() == TermKind::Fst && b.kind() == TermKind::Snd && a.arg() == b.arg()) return a.arg();
        return pair(a, b);
    }
    case TermKind::App:
        return app(eta_contract(t.fun()), eta_contract(t.arg()));
    case TermKind::Fst:
        return fst(eta_contract(t.arg()));
    case TermKind::Snd:
        return snd(eta_contract(t.arg()));
    default:
        return t;
    }
}

NormalForm long_nf(const Term& term, Strategy strategy) {
    if (strategy == Strategy::Rewriting) return {expand(beta_nf(term), term.type(), 0), NfKind::Expanded};
    return {evaluate_and_read(term, false), NfKind::Expanded};
}

NormalForm beta_eta_nf(const Term& term, Strategy strategy) {
    if (strategy == Strategy::Rewriting) return {eta_contract(long_nf(term, strategy).term), NfKind::Contracted};
    return {evaluate_and_read(term, true), NfKind::Contracted};
}

bool decide_eq(const Term& a, const Term& b) {
    if (a.type() != b.type())
        throw TypeMismatch("comparing " + a.type().brief() + " with " + b.type().brief());
    if (a == b) return true;
    return beta_eta_nf(a).term == beta_eta_nf(b).term;
}

}  // namespace tlc
