#include "tlc/numerals.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "tlc/error.hpp"
#include "tlc/syntax.hpp"

namespace tlc {

namespace {

Type A(unsigned n) { return Type::tower(n); }
Type N(unsigned i) { return Type::numeral(i); }
Term v(const char* name, Type t) { return var(name, t); }

Term build(CombinatorKind kind, unsigned i, unsigned k);

Term cached(CombinatorKind kind, unsigned i, unsigned k) {
    static std::mutex mu;
    static std::map<std::tuple<int, unsigned, unsigned>, Term> memo;
    auto key = std::make_tuple(static_cast<int>(kind), i, k);
    {
        std::lock_guard lock(mu);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    Term t = build(kind, i, k);
    std::lock_guard lock(mu);
    memo.emplace(key, t);
    return t;
}

Term lams(std::initializer_list<std::pair<const char*, Type>> binders, Term body) {
    std::vector<std::pair<const char*, Type>> bs(binders);
    for (auto it = bs.rbegin(); it != bs.rend(); ++it) body = lam(it->first, it->second, body);
    return body;
}

Term build(CombinatorKind kind, unsigned i, unsigned k) {
    switch (kind) {
    case CombinatorKind::Cond: {
        Term x = v("x", N(i)), y = v("y", N(i)), z = v("z", N(i));
        Term u = v("u", A(i + 1)), vv = v("v", A(i));
        Term body = app(x, {lam("w", A(i), app(z, {u, vv})), app(y, {u, vv})});
        return lams({{"x", N(i)}, {"y", N(i)}, {"z", N(i)}, {"u", A(i + 1)}, {"v", A(i)}}, body);
    }
    case CombinatorKind::Lower: {
        Term x = v("x", N(i + 1)), y = v("y", A(i + 1)), z = v("z", A(i + 1));
        Term u = v("u", A(i)), vv = v("v", A(i));
        Term step = lams({{"z", A(i + 1)}, {"u", A(i)}}, app(y, app(z, u)));
        Term body = app(x, {step, lam("v", A(i), vv)});
        return lams({{"x", N(i + 1)}, {"y", A(i + 1)}}, body);
    }
    case CombinatorKind::Expo: {
        Term x = v("x", N(i + 1)), y = v("y", N(i + 1));
        return lams({{"x", N(i + 1)}, {"y", N(i + 1)}}, app(x, app(cached(CombinatorKind::Lower, i, 0), y)));
    }
    case CombinatorKind::Add:
    case CombinatorKind::Mul: {
        Term x = v("x", N(i)), y = v("y", N(i)), z = v("z", A(i + 1)), u = v("u", A(i));
        Term body = kind == CombinatorKind::Add ? app(x, {z, app(y, {z, u})}) : app(x, {app(y, z), u});
        return lams({{"x", N(i)}, {"y", N(i)}, {"z", A(i + 1)}, {"u", A(i)}}, body);
    }
    case CombinatorKind::Pair: {
        Term x = v("x", N(i)), y = v("y", N(i)), z = v("z", N(i));
        return lams({{"x", N(i)}, {"y", N(i)}, {"z", N(i)}}, app(cached(CombinatorKind::Cond, i, 0), {z, x, y}));
    }
    case CombinatorKind::Proj1:
    case CombinatorKind::Proj2: {
        Term u = v("u", N(i + 1));
        return lam("u", N(i + 1), app(u, church(kind == CombinatorKind::Proj1 ? 0 : 1, i)));
    }
    case CombinatorKind::AuxT: {
        Term x = v("x", N(i + 1));
        Term first = app(cached(CombinatorKind::Proj1, i, 0), x);
        Term succ = app(cached(CombinatorKind::Add, i, 0), {church(1, i), first});
        return lam("x", N(i + 1), app(cached(CombinatorKind::Pair, i, 0), {succ, first}));
    }
    case CombinatorKind::AuxH: {
        Term y = v("y", N(i + 3));
        Term start = app(cached(CombinatorKind::Pair, i, 0), {church(0, i), church(0, i)});
        return lam("y", N(i + 3), app(y, {cached(CombinatorKind::AuxT, i, 0), start}));
    }
    case CombinatorKind::Pred: {
        Term y = v("y", N(i + 3));
        return lam("y", N(i + 3),
                   app(cached(CombinatorKind::Proj2, i, 0), app(cached(CombinatorKind::AuxH, i, 0), y)));
    }
    case CombinatorKind::Raise: {
        if (i < 1) throw SideConditionViolated("Z_i requires i >= 1");
        unsigned j = i - 1;
        Term x = v("x", N(j)), y = v("y", N(j)), z = v("z", A(j + 1)), u = v("u", A(j));
        Term body = app(x, {lam("v", A(j), app(y, {z, u})), app(z, u)});
        return lams({{"x", N(j)}, {"y", N(j)}, {"z", A(j + 1)}, {"u", A(j)}}, body);
    }
    case CombinatorKind::Check: {
        if (i < 3 * k)
            throw SideConditionViolated("D^" + std::to_string(k) + "_" + std::to_string(i) + " requires i >= 3k");
        Term x = v("x", N(i));
        Term cond = cached(CombinatorKind::Cond, i, 0);
        if (k == 0) return lam("x", N(i), app(cond, {x, church(0, i), church(1, i)}));
        Term inner = app(cached(CombinatorKind::Check, i - 3, k - 1), app(cached(CombinatorKind::Pred, i - 3, 0), x));
        inner = app(cached(CombinatorKind::Raise, i - 2, 0), inner);
        inner = app(cached(CombinatorKind::Raise, i - 1, 0), inner);
        inner = app(cached(CombinatorKind::Raise, i, 0), inner);
        return lam("x", N(i), app(cond, {x, church(1, i), inner}));
    }
    }
    throw SideConditionViolated("unknown combinator");
}

}  // namespace

Term church(unsigned n, unsigned i) {
    Term x = var("x", A(i + 1));
    Term body = var("y", A(i));
    for (unsigned m = 0; m < n; ++m) body = app(x, body);
    return lam("x", A(i + 1), lam("y", A(i), body));
}

long church_value(const Term& t) {
    if (t.kind() != TermKind::Lam || t.body().kind() != TermKind::Lam) return -1;
    Type a = t.binder();
    if (!a.is_arrow() || a.dom() != a.cod() || t.body().binder() != a.dom()) return -1;
    long n = 0;
    const Term* cur = &t.body().body();
    while (cur->kind() == TermKind::App) {
        if (cur->fun().kind() != TermKind::Bound || cur->fun().index() != 1) return -1;
        ++n;
        cur = &cur->arg();
    }
    if (cur->kind() != TermKind::Bound || cur->index() != 0) return -1;
    return n;
}

Term combinator(CombinatorKind kind, unsigned i, unsigned k) {
    if (kind == CombinatorKind::Raise && i < 1) throw SideConditionViolated("Z_i requires i >= 1");
    if (kind == CombinatorKind::Check && i < 3 * k)
        throw SideConditionViolated("D^" + std::to_string(k) + "_" + std::to_string(i) + " requires i >= 3k");
    return cached(kind, i, kind == CombinatorKind::Check ? k : 0);
}

std::string combinator_symbol(CombinatorKind kind) {
    switch (kind) {
    case CombinatorKind::Cond: return "C";
    case CombinatorKind::Lower: return "R";
    case CombinatorKind::Expo: return "E";
    case CombinatorKind::Add: return "S";
    case CombinatorKind::Mul: return "M";
    case CombinatorKind::Pair: return "Pi";
    case CombinatorKind::Proj1: return "pi1";
    case CombinatorKind::Proj2: return "pi2";
    case CombinatorKind::AuxT: return "T";
    case CombinatorKind::AuxH: return "H";
    case CombinatorKind::Pred: return "P";
    case CombinatorKind::Raise: return "Z";
    case CombinatorKind::Check: return "D";
    }
    return "?";
}

CombinatorKind parse_combinator_kind(const std::string& name) {
    static const std::map<std::string, CombinatorKind> names{
        {"C", CombinatorKind::Cond},     {"cond", CombinatorKind::Cond},
        {"R", CombinatorKind::Lower},    {"lower", CombinatorKind::Lower},
        {"E", CombinatorKind::Expo},     {"expo", CombinatorKind::Expo},
        {"S", CombinatorKind::Add},      {"add", CombinatorKind::Add},
        {"M", CombinatorKind::Mul},      {"mul", CombinatorKind::Mul},
        {"Pi", CombinatorKind::Pair},    {"pair", CombinatorKind::Pair},
        {"pi1", CombinatorKind::Proj1},  {"proj1", CombinatorKind::Proj1},
        {"pi2", CombinatorKind::Proj2},  {"proj2", CombinatorKind::Proj2},
        {"T", CombinatorKind::AuxT},     {"aux_t", CombinatorKind::AuxT},
        {"H", CombinatorKind::AuxH},     {"aux_h", CombinatorKind::AuxH},
        {"P", CombinatorKind::Pred},     {"pred", CombinatorKind::Pred},
        {"Z", CombinatorKind::Raise},    {"raise", CombinatorKind::Raise},
        {"D", CombinatorKind::Check},    {"check", CombinatorKind::Check},
    };
    auto it = names.find(name);
    if (it == names.end()) throw ParseError(0, "unknown combinator kind '" + name + "'");
    return it->second;
}

std::pair<Term, Term> lowering_pair(unsigned i) {
    if (i < 2) throw LevelTooSmall("lowering needs level >= 2, got " + std::to_string(i));
    Term y = var("y", A(i - 1)), z = var("z", A(i - 2));
    Term c1 = lam("x", A(i), lam("y", A(i - 1), lam("z", A(i - 2), app(y, z))));
    Term c2 = lam("y", A(i - 1), lam("z", A(i - 2), z));
    return {c1, c2};
}

namespace {

// Height n when `t` is A_n over p, else -1.
int tower_height(Type t) {
    int n = 0;
    while (t.is_arrow()) {
        if (t.dom() != t.cod()) return -1;
        t = t.dom();
        ++n;
    }
    return t == Type::atom("p") ? n : -1;
}

int max_height(Type t) {
    int h = tower_height(t);
    if (h >= 0) return h;
    if (t.is_arrow() || t.is_product()) return std::max(max_height(t.left()), max_height(t.right()));
    return 0;
}

std::string recognize(const Term& t) {
    if (!t.is_closed() || t.kind() != TermKind::Lam) return {};
    long n = church_value(t);
    if (n >= 0) {
        int h = tower_height(t.body().binder());
        return "[" + std::to_string(n) + "]" + (h >= 0 ? "_" + std::to_string(h) : std::string());
    }
    int top = max_height(t.type());
    for (int kind = 0; kind <= static_cast<int>(CombinatorKind::Check); ++kind) {
        auto ck = static_cast<CombinatorKind>(kind);
        for (int i = 0; i <= top; ++i) {
            for (unsigned k = 0; k <= (ck == CombinatorKind::Check ? static_cast<unsigned>(i) / 3 : 0u); ++k) {
                if (ck == CombinatorKind::Raise && i == 0) continue;
                Term c = combinator(ck, static_cast<unsigned>(i), k);
                if (c.type() == t.type() && c == t) {
                    std::string s = combinator_symbol(ck);
                    if (ck == CombinatorKind::Check) s += "^" + std::to_string(k);
                    return s + "_" + std::to_string(i);
                }
            }
        }
    }
    return {};
}

bool is_binary(const Term& t, CombinatorKind kind) {
    if (t.kind() != TermKind::App || t.fun().kind() != TermKind::App) return false;
    int h = tower_height(t.fun().arg().type());
    int i = kind == CombinatorKind::Expo ? h - 3 : h - 2;
    return i >= 0 && t.fun().fun() == combinator(kind, static_cast<unsigned>(i));
}

class AbbrevPrinter {
public:
    explicit AbbrevPrinter(const Term& root) {
        for (const auto& [n, _] : free_vars(root)) avoid_.push_back(n);
    }

    std::string show(const Term& t, bool atomic) {
        std::string known = recognize(t);
        if (!known.empty()) return known;
        std::string s;
        switch (t.kind()) {
        case TermKind::Bound:
            return names_.at(names_.size() - 1 - t.index());
        case TermKind::Free:
            return t.name();
        case TermKind::Unit:
            return "k";
        case TermKind::Pair:
            return "<" + show(t.first(), false) + ", " + show(t.second(), false) + ">";
        case TermKind::Lam: {
            std::vector<std::string> avoid = avoid_;
            avoid.insert(avoid.end(), names_.begin(), names_.end());
            std::string name = fresh_name(t.name().empty() ? "x" : t.name(), avoid);
            names_.push_back(name);
            s = "\\" + name + ":" + t.binder().to_string() + ". " + show(t.body(), false);
            names_.pop_back();
            break;
        }
        case TermKind::App:
            if (is_binary(t, CombinatorKind::Expo))
                return "(" + show(t.arg(), false) + ")^(" + show(t.fun().arg(), false) + ")";
            if (is_binary(t, CombinatorKind::Mul))
                s = show(t.fun().arg(), true) + "." + show(t.arg(), true);
            else
                s = show(t.fun(), t.fun().kind() == TermKind::Lam) + " " + show(t.arg(), true);
            break;
        case TermKind::Fst:
        case TermKind::Snd:
            s = std::string(t.kind() == TermKind::Fst ? "p1 " : "p2 ") + show(t.arg(), true);
            break;
        }
        return atomic ? "(" + s + ")" : s;
    }

private:
    std::vector<std::string> avoid_;
    std::vector<std::string> names_;
};

}  // namespace

std::string to_string_abbreviated(const Term& term) { return AbbrevPrinter(term).show(term, false); }

}  // namespace tlc
