#include "tlc/models.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>

#include "tlc/error.hpp"
#include "tlc/normalize.hpp"
#include "tlc/numerals.hpp"

namespace tlc {

namespace {

constexpr std::uint64_t kCap = std::uint64_t{1} << 63;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
    unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
    if (r >= kCap) throw Overflow(what);
    return static_cast<std::uint64_t>(r);
}

Type collapse(Type t) {
    thread_local std::map<std::uint32_t, Type> memo;
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    Type r = substitute_all_atoms(t, Type::atom("p"));
    memo.emplace(t.id(), r);
    return r;
}

void require_pure(Type t) {
    if (!is_product_free(t)) throw IllTyped("models interpret product-free types only, got " + t.brief());
}

// Digit of `code` at `position` in base `radix`.
std::uint64_t digit(std::uint64_t code, std::uint64_t position, std::uint64_t radix) {
    for (std::uint64_t k = 0; k < position; ++k) code /= radix;
    return code % radix;
}

std::uint64_t power(std::uint64_t radix, std::uint64_t exponent) {
    std::uint64_t r = 1;
    for (std::uint64_t k = 0; k < exponent; ++k) r = checked_mul(r, radix, "power");
    return r;
}

// ---- evaluator -----------------------------------------------------------

struct MValue;
struct MEnv;
using MV = std::shared_ptr<MValue>;
using MEnvPtr = std::shared_ptr<const MEnv>;

struct MEnv {
    MV value;
    MEnvPtr next;
};

struct MValue {
    Type type;
    bool has_code = false;
    std::uint64_t code = 0;
    Term lam;  // closures
    MEnvPtr env;
};

MV code_value(Type type, std::uint64_t code) {
    auto v = std::make_shared<MValue>();
    v->type = type;
    v->has_code = true;
    v->code = code;
    return v;
}

class Evaluator {
public:
    Evaluator(const PModel& model, const Assignment& assignment) : model_(model), assignment_(assignment) {}

    MV eval(const Term& t, const MEnvPtr& env) {
        switch (t.kind()) {
        case TermKind::Bound: {
            const MEnv* e = env.get();
            for (std::uint32_t k = 0; k < t.index(); ++k) e = e->next.get();
            return e->value;
        }
        case TermKind::Free: {
            auto it = assignment_.find(t.name());
            if (it == assignment_.end()) throw UnboundVariable(t.name());
            if (collapse(it->second.type) != collapse(t.type()))
                throw TypeMismatch("assignment for " + t.name() + " has type " + it->second.type.brief());
            return code_value(collapse(t.type()), it->second.code);
        }
        case TermKind::Lam: {
            auto v = std::make_shared<MValue>();
            v->type = collapse(t.type());
            v->lam = t;
            v->env = env;
            return v;
        }
        case TermKind::App: {
            MV f = eval(t.fun(), env);
            return apply(f, eval(t.arg(), env));
        }
        default:
            throw IllTyped("models interpret product-free terms only");
        }
    }

    MV apply(const MV& f, const MV& x) {
        if (f->lam) return eval(f->lam.body(), std::make_shared<const MEnv>(MEnv{x, f->env}));
        Type cod = f->type.cod();
        std::uint64_t radix = cardinality(model_, cod);
        return code_value(cod, digit(f->code, code_of(x), radix));
    }

    std::uint64_t code_of(const MV& v) {
        if (v->has_code) return v->code;
        Type dom = v->type.dom(), cod = v->type.cod();
        cardinality(model_, v->type);
        std::uint64_t n = cardinality(model_, dom), radix = cardinality(model_, cod);
        std::uint64_t code = 0, weight = 1;
        for (std::uint64_t a = 0; a < n; ++a) {
            code += code_of(apply(v, code_value(dom, a))) * weight;
            if (a + 1 < n) weight *= radix;
        }
        v->has_code = true;
        v->code = code;
        return code;
    }

private:
    const PModel& model_;
    const Assignment& assignment_;
};

void check_term(const Term& term) {
    if (term.loose() != 0) throw IllTyped("term has dangling bound indices");
    if (!is_product_free(term)) throw IllTyped("models interpret product-free terms only");
}

// ---- distinguishing search ---------------------------------------------

struct Hit {
    std::vector<std::uint64_t> tuple;
    std::uint64_t va = 0, vb = 0;
};

class TupleSearch {
public:
    TupleSearch(const PModel& model, const Term& a, const Term& b, const std::vector<Type>& args)
        : model_(model), empty_(), ev_(model, empty_), args_(args) {
        for (Type t : args_) cards_.push_back(cardinality(model, t));
        va_ = ev_.eval(a, nullptr);
        vb_ = ev_.eval(b, nullptr);
    }

    // First hit whose first argument is `first` (or the empty tuple when there
    // are no arguments).
    std::optional<Hit> search_from(std::uint64_t first) {
        std::vector<std::uint64_t> tuple;
        if (args_.empty()) return leaf(va_, vb_, tuple);
        tuple.push_back(first);
        MV x = code_value(args_[0], first);
        return dfs(ev_.apply(va_, x), ev_.apply(vb_, x), 1, tuple);
    }

    std::uint64_t first_card() const { return args_.empty() ? 1 : cards_[0]; }

private:
    std::optional<Hit> leaf(const MV& fa, const MV& fb, const std::vector<std::uint64_t>& tuple) {
        std::uint64_t a = ev_.code_of(fa), b = ev_.code_of(fb);
        if (a == b) return std::nullopt;
        return Hit{tuple, a, b};
    }

    std::optional<Hit> dfs(const MV& fa, const MV& fb, std::size_t pos, std::vector<std::uint64_t>& tuple) {
        if (pos == args_.size()) return leaf(fa, fb, tuple);
        for (std::uint64_t c = 0; c < cards_[pos]; ++c) {
            MV x = code_value(args_[pos], c);
            tuple.push_back(c);
            auto r = dfs(ev_.apply(fa, x), ev_.apply(fb, x), pos + 1, tuple);
            tuple.pop_back();
            if (r) return r;
        }
        return std::nullopt;
    }

    const PModel& model_;
    Assignment empty_;
    Evaluator ev_;
    std::vector<Type> args_;
    std::vector<std::uint64_t> cards_;
    MV va_, vb_;
};

std::optional<Hit> search_base(const PModel& model, const Term& a, const Term& b, const std::vector<Type>& args,
                               unsigned jobs) {
    TupleSearch probe(model, a, b, args);
    std::uint64_t n = probe.first_card();
    if (jobs <= 1 || n < 2) {
        for (std::uint64_t f = 0; f < n; ++f)
            if (auto h = probe.search_from(f)) return h;
        return std::nullopt;
    }
    std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
    std::vector<std::optional<Hit>> found(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                TupleSearch search(model, a, b, args);
                for (std::uint64_t f = w; f < n && f < best.load(); f += jobs) {
                    if (auto h = search.search_from(f)) {
                        found[w] = h;
                        std::uint64_t cur = best.load();
                        while (f < cur && !best.compare_exchange_weak(cur, f)) {
                        }
                        return;
                    }
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::optional<Hit> result;
    for (auto& h : found)
        if (h && (!result || h->tuple < result->tuple)) result = h;
    return result;
}

// ---- kappa / definers ----------------------------------------------------

std::vector<std::vector<std::uint64_t>> tuples(const std::vector<std::uint64_t>& cards) {
    std::vector<std::vector<std::uint64_t>> out{{}};
    for (std::uint64_t c : cards) {
        std::vector<std::vector<std::uint64_t>> next;
        for (const auto& prefix : out)
            for (std::uint64_t x = 0; x < c; ++x) {
                next.push_back(prefix);
                next.back().push_back(x);
            }
        out = std::move(next);
    }
    return out;
}

std::vector<Functional> first_arg_order(const PModel& model, Type first, const std::vector<Functional>& order) {
    std::vector<Functional> canonical = enumerate(model, first);
    if (order.empty()) return canonical;
    std::vector<std::uint64_t> seen;
    for (const auto& f : order) {
        if (collapse(f.type) != first || f.code >= canonical.size())
            throw TypeMismatch("domain order entry is not an element of " + first.brief());
        seen.push_back(f.code);
    }
    std::sort(seen.begin(), seen.end());
    if (seen.size() != canonical.size() || std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw TypeMismatch("domain order is not a permutation of " + first.brief());
    std::vector<Functional> out;
    for (const auto& f : order) out.push_back({first, f.code});
    return out;
}

}  // namespace

std::uint64_t nth_prime(std::size_t n) {
    static std::mutex mu;
    static std::vector<std::uint64_t> primes{2};
    if (n == 0) throw IndexOutOfRange("primes are numbered from 1");
    std::lock_guard lock(mu);
    while (primes.size() < n) {
        std::uint64_t c = primes.back() + 1;
        for (;; ++c) {
            bool prime = true;
            for (std::uint64_t p : primes) {
                if (p * p > c) break;
                if (c % p == 0) {
                    prime = false;
                    break;
                }
            }
            if (prime) break;
        }
        primes.push_back(c);
    }
    return primes[n - 1];
}

std::uint64_t cardinality(const PModel& model, Type type) {
    require_pure(type);
    if (model.base < 2) throw IllTyped("a P-model needs base >= 2");
    thread_local std::map<std::pair<unsigned, std::uint32_t>, std::uint64_t> memo;
    if (type.is_atom()) return model.base;
    auto key = std::make_pair(model.base, type.id());
    if (auto it = memo.find(key); it != memo.end()) {
        if (it->second == 0) throw Overflow("cardinality of " + type.brief() + " exceeds 2^63");
        return it->second;
    }
    std::uint64_t result = 0;
    try {
        std::uint64_t n = cardinality(model, type.dom()), radix = cardinality(model, type.cod());
        if (n >= 64) throw Overflow("");
        result = power(radix, n);
    } catch (const Overflow&) {
        memo.emplace(key, 0);
        throw Overflow("cardinality of " + type.brief() + " exceeds 2^63");
    }
    memo.emplace(key, result);
    return result;
}

std::vector<Functional> enumerate(const PModel& model, Type type, std::uint64_t limit) {
    Type t = collapse(type);
    std::uint64_t n = cardinality(model, t);
    if (n > limit) throw Overflow(t.brief() + " has " + std::to_string(n) + " elements");
    std::vector<Functional> out;
    out.reserve(n);
    for (std::uint64_t c = 0; c < n; ++c) out.push_back({t, c});
    return out;
}

Functional apply(const PModel& model, const Functional& f, const Functional& x) {
    Type t = collapse(f.type);
    if (!t.is_arrow()) throw IllTyped("applying an ordinal");
    if (collapse(x.type) != t.dom()) throw TypeMismatch("argument of type " + x.type.brief());
    return {t.cod(), digit(f.code, x.code, cardinality(model, t.cod()))};
}

std::vector<std::uint64_t> table(const PModel& model, const Functional& f) {
    Type t = collapse(f.type);
    if (!t.is_arrow()) throw IllTyped("an ordinal has no table");
    std::uint64_t n = cardinality(model, t.dom()), radix = cardinality(model, t.cod());
    std::vector<std::uint64_t> out;
    std::uint64_t c = f.code;
    for (std::uint64_t k = 0; k < n; ++k) {
        out.push_back(c % radix);
        c /= radix;
    }
    return out;
}

Functional from_table(const PModel& model, Type type, const std::vector<std::uint64_t>& values) {
    Type t = collapse(type);
    if (!t.is_arrow()) throw IllTyped("an ordinal has no table");
    std::uint64_t n = cardinality(model, t.dom()), radix = cardinality(model, t.cod());
    cardinality(model, t);
    if (values.size() != n) throw IndexOutOfRange("table length differs from domain size");
    std::uint64_t code = 0;
    for (std::size_t k = values.size(); k-- > 0;) {
        if (values[k] >= radix) throw IndexOutOfRange("table entry out of range");
        code = code * radix + values[k];
    }
    return {t, code};
}

std::string describe(const PModel& model, const Functional& f) {
    Type t = collapse(f.type);
    if (t.is_atom()) return std::to_string(f.code);
    std::string s = "[";
    auto vals = table(model, f);
    for (std::size_t k = 0; k < vals.size(); ++k) {
        if (k) s += ", ";
        s += describe(model, {t.dom(), k}) + " -> " + describe(model, {t.cod(), vals[k]});
    }
    return s + "]";
}

Functional eval(const Term& term, const PModel& model, const Assignment& assignment) {
    return eval_apply(term, model, {}, assignment);
}

Functional eval_apply(const Term& term, const PModel& model, const std::vector<Functional>& args,
                      const Assignment& assignment) {
    check_term(term);
    Evaluator ev(model, assignment);
    MV v = ev.eval(term, nullptr);
    for (const auto& a : args) {
        if (!v->type.is_arrow()) throw IllTyped("too many arguments");
        if (collapse(a.type) != v->type.dom()) throw TypeMismatch("argument of type " + a.type.brief());
        v = ev.apply(v, code_value(v->type.dom(), a.code));
    }
    return {v->type, ev.code_of(v)};
}

Functional relabel(const PModel& model, const Functional& f, const std::vector<unsigned>& sigma) {
    if (sigma.size() != model.base) throw IndexOutOfRange("relabeling must permute P");
    Type t = collapse(f.type);
    if (t.is_atom()) return {t, sigma.at(f.code)};
    auto vals = table(model, f);
    std::vector<std::uint64_t> moved(vals.size());
    for (std::uint64_t k = 0; k < vals.size(); ++k) {
        std::uint64_t to = relabel(model, {t.dom(), k}, sigma).code;
        moved[to] = relabel(model, {t.cod(), vals[k]}, sigma).code;
    }
    return from_table(model, t, moved);
}

std::optional<Distinction> distinguish(const Term& a, const Term& b, const DistinguishOptions& options) {
    if (a.type() != b.type()) throw TypeMismatch("terms of different types");
    check_term(a);
    check_term(b);
    if (a.has_free() || b.has_free()) throw IllTyped("distinguish expects closed terms");
    ArrowSpine spine = arrow_spine(collapse(a.type()));
    bool skipped = false;
    for (unsigned h = 2; h <= options.max_base; ++h) {
        PModel model{h};
        std::uint64_t total = 1;
        try {
            for (Type t : spine.args) total = checked_mul(total, cardinality(model, t), "tuple space");
        } catch (const Overflow&) {
            skipped = true;
            continue;
        }
        if (total > options.tuple_budget) {
            skipped = true;
            continue;
        }
        auto hit = search_base(model, a, b, spine.args, std::max(1u, options.jobs));
        if (!hit) continue;
        Distinction d;
        d.model = model;
        d.value_a = hit->va;
        d.value_b = hit->vb;
        std::vector<unsigned> order{static_cast<unsigned>(hit->va), static_cast<unsigned>(hit->vb)};
        for (unsigned v = 0; v < h; ++v)
            if (v != hit->va && v != hit->vb) order.push_back(v);
        d.relabeling.assign(h, 0);
        for (unsigned k = 0; k < h; ++k) d.relabeling[order[k]] = k;
        for (std::size_t s = 0; s < spine.args.size(); ++s)
            d.args.push_back(relabel(model, {spine.args[s], hit->tuple[s]}, d.relabeling));
        return d;
    }
    if (skipped) throw Overflow("argument tuple space exceeds the search budget");
    return std::nullopt;
}

std::vector<std::uint64_t> argument_codes(const PModel& model, Type first_arg, const std::vector<Functional>& order) {
    Type b1 = collapse(first_arg);
    std::vector<Functional> psis = first_arg_order(model, b1, order);
    ArrowSpine spine = arrow_spine(b1);
    std::vector<std::uint64_t> cards;
    for (Type c : spine.args) cards.push_back(cardinality(model, c));
    auto ts = tuples(cards);
    std::vector<std::uint64_t> codes;
    for (const auto& psi : psis) {
        std::uint64_t n = 1;
        for (std::size_t j = 0; j < ts.size(); ++j) {
            Functional v = psi;
            for (std::size_t s = 0; s < ts[j].size(); ++s) v = apply(model, v, {spine.args[s], ts[j][s]});
            std::uint64_t prime = nth_prime(j + 1);
            for (std::uint64_t e = 0; e < v.code; ++e) n = checked_mul(n, prime, "prime-power code exceeds 2^63");
        }
        codes.push_back(n);
    }
    return codes;
}

std::uint64_t kappa(const PModel& model, const Functional& phi) {
    Type t = collapse(phi.type);
    if (t.is_atom()) return 0;
    static std::mutex mu;
    static std::map<std::tuple<unsigned, std::uint32_t, std::uint64_t>, std::uint64_t> memo;
    auto key = std::make_tuple(model.base, t.id(), phi.code);
    {
        std::lock_guard lock(mu);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    Type b1 = t.dom();
    auto codes = argument_codes(model, b1);
    std::uint64_t top = *std::max_element(codes.begin(), codes.end());
    std::uint64_t k = checked_mul(top, 3, "kappa exceeds 2^63") + 1;
    for (Type c : arrow_spine(b1).args)
        for (const auto& e : enumerate(model, c)) k = std::max(k, kappa(model, e));
    for (const auto& psi : enumerate(model, b1)) k = std::max(k, kappa(model, apply(model, {t, phi.code}, psi)));
    std::lock_guard lock(mu);
    memo.emplace(key, k);
    return k;
}

Term define_functional(const PModel& model, const Functional& phi, unsigned level, const DefineOptions& options) {
    Type t = collapse(phi.type);
    if (t.is_atom()) {
        if (phi.code >= model.base) throw IndexOutOfRange("ordinal outside P");
        return church(static_cast<unsigned>(phi.code), level);
    }
    std::uint64_t k_phi = kappa(model, {t, phi.code});
    if (level < k_phi)
        throw LevelTooSmall("level " + std::to_string(level) + " is below kappa = " + std::to_string(k_phi));

    static std::mutex mu;
    static std::map<std::tuple<unsigned, std::uint32_t, std::uint64_t, unsigned>, Term> memo;
    auto key = std::make_tuple(model.base, t.id(), phi.code, level);
    if (options.domain_order.empty()) {
        std::lock_guard lock(mu);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }

    const unsigned i = level;
    Type Ni = Type::numeral(i);
    ArrowSpine spine = arrow_spine(t);
    std::vector<Term> xs;
    for (std::size_t s = 0; s < spine.args.size(); ++s)
        xs.push_back(var("x" + std::to_string(s + 1), substitute_all_atoms(spine.args[s], Ni)));

    Type b1 = spine.args[0];
    ArrowSpine inner = arrow_spine(b1);
    std::vector<std::uint64_t> cards;
    for (Type c : inner.args) cards.push_back(cardinality(model, c));
    Term expo = combinator(CombinatorKind::Expo, i - 1);
    Term mul = combinator(CombinatorKind::Mul, i - 1);
    Term tt;
    auto ts = tuples(cards);
    for (std::size_t j = 0; j < ts.size(); ++j) {
        std::vector<Term> gammas;
        for (std::size_t s = 0; s < ts[j].size(); ++s)
            gammas.push_back(define_functional(model, {inner.args[s], ts[j][s]}, i));
        Term exponent = app(xs[0], gammas);
        std::uint64_t prime = nth_prime(j + 1);
        if (prime > std::numeric_limits<unsigned>::max()) throw Overflow("prime too large for a numeral");
        Term factor = app(expo, {exponent, church(static_cast<unsigned>(prime), i)});
        tt = tt ? app(mul, {tt, factor}) : factor;
    }

    std::vector<Functional> psis = first_arg_order(model, b1, options.domain_order);
    std::vector<std::uint64_t> codes = argument_codes(model, b1, psis);
    std::vector<Term> rest(xs.begin() + 1, xs.end());
    auto xi_term = [&](const Functional& psi) {
        Functional xi = apply(model, {t, phi.code}, psi);
        if (rest.empty()) return church(static_cast<unsigned>(xi.code), i);
        return app(define_functional(model, xi, i), rest);
    };
    Term q = xi_term(psis.back());
    Term cond = combinator(CombinatorKind::Cond, i);
    Term raise = combinator(CombinatorKind::Raise, i);
    for (std::size_t j = psis.size() - 1; j-- > 0;) {
        if (codes[j] > std::numeric_limits<unsigned>::max() / 4) throw Overflow("code too large");
        Term check = combinator(CombinatorKind::Check, i - 1, static_cast<unsigned>(codes[j]));
        q = app(cond, {app(raise, app(check, tt)), xi_term(psis[j]), q});
    }
    for (std::size_t s = xs.size(); s-- > 0;) q = lam(xs[s].name(), xs[s].type(), q);

    if (options.domain_order.empty()) {
        std::lock_guard lock(mu);
        memo.emplace(key, q);
    }
    return q;
}

bool i_defines_check(const Term& term, const PModel& model, const Functional& phi, unsigned level, int depth) {
    Type t = collapse(phi.type);
    Type expected = substitute_all_atoms(t, Type::numeral(level));
    if (term.type() != expected)
        throw TypeMismatch("term of type " + term.type().brief() + " cannot define an element of " +
                           t.brief() + " at level " + std::to_string(level));
    if (t.is_atom()) return decide_eq(term, church(static_cast<unsigned>(phi.code), level));
    if (depth == 0) return true;
    for (const auto& psi : enumerate(model, t.dom())) {
        Term b = define_functional(model, psi, level);
        if (!i_defines_check(app(term, b), model, apply(model, {t, phi.code}, psi), level, depth - 1)) return false;
    }
    return true;
}

}  // namespace tlc
