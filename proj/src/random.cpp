#include "tlc/random.hpp"

#include <algorithm>
#include <functional>

namespace tlc {

Type random_type(Rng& rng, const TypeGenOptions& o) {
    std::function<Type(unsigned)> go = [&](unsigned depth) -> Type {
        std::uniform_int_distribution<int> pick(0, 9);
        int r = depth == 0 ? 0 : pick(rng);
        if (r < 3) {
            if (o.terminal && std::uniform_int_distribution<int>(0, 7)(rng) == 0) return Type::terminal();
            std::uniform_int_distribution<std::size_t> a(0, o.atoms.size() - 1);
            return Type::atom(o.atoms[a(rng)]);
        }
        if (o.products && r >= 8) return Type::product(go(depth - 1), go(depth - 1));
        return Type::arrow(go(depth - 1), go(depth - 1));
    };
    return go(o.max_depth);
}

namespace {

enum class Step { Apply, First, Second };

struct Path {
    std::vector<Step> steps;
    std::vector<Type> args;
};

void eliminations(Type from, Type target, Path& cur, std::vector<Path>& out) {
    if (from == target) out.push_back(cur);
    if (from.is_arrow()) {
        cur.steps.push_back(Step::Apply);
        cur.args.push_back(from.dom());
        eliminations(from.cod(), target, cur, out);
        cur.args.pop_back();
        cur.steps.pop_back();
    } else if (from.is_product()) {
        cur.steps.push_back(Step::First);
        eliminations(from.left(), target, cur, out);
        cur.steps.back() = Step::Second;
        eliminations(from.right(), target, cur, out);
        cur.steps.pop_back();
    }
}

class Generator {
public:
    Generator(Rng& rng, const TermGenOptions& o) : rng_(rng), o_(o) {}

    std::optional<Term> gen(Type type, std::vector<std::pair<std::string, Type>>& scope, int depth) {
        if (depth < -3) return std::nullopt;
        if (depth > 0 && chance(o_.redex_rate)) {
            if (auto r = redex(type, scope, depth)) return r;
        }
        if (type.is_terminal() && chance(0.7)) return unit();
        if (type.is_arrow() && (depth > 0 ? chance(0.75) : true)) {
            std::string x = "_v" + std::to_string(counter_++);
            scope.emplace_back(x, type.dom());
            auto body = gen(type.cod(), scope, depth - 1);
            scope.pop_back();
            if (body) return lam(x, type.dom(), *body);
        }
        if (type.is_product() && (depth > 0 ? chance(0.75) : true)) {
            auto a = gen(type.left(), scope, depth - 1);
            auto b = a ? gen(type.right(), scope, depth - 1) : std::nullopt;
            if (a && b) return pair(*a, *b);
        }
        if (auto e = elim(type, scope, depth)) return e;
        if (type.is_terminal()) return unit();
        return std::nullopt;
    }

private:
    bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

    std::optional<Term> elim(Type type, std::vector<std::pair<std::string, Type>>& scope, int depth) {
        std::vector<std::pair<std::size_t, Path>> options;
        for (std::size_t i = 0; i < scope.size(); ++i) {
            std::vector<Path> paths;
            Path cur;
            eliminations(scope[i].second, type, cur, paths);
            for (auto& p : paths) options.emplace_back(i, std::move(p));
        }
        if (options.empty()) return std::nullopt;
        std::shuffle(options.begin(), options.end(), rng_);
        if (depth <= 0)
            std::stable_sort(options.begin(), options.end(),
                             [](const auto& a, const auto& b) { return a.second.args.size() < b.second.args.size(); });
        for (const auto& [i, path] : options) {
            Term t = var(scope[i].first, scope[i].second);
            std::size_t arg = 0;
            bool ok = true;
            for (Step s : path.steps) {
                if (s == Step::First) {
                    t = fst(t);
                } else if (s == Step::Second) {
                    t = snd(t);
                } else {
                    auto a = gen(path.args[arg++], scope, depth - 1);
                    if (!a) {
                        ok = false;
                        break;
                    }
                    t = app(t, *a);
                }
            }
            if (ok) return t;
        }
        return std::nullopt;
    }

    std::optional<Term> redex(Type type, std::vector<std::pair<std::string, Type>>& scope, int depth) {
        Type side = scope.empty() ? type : scope[std::uniform_int_distribution<std::size_t>(0, scope.size() - 1)(rng_)].second;
        if (o_.products && chance(0.3)) {
            auto a = gen(type, scope, depth - 1);
            auto b = a ? gen(side, scope, depth - 1) : std::nullopt;
            if (!a || !b) return std::nullopt;
            return chance(0.5) ? fst(pair(*a, *b)) : snd(pair(*b, *a));
        }
        std::string x = "_v" + std::to_string(counter_++);
        scope.emplace_back(x, side);
        auto body = gen(type, scope, depth - 1);
        scope.pop_back();
        if (!body) return std::nullopt;
        auto arg = gen(side, scope, depth - 1);
        if (!arg) return std::nullopt;
        return app(lam(x, side, *body), *arg);
    }

    Rng& rng_;
    const TermGenOptions& o_;
    unsigned counter_ = 0;
};

}  // namespace

std::optional<Term> random_term(Rng& rng, Type type, const Context& ctx, const TermGenOptions& options) {
    std::vector<std::pair<std::string, Type>> scope(ctx.entries().begin(), ctx.entries().end());
    Generator g(rng, options);
    return g.gen(type, scope, static_cast<int>(options.max_depth));
}

}  // namespace tlc
