#include <functional>

#include "tlc/error.hpp"
#include "tlc/syntax.hpp"

namespace tlc {

namespace {

// Types with metavariables, stored in an arena and solved by union-find.
class Unifier {
public:
    enum class Kind { Meta, Known, Arrow, Product };

    int meta() { return push({Kind::Meta, {}, -1, -1, -1}); }
    int arrow(int a, int b) { return push({Kind::Arrow, {}, a, b, -1}); }
    int product(int a, int b) { return push({Kind::Product, {}, a, b, -1}); }

    int known(Type t) {
        if (t.is_arrow()) return arrow(known(t.dom()), known(t.cod()));
        if (t.is_product()) return product(known(t.left()), known(t.right()));
        return push({Kind::Known, t, -1, -1, -1});
    }

    int find(int k) {
        while (nodes_[k].link >= 0) k = nodes_[k].link;
        return k;
    }

    void unify(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        Node &a = nodes_[x], &b = nodes_[y];
        if (a.kind == Kind::Meta) return bind(x, y);
        if (b.kind == Kind::Meta) return bind(y, x);
        if (a.kind != b.kind || (a.kind == Kind::Known && a.type != b.type)) throw IllTyped("no typing for the free variables");
        if (a.kind == Kind::Known) return;
        int al = a.l, ar = a.r, bl = b.l, br = b.r;
        unify(al, bl);
        unify(ar, br);
    }

    Kind kind(int k) { return nodes_[find(k)].kind; }
    int left(int k) { return nodes_[find(k)].l; }
    int right(int k) { return nodes_[find(k)].r; }

    Type resolve(int k, Type fallback) {
        const Node& n = nodes_[find(k)];
        switch (n.kind) {
        case Kind::Meta: return fallback;
        case Kind::Known: return n.type;
        case Kind::Arrow: return Type::arrow(resolve(n.l, fallback), resolve(n.r, fallback));
        case Kind::Product: return Type::product(resolve(n.l, fallback), resolve(n.r, fallback));
        }
        return fallback;
    }

private:
    struct Node {
        Kind kind;
        Type type;
        int l, r, link;
    };

    int push(Node n) {
        nodes_.push_back(n);
        return int(nodes_.size()) - 1;
    }

    bool occurs(int m, int k) {
        k = find(k);
        if (k == m) return true;
        const Node& n = nodes_[k];
        return (n.kind == Kind::Arrow || n.kind == Kind::Product) && (occurs(m, n.l) || occurs(m, n.r));
    }

    void bind(int m, int target) {
        if (occurs(m, target)) throw IllTyped("no finite typing for the free variables");
        nodes_[m].link = target;
    }

    std::vector<Node> nodes_;
};

}  // namespace

Context infer_context(const std::vector<const SurfaceTerm*>& terms, const Context& declared, Type fallback) {
    Unifier u;
    std::vector<std::pair<std::string, int>> free;
    std::vector<std::pair<std::string, int>> scope;

    auto lookup_free = [&](const std::string& name) {
        for (const auto& [n, k] : free)
            if (n == name) return k;
        int k = u.meta();
        free.emplace_back(name, k);
        return k;
    };

    std::function<int(const SurfaceTerm&)> go = [&](const SurfaceTerm& t) -> int {
        switch (t.kind) {
        case SurfaceTerm::Kind::Var:
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->first == t.name) return it->second;
            if (auto ty = declared.lookup(t.name)) return u.known(*ty);
            return lookup_free(t.name);
        case SurfaceTerm::Kind::Lam: {
            int dom = u.known(t.type);
            scope.emplace_back(t.name, dom);
            int body = go(*t.a);
            scope.pop_back();
            return u.arrow(dom, body);
        }
        case SurfaceTerm::Kind::App: {
            int fn = go(*t.a), arg = go(*t.b);
            if (u.kind(fn) == Unifier::Kind::Arrow) {
                u.unify(u.left(fn), arg);
                return u.right(fn);
            }
            int res = u.meta();
            u.unify(fn, u.arrow(arg, res));
            return res;
        }
        case SurfaceTerm::Kind::Pair: {
            int a = go(*t.a);
            return u.product(a, go(*t.b));
        }
        case SurfaceTerm::Kind::Fst:
        case SurfaceTerm::Kind::Snd: {
            int arg = go(*t.a);
            if (u.kind(arg) != Unifier::Kind::Product) u.unify(arg, u.product(u.meta(), u.meta()));
            return t.kind == SurfaceTerm::Kind::Fst ? u.left(arg) : u.right(arg);
        }
        case SurfaceTerm::Kind::Unit:
            return u.known(Type::terminal());
        }
        throw IllTyped("unknown surface node");
    };
    for (const SurfaceTerm* t : terms) go(*t);

    Context out = declared;
    for (const auto& [name, k] : free) out.add(name, u.resolve(k, fallback));
    return out;
}

}  // namespace tlc
