#include "tlc/type.hpp"

#include <deque>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace tlc {

class TypeInterner {
public:
    static TypeInterner& instance() {
        static TypeInterner interner;
        return interner;
    }

    Type atom(std::string_view name) {
        if (name == "T") return terminal();
        std::string key(name);
        {
            std::shared_lock lock(mutex_);
            if (auto it = atoms_.find(key); it != atoms_.end()) return Type(it->second);
        }
        std::unique_lock lock(mutex_);
        if (auto it = atoms_.find(key); it != atoms_.end()) return Type(it->second);
        auto* node = make_node(TypeKind::Atom, key, nullptr, nullptr);
        atoms_.emplace(std::move(key), node);
        return Type(node);
    }

    Type terminal() {
        std::call_once(terminal_once_, [this] {
            std::unique_lock lock(mutex_);
            terminal_ = make_node(TypeKind::Terminal, "T", nullptr, nullptr);
        });
        return Type(terminal_);
    }

    Type composite(TypeKind kind, Type l, Type r) {
        Key key{kind, l.node(), r.node()};
        {
            std::shared_lock lock(mutex_);
            if (auto it = composites_.find(key); it != composites_.end()) return Type(it->second);
        }
        std::unique_lock lock(mutex_);
        if (auto it = composites_.find(key); it != composites_.end()) return Type(it->second);
        auto* node = make_node(kind, {}, l.node(), r.node());
        composites_.emplace(key, node);
        return Type(node);
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return nodes_.size();
    }

private:
    struct Key {
        TypeKind kind;
        const TypeNode* l;
        const TypeNode* r;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            auto h = std::hash<const void*>{}(k.l);
            h ^= std::hash<const void*>{}(k.r) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h ^ static_cast<std::size_t>(k.kind);
        }
    };

    const TypeNode* make_node(TypeKind kind, std::string name, const TypeNode* l, const TypeNode* r) {
        auto id = static_cast<std::uint32_t>(nodes_.size() + 1);
        nodes_.push_back(TypeNode{kind, id, std::move(name), l, r});
        return &nodes_.back();
    }

    mutable std::shared_mutex mutex_;
    std::deque<TypeNode> nodes_;
    std::unordered_map<std::string, const TypeNode*> atoms_;
    std::unordered_map<Key, const TypeNode*, KeyHash> composites_;
    std::once_flag terminal_once_;
    const TypeNode* terminal_ = nullptr;
};

Type Type::atom(std::string_view name) { return TypeInterner::instance().atom(name); }
Type Type::terminal() { return TypeInterner::instance().terminal(); }
Type Type::arrow(Type dom, Type cod) {
    return TypeInterner::instance().composite(TypeKind::Arrow, dom, cod);
}
Type Type::product(Type left, Type right) {
    return TypeInterner::instance().composite(TypeKind::Product, left, right);
}

Type Type::tower(unsigned n, Type base) {
    Type t = base;
    for (unsigned k = 0; k < n; ++k) t = arrow(t, t);
    return t;
}
Type Type::tower(unsigned n) { return tower(n, atom("p")); }
Type Type::numeral(unsigned i, Type base) { return tower(i + 2, base); }
Type Type::numeral(unsigned i) { return numeral(i, atom("p")); }

std::size_t interned_count() { return TypeInterner::instance().size(); }

namespace {

void print(Type t, std::string& out) {
    switch (t.kind()) {
    case TypeKind::Atom:
        out += t.name();
        return;
    case TypeKind::Terminal:
        out += 'T';
        return;
    case TypeKind::Arrow: {
        bool paren = t.dom().is_arrow();
        if (paren) out += '(';
        print(t.dom(), out);
        if (paren) out += ')';
        out += "->";
        print(t.cod(), out);
        return;
    }
    case TypeKind::Product: {
        bool lparen = t.left().is_arrow();
        if (lparen) out += '(';
        print(t.left(), out);
        if (lparen) out += ')';
        out += '*';
        bool rparen = t.right().is_arrow() || t.right().is_product();
        if (rparen) out += '(';
        print(t.right(), out);
        if (rparen) out += ')';
        return;
    }
    }
}

}  // namespace

namespace {

// Height of the tower A_n over an atom, or -1.
int tower_height(Type t) {
    int n = 0;
    while (t.is_arrow()) {
        if (t.dom() != t.cod()) return -1;
        t = t.dom();
        ++n;
    }
    return t.is_atom() ? n : -1;
}

void print_brief(Type t, std::string& out, std::size_t limit) {
    if (out.size() > limit) return;
    int h = tower_height(t);
    if (h >= 3) {
        Type base = t;
        while (base.is_arrow()) base = base.dom();
        out += "A_" + std::to_string(h);
        if (base.name() != "p") out += "(" + base.name() + ")";
        return;
    }
    switch (t.kind()) {
    case TypeKind::Atom:
        out += t.name();
        return;
    case TypeKind::Terminal:
        out += 'T';
        return;
    default: {
        bool lparen = t.left().is_arrow();
        if (lparen) out += '(';
        print_brief(t.left(), out, limit);
        if (lparen) out += ')';
        out += t.is_arrow() ? "->" : "*";
        bool rparen = t.is_product() && (t.right().is_arrow() || t.right().is_product());
        if (rparen) out += '(';
        print_brief(t.right(), out, limit);
        if (rparen) out += ')';
    }
    }
}

}  // namespace

std::string Type::to_string() const {
    std::string out;
    print(*this, out);
    return out;
}

std::string Type::brief() const {
    constexpr std::size_t limit = 160;
    std::string out;
    print_brief(*this, out, limit);
    if (out.size() > limit) out = out.substr(0, limit) + "...";
    return out;
}

Type substitute(Type type, const TypeSubstitution& sub) {
    std::unordered_map<std::uint32_t, Type> memo;
    std::function<Type(Type)> go = [&](Type t) -> Type {
        if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
        Type r;
        switch (t.kind()) {
        case TypeKind::Atom: {
            auto s = sub.find(t.name());
            r = s == sub.end() ? t : s->second;
            break;
        }
        case TypeKind::Terminal:
            r = t;
            break;
        case TypeKind::Arrow:
            r = Type::arrow(go(t.dom()), go(t.cod()));
            break;
        case TypeKind::Product:
            r = Type::product(go(t.left()), go(t.right()));
            break;
        }
        memo.emplace(t.id(), r);
        return r;
    };
    return go(type);
}

Type substitute_all_atoms(Type type, Type target) {
    TypeSubstitution sub;
    for (const auto& a : atoms(type)) sub.emplace(a, target);
    return substitute(type, sub);
}

namespace {

template <class F>
void visit_distinct(Type type, F&& f) {
    std::unordered_set<std::uint32_t> seen;
    std::vector<Type> stack{type};
    while (!stack.empty()) {
        Type t = stack.back();
        stack.pop_back();
        if (!seen.insert(t.id()).second) continue;
        f(t);
        if (t.is_arrow() || t.is_product()) {
            stack.push_back(t.left());
            stack.push_back(t.right());
        }
    }
}

}  // namespace

std::set<std::string> atoms(Type type) {
    std::set<std::string> out;
    visit_distinct(type, [&](Type t) {
        if (t.is_atom()) out.insert(t.name());
    });
    return out;
}

bool is_product_free(Type type) {
    bool ok = true;
    visit_distinct(type, [&](Type t) {
        if (t.is_product() || t.is_terminal()) ok = false;
    });
    return ok;
}

std::size_t node_count(Type type) {
    std::size_t n = 0;
    visit_distinct(type, [&](Type) { ++n; });
    return n;
}

std::size_t tree_size(Type type) {
    std::unordered_map<std::uint32_t, std::size_t> memo;
    constexpr auto cap = std::numeric_limits<std::size_t>::max();
    std::function<std::size_t(Type)> go = [&](Type t) -> std::size_t {
        if (!t.is_arrow() && !t.is_product()) return 1;
        if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
        std::size_t l = go(t.left()), r = go(t.right());
        std::size_t s = (l >= cap - r - 1) ? cap : l + r + 1;
        memo.emplace(t.id(), s);
        return s;
    };
    return go(type);
}

ArrowSpine arrow_spine(Type type) {
    ArrowSpine spine;
    while (type.is_arrow()) {
        spine.args.push_back(type.dom());
        type = type.cod();
    }
    spine.result = type;
    return spine;
}

Type arrows(const std::vector<Type>& args, Type result) {
    for (auto it = args.rbegin(); it != args.rend(); ++it) result = Type::arrow(*it, result);
    return result;
}

}  // namespace tlc
