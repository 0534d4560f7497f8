#include "tlc/syntax.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "tlc/error.hpp"
#include "tlc/lexer.hpp"

namespace tlc {

namespace {

bool is_keyword(const std::string& s) { return s == "k" || s == "p1" || s == "p2"; }

SurfacePtr node(SurfaceTerm::Kind kind, std::size_t pos, SurfacePtr a = {}, SurfacePtr b = {}) {
    auto n = std::make_shared<SurfaceTerm>();
    n->kind = kind;
    n->pos = pos;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class TermParser {
public:
    TermParser(TokenCursor& c, const std::vector<Type>* refs) : c_(c), refs_(refs) {}

    SurfacePtr term() {
        if (c_.peek().kind == TokenKind::Lambda) return lambda();
        return application();
    }

private:
    SurfacePtr lambda() {
        std::size_t pos = c_.next().pos;
        const Token& name = c_.expect(TokenKind::Ident, "binder name");
        if (is_keyword(name.text)) throw ParseError(name.pos, "reserved word '" + name.text + "' used as binder");
        c_.expect(TokenKind::Colon, "':'");
        Type type = parse_type(c_, refs_);
        c_.expect(TokenKind::Dot, "'.'");
        auto n = node(SurfaceTerm::Kind::Lam, pos, term());
        auto m = std::const_pointer_cast<SurfaceTerm>(n);
        m->name = name.text;
        m->type = type;
        return n;
    }

    bool starts_elem() const {
        const Token& t = c_.peek();
        return t.kind == TokenKind::Ident || t.kind == TokenKind::LAngle || t.kind == TokenKind::LParen;
    }

    SurfacePtr application() {
        if (!starts_elem()) c_.fail("expected a term");
        SurfacePtr head = elem();
        for (;;) {
            if (c_.peek().kind == TokenKind::Lambda) {
                std::size_t pos = c_.peek().pos;
                head = node(SurfaceTerm::Kind::App, pos, head, lambda());
                break;
            }
            if (!starts_elem()) break;
            std::size_t pos = c_.peek().pos;
            head = node(SurfaceTerm::Kind::App, pos, head, elem());
        }
        return head;
    }

    SurfacePtr elem() {
        const Token& t = c_.peek();
        if (t.kind == TokenKind::Ident && (t.text == "p1" || t.text == "p2")) {
            auto kind = t.text == "p1" ? SurfaceTerm::Kind::Fst : SurfaceTerm::Kind::Snd;
            std::size_t pos = c_.next().pos;
            if (!starts_elem()) c_.fail("expected an argument of projection");
            return node(kind, pos, elem());
        }
        return atom();
    }

    SurfacePtr atom() {
        const Token& t = c_.peek();
        if (t.kind == TokenKind::Ident) {
            c_.next();
            if (t.text == "k") return node(SurfaceTerm::Kind::Unit, t.pos);
            auto n = std::make_shared<SurfaceTerm>();
            n->kind = SurfaceTerm::Kind::Var;
            n->name = t.text;
            n->pos = t.pos;
            return n;
        }
        if (t.kind == TokenKind::LAngle) {
            std::size_t pos = c_.next().pos;
            SurfacePtr first = term();
            c_.expect(TokenKind::Comma, "','");
            SurfacePtr second = term();
            c_.expect(TokenKind::RAngle, "'>'");
            return node(SurfaceTerm::Kind::Pair, pos, first, second);
        }
        if (c_.accept(TokenKind::LParen)) {
            SurfacePtr inner = term();
            c_.expect(TokenKind::RParen, "')'");
            return inner;
        }
        c_.fail("expected a term");
    }

    TokenCursor& c_;
    const std::vector<Type>* refs_;
};

}  // namespace

SurfacePtr parse_surface(std::string_view text, const std::vector<Type>* type_refs) {
    TokenCursor c(tokenize(text));
    TermParser p(c, type_refs);
    SurfacePtr t = p.term();
    if (!c.at_end()) c.fail("unexpected trailing input");
    return t;
}

Term elaborate(const SurfaceTerm& s, const Context& ctx) {
    std::vector<std::pair<std::string, Type>> scope;
    std::function<Term(const SurfaceTerm&)> go = [&](const SurfaceTerm& t) -> Term {
        switch (t.kind) {
        case SurfaceTerm::Kind::Var: {
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->first == t.name) return var(t.name, it->second);
            if (auto ty = ctx.lookup(t.name)) return var(t.name, *ty);
            throw UnboundVariable(t.name);
        }
        case SurfaceTerm::Kind::Lam: {
            scope.emplace_back(t.name, t.type);
            Term body = go(*t.a);
            scope.pop_back();
            return lam(t.name, t.type, body);
        }
        case SurfaceTerm::Kind::App:
            return app(go(*t.a), go(*t.b));
        case SurfaceTerm::Kind::Pair:
            return pair(go(*t.a), go(*t.b));
        case SurfaceTerm::Kind::Fst:
            return fst(go(*t.a));
        case SurfaceTerm::Kind::Snd:
            return snd(go(*t.a));
        case SurfaceTerm::Kind::Unit:
            return unit();
        }
        throw IllTyped("unknown surface node");
    };
    return go(s);
}

std::vector<std::string> free_names(const SurfaceTerm& s) {
    std::vector<std::string> out;
    std::vector<std::string> scope;
    std::function<void(const SurfaceTerm&)> go = [&](const SurfaceTerm& t) {
        switch (t.kind) {
        case SurfaceTerm::Kind::Var:
            if (std::find(scope.begin(), scope.end(), t.name) == scope.end() &&
                std::find(out.begin(), out.end(), t.name) == out.end())
                out.push_back(t.name);
            return;
        case SurfaceTerm::Kind::Lam:
            scope.push_back(t.name);
            go(*t.a);
            scope.pop_back();
            return;
        case SurfaceTerm::Kind::Unit:
            return;
        default:
            if (t.a) go(*t.a);
            if (t.b) go(*t.b);
        }
    };
    go(s);
    return out;
}

Term parse_term(std::string_view text, const Context& ctx, const std::vector<Type>* type_refs) {
    return elaborate(*parse_surface(text, type_refs), ctx);
}

Type parse_type(std::string_view text, const std::vector<Type>* type_refs) {
    TokenCursor c(tokenize(text));
    Type t = parse_type(c, type_refs);
    if (!c.at_end()) c.fail("unexpected trailing input");
    return t;
}

Context parse_context(std::string_view text) {
    Context ctx;
    TokenCursor c(tokenize(text));
    while (!c.at_end()) {
        const Token& name = c.expect(TokenKind::Ident, "variable name");
        c.expect(TokenKind::Colon, "':'");
        ctx.add(name.text, parse_type(c));
        if (!c.accept(TokenKind::Comma)) break;
    }
    if (!c.at_end()) c.fail("unexpected trailing input in context");
    return ctx;
}

std::size_t TypeTable::printed_length(Type t) {
    if (t.is_atom()) return t.name().size();
    if (t.is_terminal()) return 1;
    if (auto it = length_.find(t.id()); it != length_.end()) return it->second;
    constexpr auto cap = std::numeric_limits<std::size_t>::max() / 4;
    std::size_t l = printed_length(t.left()), r = printed_length(t.right());
    std::size_t n = std::min(cap, l + r + 6);
    length_.emplace(t.id(), n);
    return n;
}

std::string TypeTable::render(Type t) {
    if (printed_length(t) <= inline_limit_) return t.to_string();
    if (auto it = index_.find(t.id()); it != index_.end()) return "#" + std::to_string(it->second);
    std::string l = render(t.left());
    std::string r = render(t.right());
    auto wrap = [](const std::string& s, bool paren) { return paren ? "(" + s + ")" : s; };
    auto is_ref = [](const std::string& s) { return !s.empty() && s[0] == '#'; };
    std::string entry;
    if (t.is_arrow()) {
        entry = wrap(l, !is_ref(l) && t.dom().is_arrow()) + "->" + r;
    } else {
        entry = wrap(l, !is_ref(l) && t.left().is_arrow()) + "*" +
                wrap(r, !is_ref(r) && (t.right().is_arrow() || t.right().is_product()));
    }
    std::size_t k = entries_.size();
    entries_.push_back(std::move(entry));
    index_.emplace(t.id(), k);
    return "#" + std::to_string(k);
}

std::vector<Type> TypeTable::resolve(const std::vector<std::string>& entries) {
    std::vector<Type> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(parse_type(e, &out));
    return out;
}

std::string to_string(Type type, TypeTable* types) { return types ? types->render(type) : type.to_string(); }

namespace {

class TermPrinter {
public:
    TermPrinter(const Term& root, TypeTable* types) : types_(types) {
        for (const auto& [n, _] : free_vars(root)) free_.push_back(n);
    }

    void print(const Term& t, std::string& out) {
        switch (t.kind()) {
        case TermKind::Lam: {
            std::vector<std::string> avoid = free_;
            avoid.insert(avoid.end(), scope_.begin(), scope_.end());
            avoid.push_back("k");
            avoid.push_back("p1");
            avoid.push_back("p2");
            std::string hint = t.name().empty() ? "x" : t.name();
            std::string name = fresh_name(hint, avoid);
            out += '\\';
            out += name;
            out += ':';
            out += to_string(t.binder(), types_);
            out += ". ";
            scope_.push_back(name);
            print(t.body(), out);
            scope_.pop_back();
            return;
        }
        case TermKind::App:
            print_fun(t.fun(), out);
            out += ' ';
            print_arg(t.arg(), out);
            return;
        case TermKind::Fst:
        case TermKind::Snd:
            out += t.kind() == TermKind::Fst ? "p1 " : "p2 ";
            print_arg(t.arg(), out);
            return;
        default:
            print_atom(t, out);
        }
    }

private:
    void print_fun(const Term& t, std::string& out) {
        if (t.kind() == TermKind::Lam) {
            out += '(';
            print(t, out);
            out += ')';
        } else {
            print(t, out);
        }
    }

    void print_arg(const Term& t, std::string& out) {
        switch (t.kind()) {
        case TermKind::Lam:
        case TermKind::App:
        case TermKind::Fst:
        case TermKind::Snd:
            out += '(';
            print(t, out);
            out += ')';
            return;
        default:
            print_atom(t, out);
        }
    }

    void print_atom(const Term& t, std::string& out) {
        switch (t.kind()) {
        case TermKind::Bound:
            out += scope_.at(scope_.size() - 1 - t.index());
            return;
        case TermKind::Free:
            out += t.name();
            return;
        case TermKind::Unit:
            out += 'k';
            return;
        case TermKind::Pair:
            out += '<';
            print(t.first(), out);
            out += ", ";
            print(t.second(), out);
            out += '>';
            return;
        default:
            out += '(';
            print(t, out);
            out += ')';
        }
    }

    TypeTable* types_;
    std::vector<std::string> free_;
    std::vector<std::string> scope_;
};

}  // namespace

std::string to_string(const Term& term, TypeTable* types) {
    std::string out;
    TermPrinter(term, types).print(term, out);
    return out;
}

}  // namespace tlc
