#include "tlc/ccc.hpp"

#include <functional>

#include "tlc/error.hpp"
#include "tlc/lexer.hpp"
#include "tlc/normalize.hpp"
#include "tlc/syntax.hpp"

namespace tlc {

Arrow make_arrow(ArrowNode&& n) {
    n.size = 1 + (n.f ? n.f.size() : 0) + (n.g ? n.g.size() : 0);
    return Arrow(std::make_shared<const ArrowNode>(std::move(n)));
}

ArrowKind Arrow::kind() const { return node_->kind; }
Type Arrow::source() const { return node_->source; }
Type Arrow::target() const { return node_->target; }
Type Arrow::index(int k) const { return k == 0 ? node_->a : node_->b; }
const Arrow& Arrow::first() const { return node_->f; }
const Arrow& Arrow::second() const { return node_->g; }
std::size_t Arrow::size() const { return node_->size; }

bool operator==(const Arrow& x, const Arrow& y) {
    if (x.node_ == y.node_) return true;
    if (!x.node_ || !y.node_) return false;
    const ArrowNode &a = *x.node_, &b = *y.node_;
    return a.kind == b.kind && a.source == b.source && a.target == b.target && a.a == b.a && a.b == b.b &&
           a.f == b.f && a.g == b.g;
}

namespace {

ArrowNode leaf(ArrowKind kind, Type source, Type target, Type a, Type b = {}) {
    ArrowNode n;
    n.kind = kind;
    n.source = source;
    n.target = target;
    n.a = a;
    n.b = b;
    return n;
}

}  // namespace

Arrow id_arrow(Type a) { return make_arrow(leaf(ArrowKind::Id, a, a, a)); }
Arrow proj1_arrow(Type a, Type b) { return make_arrow(leaf(ArrowKind::Proj1, Type::product(a, b), a, a, b)); }
Arrow proj2_arrow(Type a, Type b) { return make_arrow(leaf(ArrowKind::Proj2, Type::product(a, b), b, a, b)); }
Arrow eval_arrow(Type a, Type b) {
    return make_arrow(leaf(ArrowKind::Eval, Type::product(Type::arrow(a, b), a), b, a, b));
}
Arrow bang_arrow(Type a) { return make_arrow(leaf(ArrowKind::Bang, a, Type::terminal(), a)); }

Arrow compose(const Arrow& g, const Arrow& f) {
    if (f.target() != g.source())
        throw IllFormed("composing " + f.source().brief() + " |- " + f.target().brief() + " into an arrow from " +
                        g.source().brief());
    ArrowNode n = leaf(ArrowKind::Compose, f.source(), g.target(), {});
    n.f = g;
    n.g = f;
    return make_arrow(std::move(n));
}

Arrow pairing(const Arrow& f, const Arrow& g) {
    if (f.source() != g.source())
        throw IllFormed("pairing arrows with sources " + f.source().brief() + " and " + g.source().brief());
    ArrowNode n = leaf(ArrowKind::Pairing, f.source(), Type::product(f.target(), g.target()), {});
    n.f = f;
    n.g = g;
    return make_arrow(std::move(n));
}

Arrow curry(Type c, Type a, const Arrow& f) {
    if (f.source() != Type::product(c, a))
        throw IllFormed("curry needs an arrow from " + Type::product(c, a).brief() + ", got one from " +
                        f.source().brief());
    ArrowNode n = leaf(ArrowKind::Curry, c, Type::arrow(a, f.target()), c, a);
    n.f = f;
    return make_arrow(std::move(n));
}

std::pair<Type, Type> arrow_type_of(const Arrow& f) {
    if (!f) throw IllFormed("empty arrow term");
    return {f.source(), f.target()};
}

// ---- Surface syntax -----------------------------------------------------

namespace {

class ArrowParser {
public:
    ArrowParser(TokenCursor& c, const std::vector<Type>* refs) : c_(c), refs_(refs) {}

    Arrow arrow() {
        Arrow head = atom();
        if (c_.accept(TokenKind::Dot)) {
            std::size_t pos = c_.peek().pos;
            Arrow rest = arrow();
            try {
                return compose(head, rest);
            } catch (const IllFormed& e) {
                throw ParseError(pos, e.what());
            }
        }
        return head;
    }

private:
    std::vector<Type> indices(std::size_t n) {
        c_.expect(TokenKind::LBracket, "'['");
        std::vector<Type> out;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0) c_.expect(TokenKind::Comma, "','");
            out.push_back(parse_type(c_, refs_));
        }
        c_.expect(TokenKind::RBracket, "']'");
        return out;
    }

    Arrow atom() {
        const Token& t = c_.peek();
        if (c_.accept(TokenKind::LParen)) {
            Arrow inner = arrow();
            c_.expect(TokenKind::RParen, "')'");
            return inner;
        }
        if (t.kind == TokenKind::LAngle) {
            std::size_t pos = c_.next().pos;
            Arrow f = arrow();
            c_.expect(TokenKind::Comma, "','");
            Arrow g = arrow();
            c_.expect(TokenKind::RAngle, "'>'");
            try {
                return pairing(f, g);
            } catch (const IllFormed& e) {
                throw ParseError(pos, e.what());
            }
        }
        if (t.kind != TokenKind::Ident) c_.fail("expected an arrow term");
        std::string name = c_.next().text;
        if (name == "id") return id_arrow(indices(1)[0]);
        if (name == "bang") return bang_arrow(indices(1)[0]);
        if (name == "p1" || name == "p2" || name == "eval") {
            auto ix = indices(2);
            if (name == "p1") return proj1_arrow(ix[0], ix[1]);
            if (name == "p2") return proj2_arrow(ix[0], ix[1]);
            return eval_arrow(ix[0], ix[1]);
        }
        if (name == "curry") {
            auto ix = indices(2);
            std::size_t pos = c_.expect(TokenKind::LParen, "'('").pos;
            Arrow body = arrow();
            c_.expect(TokenKind::RParen, "')'");
            try {
                return curry(ix[0], ix[1], body);
            } catch (const IllFormed& e) {
                throw ParseError(pos, e.what());
            }
        }
        throw ParseError(t.pos, "unknown arrow constant '" + name + "'");
    }

    TokenCursor& c_;
    const std::vector<Type>* refs_;
};

void print(const Arrow& f, std::string& out, TypeTable* types) {
    auto idx = [&](std::initializer_list<Type> ts) {
        out += '[';
        bool first = true;
        for (Type t : ts) {
            if (!first) out += ',';
            first = false;
            out += to_string(t, types);
        }
        out += ']';
    };
    switch (f.kind()) {
    case ArrowKind::Id:
        out += "id";
        idx({f.index(0)});
        return;
    case ArrowKind::Bang:
        out += "bang";
        idx({f.index(0)});
        return;
    case ArrowKind::Proj1:
    case ArrowKind::Proj2:
    case ArrowKind::Eval:
        out += f.kind() == ArrowKind::Proj1 ? "p1" : f.kind() == ArrowKind::Proj2 ? "p2" : "eval";
        idx({f.index(0), f.index(1)});
        return;
    case ArrowKind::Compose: {
        bool paren = f.first().kind() == ArrowKind::Compose;
        if (paren) out += '(';
        print(f.first(), out, types);
        if (paren) out += ')';
        out += " . ";
        print(f.second(), out, types);
        return;
    }
    case ArrowKind::Pairing:
        out += '<';
        print(f.first(), out, types);
        out += ", ";
        print(f.second(), out, types);
        out += '>';
        return;
    case ArrowKind::Curry:
        out += "curry";
        idx({f.index(0), f.index(1)});
        out += '(';
        print(f.first(), out, types);
        out += ')';
        return;
    }
}

}  // namespace

Arrow parse_arrow(std::string_view text, const std::vector<Type>* type_refs) {
    TokenCursor c(tokenize(text));
    Arrow f = ArrowParser(c, type_refs).arrow();
    if (!c.at_end()) c.fail("unexpected trailing input");
    return f;
}

std::string to_string(const Arrow& f, TypeTable* types) {
    std::string out;
    print(f, out, types);
    return out;
}

// ---- Translation --------------------------------------------------------

Term to_lambda(const Arrow& f) {
    if (!f) throw IllFormed("empty arrow term");
    Type s = f.source();
    Term x = var("x", s);
    switch (f.kind()) {
    case ArrowKind::Id:
        return lam("x", s, x);
    case ArrowKind::Proj1:
        return lam("x", s, fst(x));
    case ArrowKind::Proj2:
        return lam("x", s, snd(x));
    case ArrowKind::Eval:
        return lam("x", s, app(fst(x), snd(x)));
    case ArrowKind::Bang:
        return lam("x", s, unit());
    case ArrowKind::Compose:
        return lam("x", s, app(to_lambda(f.first()), app(to_lambda(f.second()), x)));
    case ArrowKind::Pairing:
        return lam("x", s, pair(app(to_lambda(f.first()), x), app(to_lambda(f.second()), x)));
    case ArrowKind::Curry: {
        Type a = f.index(1);
        Term y = var("y", a);
        return lam("x", s, lam("y", a, app(to_lambda(f.first()), pair(x, y))));
    }
    }
    throw IllFormed("unknown arrow constructor");
}

namespace {

// Arrow Gamma |- type(t) for a term over the context ctx (innermost binder last);
// Gamma is the left-nested product of the context types.
class Compiler {
public:
    Arrow term(const Term& t, std::vector<Type>& ctx) {
        Type gamma = context_type(ctx);
        switch (t.kind()) {
        case TermKind::Bound:
            return lookup(ctx, ctx.size() - 1 - t.index());
        case TermKind::Free:
            throw IllTyped("cannot compile the free variable " + t.name());
        case TermKind::Lam: {
            ctx.push_back(t.binder());
            Arrow body = term(t.body(), ctx);
            ctx.pop_back();
            return curry(gamma, t.binder(), body);
        }
        case TermKind::App: {
            Type fn = t.fun().type();
            return compose(eval_arrow(fn.dom(), fn.cod()), pairing(term(t.fun(), ctx), term(t.arg(), ctx)));
        }
        case TermKind::Pair:
            return pairing(term(t.first(), ctx), term(t.second(), ctx));
        case TermKind::Fst:
        case TermKind::Snd: {
            Type pt = t.arg().type();
            Arrow proj = t.kind() == TermKind::Fst ? proj1_arrow(pt.left(), pt.right())
                                                   : proj2_arrow(pt.left(), pt.right());
            return compose(proj, term(t.arg(), ctx));
        }
        case TermKind::Unit:
            return bang_arrow(gamma);
        }
        throw IllTyped("unknown term node");
    }

private:
    static Type context_type(const std::vector<Type>& ctx) {
        Type g = ctx.front();
        for (std::size_t k = 1; k < ctx.size(); ++k) g = Type::product(g, ctx[k]);
        return g;
    }

    static Arrow lookup(const std::vector<Type>& ctx, std::size_t position) {
        std::size_t n = ctx.size();
        if (n == 1) return id_arrow(ctx[0]);
        std::vector<Type> prefix(ctx.begin(), ctx.end() - 1);
        Type rest = context_type(prefix);
        if (position == n - 1) return proj2_arrow(rest, ctx[n - 1]);
        return compose(lookup(prefix, position), proj1_arrow(rest, ctx[n - 1]));
    }
};

}  // namespace

Arrow compile(const Term& closed) {
    if (!closed.is_closed()) throw IllTyped("compile needs a closed term");
    Type t = closed.type();
    if (!t.is_arrow()) throw IllTyped("compile needs a term of arrow type, got " + t.brief());
    std::vector<Type> ctx{t.dom()};
    Term body = closed.kind() == TermKind::Lam ? closed.body() : app(closed, bound(0, t.dom()));
    return Compiler().term(body, ctx);
}

bool decide_ccc_eq(const Arrow& f, const Arrow& g) {
    if (f.source() != g.source() || f.target() != g.target())
        throw TypeMismatch("arrow types " + f.source().brief() + " |- " + f.target().brief() + " and " +
                           g.source().brief() + " |- " + g.target().brief());
    return decide_eq(to_lambda(f), to_lambda(g));
}

Arrow substitute_types(const Arrow& f, const TypeSubstitution& sub) {
    auto s = [&](Type t) { return t ? substitute(t, sub) : t; };
    switch (f.kind()) {
    case ArrowKind::Id:
        return id_arrow(s(f.index(0)));
    case ArrowKind::Bang:
        return bang_arrow(s(f.index(0)));
    case ArrowKind::Proj1:
        return proj1_arrow(s(f.index(0)), s(f.index(1)));
    case ArrowKind::Proj2:
        return proj2_arrow(s(f.index(0)), s(f.index(1)));
    case ArrowKind::Eval:
        return eval_arrow(s(f.index(0)), s(f.index(1)));
    case ArrowKind::Compose:
        return compose(substitute_types(f.first(), sub), substitute_types(f.second(), sub));
    case ArrowKind::Pairing:
        return pairing(substitute_types(f.first(), sub), substitute_types(f.second(), sub));
    case ArrowKind::Curry:
        return curry(s(f.index(0)), s(f.index(1)), substitute_types(f.first(), sub));
    }
    throw IllFormed("unknown arrow constructor");
}

// ---- Random arrows and axioms ---------------------------------------------

Arrow random_arrow(Rng& rng, Type source, unsigned depth, const TypeGenOptions& types) {
    std::vector<int> options{0, 1};
    if (source.is_product()) {
        options.push_back(2);
        options.push_back(3);
        if (source.left().is_arrow() && source.left().dom() == source.right()) options.push_back(4);
    }
    if (depth > 0) {
        options.push_back(5);
        options.push_back(6);
        options.push_back(7);
        options.push_back(7);
    }
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    switch (options[pick(rng)]) {
    case 0:
        return id_arrow(source);
    case 1:
        return bang_arrow(source);
    case 2:
        return proj1_arrow(source.left(), source.right());
    case 3:
        return proj2_arrow(source.left(), source.right());
    case 4:
        return eval_arrow(source.right(), source.left().cod());
    case 5:
        return pairing(random_arrow(rng, source, depth - 1, types), random_arrow(rng, source, depth - 1, types));
    case 6: {
        TypeGenOptions small = types;
        small.max_depth = 1;
        Type a = random_type(rng, small);
        return curry(source, a, random_arrow(rng, Type::product(source, a), depth - 1, types));
    }
    default: {
        Arrow f = random_arrow(rng, source, depth - 1, types);
        return compose(random_arrow(rng, f.target(), depth - 1, types), f);
    }
    }
}

namespace {

template <class Pred>
Arrow arrow_where(Rng& rng, Type source, const TypeGenOptions& types, Pred pred) {
    for (int attempt = 0; attempt < 40; ++attempt) {
        Arrow f = random_arrow(rng, source, 2, types);
        if (pred(f.target())) return f;
    }
    return {};
}

using Instance = std::vector<std::pair<Arrow, Arrow>>;

}  // namespace

std::vector<AxiomResult> check_axioms(const AxiomOptions& options) {
    Rng rng(options.seed);
    TypeGenOptions types;
    types.atoms = {"p", "q", "r"};
    types.max_depth = 2;
    types.products = true;
    types.terminal = true;
    auto ty = [&] { return random_type(rng, types); };

    struct Group {
        const char* name;
        const char* law;
        std::function<Instance()> make;
    };
    std::vector<Group> groups{
        {"identity", "f . id[A] = f = id[B] . f",
         [&] {
             Arrow f = random_arrow(rng, ty(), 2, types);
             return Instance{{compose(f, id_arrow(f.source())), f}, {compose(id_arrow(f.target()), f), f}};
         }},
        {"associativity", "h . (g . f) = (h . g) . f",
         [&] {
             Arrow f = random_arrow(rng, ty(), 2, types);
             Arrow g = random_arrow(rng, f.target(), 2, types);
             Arrow h = random_arrow(rng, g.target(), 2, types);
             return Instance{{compose(h, compose(g, f)), compose(compose(h, g), f)}};
         }},
        {"product-beta", "p1[A,B] . <f, g> = f, p2[A,B] . <f, g> = g",
         [&] {
             Type c = ty();
             Arrow f = random_arrow(rng, c, 2, types), g = random_arrow(rng, c, 2, types);
             Arrow pg = pairing(f, g);
             return Instance{{compose(proj1_arrow(f.target(), g.target()), pg), f},
                             {compose(proj2_arrow(f.target(), g.target()), pg), g}};
         }},
        {"product-eta", "<p1[A,B] . h, p2[A,B] . h> = h",
         [&] {
             Type c = ty();
             Arrow h = arrow_where(rng, c, types, [](Type t) { return t.is_product(); });
             if (!h) h = pairing(random_arrow(rng, c, 1, types), random_arrow(rng, c, 1, types));
             Type a = h.target().left(), b = h.target().right();
             return Instance{{pairing(compose(proj1_arrow(a, b), h), compose(proj2_arrow(a, b), h)), h}};
         }},
        {"exponential-beta", "eval[A,B] . <curry[C,A](f) . p1[C,A], p2[C,A]> = f",
         [&] {
             Type c = ty(), a = ty();
             Arrow f = random_arrow(rng, Type::product(c, a), 2, types);
             Arrow lhs = compose(eval_arrow(a, f.target()),
                                 pairing(compose(curry(c, a, f), proj1_arrow(c, a)), proj2_arrow(c, a)));
             return Instance{{lhs, f}};
         }},
        {"exponential-eta", "curry[C,A](eval[A,B] . <g . p1[C,A], p2[C,A]>) = g",
         [&] {
             Type c = ty();
             Arrow g = arrow_where(rng, c, types, [](Type t) { return t.is_arrow(); });
             if (!g) {
                 Type a = ty();
                 g = curry(c, a, random_arrow(rng, Type::product(c, a), 1, types));
             }
             Type a = g.target().dom(), b = g.target().cod();
             Arrow lhs = curry(c, a, compose(eval_arrow(a, b), pairing(compose(g, proj1_arrow(c, a)), proj2_arrow(c, a))));
             return Instance{{lhs, g}};
         }},
        {"terminal", "f = bang[A] for f : A |- T",
         [&] {
             Type a = ty();
             Arrow f = arrow_where(rng, a, types, [](Type t) { return t.is_terminal(); });
             if (!f) {
                 Arrow g = random_arrow(rng, a, 2, types);
                 f = compose(curry(g.target(), a, bang_arrow(Type::product(g.target(), a))), g);
                 f = compose(bang_arrow(f.target()), f);
             }
             return Instance{{f, bang_arrow(a)}};
         }},
    };

    std::vector<AxiomResult> report;
    for (auto& g : groups) {
        AxiomResult r{g.name, g.law, 0, 0};
        for (int k = 0; k < options.instances; ++k) {
            Instance inst = g.make();
            TypeSubstitution sub;
            for (const char* atom : {"p", "q", "r"}) sub.emplace(atom, ty());
            bool ok = true;
            for (const auto& [lhs, rhs] : inst)
                ok = ok && decide_ccc_eq(lhs, rhs) &&
                     decide_ccc_eq(substitute_types(lhs, sub), substitute_types(rhs, sub));
            ++r.instances;
            if (ok) ++r.passed;
        }
        report.push_back(r);
    }
    return report;
}

// ---- Collapse -------------------------------------------------------------

Arrow plug(const CollapseCertificate& cert, const Arrow& hole) {
    if (!cert.context) return hole;
    Type y = Type::product(cert.object, cert.object);
    Type a = hole.source();
    Type z = Type::arrow(a, hole.target());
    Arrow lifted = curry(y, a, compose(hole, proj2_arrow(y, a)));
    return compose(eval_arrow(z, cert.object), pairing(*cert.context, lifted));
}

CollapseCertificate collapse(const Arrow& f, const Arrow& g, const SeparateOptions& options) {
    if (decide_ccc_eq(f, g)) throw EqualArrows();
    CollapseCertificate cert;
    cert.f = f;
    cert.g = g;
    Type src = f.source();
    if (f.kind() == ArrowKind::Proj1 && g.kind() == ArrowKind::Proj2 && f.index(0) == f.index(1) &&
        src == g.source() && f.index(0).is_atom()) {
        cert.object = f.index(0);
        cert.f_instance = f;
        cert.g_instance = g;
    } else {
        ProductCertificate pc = separate_prod(to_lambda(f), to_lambda(g), options);
        cert.object = pc.slot;
        cert.substitution = pc.substitution;
        cert.f_instance = substitute_types(f, pc.substitution);
        cert.g_instance = substitute_types(g, pc.substitution);

        Type yt = Type::product(pc.slot, pc.slot);
        Type zt = pc.a_prime.type();
        Term y = var("y", yt), z = var("z", zt);
        Term body = app(projector(pc.arity, pc.index, pc.iso.target), app(pc.iso.forward, z));
        for (const auto& h : pc.component.head_args) body = app(body, h);
        body = app(body, {fst(y), snd(y)});
        cert.context = compile(lam("y", yt, lam("z", zt, body)));
        cert.separation = std::move(pc);
    }
    Type c = cert.object;
    cert.target1 = proj1_arrow(c, c);
    cert.target2 = proj2_arrow(c, c);
    std::string cs = c.to_string();
    cert.schema = "for all h1, h2 : E |- " + cs + ": h1 = p1[" + cs + "," + cs + "] . <h1, h2> = p2[" + cs + "," +
                  cs + "] . <h1, h2> = h2";
    return cert;
}

bool verify(const CollapseCertificate& cert) {
    if (!cert.f || !cert.g || !cert.f_instance || !cert.g_instance || !cert.object)
        throw IllTyped("incomplete collapse certificate");
    if (cert.f.source() != cert.g.source() || cert.f.target() != cert.g.target()) return false;
    if (substitute_types(cert.f, cert.substitution) != cert.f_instance) return false;
    if (substitute_types(cert.g, cert.substitution) != cert.g_instance) return false;
    Type c = cert.object;
    if (cert.target1 != proj1_arrow(c, c) || cert.target2 != proj2_arrow(c, c)) return false;
    Arrow left = plug(cert, cert.f_instance), right = plug(cert, cert.g_instance);
    if (left.source() != cert.target1.source() || left.target() != cert.target1.target()) return false;
    return decide_ccc_eq(left, cert.target1) && decide_ccc_eq(right, cert.target2);
}

}  // namespace tlc
