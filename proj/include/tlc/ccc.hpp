#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tlc/products.hpp"
#include "tlc/random.hpp"
#include "tlc/syntax.hpp"
#include "tlc/term.hpp"
#include "tlc/type.hpp"

namespace tlc {

enum class ArrowKind { Id, Proj1, Proj2, Eval, Bang, Compose, Pairing, Curry };

struct ArrowNode;

/// Arrow term of the free cartesian closed category. Built only through the
/// checked constructors below, so every value is well formed.
class Arrow {
public:
    Arrow() = default;
    explicit operator bool() const { return node_ != nullptr; }

    ArrowKind kind() const;
    Type source() const;
    Type target() const;
    /// Type indices: Id/Bang: A; Proj/Eval: A, B; Curry: C, A.
    Type index(int k) const;
    /// Compose: g (first) after f (second); Pairing: f, g; Curry: the body.
    const Arrow& first() const;
    const Arrow& second() const;
    std::size_t size() const;

    friend bool operator==(const Arrow& a, const Arrow& b);
    friend bool operator!=(const Arrow& a, const Arrow& b) { return !(a == b); }

private:
    explicit Arrow(std::shared_ptr<const ArrowNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ArrowNode> node_;
    friend Arrow make_arrow(ArrowNode&&);
};

struct ArrowNode {
    ArrowKind kind = ArrowKind::Id;
    Type source, target;
    Type a, b;
    Arrow f, g;
    std::size_t size = 1;
};

Arrow id_arrow(Type a);
Arrow proj1_arrow(Type a, Type b);
Arrow proj2_arrow(Type a, Type b);
Arrow eval_arrow(Type a, Type b);
Arrow bang_arrow(Type a);
/// g . f; throws IllFormed unless target(f) = source(g).
Arrow compose(const Arrow& g, const Arrow& f);
/// <<f, g>>; throws IllFormed unless the sources agree.
Arrow pairing(const Arrow& f, const Arrow& g);
/// curry[C,A](f) for f : C*A |- B; throws IllFormed otherwise.
Arrow curry(Type c, Type a, const Arrow& f);

std::pair<Type, Type> arrow_type_of(const Arrow& f);

/// id[A], p1[A,B], p2[A,B], eval[A,B], bang[A], g . f, <f, g>, curry[C,A](f).
Arrow parse_arrow(std::string_view text, const std::vector<Type>* type_refs = nullptr);
std::string to_string(const Arrow& f, TypeTable* types = nullptr);

/// Closed term of type source -> target.
Term to_lambda(const Arrow& f);
/// Arrow denoting a closed term of arrow type (inverse of to_lambda up to equality).
Arrow compile(const Term& closed);
/// Throws TypeMismatch when the arrow types differ.
bool decide_ccc_eq(const Arrow& f, const Arrow& g);
Arrow substitute_types(const Arrow& f, const TypeSubstitution& sub);

/// Random arrow with the given source.
Arrow random_arrow(Rng& rng, Type source, unsigned depth, const TypeGenOptions& types);

struct AxiomResult {
    std::string name;
    std::string law;
    int instances = 0;
    int passed = 0;
};

struct AxiomOptions {
    int instances = 20;
    std::uint64_t seed = 1;
};

/// Instances of the seven axiom groups at random types, each also checked
/// after a random substitution of types for atoms.
std::vector<AxiomResult> check_axioms(const AxiomOptions& options = {});

/// Derivation of p1[C,C] = p2[C,C] from f = g; C is the atom p.
struct CollapseCertificate {
    Arrow f, g;
    /// Substitution of types for atoms that turns f = g into the instance used.
    TypeSubstitution substitution;
    Arrow f_instance, g_instance;
    /// E[u] = eval . <<context, curry(u . p2)>>; absent when E is the identity.
    std::optional<Arrow> context;
    std::optional<ProductCertificate> separation;
    Type object;  // C
    Arrow target1, target2;
    /// The rule template closing the argument.
    std::string schema;
};

Arrow plug(const CollapseCertificate& cert, const Arrow& hole);
CollapseCertificate collapse(const Arrow& f, const Arrow& g, const SeparateOptions& options = {});
/// Replays the derivation: instance by substitution, E[f'] = p1, E[g'] = p2.
bool verify(const CollapseCertificate& cert);

}  // namespace tlc
