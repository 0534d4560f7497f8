#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlc/type.hpp"

namespace tlc {

enum class TermKind : std::uint8_t { Bound, Free, Lam, App, Pair, Fst, Snd, Unit };

struct TermNode;

/// Immutable, typed term of the calculus with products and the terminal type.
///
/// Locally nameless: bound variables are de Bruijn indices, free variables
/// are names. Two alpha-equivalent terms are the same value (binder names are
/// only printing hints and take no part in equality). Every node carries its
/// type; constructors reject ill-typed combinations with IllTyped.
class Term {
public:
    Term() = default;

    explicit operator bool() const { return node_ != nullptr; }

    TermKind kind() const;
    Type type() const;
    std::uint32_t index() const;       // Bound
    const std::string& name() const;   // Free name, or Lam binder hint
    Type binder() const;               // Lam
    const Term& body() const;          // Lam
    const Term& fun() const;           // App
    const Term& arg() const;           // App, Fst, Snd
    const Term& first() const;         // Pair
    const Term& second() const;        // Pair

    /// Loose bound indices are all < loose(); 0 means locally closed.
    std::uint32_t loose() const;
    bool has_free() const;
    bool is_closed() const { return loose() == 0 && !has_free(); }
    std::size_t size() const;
    std::size_t hash() const;

    const TermNode* node() const { return node_.get(); }

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

private:
    explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const TermNode> node_;

    friend Term make_node(TermNode&&);
};

struct TermNode {
    TermKind kind = TermKind::Unit;
    Type type;
    std::uint32_t index = 0;
    std::string name;
    Type binder;
    Term a;
    Term b;
    std::uint32_t loose = 0;
    bool has_free = false;
    std::size_t size = 1;
    std::size_t hash = 0;
};

// Constructors.
Term var(std::string name, Type type);
Term bound(std::uint32_t index, Type type);
/// λname:type. body; every free occurrence of `name` in body becomes bound.
Term lam(const std::string& name, Type type, const Term& body);
/// Binder over a body that is already expressed relative to it.
Term lam_raw(std::string hint, Type type, Term body);
Term app(Term fun, Term arg);
Term app(Term fun, std::initializer_list<Term> args);
Term app(Term fun, const std::vector<Term>& args);
Term pair(Term first, Term second);
Term fst(Term arg);
Term snd(Term arg);
Term unit();

/// Replace the loose index 0 of a binder body by a locally closed term.
Term open(const Term& body, const Term& replacement);
/// Turn free occurrences of `name` into the loose index 0 (inverse of open).
Term close(const Term& term, const std::string& name, Type type);
/// Add `delta` to every loose index >= cutoff. delta may be negative.
Term shift(const Term& term, int delta, std::uint32_t cutoff = 0);
/// Whether loose index `index` occurs.
bool occurs_loose(const Term& term, std::uint32_t index);

/// Free variables in order of first (leftmost) occurrence.
std::vector<std::pair<std::string, Type>> free_vars(const Term& term);
bool occurs_free(const Term& term, const std::string& name);

/// Capture-free substitution of `replacement` for the free variable `name`.
Term substitute_term(const Term& term, const std::string& name, const Term& replacement);
/// Type-instance: atoms replaced uniformly in every annotation.
Term substitute_types(const Term& term, const TypeSubstitution& sub);

bool is_product_free(const Term& term);

/// Ordered free-variable typing context with distinct names.
class Context {
public:
    Context() = default;
    Context(std::initializer_list<std::pair<std::string, Type>> entries);

    void add(const std::string& name, Type type);
    std::optional<Type> lookup(const std::string& name) const;
    bool contains(const std::string& name) const { return lookup(name).has_value(); }

    const std::vector<std::pair<std::string, Type>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<std::pair<std::string, Type>> entries_;
};

/// Type of a term whose free variables all appear in ctx with matching types.
Type type_of(const Term& term, const Context& ctx);

/// Name not occurring in `avoid`, built from `hint` by counter suffix.
std::string fresh_name(const std::string& hint, const std::vector<std::string>& avoid);

}  // namespace tlc

template <>
struct std::hash<tlc::Term> {
    std::size_t operator()(const tlc::Term& t) const noexcept { return t ? t.hash() : 0; }
};
