#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tlc/term.hpp"
#include "tlc/type.hpp"

namespace tlc {

// Surface grammar (UTF-8):
//   term    := '\' ident ':' type '.' term | app
//   app     := elem+                      (left associative)
//   elem    := 'p1' elem | 'p2' elem | atom
//   atom    := ident | 'k' | '<' term ',' term '>' | '(' term ')'
//   type    := prod ('->' type)?          (right associative)
//   prod    := tatom ('*' tatom)*         (left associative)
//   tatom   := ident | 'T' | '#' digits | '(' type ')'
// `#n` refers to entry n of a type table (used by certificates to keep
// tower types shared).

/// Untyped parse tree; free identifiers are kept by name.
struct SurfaceTerm {
    enum class Kind { Var, Lam, App, Pair, Fst, Snd, Unit };
    Kind kind;
    std::string name;
    Type type;
    std::shared_ptr<const SurfaceTerm> a;
    std::shared_ptr<const SurfaceTerm> b;
    std::size_t pos = 0;
};
using SurfacePtr = std::shared_ptr<const SurfaceTerm>;

SurfacePtr parse_surface(std::string_view text, const std::vector<Type>* type_refs = nullptr);
/// Resolve names against binders and ctx; throws UnboundVariable or IllTyped.
Term elaborate(const SurfaceTerm& surface, const Context& ctx);
/// Identifiers that are not bound by an enclosing abstraction.
std::vector<std::string> free_names(const SurfaceTerm& surface);
/// Extends `declared` with types for the remaining free names, found by
/// unification over all terms jointly; unconstrained parts default to
/// `fallback`. Throws IllTyped when no typing exists.
Context infer_context(const std::vector<const SurfaceTerm*>& terms, const Context& declared = {},
                      Type fallback = Type::atom("p"));

Term parse_term(std::string_view text, const Context& ctx = {},
                const std::vector<Type>* type_refs = nullptr);
Type parse_type(std::string_view text, const std::vector<Type>* type_refs = nullptr);
/// "x:p, f:p->p" (commas inside types are not allowed, so a flat split works).
Context parse_context(std::string_view text);

/// Renders large types as `#n` references into a shared table.
class TypeTable {
public:
    explicit TypeTable(std::size_t inline_limit = 48) : inline_limit_(inline_limit) {}

    std::string render(Type type);
    const std::vector<std::string>& entries() const { return entries_; }

    /// Parse table entries in order; each may reference earlier entries.
    static std::vector<Type> resolve(const std::vector<std::string>& entries);

private:
    std::size_t inline_limit_;
    std::vector<std::string> entries_;
    std::unordered_map<std::uint32_t, std::size_t> index_;
    std::unordered_map<std::uint32_t, std::size_t> length_;

    std::size_t printed_length(Type type);
};

/// Print in surface syntax. Binder names come from hints, renamed by counter
/// suffix when they would capture or shadow.
std::string to_string(const Term& term, TypeTable* types = nullptr);
std::string to_string(Type type, TypeTable* types);

}  // namespace tlc
