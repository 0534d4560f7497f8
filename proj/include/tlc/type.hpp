#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tlc {

enum class TypeKind : std::uint8_t { Atom, Terminal, Arrow, Product };

struct TypeNode {
    TypeKind kind;
    std::uint32_t id;
    std::string name;  // atoms only
    const TypeNode* left = nullptr;
    const TypeNode* right = nullptr;
};

/// Handle to an interned type. Structurally equal types share one node, so
/// equality and hashing are by identity. Nodes live for the whole process.
class Type {
public:
    Type() = default;

    static Type atom(std::string_view name);  // "T" yields the terminal type
    static Type terminal();
    static Type arrow(Type dom, Type cod);
    static Type product(Type left, Type right);

    /// The tower A_0 = base, A_{n+1} = A_n -> A_n.
    static Type tower(unsigned n, Type base);
    static Type tower(unsigned n);  // over the atom p
    /// N_i = A_{i+2}.
    static Type numeral(unsigned i, Type base);
    static Type numeral(unsigned i);

    explicit operator bool() const { return node_ != nullptr; }

    TypeKind kind() const { return node_->kind; }
    bool is_atom() const { return kind() == TypeKind::Atom; }
    bool is_terminal() const { return kind() == TypeKind::Terminal; }
    bool is_arrow() const { return kind() == TypeKind::Arrow; }
    bool is_product() const { return kind() == TypeKind::Product; }

    const std::string& name() const { return node_->name; }
    Type dom() const { return Type(node_->left); }
    Type cod() const { return Type(node_->right); }
    Type left() const { return Type(node_->left); }
    Type right() const { return Type(node_->right); }
    std::uint32_t id() const { return node_->id; }
    const TypeNode* node() const { return node_; }

    friend bool operator==(Type a, Type b) { return a.node_ == b.node_; }
    friend bool operator!=(Type a, Type b) { return a.node_ != b.node_; }
    friend bool operator<(Type a, Type b) { return a.id() < b.id(); }

    std::string to_string() const;
    /// Short form for diagnostics: towers shown as A_n, long output cut off.
    std::string brief() const;

private:
    explicit Type(const TypeNode* node) : node_(node) {}
    const TypeNode* node_ = nullptr;

    friend class TypeInterner;
};

using TypeSubstitution = std::map<std::string, Type>;

/// Uniform replacement of atoms; shared subtypes are visited once.
Type substitute(Type type, const TypeSubstitution& sub);
/// Every atom replaced by `target`.
Type substitute_all_atoms(Type type, Type target);

std::set<std::string> atoms(Type type);
bool is_product_free(Type type);  // no products and no T
/// Number of distinct interned nodes reachable from `type`.
std::size_t node_count(Type type);
/// Size of the type written out as a tree (saturates at SIZE_MAX).
std::size_t tree_size(Type type);
/// Number of nodes the interner currently holds.
std::size_t interned_count();

/// Arity-decomposition: B_1 -> ... -> B_k -> R with R not an arrow.
struct ArrowSpine {
    std::vector<Type> args;
    Type result;
};
ArrowSpine arrow_spine(Type type);
Type arrows(const std::vector<Type>& args, Type result);

}  // namespace tlc

template <>
struct std::hash<tlc::Type> {
    std::size_t operator()(tlc::Type t) const noexcept { return t ? t.id() : 0; }
};
