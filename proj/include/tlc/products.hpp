#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tlc/separator.hpp"
#include "tlc/term.hpp"
#include "tlc/type.hpp"

namespace tlc {

enum class TypeRule { CurryCod, CurryDom, Assoc, ArrT, TArr, ProdT, TProd };

std::string rule_name(TypeRule rule);  // curryCod, curryDom, assoc, arrT, Tarr, prodT, Tprod
TypeRule parse_rule(const std::string& name);

/// Complexity c(C): atoms and T weigh `atom_weight`, c(A*B) = (c(A)+1) c(B),
/// c(A->B) = c(B)^c(A). Throws Overflow when the value needs more than
/// `max_bits` bits, SideConditionViolated when atom_weight < 2.
mpz_class measure(Type type, unsigned atom_weight = 2, std::size_t max_bits = std::size_t{1} << 20);

/// Path from the root: 'L' selects the domain / left factor, 'R' the codomain / right factor.
using TypePath = std::string;

Type subtype_at(Type type, const TypePath& path);
Type replace_at(Type type, const TypePath& path, Type replacement);

/// Rule applicable at the root of `type`, if any (the first in declaration order).
std::optional<TypeRule> redex_rule(Type type);
Type contract(Type redex, TypeRule rule);
bool is_product_normal(Type type);

enum class ReductionOrder { Innermost, Outermost };

struct TypeStep {
    TypePath position;
    TypeRule rule;
    Type before, after;
    /// Whole-type measures; empty when the value exceeds the bit budget.
    std::optional<mpz_class> measure_before, measure_after;
};

struct TypeNFTrace {
    Type input;
    std::vector<TypeStep> steps;
    Type output;
};

struct TypeNFOptions {
    ReductionOrder order = ReductionOrder::Innermost;
    unsigned atom_weight = 2;
    bool record_measures = true;
    std::size_t max_bits = std::size_t{1} << 16;
};

enum class MeasureScope { WholeType, Redex, RuleInequality, Undetermined };

struct StepCheck {
    bool decreases = false;
    MeasureScope scope = MeasureScope::Undetermined;
};

/// Compares c before and after a step on the whole types when both fit in
/// `max_bits`, otherwise on the rewritten subtree (every context is strictly
/// monotone in c, so the answer is the same). When even the subtree is too
/// large, the rule's inequality is checked against lower bounds of the
/// component measures:
///   curryCod ((b+1)c)^a > (b^a+1)c^a   needs a >= 2
///   curryDom c^((a+1)b) > c^(ab)       needs b >= 1, c >= 2
///   assoc    (a+1)(b+1)c > ((a+1)b+1)c
///   arrT     w^a > w                   needs a >= 2
///   Tarr     a^w > a                   needs a >= 2, w >= 2
///   prodT    (a+1)w > a,  Tprod (w+1)a > a
StepCheck check_step(const TypeStep& step, unsigned atom_weight = 2, std::size_t max_bits = std::size_t{1} << 16);

/// Leftmost-innermost (or outermost) reduction to the product normal form A^pi.
TypeNFTrace type_nf(Type type, const TypeNFOptions& options = {});

struct IsoWitness {
    Type source, target;
    Term forward;   // source -> target
    Term backward;  // target -> source
};

/// Primitive isomorphism for one rule at the root of `redex`.
IsoWitness rule_iso(Type redex, TypeRule rule);
/// h : A -> A^pi and its inverse, composed along the innermost trace and normalized.
IsoWitness build_iso(Type type);
/// Both round trips hold under decide_eq.
bool check_iso(const IsoWitness& iso);

struct Components {
    bool unit = false;  // the type is T and the term is k
    std::vector<Term> parts;
};

/// Left-nested components of the long normal form of a closed term whose type
/// is in product normal form.
Components split(const Term& term);

/// Least 1-based index where split(h a) and split(h b) differ. Throws EqualTerms.
std::size_t differing_component(const Term& a, const Term& b, const IsoWitness& iso);

/// Closed \x:A. pi^i x for A = x_{j=1}^n A_j. Throws IndexOutOfRange, IllTyped.
Term projector(std::size_t n, std::size_t i, Type type);

/// pi^i(h a') h_1 .. h_l (p1 x) (p2 x) = p1 x, and p2 x for b'.
struct ProductCertificate {
    Term a, b;
    Term a_prime, b_prime;
    /// Every atom of a, b and the normal form goes to one numeral instance.
    TypeSubstitution substitution;
    IsoWitness iso;  // at the instantiated type
    std::size_t arity = 1;
    std::size_t index = 1;
    SeparationCertificate component;
    Type slot;       // x : slot * slot
};

ProductCertificate separate_prod(const Term& a, const Term& b, const SeparateOptions& options = {});
/// pi^i (h a'), or the b side.
Term product_side(const ProductCertificate& cert, bool second);
bool verify(const ProductCertificate& cert);

}  // namespace tlc
