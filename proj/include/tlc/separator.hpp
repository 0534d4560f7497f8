#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlc/models.hpp"
#include "tlc/term.hpp"

namespace tlc {

struct ModelWitness {
    unsigned base = 2;
    /// Distinguishing arguments, already relabeled so that a gives 0 and b gives 1.
    std::vector<Functional> args;
    std::vector<unsigned> relabeling;
};

/// Applicative context separating two unequal product-free terms:
///   (\x_1..x_m. a') h_1 .. h_n = c   and   (\x_1..x_m. b') h_1 .. h_n = d.
struct SeparationCertificate {
    Term a, b;
    Term a_prime, b_prime;
    std::vector<std::pair<std::string, Type>> bound_vars;
    std::vector<Term> head_args;
    Term c, d;
    unsigned level = 0;
    ModelWitness model;
    std::vector<std::uint64_t> kappas;
    /// head_args = definers (one per model argument), lowering pairs, (\u.d), c.
    std::size_t definer_count = 0;
    /// c and d are the selectors \x y. x and \x y. y, so that K a e f = e.
    bool two_valued = false;
};

struct SeparateOptions {
    DistinguishOptions search;
    /// Level to use instead of the smallest admissible one; must be even and at least every kappa.
    std::optional<unsigned> level;
    /// Levels above this are refused with ResourceExhausted.
    unsigned max_level = 24;
    /// Confirm a_2 phi_1 .. phi_k = [0]_i and the b counterpart before assembling.
    bool check_intermediate = true;
};

/// Throws EqualTerms, NotSeparable, ResourceExhausted, TypeMismatch, IllTyped.
SeparationCertificate separate(const Term& a, const Term& b, const Term& c, const Term& d,
                               const SeparateOptions& options = {});
/// Targets e, f : slot; c = \x y. x and d = \x y. y at slot.
SeparationCertificate separate_two(const Term& a, const Term& b, Type slot = Type::atom("p"),
                                   const SeparateOptions& options = {});

/// (\x_1..x_m. a') h_1 .. h_n, or the b side when `second`.
Term applied_side(const SeparationCertificate& cert, bool second);

/// Both equalities hold under decide_eq and the primed terms are type-instances
/// of the originals. Throws IllTyped for structurally broken certificates.
bool verify(const SeparationCertificate& cert);

/// Atoms occurring anywhere in the term's annotations.
std::vector<std::string> term_atoms(const Term& term);
/// Whether `instance` arises from `general` by one uniform substitution of types for atoms.
bool is_type_instance(const Term& general, const Term& instance);

}  // namespace tlc
