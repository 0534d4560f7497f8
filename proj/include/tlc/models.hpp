#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlc/term.hpp"
#include "tlc/type.hpp"

namespace tlc {

/// Full finite type hierarchy over P = {0, ..., base-1} for the single atom p.
/// Every other atom is read as p.
struct PModel {
    unsigned base = 2;
};

/// Element of a P-type, identified by its index in the canonical order:
/// p has codes 0..h-1; a function A->B is the base-|B| numeral whose digit
/// at position k (least significant first) is its value on the k-th element
/// of A.
struct Functional {
    Type type;
    std::uint64_t code = 0;

    friend bool operator==(const Functional& a, const Functional& b) {
        return a.type == b.type && a.code == b.code;
    }
    friend bool operator!=(const Functional& a, const Functional& b) { return !(a == b); }
};

using Assignment = std::map<std::string, Functional>;

/// Values are kept below 2^63; larger cardinalities throw Overflow.
std::uint64_t cardinality(const PModel& model, Type type);
/// All elements in canonical order. Throws Overflow above `limit` elements.
std::vector<Functional> enumerate(const PModel& model, Type type, std::uint64_t limit = 1u << 24);

Functional apply(const PModel& model, const Functional& f, const Functional& x);
/// Graph as a list of codes indexed by the domain enumeration.
std::vector<std::uint64_t> table(const PModel& model, const Functional& f);
Functional from_table(const PModel& model, Type type, const std::vector<std::uint64_t>& values);
/// Readable rendering: an ordinal, or a bracketed graph.
std::string describe(const PModel& model, const Functional& f);

/// Denotation V of a product-free term under an assignment of its free
/// variables. Throws UnboundVariable, IllTyped, Overflow.
Functional eval(const Term& term, const PModel& model, const Assignment& assignment = {});
/// V_term applied successively to args; the result may live in a type whose
/// full cardinality overflows as long as intermediate values are only applied.
Functional eval_apply(const Term& term, const PModel& model, const std::vector<Functional>& args,
                      const Assignment& assignment = {});

/// Transport of a functional along a permutation of P: sigma on p, and
/// f |-> sigma_B . f . sigma_A^{-1} on A->B.
Functional relabel(const PModel& model, const Functional& f, const std::vector<unsigned>& sigma);

struct Distinction {
    PModel model;
    /// Arguments after relabeling: a applied to them gives 0, b gives 1.
    std::vector<Functional> args;
    /// sigma[old value] = new value.
    std::vector<unsigned> relabeling;
    /// Values of a and b on the arguments before relabeling.
    std::uint64_t value_a = 0;
    std::uint64_t value_b = 1;
};

struct DistinguishOptions {
    unsigned max_base = 3;
    /// Upper bound on the number of argument tuples examined per base.
    std::uint64_t tuple_budget = std::uint64_t{1} << 22;
    unsigned jobs = 1;
};

/// Search bases 2..max_base and argument tuples in lexicographic order
/// (first argument most significant) for a model telling closed terms a, b
/// apart. nullopt when none exists within the searched bases; Overflow when a
/// base had to be skipped because its tuple space exceeded the budget.
std::optional<Distinction> distinguish(const Term& a, const Term& b, const DistinguishOptions& options = {});

/// Prime-power codes n_1..n_q of the elements psi_j of the first argument
/// type of phi, in the given order of that type (canonical when empty).
std::vector<std::uint64_t> argument_codes(const PModel& model, Type first_arg,
                                          const std::vector<Functional>& order = {});

std::uint64_t kappa(const PModel& model, const Functional& phi);

struct DefineOptions {
    /// Order in which elements of the first argument type appear in the
    /// conditional chain; canonical when empty.
    std::vector<Functional> domain_order;
};

/// phi^lambda : A^i with A^i = A[p := N_i]. Throws LevelTooSmall when i < kappa(phi).
Term define_functional(const PModel& model, const Functional& phi, unsigned level,
                       const DefineOptions& options = {});

/// Whether closed `term` i-defines phi: numerals compared by decide_eq; at
/// arrow types every domain element's definer is applied and checked
/// recursively, for at most `depth` argument positions (all when negative).
bool i_defines_check(const Term& term, const PModel& model, const Functional& phi, unsigned level,
                     int depth = -1);

/// The n-th prime (1-based: prime(1) = 2).
std::uint64_t nth_prime(std::size_t n);

}  // namespace tlc
