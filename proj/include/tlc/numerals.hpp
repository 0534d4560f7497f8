#pragma once

#include <string>
#include <utility>

#include "tlc/term.hpp"
#include "tlc/type.hpp"

namespace tlc {

/// [n]_i = \x:A_{i+1}. \y:A_i. x^n(y) : N_i, over the atom p.
Term church(unsigned n, unsigned i);
/// n if `term` is literally a Church numeral of some level, else -1.
long church_value(const Term& term);

enum class CombinatorKind {
    Cond,    // C_i : N_i -> N_i -> N_i -> N_i
    Lower,   // R_i : N_{i+1} -> N_i
    Expo,    // E_i : N_{i+1} -> N_{i+1} -> N_i
    Add,     // S_i
    Mul,     // M_i
    Pair,    // Pi_i : N_i -> N_i -> N_{i+1}
    Proj1,   // pi^1_i : N_{i+1} -> N_i
    Proj2,   // pi^2_i
    AuxT,    // T_i : N_{i+1} -> N_{i+1}
    AuxH,    // H_i : N_{i+3} -> N_{i+1}
    Pred,    // P_i : N_{i+3} -> N_i
    Raise,   // Z_i : N_{i-1} -> N_i, i >= 1
    Check,   // D^k_i : N_i -> N_i, i >= 3k
};

/// Closed combinator built literally from its defining abstraction (never
/// normalized). Throws SideConditionViolated when the level is invalid.
Term combinator(CombinatorKind kind, unsigned i, unsigned k = 0);

std::string combinator_symbol(CombinatorKind kind);
/// Accepts the symbols C R E S M Pi pi1 pi2 T H P Z D (and long names).
CombinatorKind parse_combinator_kind(const std::string& name);

/// The arguments c, c' with [0]_i c c' = [0]_{i-2} and [1]_i c c' = [1]_{i-2}.
/// Throws LevelTooSmall for i < 2.
std::pair<Term, Term> lowering_pair(unsigned i);

/// Surface rendering that shows E_i a b as (b)^(a) and M_i a b as a.b and
/// numerals as [n]_i; for display only.
std::string to_string_abbreviated(const Term& term);

}  // namespace tlc
