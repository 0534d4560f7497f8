#pragma once

#include <cstddef>

#include "tlc/term.hpp"

namespace tlc {

enum class NfKind { Contracted, Expanded };

/// Evaluation: normalization by evaluation (the default).
/// Rewriting: leftmost-outermost substitution, then type-directed expansion.
/// Both must produce identical normal forms; the second exists as a check.
enum class Strategy { Evaluation, Rewriting };

struct NormalForm {
    Term term;
    NfKind kind;
};

/// beta-eta normal form with every eta redex contracted.
NormalForm beta_eta_nf(const Term& term, Strategy strategy = Strategy::Evaluation);
/// Expanded ("long") normal form: abstractions at arrow type, pairs at product
/// type, k at T.
NormalForm long_nf(const Term& term, Strategy strategy = Strategy::Evaluation);
/// beta/projection normal form without any eta step.
Term beta_nf(const Term& term);
/// Maximal bottom-up eta contraction of a long normal form.
Term eta_contract(const Term& long_form);

/// Provable equality; throws TypeMismatch when the types differ.
bool decide_eq(const Term& a, const Term& b);

/// Upper bound on simultaneously live evaluator cells per thread; exceeding it
/// throws ResourceExhausted. 0 disables the check.
void set_cell_budget(std::size_t cells);
std::size_t cell_budget();
/// Cells currently live on this thread.
std::size_t live_cells();
/// Approximate heap bytes per evaluator cell, for converting MiB budgets.
inline constexpr std::size_t kCellBytes = 128;

class CellBudgetScope {
public:
    explicit CellBudgetScope(std::size_t cells) : saved_(cell_budget()) { set_cell_budget(cells); }
    ~CellBudgetScope() { set_cell_budget(saved_); }
    CellBudgetScope(const CellBudgetScope&) = delete;
    CellBudgetScope& operator=(const CellBudgetScope&) = delete;

private:
    std::size_t saved_;
};

}  // namespace tlc
