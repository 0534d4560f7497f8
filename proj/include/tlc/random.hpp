#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tlc/term.hpp"
#include "tlc/type.hpp"

namespace tlc {

using Rng = std::mt19937_64;

struct TypeGenOptions {
    std::vector<std::string> atoms{"p"};
    unsigned max_depth = 3;
    bool products = false;
    bool terminal = false;
};

Type random_type(Rng& rng, const TypeGenOptions& options);

struct TermGenOptions {
    unsigned max_depth = 4;
    /// Probability of wrapping a subterm in a beta or projection redex.
    double redex_rate = 0.25;
    /// Allow projection-of-pair redexes (needs product types).
    bool products = false;
};

/// Random well-typed term of `type` over `ctx`, possibly containing redexes.
/// Returns nullopt when no term was found within the depth bound.
std::optional<Term> random_term(Rng& rng, Type type, const Context& ctx, const TermGenOptions& options = {});

}  // namespace tlc
