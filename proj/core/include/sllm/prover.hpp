#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sllm/derivation.hpp"
#include "sllm/formula.hpp"

namespace sllm {

enum class SearchOutcome {
    Proved,
    Unprovable,       // no derivation exists at any depth
    DepthExhausted,   // derivations exist, but all are deeper than max_depth
};

struct ProofResult {
    SearchOutcome outcome = SearchOutcome::Unprovable;
    std::optional<Derivation> derivation;
    /// Smallest logical height of any derivation, when one exists.
    std::optional<int> min_depth;
    std::size_t states_explored = 0;
};

/// Backward search modulo the perm rules: ∇-rooted formulas are treated as
/// floating, so a sequent is a fixed sequence of the other formulas plus a
/// multiset of ∇-formulas. Every other rule strictly decreases a weight
/// measure, so the search space is finite and the search terminates without
/// loop checks. The returned derivation has minimal logical height (perm and
/// perm' steps are not counted) and spells out every perm step explicitly.
ProofResult prove_detailed(const Sequent& seq, const CalculusConfig& cfg);

/// Empty when no derivation of logical height ≤ cfg.max_depth exists.
std::optional<Derivation> prove(const Sequent& seq, const CalculusConfig& cfg);

/// Up to `limit` derivations with pairwise distinct axiom linkings, i.e.
/// different readings rather than different rule orders. Two derivations
/// that connect the same atom occurrences are considered the same. Order is
/// deterministic: the rule agenda order of the search.
std::vector<Derivation> enumerate_proofs(const Sequent& seq, const CalculusConfig& cfg,
                                         std::size_t limit);

}  // namespace sllm
