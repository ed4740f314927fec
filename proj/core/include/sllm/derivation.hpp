#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sllm/formula.hpp"

namespace sllm {

enum class Rule {
    Axiom,
    LeftDivL,    // \_L
    LeftDivR,    // \_R
    RightDivL,   // /_L
    RightDivR,   // /_R
    ProdL,
    ProdR,
    BangL,       // multiplexing, carries n
    BangR,
    NablaL,
    NablaR,
    Perm,        // ∇A moves right (read bottom-up)
    PermPrime,   // ∇A moves left (read bottom-up)
};

/// Stable lowercase name used by the s-expression format ("ldiv-l", "perm'", ...).
std::string_view rule_name(Rule rule);
std::optional<Rule> rule_from_name(std::string_view name);

/// Positions recorded at a node, all indices into the conclusion's antecedent.
///
///  - \_L: `at` is the functor A\B, Γ is the `length` formulas ending just before it.
///  - /_L: `at` is the functor B/A, Γ is the `length` formulas starting just after it.
///  - ·_L, !_L, ∇_L: `at` is the principal formula; `multiplicity` is n for !_L.
///  - ·_R: Γ₁ is the first `split` formulas.
///  - perm, perm′: the ∇-formula at `at` ends up at index `target` in the premise.
struct RuleData {
    std::size_t at = 0;
    std::size_t length = 0;
    std::size_t split = 0;
    int multiplicity = 0;
    std::size_t target = 0;

    friend bool operator==(const RuleData&, const RuleData&) = default;
};

struct Derivation {
    Sequent conclusion;
    Rule rule;
    RuleData data;
    std::vector<Derivation> premises;

    /// Longest root-to-leaf chain of rule applications.
    std::size_t height() const;
    /// Same, ignoring perm/perm′ nodes.
    std::size_t logical_height() const;
    std::size_t node_count() const;
};

bool structurally_equal(const Derivation& a, const Derivation& b);

enum class CheckFailure {
    None,
    WrongPremiseCount,
    PositionOutOfRange,
    PrincipalMismatch,      // formula at the recorded position has the wrong shape
    PremiseMismatch,        // premise conclusion differs from what the rule produces
    MultiplicityOutOfBound,
    NotSingleFormula,       // !_R / ∇_R / axiom applied to a non-singleton antecedent
    NotNablaRooted,         // perm moved a formula that is not ∇A
    AxiomMismatch,
};

std::string_view describe(CheckFailure failure);

struct CheckResult {
    bool ok = true;
    CheckFailure failure = CheckFailure::None;
    /// Premise indices from the root to the offending node.
    std::vector<std::size_t> path;
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

/// True iff every node instantiates its rule schema exactly at the recorded
/// positions, with multiplexing multiplicities in [1, k0].
CheckResult check_derivation(const Derivation& d, const CalculusConfig& cfg);

/// `(rule :key value ... "conclusion" premise...)`, conclusions in ASCII notation.
std::string to_sexpr(const Derivation& d);
Derivation parse_sexpr(std::string_view text);

/// Indented, one node per line, leaves last.
std::string render_tree(const Derivation& d, Notation notation = Notation::Unicode);

}  // namespace sllm
