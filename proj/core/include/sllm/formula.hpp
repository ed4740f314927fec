#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sllm {

/// Main connective of a formula. `LeftDiv` is A\B, `RightDiv` is B/A.
enum class Connective { Atom, Product, LeftDiv, RightDiv, Bang, Nabla };

/// Immutable syntax tree of a type. Copies share structure.
///
/// Children are stored in written order: for `A\B` left() is A and right() is
/// B; for `B/A` left() is B and right() is A. Product is binary and is not
/// reassociated.
class Formula {
public:
    static Formula atom(std::string name);
    static Formula product(Formula left, Formula right);
    static Formula left_div(Formula left, Formula right);
    static Formula right_div(Formula left, Formula right);
    static Formula bang(Formula inner);
    static Formula nabla(Formula inner);

    Connective connective() const noexcept;
    bool is_atom() const noexcept { return connective() == Connective::Atom; }
    bool is_binary() const noexcept;
    bool is_unary() const noexcept;

    const std::string& name() const;   // atoms only
    const Formula& left() const;       // binary only
    const Formula& right() const;      // binary only
    const Formula& inner() const;      // ! and ∇ only

    std::size_t hash() const noexcept;
    /// Number of connectives and atoms.
    std::size_t size() const noexcept;
    std::size_t depth() const noexcept;

    /// Atom names occurring in the formula.
    void collect_atoms(std::set<std::string>& out) const;

    friend bool operator==(const Formula& a, const Formula& b) noexcept;
    friend bool operator!=(const Formula& a, const Formula& b) noexcept { return !(a == b); }
    /// Structural total order, used for canonical orderings.
    friend bool operator<(const Formula& a, const Formula& b) noexcept;

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(Connective c, std::string atom, std::vector<Formula> children);
    static int compare(const Formula& a, const Formula& b) noexcept;

    std::shared_ptr<const Node> node_;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

/// Γ ⟶ C. The antecedent order is significant.
struct Sequent {
    std::vector<Formula> antecedent;
    Formula succedent;

    friend bool operator==(const Sequent& a, const Sequent& b) {
        return a.antecedent == b.antecedent && a.succedent == b.succedent;
    }
    friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }
};

/// Search and interpretation parameters shared by the prover and the compiler.
struct CalculusConfig {
    int k0 = 2;           ///< multiplexing bound, ≥ 1
    int max_depth = 40;   ///< proof-search depth cap, ≥ 1
    std::set<std::string> atom_alphabet{"n", "s"};

    /// Throws std::invalid_argument when k0 or max_depth is out of range.
    void validate() const;
};

/// Parse or validation failure. `position()` is a byte offset into the input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

enum class Notation { Unicode, Ascii };

/// Grammar (prefix binds tightest):
///   formula := ldiv ('/' ldiv)*          left-associative
///   ldiv    := prod ('\' ldiv)?          right-associative
///   prod    := unary ('·' unary)*        left-associative
///   unary   := '!' unary | '∇' unary | atom | '(' formula ')'
/// ASCII aliases: '.' or '*' for '·', '@' for '∇'.
///
/// When `alphabet` is given, atoms outside it are rejected.
Formula parse_formula(std::string_view text,
                      const std::set<std::string>* alphabet = nullptr);

/// Minimal-parenthesis rendering; parse_formula(format_formula(f)) == f.
std::string format_formula(const Formula& f, Notation notation = Notation::Unicode);

/// "f1, f2, ... ⟶ g"; "->" and "→" are accepted for the turnstile.
Sequent parse_sequent(std::string_view text,
                      const std::set<std::string>* alphabet = nullptr);

std::string format_sequent(const Sequent& s, Notation notation = Notation::Unicode);

}  // namespace sllm
