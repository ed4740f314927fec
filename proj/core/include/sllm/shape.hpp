#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sllm/formula.hpp"

namespace sllm {

/// Dimension of each atomic type, e.g. {n: 2, s: 3}.
using AtomDims = std::map<std::string, std::size_t>;

/// Parses "n=2,s=3".
AtomDims parse_atom_dims(std::string_view text);
std::string format_atom_dims(const AtomDims& dims);

enum class ShapeKind { Unit, Base, Dual, Tensor, Fock };

/// Dimension signature of an interpreted formula. Coordinates are laid out
/// row-major over the leaves; a Dual reuses its operand's layout, and a Fock
/// space stores its layers 0..k0 one after another.
class SpaceShape {
public:
    static SpaceShape unit();
    static SpaceShape base(std::size_t dim);
    static SpaceShape dual(SpaceShape inner);
    static SpaceShape tensor(SpaceShape left, SpaceShape right);
    static SpaceShape fock(SpaceShape inner, int k0);

    ShapeKind kind() const noexcept;
    std::size_t total_dim() const noexcept;
    std::size_t base_dim() const;            // Base only
    int k0() const;                          // Fock only
    const SpaceShape& inner() const;         // Dual and Fock
    const SpaceShape& left() const;          // Tensor only
    const SpaceShape& right() const;         // Tensor only

    /// Offset of layer n inside a Fock space's coordinates.
    std::size_t layer_offset(int n) const;
    std::size_t layer_dim(int n) const;

    /// Leaves of the maximal Tensor-only tree at the root, left to right.
    std::vector<SpaceShape> top_factors() const;

    friend bool operator==(const SpaceShape& a, const SpaceShape& b) noexcept;
    friend bool operator!=(const SpaceShape& a, const SpaceShape& b) noexcept { return !(a == b); }

private:
    struct Node;
    explicit SpaceShape(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// `unit | INT | dual(X) | tensor(X,Y) | fock(X,k)`.
std::string format_shape(const SpaceShape& shape);
SpaceShape parse_shape(std::string_view text);

/// ⟦p⟧ = V_p, ⟦A·B⟧ = ⟦A⟧⊗⟦B⟧, ⟦A\B⟧ = ⟦B/A⟧ = ⟦A⟧*⊗⟦B⟧, ⟦!A⟧ = T_k0⟦A⟧,
/// ⟦∇A⟧ = ⟦A⟧. Throws std::invalid_argument for an atom missing from dims.
SpaceShape shape_of(const Formula& f, const AtomDims& dims, int k0);

/// Left-nested tensor of the factors; unit for an empty list.
SpaceShape tensor_all(const std::vector<SpaceShape>& factors);

/// Shape of an antecedent, i.e. tensor_all of each formula's shape.
SpaceShape context_shape(const std::vector<Formula>& context, const AtomDims& dims, int k0);

}  // namespace sllm
