#pragma once

#include <functional>
#include <vector>

#include "sllm/derivation.hpp"
#include "sllm/shape.hpp"
#include "sllm/tensor.hpp"

namespace sllm {

namespace detail {
class Store;
}

/// A linear map ⟦Γ⟧ → ⟦B⟧ whose domain is a list of factors, one per
/// antecedent formula. Maps are built from primitive block operations and are
/// evaluated on factored inputs, so a map over a large product space can be
/// applied to a product of small word tensors without materializing the
/// product.
class LinearMap {
public:
    /// Consumes the given axes of the store and returns the result axis.
    using Body = std::function<int(detail::Store&, const std::vector<int>&)>;

    LinearMap(std::vector<SpaceShape> domain, SpaceShape codomain, Body body);

    const std::vector<SpaceShape>& domain_factors() const noexcept { return domain_; }
    SpaceShape domain() const { return tensor_all(domain_); }
    const SpaceShape& codomain() const noexcept { return codomain_; }

    /// Runs the map inside a store; checks input and output dimensions.
    int run(detail::Store& store, const std::vector<int>& axes) const;

private:
    std::vector<SpaceShape> domain_;
    SpaceShape codomain_;
    Body body_;
};

LinearMap identity_map(const SpaceShape& shape);

/// Dense matrix with codomain rows and domain columns, row-major.
LinearMap matrix_map(const SpaceShape& domain, const SpaceShape& codomain, std::vector<double> matrix);

/// The dense matrix of a map, codomain rows by domain columns.
std::vector<double> matrix_of(const LinearMap& m);

/// g ∘ f; g must have the single domain factor f.codomain().
LinearMap compose(const LinearMap& g, const LinearMap& f);

/// T_k0(f): acts as f^{⊗i} on layer i. f must have a single domain factor.
LinearMap fock_map(const LinearMap& f, int k0);

/// Λ^l: from f on A ⊗ Γ to a map Γ → A*⊗B.
LinearMap curry_left(const LinearMap& f);
/// Λ^r: from f on Γ ⊗ A to a map Γ → A*⊗B (dual factor first, as for B/A).
LinearMap curry_right(const LinearMap& f);

/// Input shape must equal m.domain().
TensorValue apply(const LinearMap& m, const TensorValue& t);
/// One tensor per domain factor; equals apply(m, t1 ⊗ ... ⊗ tn).
TensorValue apply_product(const LinearMap& m, const std::vector<TensorValue>& factors);

/// Structural recursion over a checked derivation: axiom ↦ identity, \_L and
/// /_L ↦ evaluation of the functor at the compiled argument, \_R and /_R ↦
/// currying, ·_L ↦ reshaping, ·_R ↦ f ⊗ g, !_L ↦ the n-th Fock projection,
/// !_R ↦ T_k0(f), ∇ rules ↦ identity, perm ↦ symmetry of ⊗.
/// Throws std::invalid_argument when check_derivation fails.
LinearMap compile_derivation(const Derivation& d, const AtomDims& dims, const CalculusConfig& cfg);

}  // namespace sllm
