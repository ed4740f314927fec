#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sllm/shape.hpp"

namespace sllm {

/// Relative 1e-10 / absolute 1e-12, the tolerance used throughout.
bool approx_equal(double a, double b, double rel = 1e-10, double abs = 1e-12);

/// Dense coefficients over a SpaceShape, row-major over the flattened shape.
class TensorValue {
public:
    TensorValue(SpaceShape shape, std::vector<double> data);
    static TensorValue zeros(SpaceShape shape);
    /// A vector in Base(values.size()).
    static TensorValue vector(std::vector<double> values);

    const SpaceShape& shape() const noexcept { return shape_; }
    const std::vector<double>& data() const noexcept { return data_; }
    std::size_t size() const noexcept { return data_.size(); }
    double operator[](std::size_t i) const { return data_[i]; }

    /// Same coefficients under another shape of equal total dimension.
    TensorValue reshaped(SpaceShape shape) const;

    TensorValue operator+(const TensorValue& other) const;
    TensorValue operator*(double k) const;

    bool approx_equals(const TensorValue& other, double rel = 1e-10, double abs = 1e-12) const;

private:
    SpaceShape shape_;
    std::vector<double> data_;
};

/// Kronecker product; the shape is Tensor(a, b).
TensorValue kron(const TensorValue& a, const TensorValue& b);

/// v^{⊗n} with shape tensor_all(n copies); the scalar 1 in Unit for n = 0.
TensorValue tensor_power(const TensorValue& v, int n);

/// ṽ = Σ_{i=0}^{k0} v^{⊗i} as an element of T_k0 V. `v` must not be Fock-shaped.
TensorValue fock_embed_tilde(const TensorValue& v, int k0);

/// Layer n of a Fock-shaped value, shaped as the n-fold tensor of the inner space.
TensorValue fock_project(const TensorValue& t, int n);

/// Exchanges top-level factors i and j (see SpaceShape::top_factors), keeping
/// the tensor tree's shape and permuting coefficients accordingly.
TensorValue swap(const TensorValue& t, std::size_t i, std::size_t j);

/// Contracts `a` ∈ A with the leading dual factor of `m` ∈ A*⊗B.
TensorValue eval_left(const TensorValue& a, const TensorValue& m);

/// Contracts `a` ∈ A with the dual factor of `m`; accepts A*⊗B (the
/// interpretation of B/A used here) and B⊗A*.
TensorValue eval_right(const TensorValue& m, const TensorValue& a);

/// First line: shape descriptor. Second line: coefficients.
void write_tensor(std::ostream& out, const TensorValue& t);
TensorValue read_tensor(std::istream& in);
TensorValue load_tensor_file(const std::string& path);
void save_tensor_file(const std::string& path, const TensorValue& t);

}  // namespace sllm
