#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace sllm::detail {

/// A product state held as a few dense blocks. Every block axis has an id that
/// survives reshapes, merges and transposes, so a map can act on some axes
/// while the rest of a shared block rides along untouched.
class Store {
public:
    /// New block; returns the ids of its axes in order.
    std::vector<int> add(std::vector<std::size_t> dims, std::vector<double> data);
    /// δ block over (d, d): returns {dual id, primal id}.
    std::pair<int, int> identity(std::size_t d);

    std::size_t dim(int axis) const;

    /// Reshape one axis into consecutive axes (row-major). No data moves.
    std::vector<int> split(int axis, const std::vector<std::size_t>& dims);
    /// One axis for (a, b), a major.
    int join(int a, int b);
    /// Σ_i over the diagonal of two axes of equal dimension; both disappear.
    void contract(int x, int y);
    /// Keeps coordinates [offset, offset + len) of an axis.
    int select(int axis, std::size_t offset, std::size_t len);
    /// Replaces the axis by M·axis, M given row-major with `rows` rows.
    int apply_matrix(int axis, const std::vector<double>& m, std::size_t rows);

    /// Collapses everything into one block whose live axes must be exactly
    /// `order`; returns its coefficients in that axis order.
    std::vector<double> extract(const std::vector<int>& order);

private:
    struct Block {
        std::vector<int> axes;
        std::vector<std::size_t> dims;
        std::vector<double> data;
    };

    std::pair<std::size_t, std::size_t> locate(int axis) const;
    void move_axes_last(std::size_t block, const std::vector<std::size_t>& positions);
    std::size_t merge(std::size_t a, std::size_t b);
    void erase_block(std::size_t b);

    std::vector<Block> blocks_;
    int next_id_ = 0;
};

}  // namespace sllm::detail
