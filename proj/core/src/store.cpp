#include "store.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

#include "dense.hpp"

namespace sllm::detail {

std::vector<int> Store::add(std::vector<std::size_t> dims, std::vector<double> data) {
    if (dense::product(dims) != data.size()) throw std::logic_error("block data does not match its dimensions");
    Block b;
    for (std::size_t k = 0; k < dims.size(); ++k) b.axes.push_back(next_id_++);
    b.dims = std::move(dims);
    b.data = std::move(data);
    std::vector<int> ids = b.axes;
    blocks_.push_back(std::move(b));
    return ids;
}

std::pair<int, int> Store::identity(std::size_t d) {
    std::vector<double> data(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) data[i * d + i] = 1.0;
    auto ids = add({d, d}, std::move(data));
    return {ids[0], ids[1]};
}

std::pair<std::size_t, std::size_t> Store::locate(int axis) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto& axes = blocks_[b].axes;
        auto it = std::find(axes.begin(), axes.end(), axis);
        if (it != axes.end()) return {b, static_cast<std::size_t>(it - axes.begin())};
    }
    throw std::logic_error("axis " + std::to_string(axis) + " is not live");
}

std::size_t Store::dim(int axis) const {
    auto [b, p] = locate(axis);
    return blocks_[b].dims[p];
}

std::vector<int> Store::split(int axis, const std::vector<std::size_t>& dims) {
    auto [b, p] = locate(axis);
    Block& blk = blocks_[b];
    if (dense::product(dims) != blk.dims[p]) throw std::logic_error("split does not preserve the axis dimension");
    std::vector<int> ids;
    for (std::size_t k = 0; k < dims.size(); ++k) ids.push_back(next_id_++);
    auto ap = blk.axes.begin() + static_cast<std::ptrdiff_t>(p);
    auto dp = blk.dims.begin() + static_cast<std::ptrdiff_t>(p);
    ap = blk.axes.erase(ap);
    dp = blk.dims.erase(dp);
    blk.axes.insert(ap, ids.begin(), ids.end());
    blk.dims.insert(dp, dims.begin(), dims.end());
    return ids;
}

void Store::move_axes_last(std::size_t block, const std::vector<std::size_t>& positions) {
    Block& blk = blocks_[block];
    std::vector<std::size_t> perm;
    for (std::size_t k = 0; k < blk.axes.size(); ++k)
        if (std::find(positions.begin(), positions.end(), k) == positions.end()) perm.push_back(k);
    perm.insert(perm.end(), positions.begin(), positions.end());
    blk.data = dense::transpose(blk.data, blk.dims, perm);
    std::vector<int> axes;
    std::vector<std::size_t> dims;
    for (std::size_t k : perm) {
        axes.push_back(blk.axes[k]);
        dims.push_back(blk.dims[k]);
    }
    blk.axes = std::move(axes);
    blk.dims = std::move(dims);
}

void Store::erase_block(std::size_t b) { blocks_.erase(blocks_.begin() + static_cast<std::ptrdiff_t>(b)); }

std::size_t Store::merge(std::size_t a, std::size_t b) {
    if (a == b) return a;
    Block m;
    m.axes = blocks_[a].axes;
    m.axes.insert(m.axes.end(), blocks_[b].axes.begin(), blocks_[b].axes.end());
    m.dims = blocks_[a].dims;
    m.dims.insert(m.dims.end(), blocks_[b].dims.begin(), blocks_[b].dims.end());
    m.data = dense::kron(blocks_[a].data, blocks_[b].data);
    std::size_t lo = std::min(a, b), hi = std::max(a, b);
    erase_block(hi);
    blocks_[lo] = std::move(m);
    return lo;
}

int Store::join(int a, int b) {
    auto [ba, pa] = locate(a);
    auto [bb, pb] = locate(b);
    std::size_t blk = merge(ba, bb);
    std::tie(std::ignore, pa) = locate(a);
    std::tie(std::ignore, pb) = locate(b);
    move_axes_last(blk, {pa, pb});
    Block& m = blocks_[blk];
    std::size_t d = m.dims[m.dims.size() - 2] * m.dims.back();
    m.axes.resize(m.axes.size() - 2);
    m.dims.resize(m.dims.size() - 2);
    int id = next_id_++;
    m.axes.push_back(id);
    m.dims.push_back(d);
    return id;
}

void Store::contract(int x, int y) {
    auto [bx, px] = locate(x);
    auto [by, py] = locate(y);
    const std::size_t d = blocks_[bx].dims[px];
    if (d != blocks_[by].dims[py]) throw std::logic_error("contracting axes of different dimensions");

    if (bx == by) {
        move_axes_last(bx, {px, py});
        Block& blk = blocks_[bx];
        std::size_t rest = blk.data.size() / (d * d);
        std::vector<double> out(rest, 0.0);
        for (std::size_t r = 0; r < rest; ++r)
            for (std::size_t i = 0; i < d; ++i) out[r] += blk.data[r * d * d + i * d + i];
        blk.data = std::move(out);
        blk.axes.resize(blk.axes.size() - 2);
        blk.dims.resize(blk.dims.size() - 2);
        return;
    }

    // Tensordot: (rest_x, d) · (d, rest_y).
    move_axes_last(bx, {px});
    Block& a = blocks_[bx];
    std::size_t rows = a.data.size() / d;
    Block& b0 = blocks_[by];
    std::vector<std::size_t> perm{py};
    for (std::size_t k = 0; k < b0.axes.size(); ++k)
        if (k != py) perm.push_back(k);
    std::vector<double> bt = dense::transpose(b0.data, b0.dims, perm);
    std::size_t cols = bt.size() / d;

    Block out;
    out.axes.assign(a.axes.begin(), a.axes.end() - 1);
    out.dims.assign(a.dims.begin(), a.dims.end() - 1);
    for (std::size_t k = 1; k < perm.size(); ++k) {
        out.axes.push_back(b0.axes[perm[k]]);
        out.dims.push_back(b0.dims[perm[k]]);
    }
    out.data = dense::matmul(a.data, bt, rows, d, cols);
    std::size_t lo = std::min(bx, by), hi = std::max(bx, by);
    erase_block(hi);
    blocks_[lo] = std::move(out);
}

int Store::select(int axis, std::size_t offset, std::size_t len) {
    auto [b, p] = locate(axis);
    Block& blk = blocks_[b];
    const std::size_t d = blk.dims[p];
    if (offset + len > d) throw std::logic_error("selection outside the axis");
    std::size_t outer = 1, inner = 1;
    for (std::size_t k = 0; k < p; ++k) outer *= blk.dims[k];
    for (std::size_t k = p + 1; k < blk.dims.size(); ++k) inner *= blk.dims[k];
    std::vector<double> out;
    out.reserve(outer * len * inner);
    for (std::size_t o = 0; o < outer; ++o) {
        auto from = blk.data.begin() + static_cast<std::ptrdiff_t>((o * d + offset) * inner);
        out.insert(out.end(), from, from + static_cast<std::ptrdiff_t>(len * inner));
    }
    blk.data = std::move(out);
    blk.dims[p] = len;
    int id = next_id_++;
    blk.axes[p] = id;
    return id;
}

int Store::apply_matrix(int axis, const std::vector<double>& m, std::size_t rows) {
    auto [b, p] = locate(axis);
    Block& blk = blocks_[b];
    const std::size_t cols = blk.dims[p];
    if (m.size() != rows * cols) throw std::logic_error("matrix does not fit the axis");
    std::size_t outer = 1, inner = 1;
    for (std::size_t k = 0; k < p; ++k) outer *= blk.dims[k];
    for (std::size_t k = p + 1; k < blk.dims.size(); ++k) inner *= blk.dims[k];
    std::vector<double> out(outer * rows * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
        const double* src = blk.data.data() + o * cols * inner;
        double* dst = out.data() + o * rows * inner;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                double x = m[r * cols + c];
                if (x == 0.0) continue;
                for (std::size_t i = 0; i < inner; ++i) dst[r * inner + i] += x * src[c * inner + i];
            }
        }
    }
    blk.data = std::move(out);
    blk.dims[p] = rows;
    int id = next_id_++;
    blk.axes[p] = id;
    return id;
}

std::vector<double> Store::extract(const std::vector<int>& order) {
    if (blocks_.empty()) add({}, {1.0});
    while (blocks_.size() > 1) merge(0, 1);
    Block& blk = blocks_[0];
    if (blk.axes.size() != order.size()) throw std::logic_error("unconsumed axes remain in the result");
    std::vector<std::size_t> perm;
    for (int id : order) {
        auto it = std::find(blk.axes.begin(), blk.axes.end(), id);
        if (it == blk.axes.end()) throw std::logic_error("requested axis is not live");
        perm.push_back(static_cast<std::size_t>(it - blk.axes.begin()));
    }
    return dense::transpose(blk.data, blk.dims, perm);
}

}  // namespace sllm::detail
