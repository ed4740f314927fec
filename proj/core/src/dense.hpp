#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace sllm::dense {

inline std::size_t product(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

/// out axis k is input axis perm[k].
inline std::vector<double> transpose(const std::vector<double>& data, const std::vector<std::size_t>& dims,
                                     const std::vector<std::size_t>& perm) {
    const std::size_t rank = dims.size();
    bool identity = true;
    for (std::size_t k = 0; k < rank; ++k) identity = identity && perm[k] == k;
    if (identity) return data;

    std::vector<std::size_t> stride(rank, 1);
    for (std::size_t k = rank; k-- > 1;) stride[k - 1] = stride[k] * dims[k];
    std::vector<std::size_t> out_dims(rank), out_stride(rank);
    for (std::size_t k = 0; k < rank; ++k) {
        out_dims[k] = dims[perm[k]];
        out_stride[k] = stride[perm[k]];
    }
    std::vector<double> out(data.size());
    std::vector<std::size_t> index(rank, 0);
    std::size_t src = 0;
    for (std::size_t o = 0; o < out.size(); ++o) {
        out[o] = data[src];
        for (std::size_t k = rank; k-- > 0;) {
            if (++index[k] < out_dims[k]) {
                src += out_stride[k];
                break;
            }
            src -= out_stride[k] * (out_dims[k] - 1);
            index[k] = 0;
        }
    }
    return out;
}

/// (rows × inner) · (inner × cols), row-major.
inline std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b, std::size_t rows,
                                  std::size_t inner, std::size_t cols) {
    std::vector<double> out(rows * cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < inner; ++k) {
            double x = a[r * inner + k];
            if (x == 0.0) continue;
            const double* brow = b.data() + k * cols;
            double* orow = out.data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) orow[c] += x * brow[c];
        }
    }
    return out;
}

inline std::vector<double> kron(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() * b.size());
    for (double x : a)
        for (double y : b) out.push_back(x * y);
    return out;
}

}  // namespace sllm::dense
