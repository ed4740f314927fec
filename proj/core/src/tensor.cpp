#include "sllm/tensor.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dense.hpp"

namespace sllm {

bool approx_equal(double a, double b, double rel, double abs) {
    double diff = std::fabs(a - b);
    return diff <= abs || diff <= rel * std::max(std::fabs(a), std::fabs(b));
}

TensorValue::TensorValue(SpaceShape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_.total_dim()) {
        throw std::invalid_argument("tensor has " + std::to_string(data_.size()) + " coefficients but shape " +
                                    format_shape(shape_) + " needs " + std::to_string(shape_.total_dim()));
    }
}

TensorValue TensorValue::zeros(SpaceShape shape) {
    std::size_t n = shape.total_dim();
    return TensorValue(std::move(shape), std::vector<double>(n, 0.0));
}

TensorValue TensorValue::vector(std::vector<double> values) {
    std::size_t n = values.size();
    return TensorValue(SpaceShape::base(n), std::move(values));
}

TensorValue TensorValue::reshaped(SpaceShape shape) const { return TensorValue(std::move(shape), data_); }

TensorValue TensorValue::operator+(const TensorValue& other) const {
    if (shape_ != other.shape_) throw std::invalid_argument("adding tensors of different shapes");
    std::vector<double> out = data_;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.data_[i];
    return TensorValue(shape_, std::move(out));
}

TensorValue TensorValue::operator*(double k) const {
    std::vector<double> out = data_;
    for (double& x : out) x *= k;
    return TensorValue(shape_, std::move(out));
}

bool TensorValue::approx_equals(const TensorValue& other, double rel, double abs) const {
    if (shape_ != other.shape_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!approx_equal(data_[i], other.data_[i], rel, abs)) return false;
    return true;
}

TensorValue kron(const TensorValue& a, const TensorValue& b) {
    return TensorValue(SpaceShape::tensor(a.shape(), b.shape()), dense::kron(a.data(), b.data()));
}

TensorValue tensor_power(const TensorValue& v, int n) {
    if (n < 0) throw std::invalid_argument("negative tensor power");
    std::vector<double> data{1.0};
    std::vector<SpaceShape> factors;
    for (int i = 0; i < n; ++i) {
        data = dense::kron(data, v.data());
        factors.push_back(v.shape());
    }
    return TensorValue(tensor_all(factors), std::move(data));
}

TensorValue fock_embed_tilde(const TensorValue& v, int k0) {
    if (v.shape().kind() == ShapeKind::Fock) throw std::invalid_argument("tilde expects a non-Fock vector");
    if (k0 < 0) throw std::invalid_argument("k0 must be nonnegative");
    std::vector<double> data;
    std::vector<double> layer{1.0};
    for (int i = 0; i <= k0; ++i) {
        data.insert(data.end(), layer.begin(), layer.end());
        if (i < k0) layer = dense::kron(layer, v.data());
    }
    return TensorValue(SpaceShape::fock(v.shape(), k0), std::move(data));
}

TensorValue fock_project(const TensorValue& t, int n) {
    const SpaceShape& s = t.shape();
    if (s.kind() != ShapeKind::Fock) throw std::invalid_argument("projection expects a Fock-shaped tensor");
    if (n < 0 || n > s.k0()) {
        throw std::out_of_range("layer " + std::to_string(n) + " outside 0.." + std::to_string(s.k0()));
    }
    auto begin = t.data().begin() + static_cast<std::ptrdiff_t>(s.layer_offset(n));
    std::vector<double> data(begin, begin + static_cast<std::ptrdiff_t>(s.layer_dim(n)));
    return TensorValue(tensor_all(std::vector<SpaceShape>(static_cast<std::size_t>(n), s.inner())), std::move(data));
}

namespace {

SpaceShape replace_leaves(const SpaceShape& s, const std::vector<SpaceShape>& leaves, std::size_t& next) {
    if (s.kind() != ShapeKind::Tensor) return leaves[next++];
    SpaceShape l = replace_leaves(s.left(), leaves, next);
    SpaceShape r = replace_leaves(s.right(), leaves, next);
    return SpaceShape::tensor(std::move(l), std::move(r));
}

}  // namespace

TensorValue swap(const TensorValue& t, std::size_t i, std::size_t j) {
    std::vector<SpaceShape> factors = t.shape().top_factors();
    if (i >= factors.size() || j >= factors.size()) {
        throw std::out_of_range("factor index out of range (tensor has " + std::to_string(factors.size()) + " factors)");
    }
    std::vector<std::size_t> dims, perm;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        dims.push_back(factors[k].total_dim());
        perm.push_back(k);
    }
    std::swap(perm[i], perm[j]);
    std::swap(factors[i], factors[j]);
    std::size_t next = 0;
    SpaceShape shape = replace_leaves(t.shape(), factors, next);
    return TensorValue(std::move(shape), dense::transpose(t.data(), dims, perm));
}

TensorValue eval_left(const TensorValue& a, const TensorValue& m) {
    const SpaceShape& s = m.shape();
    if (s.kind() != ShapeKind::Tensor || s.left().kind() != ShapeKind::Dual || s.left().inner() != a.shape()) {
        throw std::invalid_argument("eval_left: " + format_shape(s) + " is not dual(" + format_shape(a.shape()) +
                                    ") followed by a codomain");
    }
    std::size_t da = a.size(), db = s.right().total_dim();
    return TensorValue(s.right(), dense::matmul(a.data(), m.data(), 1, da, db));
}

TensorValue eval_right(const TensorValue& m, const TensorValue& a) {
    const SpaceShape& s = m.shape();
    if (s.kind() == ShapeKind::Tensor) {
        if (s.left().kind() == ShapeKind::Dual && s.left().inner() == a.shape()) return eval_left(a, m);
        if (s.right().kind() == ShapeKind::Dual && s.right().inner() == a.shape()) {
            std::size_t db = s.left().total_dim(), da = a.size();
            return TensorValue(s.left(), dense::matmul(m.data(), a.data(), db, da, 1));
        }
    }
    throw std::invalid_argument("eval_right: " + format_shape(s) + " has no dual(" + format_shape(a.shape()) + ") factor");
}

void write_tensor(std::ostream& out, const TensorValue& t) {
    out << format_shape(t.shape()) << '\n';
    char buf[32];
    for (std::size_t i = 0; i < t.size(); ++i) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t[i]);
        if (i > 0) out << ' ';
        out.write(buf, ptr - buf);
    }
    out << '\n';
}

TensorValue read_tensor(std::istream& in) {
    std::string shape_line;
    while (std::getline(in, shape_line)) {
        if (shape_line.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    if (!in) throw std::runtime_error("tensor file: missing shape line");
    SpaceShape shape = parse_shape(shape_line);
    std::vector<double> data;
    data.reserve(shape.total_dim());
    std::string word;
    while (in >> word) {
        double x = 0;
        auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), x);
        if (ec != std::errc() || ptr != word.data() + word.size())
            throw std::runtime_error("tensor file: bad coefficient '" + word + "'");
        if (!std::isfinite(x)) throw std::runtime_error("tensor file: non-finite coefficient");
        data.push_back(x);
    }
    if (data.size() != shape.total_dim()) {
        throw std::runtime_error("tensor file: shape " + format_shape(shape) + " needs " +
                                 std::to_string(shape.total_dim()) + " coefficients, found " +
                                 std::to_string(data.size()));
    }
    return TensorValue(std::move(shape), std::move(data));
}

TensorValue load_tensor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tensor file " + path);
    try {
        return read_tensor(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_tensor_file(const std::string& path, const TensorValue& t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tensor file " + path);
    write_tensor(out, t);
}

}  // namespace sllm
