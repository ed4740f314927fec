#include "sllm/shape.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace sllm {

struct SpaceShape::Node {
    ShapeKind kind;
    std::size_t dim = 0;   // Base
    int k0 = 0;            // Fock
    std::vector<SpaceShape> children;
    std::size_t total = 1;
};

namespace {

std::size_t power(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

SpaceShape SpaceShape::unit() { return SpaceShape(std::make_shared<const Node>(Node{ShapeKind::Unit, 0, 0, {}, 1})); }

SpaceShape SpaceShape::base(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("dimension must be positive");
    return SpaceShape(std::make_shared<const Node>(Node{ShapeKind::Base, dim, 0, {}, dim}));
}

SpaceShape SpaceShape::dual(SpaceShape inner) {
    std::size_t total = inner.total_dim();
    return SpaceShape(std::make_shared<const Node>(Node{ShapeKind::Dual, 0, 0, {std::move(inner)}, total}));
}

SpaceShape SpaceShape::tensor(SpaceShape left, SpaceShape right) {
    std::size_t total = left.total_dim() * right.total_dim();
    return SpaceShape(
        std::make_shared<const Node>(Node{ShapeKind::Tensor, 0, 0, {std::move(left), std::move(right)}, total}));
}

SpaceShape SpaceShape::fock(SpaceShape inner, int k0) {
    if (k0 < 0) throw std::invalid_argument("Fock truncation must be nonnegative");
    std::size_t total = 0;
    for (int i = 0; i <= k0; ++i) total += power(inner.total_dim(), i);
    return SpaceShape(std::make_shared<const Node>(Node{ShapeKind::Fock, 0, k0, {std::move(inner)}, total}));
}

ShapeKind SpaceShape::kind() const noexcept { return node_->kind; }
std::size_t SpaceShape::total_dim() const noexcept { return node_->total; }

std::size_t SpaceShape::base_dim() const {
    if (kind() != ShapeKind::Base) throw std::logic_error("base_dim() on a non-base shape");
    return node_->dim;
}

int SpaceShape::k0() const {
    if (kind() != ShapeKind::Fock) throw std::logic_error("k0() on a non-Fock shape");
    return node_->k0;
}

const SpaceShape& SpaceShape::inner() const {
    if (kind() != ShapeKind::Dual && kind() != ShapeKind::Fock) throw std::logic_error("inner() on a shape without one");
    return node_->children[0];
}

const SpaceShape& SpaceShape::left() const {
    if (kind() != ShapeKind::Tensor) throw std::logic_error("left() on a non-tensor shape");
    return node_->children[0];
}

const SpaceShape& SpaceShape::right() const {
    if (kind() != ShapeKind::Tensor) throw std::logic_error("right() on a non-tensor shape");
    return node_->children[1];
}

std::size_t SpaceShape::layer_offset(int n) const {
    if (n < 0 || n > k0()) throw std::out_of_range("Fock layer out of range");
    std::size_t offset = 0;
    for (int i = 0; i < n; ++i) offset += power(inner().total_dim(), i);
    return offset;
}

std::size_t SpaceShape::layer_dim(int n) const {
    if (n < 0 || n > k0()) throw std::out_of_range("Fock layer out of range");
    return power(inner().total_dim(), n);
}

std::vector<SpaceShape> SpaceShape::top_factors() const {
    if (kind() != ShapeKind::Tensor) return {*this};
    auto out = left().top_factors();
    auto r = right().top_factors();
    out.insert(out.end(), r.begin(), r.end());
    return out;
}

bool operator==(const SpaceShape& a, const SpaceShape& b) noexcept {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind || x.dim != y.dim || x.k0 != y.k0 || x.total != y.total) return false;
    return x.children == y.children;
}

// ---------------------------------------------------------------------------

std::string format_shape(const SpaceShape& s) {
    switch (s.kind()) {
    case ShapeKind::Unit: return "unit";
    case ShapeKind::Base: return std::to_string(s.base_dim());
    case ShapeKind::Dual: return "dual(" + format_shape(s.inner()) + ")";
    case ShapeKind::Tensor: return "tensor(" + format_shape(s.left()) + "," + format_shape(s.right()) + ")";
    case ShapeKind::Fock: return "fock(" + format_shape(s.inner()) + "," + std::to_string(s.k0()) + ")";
    }
    return {};
}

namespace {

class ShapeReader {
public:
    explicit ShapeReader(std::string_view text) : text_(text) {}

    SpaceShape read() {
        SpaceShape s = shape();
        skip();
        if (pos_ != text_.size()) throw ParseError("trailing input in shape", pos_);
        return s;
    }

private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip();
        if (pos_ >= text_.size() || text_[pos_] != c) throw ParseError(std::string("expected '") + c + "' in shape", pos_);
        ++pos_;
    }

    std::size_t number() {
        skip();
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc()) throw ParseError("expected a number in shape", pos_);
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    SpaceShape shape() {
        skip();
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t at = pos_;
            std::size_t d = number();
            if (d == 0) throw ParseError("dimension must be positive", at);
            return SpaceShape::base(d);
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string_view word = text_.substr(start, pos_ - start);
        if (word == "unit") return SpaceShape::unit();
        if (word == "dual") {
            expect('(');
            SpaceShape inner = shape();
            expect(')');
            return SpaceShape::dual(std::move(inner));
        }
        if (word == "tensor") {
            expect('(');
            SpaceShape l = shape();
            expect(',');
            SpaceShape r = shape();
            expect(')');
            return SpaceShape::tensor(std::move(l), std::move(r));
        }
        if (word == "fock") {
            expect('(');
            SpaceShape inner = shape();
            expect(',');
            auto k = static_cast<int>(number());
            expect(')');
            return SpaceShape::fock(std::move(inner), k);
        }
        throw ParseError("unknown shape constructor", start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

SpaceShape parse_shape(std::string_view text) { return ShapeReader(text).read(); }

SpaceShape shape_of(const Formula& f, const AtomDims& dims, int k0) {
    switch (f.connective()) {
    case Connective::Atom: {
        auto it = dims.find(f.name());
        if (it == dims.end()) throw std::invalid_argument("no dimension given for atom '" + f.name() + "'");
        return SpaceShape::base(it->second);
    }
    case Connective::Product:
        return SpaceShape::tensor(shape_of(f.left(), dims, k0), shape_of(f.right(), dims, k0));
    case Connective::LeftDiv:
        return SpaceShape::tensor(SpaceShape::dual(shape_of(f.left(), dims, k0)), shape_of(f.right(), dims, k0));
    case Connective::RightDiv:
        return SpaceShape::tensor(SpaceShape::dual(shape_of(f.right(), dims, k0)), shape_of(f.left(), dims, k0));
    case Connective::Bang:
        return SpaceShape::fock(shape_of(f.inner(), dims, k0), k0);
    case Connective::Nabla:
        return shape_of(f.inner(), dims, k0);
    }
    throw std::logic_error("unknown connective");
}

SpaceShape tensor_all(const std::vector<SpaceShape>& factors) {
    if (factors.empty()) return SpaceShape::unit();
    SpaceShape s = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) s = SpaceShape::tensor(s, factors[i]);
    return s;
}

SpaceShape context_shape(const std::vector<Formula>& context, const AtomDims& dims, int k0) {
    std::vector<SpaceShape> factors;
    for (const auto& f : context) factors.push_back(shape_of(f, dims, k0));
    return tensor_all(factors);
}

AtomDims parse_atom_dims(std::string_view text) {
    AtomDims dims;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view item = text.substr(pos, comma - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) throw ParseError("expected atom=dim", pos);
        std::string name(item.substr(0, eq));
        std::string_view value = item.substr(eq + 1);
        std::size_t d = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
        if (ec != std::errc() || ptr != value.data() + value.size() || d == 0)
            throw ParseError("dimension for '" + name + "' must be a positive integer", pos + eq + 1);
        dims[name] = d;
        pos = comma + 1;
    }
    return dims;
}

std::string format_atom_dims(const AtomDims& dims) {
    std::string out;
    for (const auto& [name, d] : dims) {
        if (!out.empty()) out += ',';
        out += name + "=" + std::to_string(d);
    }
    return out;
}

}  // namespace sllm
