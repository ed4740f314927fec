#include <gtest/gtest.h>

#include <sstream>

#include "naive.hpp"
#include "sllm/tensor.hpp"

using namespace sllm;

namespace {

SpaceShape base(std::size_t d) { return SpaceShape::base(d); }

}  // namespace

TEST(Shape, InterpretsFormulas) {
    AtomDims dims{{"n", 2}, {"s", 3}};
    EXPECT_EQ(shape_of(parse_formula("n"), dims, 2), base(2));
    EXPECT_EQ(shape_of(parse_formula("n\\s"), dims, 2), SpaceShape::tensor(SpaceShape::dual(base(2)), base(3)));
    EXPECT_EQ(shape_of(parse_formula("s/n"), dims, 2), SpaceShape::tensor(SpaceShape::dual(base(2)), base(3)));
    EXPECT_EQ(shape_of(parse_formula("n·s"), dims, 2), SpaceShape::tensor(base(2), base(3)));
    EXPECT_EQ(shape_of(parse_formula("@n"), dims, 2), base(2));
    SpaceShape f = shape_of(parse_formula("!n"), dims, 2);
    EXPECT_EQ(f, SpaceShape::fock(base(2), 2));
    EXPECT_EQ(f.total_dim(), 1u + 2u + 4u);
    EXPECT_EQ(f.layer_offset(2), 3u);
    EXPECT_EQ(f.layer_dim(2), 4u);
    EXPECT_THROW(shape_of(parse_formula("np"), dims, 2), std::invalid_argument);
}

TEST(Shape, FockDimensionIsGeometricSum) {
    for (std::size_t d = 1; d <= 4; ++d)
        for (int k = 1; k <= 3; ++k) {
            std::size_t expect = 0, p = 1;
            for (int i = 0; i <= k; ++i, p *= d) expect += p;
            EXPECT_EQ(SpaceShape::fock(base(d), k).total_dim(), expect);
        }
}

TEST(Shape, TextRoundTrip) {
    SpaceShape s = SpaceShape::tensor(SpaceShape::dual(base(2)), SpaceShape::fock(SpaceShape::tensor(base(2), base(3)), 2));
    EXPECT_EQ(parse_shape(format_shape(s)), s);
    EXPECT_EQ(parse_shape("unit").total_dim(), 1u);
}

TEST(Shape, AtomDims) {
    AtomDims d = parse_atom_dims("n=2,s=3");
    EXPECT_EQ(d.at("n"), 2u);
    EXPECT_EQ(d.at("s"), 3u);
    EXPECT_EQ(parse_atom_dims(format_atom_dims(d)), d);
    EXPECT_ANY_THROW(parse_atom_dims("n=0"));
    EXPECT_ANY_THROW(parse_atom_dims("n2"));
}

TEST(Tensor, KronMatchesNaive) {
    std::mt19937_64 rng(5);
    auto a = oracle::random_vec(rng, 3), b = oracle::random_vec(rng, 4);
    TensorValue k = kron(TensorValue::vector(a), TensorValue::vector(b));
    EXPECT_EQ(k.data(), oracle::kron(a, b));
    EXPECT_EQ(k.shape(), SpaceShape::tensor(base(3), base(4)));
}

TEST(Tensor, TildeLayersArePowers) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t d = 1 + rng() % 6;
        int k0 = 1 + static_cast<int>(rng() % 3);
        auto v = oracle::random_vec(rng, d);
        TensorValue t = fock_embed_tilde(TensorValue::vector(v), k0);
        EXPECT_EQ(t.data(), oracle::tilde(v, k0));
        for (int n = 0; n <= k0; ++n) EXPECT_EQ(fock_project(t, n).data(), oracle::power(v, n));
    }
}

TEST(Tensor, ProjectRejectsBadLayer) {
    TensorValue t = fock_embed_tilde(TensorValue::vector({1, 2}), 2);
    EXPECT_THROW(fock_project(t, 3), std::out_of_range);
    EXPECT_THROW(fock_project(TensorValue::vector({1, 2}), 1), std::invalid_argument);
}

TEST(Tensor, SwapPermutesFactors) {
    TensorValue a = TensorValue::vector({1, 2}), b = TensorValue::vector({3, 4, 5});
    TensorValue ab = kron(a, b);
    TensorValue ba = swap(ab, 0, 1);
    EXPECT_EQ(ba.data(), kron(b, a).data());
    EXPECT_EQ(ba.shape(), SpaceShape::tensor(base(3), base(2)));
}

TEST(Tensor, Evaluation) {
    TensorValue x = TensorValue::vector({1, 2});
    TensorValue m(SpaceShape::tensor(SpaceShape::dual(base(2)), base(3)), {1, 2, 3, 4, 5, 6});
    EXPECT_EQ(eval_left(x, m).data(), oracle::contract_first({1, 2}, {1, 2, 3, 4, 5, 6}));
    EXPECT_EQ(eval_right(m, x).data(), eval_left(x, m).data());
    EXPECT_THROW(eval_left(TensorValue::vector({1, 2, 3}), m), std::invalid_argument);
}

TEST(Tensor, SerializationRoundTrip) {
    TensorValue t = fock_embed_tilde(TensorValue::vector({0.1, -2.5, 1e-17}), 2);
    std::stringstream ss;
    write_tensor(ss, t);
    TensorValue back = read_tensor(ss);
    EXPECT_EQ(back.shape(), t.shape());
    EXPECT_EQ(back.data(), t.data());
}

TEST(Tensor, RejectsWrongSize) {
    EXPECT_THROW(TensorValue(base(3), {1, 2}), std::invalid_argument);
    std::stringstream ss("tensor(2,2)\n1 2 3\n");
    EXPECT_ANY_THROW(read_tensor(ss));
}

TEST(Tensor, ApproxEqual) {
    EXPECT_TRUE(approx_equal(1.0, 1.0 + 1e-12));
    EXPECT_FALSE(approx_equal(1.0, 1.0 + 1e-8));
    EXPECT_TRUE(approx_equal(0.0, 1e-13));
}
