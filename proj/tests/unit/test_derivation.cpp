#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "sllm/derivation.hpp"
#include "sllm/prover.hpp"

using namespace sllm;

namespace {

Derivation axiom(const std::string& f) {
    Formula a = parse_formula(f);
    return {{{a}, a}, Rule::Axiom, {}, {}};
}

Derivation proof_of(const std::string& seq, int k0 = 2) {
    CalculusConfig cfg;
    cfg.k0 = k0;
    auto d = prove(parse_sequent(seq), cfg);
    if (!d) throw std::runtime_error("no proof of " + seq);
    return *d;
}

}  // namespace

TEST(Derivation, RuleNamesRoundTrip) {
    for (Rule r : {Rule::Axiom, Rule::LeftDivL, Rule::LeftDivR, Rule::RightDivL, Rule::RightDivR, Rule::ProdL,
                   Rule::ProdR, Rule::BangL, Rule::BangR, Rule::NablaL, Rule::NablaR, Rule::Perm, Rule::PermPrime}) {
        auto back = rule_from_name(rule_name(r));
        ASSERT_TRUE(back);
        EXPECT_EQ(*back, r);
    }
    EXPECT_FALSE(rule_from_name("cut"));
}

TEST(Derivation, ChecksApplication) {
    Derivation d{parse_sequent("n, n\\s -> s"), Rule::LeftDivL, {1, 1, 0, 0, 0}, {axiom("n"), axiom("s")}};
    CalculusConfig cfg;
    EXPECT_TRUE(check_derivation(d, cfg));
    EXPECT_EQ(d.height(), 2u);
    EXPECT_EQ(d.node_count(), 3u);
}

TEST(Derivation, RejectsWrongPremise) {
    Derivation d{parse_sequent("n, n\\s -> s"), Rule::LeftDivL, {1, 1, 0, 0, 0}, {axiom("s"), axiom("s")}};
    auto r = check_derivation(d, CalculusConfig{});
    EXPECT_FALSE(r);
    EXPECT_EQ(r.failure, CheckFailure::PremiseMismatch);
}

TEST(Derivation, RejectsBadAxiom) {
    Derivation d{parse_sequent("n -> s"), Rule::Axiom, {}, {}};
    EXPECT_EQ(check_derivation(d, CalculusConfig{}).failure, CheckFailure::AxiomMismatch);
}

TEST(Derivation, RejectsMultiplicityAboveBound) {
    Derivation leaf{parse_sequent("n, n, n -> n·n·n"), Rule::Axiom, {}, {}};
    Derivation d{parse_sequent("!n -> n·n·n"), Rule::BangL, {0, 0, 0, 3, 0}, {leaf}};
    CalculusConfig cfg;
    cfg.k0 = 2;
    EXPECT_EQ(check_derivation(d, cfg).failure, CheckFailure::MultiplicityOutOfBound);
}

TEST(Derivation, RejectsPermOfPlainFormula) {
    Derivation d{parse_sequent("n, s -> s·n"), Rule::Perm, {0, 0, 0, 0, 1}, {proof_of("s, n -> s·n")}};
    EXPECT_EQ(check_derivation(d, CalculusConfig{}).failure, CheckFailure::NotNablaRooted);
}

TEST(Derivation, ReportsPathToFailure) {
    Derivation d = proof_of("n, n\\s -> s");
    d.premises[1].conclusion.succedent = parse_formula("n");
    auto r = check_derivation(d, CalculusConfig{});
    EXPECT_FALSE(r);
    EXPECT_FALSE(r.reason.empty());
}

TEST(Derivation, SexprRoundTrip) {
    oracle::Rng rng(3);
    CalculusConfig cfg;
    for (int i = 0; i < 200; ++i) {
        Sequent s = oracle::random_provable(rng, 4, 2, 6);
        auto d = prove(s, cfg);
        ASSERT_TRUE(d) << format_sequent(s);
        Derivation back = parse_sexpr(to_sexpr(*d));
        ASSERT_TRUE(structurally_equal(back, *d)) << to_sexpr(*d);
    }
}

TEST(Derivation, SexprRejectsGarbage) {
    EXPECT_ANY_THROW(parse_sexpr("(axiom"));
    EXPECT_ANY_THROW(parse_sexpr("(frobnicate \"n -> n\")"));
    EXPECT_ANY_THROW(parse_sexpr("(axiom \"n -> n\") trailing"));
}

TEST(Derivation, RendersOneLinePerNode) {
    Derivation d = proof_of("n, n\\s -> s");
    std::string tree = render_tree(d);
    EXPECT_EQ(std::count(tree.begin(), tree.end(), '\n'), 3);
    EXPECT_NE(tree.find("n, n\\s ⟶ s"), std::string::npos);
}
