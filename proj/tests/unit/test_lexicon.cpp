#include <gtest/gtest.h>

#include <sstream>

#include "golden.hpp"
#include "naive.hpp"
#include "sllm/lexicon.hpp"
#include "sllm/linear_map.hpp"
#include "sllm/prover.hpp"

using namespace sllm;

namespace {

EmbeddingStore small_store() {
    EmbeddingStore e(2);
    e.insert("dog", {1, 0});
    e.insert("cat", {0, 1});
    e.insert("man", {2, 1});
    return e;
}

std::vector<SVOOccurrence> occurrences(const std::string& text) {
    std::istringstream in(text);
    return read_occurrences(in);
}

}  // namespace

TEST(Relational, SinglePairIsOuterProduct) {
    EmbeddingStore e = small_store();
    TensorValue m = relational_verb(occurrences("dog\tchase\tcat\n"), e);
    EXPECT_EQ(m.data(), (std::vector<double>{0, 1, 0, 0}));
    EXPECT_EQ(m.shape(), SpaceShape::tensor(SpaceShape::base(2), SpaceShape::base(2)));
}

TEST(Relational, SumsWeightedPairs) {
    EmbeddingStore e = small_store();
    auto occ = occurrences("dog\tchase\tcat\t3\nman\tchase\tdog\n");
    std::vector<double> expect = oracle::kron({1, 0}, {0, 1});
    for (auto& x : expect) x *= 3;
    auto second = oracle::kron({2, 1}, {1, 0});
    for (std::size_t i = 0; i < 4; ++i) expect[i] += second[i];
    EXPECT_EQ(relational_verb(occ, e).data(), expect);

    RelationalOptions flat;
    flat.use_counts = false;
    auto unweighted = relational_verb(occ, e, flat).data();
    EXPECT_EQ(unweighted[1], 1.0);
}

TEST(Relational, SkipsUnknownWords) {
    EmbeddingStore e = small_store();
    Diagnostics diag;
    TensorValue m = relational_verb(occurrences("dog\tchase\tcat\nbird\tchase\tcat\n"), e, {}, &diag);
    EXPECT_EQ(m.data(), (std::vector<double>{0, 1, 0, 0}));
    EXPECT_EQ(diag.warnings().size(), 1u);
    EXPECT_ANY_THROW(relational_verb(occurrences("bird\tchase\tfish\n"), e));
}

TEST(Relational, GroupsByVerb) {
    EmbeddingStore e = small_store();
    auto verbs = relational_verbs(occurrences("dog\tchase\tcat\ncat\tsee\tdog\ndog\tchase\tman\n"), e);
    ASSERT_EQ(verbs.size(), 2u);
    EXPECT_EQ(verbs[0].first, "chase");
    EXPECT_EQ(verbs[1].first, "see");
}

TEST(Relational, OccurrenceFileErrors) {
    EXPECT_ANY_THROW(occurrences("dog\tchase\n"));
    EXPECT_ANY_THROW(occurrences("dog\tchase\tcat\t-1\n"));
    EXPECT_EQ(occurrences("# comment\ndog\tchase\tcat\t2\n").at(0).count, 2);
}

TEST(Relational, TransitiveEntryGivesCopyObject) {
    AtomDims dims{{"n", 3}, {"s", 3}};
    CalculusConfig cfg;
    std::mt19937_64 rng(21);
    for (const char* type : {"(n\\s)/n", "n\\(s/n)"}) {
        Formula f = parse_formula(type);
        auto mat = oracle::random_vec(rng, 9);
        TensorValue verb = transitive_from_matrix(f, TensorValue(SpaceShape::tensor(SpaceShape::base(3), SpaceShape::base(3)), mat), dims, 2);
        auto subj = oracle::random_vec(rng, 3), obj = oracle::random_vec(rng, 3);
        Sequent s{{Formula::atom("n"), f, Formula::atom("n")}, Formula::atom("s")};
        auto d = prove(s, cfg);
        ASSERT_TRUE(d);
        TensorValue out = apply_product(compile_derivation(*d, dims, cfg),
                                        {TensorValue::vector(subj), verb, TensorValue::vector(obj)});
        auto expect = oracle::matvec(mat, obj);
        for (std::size_t i = 0; i < 3; ++i) expect[i] *= subj[i];
        EXPECT_TRUE(oracle::close(out.data(), expect)) << type;
    }
}

TEST(Lexicon, ValueSpecs) {
    EmbeddingStore e = small_store();
    LexiconSettings st;
    st.embeddings = &e;
    st.dims = {{"n", 2}, {"s", 2}};
    EXPECT_EQ(make_entry("man", parse_formula("n"), "embed", st).value.data(), (std::vector<double>{2, 1}));
    EXPECT_EQ(make_entry("man", parse_formula("!@n"), "tilde", st).value.data(), oracle::tilde({2, 1}, 2));
    EXPECT_EQ(make_entry("too", parse_formula("n\\n"), "identity", st).value.data(), (std::vector<double>{1, 0, 0, 1}));
    auto r1 = make_entry("x", parse_formula("n\\s"), "random:5", st).value;
    EXPECT_EQ(r1.data(), make_entry("y", parse_formula("n\\s"), "random:5", st).value.data());
    EXPECT_NE(r1.data(), make_entry("x", parse_formula("n\\s"), "random:6", st).value.data());
    EXPECT_THROW(make_entry("man", parse_formula("n"), "tilde", st), std::invalid_argument);
    EXPECT_THROW(make_entry("x", parse_formula("n\\s"), "magic", st), std::invalid_argument);
    EXPECT_THROW(make_entry("x", parse_formula("n"), "random:abc", st), std::invalid_argument);
    EXPECT_THROW(make_entry("x", parse_formula("n·n"), "identity", st), std::invalid_argument);
}

TEST(Lexicon, ReadsTsv) {
    EmbeddingStore e = small_store();
    LexiconSettings st;
    st.embeddings = &e;
    std::istringstream in("# word\ttype\tvalue\ndog\tn\tembed\nruns fast\tn\\s\trandom:1\n\nbad line\n");
    EXPECT_ANY_THROW(read_lexicon(in, st));
    std::istringstream ok("# word\ttype\tvalue\ndog\tn\tembed\nruns fast\tn\\s\trandom:1\n");
    auto lex = read_lexicon(ok, st);
    ASSERT_EQ(lex.size(), 2u);
    EXPECT_EQ(lex[1].word, "runs fast");
}

TEST(Lexicon, SegmentsLongestMatch) {
    EmbeddingStore e = small_store();
    LexiconSettings st;
    st.embeddings = &e;
    std::istringstream in("dog\tn\tembed\nruns\tn\\s\trandom:1\nruns fast\tn\\s\trandom:2\n");
    auto lex = read_lexicon(in, st);
    auto words = segment_sentence("Dog runs fast.", lex);
    ASSERT_EQ(words.size(), 2u);
    EXPECT_EQ(words[1]->word, "runs fast");
    EXPECT_THROW(segment_sentence("dog sleeps", lex), UnknownWord);
}

TEST(Lexicon, AnaphoraDemoMatchesOracle) {
    EmbeddingStore e = load_embeddings(std::string(SLLM_DEMO_DATA) + "/embeddings.txt", EmbeddingFormat::Word2VecText);
    LexiconSettings st;
    st.embeddings = &e;
    auto lex = load_lexicon(std::string(SLLM_DEMO_DATA) + "/anaphora.tsv", st);
    auto words = segment_sentence("John sleeps. He snores.", lex);
    ASSERT_EQ(words.size(), 4u);
    auto readings = interpret(words, parse_formula("s·s"), st.dims, CalculusConfig{}, 1);
    ASSERT_EQ(readings.size(), 1u);
    std::vector<double> john(e.find("john")->begin(), e.find("john")->begin() + 2);
    auto expect = oracle::anaphora(john, words[1]->value.data(), words[2]->value.data(),
                                   words[3]->value.data());
    EXPECT_TRUE(oracle::close(readings[0].meaning.data(), expect));
}

TEST(Lexicon, InterpretReturnsNothingForUngrammatical) {
    EmbeddingStore e = small_store();
    LexiconSettings st;
    st.embeddings = &e;
    std::istringstream in("dog\tn\tembed\ncat\tn\tembed\n");
    auto lex = read_lexicon(in, st);
    EXPECT_TRUE(interpret(segment_sentence("dog cat", lex), parse_formula("s"), st.dims, CalculusConfig{}).empty());
}
