#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sllm/cli.hpp"
#include "sllm/embeddings.hpp"
#include "sllm/lexicon.hpp"
#include "sllm/linear_map.hpp"

#ifndef SLLM_DEMO_DIR
#define SLLM_DEMO_DIR "data/demo"
#endif

namespace sllm::cli {
namespace {

struct DemoSpec {
    std::string name;
    std::string lexicon;
    std::string sentence;
    std::string goal;
    std::string derivation;  // empty: found by the prover
};

const std::vector<DemoSpec>& specs() {
    static const std::vector<DemoSpec> all = {
        {"parasitic-gap", "parasitic-gap.tsv", "papers that john signed without reading", "n", ""},
        {"anaphora", "anaphora.tsv", "John sleeps. He snores.", "s*s", ""},
        {"ellipsis", "ellipsis.tsv", "John plays guitar. Lisa does too.", "s*s", ""},
        {"anaphora-ellipsis-strict", "anaphora-ellipsis.tsv", "Kim likes their code. Sam does too.", "s*s",
         "anaphora-ellipsis-strict.sexp"},
        {"anaphora-ellipsis-sloppy", "anaphora-ellipsis.tsv", "Kim likes their code. Sam does too.", "s*s",
         "anaphora-ellipsis-sloppy.sexp"},
    };
    return all;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

const std::vector<std::string>& demo_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : specs()) v.push_back(s.name);
        return v;
    }();
    return names;
}

std::string default_demo_dir() {
    if (const char* env = std::getenv("SLLM_DEMO_DIR"); env && *env) return env;
    return SLLM_DEMO_DIR;
}

DemoResult run_demo(const DemoOptions& options) {
    const DemoSpec* spec = nullptr;
    for (const auto& s : specs())
        if (s.name == options.name) spec = &s;
    if (!spec) throw std::invalid_argument("unknown demo '" + options.name + "'");

    const std::filesystem::path dir = options.data_dir.empty() ? default_demo_dir() : options.data_dir;
    CalculusConfig cfg;
    cfg.k0 = options.k0;
    cfg.max_depth = options.depth;
    cfg.validate();

    EmbeddingStore emb = load_embeddings((dir / "embeddings.txt").string(), EmbeddingFormat::Word2VecText);
    LexiconSettings settings;
    settings.embeddings = &emb;
    settings.dims = options.dims;
    settings.k0 = options.k0;
    auto lexicon = load_lexicon((dir / spec->lexicon).string(), settings);
    auto words = segment_sentence(spec->sentence, lexicon);
    Formula goal = parse_formula(spec->goal);
    Sequent sequent = sentence_sequent(words, goal);

    if (spec->derivation.empty()) {
        auto readings = interpret(words, goal, options.dims, cfg, 1);
        if (readings.empty())
            throw DomainFailure("unprovable within depth " + std::to_string(cfg.max_depth) + ": " +
                                format_sequent(sequent));
        return {spec->sentence, sequent, std::move(readings.front().derivation), std::move(readings.front().meaning)};
    }

    Derivation d = parse_sexpr(read_file(dir / spec->derivation));
    if (d.conclusion != sequent)
        throw DomainFailure(spec->derivation + " proves " + format_sequent(d.conclusion) + ", expected " +
                            format_sequent(sequent));
    if (auto check = check_derivation(d, cfg); !check)
        throw DomainFailure(spec->derivation + ": " + check.reason);
    std::vector<TensorValue> values;
    for (const auto* w : words) values.push_back(w->value);
    TensorValue meaning = apply_product(compile_derivation(d, options.dims, cfg), values);
    return {spec->sentence, sequent, std::move(d), std::move(meaning)};
}

}  // namespace sllm::cli
