#include "sllm/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "sllm/embeddings.hpp"
#include "sllm/experiments.hpp"
#include "sllm/lexicon.hpp"
#include "sllm/linear_map.hpp"
#include "sllm/prover.hpp"

namespace sllm::cli {
namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    int k0 = 2;
    int depth = 40;
    bool ascii = false;
    std::string dims = "n=2,s=2";

    Notation notation() const { return ascii ? Notation::Ascii : Notation::Unicode; }
    CalculusConfig config() const {
        CalculusConfig cfg;
        cfg.k0 = k0;
        cfg.max_depth = depth;
        return cfg;
    }
};

void add_search_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--k0", c.k0, "multiplexing bound")->check(CLI::Range(1, 16));
    cmd->add_option("--depth", c.depth, "proof-search depth cap")->check(CLI::Range(1, 1000));
    cmd->add_flag("--ascii", c.ascii, "ASCII connectives in the proof tree");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AtomDims dims_arg(const std::string& text) {
    try {
        return parse_atom_dims(text);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--dims: ") + e.what());
    }
}

std::string chomp(std::string s) {
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

void print_derivation(std::ostream& out, const Derivation& d, Notation notation) {
    out << chomp(to_sexpr(d)) << "\n\n" << chomp(render_tree(d, notation)) << "\n";
}

void print_tensor(std::ostream& out, const TensorValue& t) {
    write_tensor(out, t);
}

// prove ---------------------------------------------------------------------

struct ProveArgs {
    Common common;
    std::string sequent;
    bool all = false;
    std::size_t limit = 10;
};

int cmd_prove(const ProveArgs& a, std::ostream& out) {
    Sequent seq = [&] {
        try {
            return parse_sequent(a.sequent);
        } catch (const ParseError& e) {
            throw UsageError(std::string("sequent: ") + e.what());
        }
    }();
    CalculusConfig cfg = a.common.config();
    cfg.validate();

    if (a.all) {
        auto proofs = enumerate_proofs(seq, cfg, a.limit);
        if (proofs.empty())
            throw DomainFailure("unprovable within depth " + std::to_string(cfg.max_depth));
        for (std::size_t i = 0; i < proofs.size(); ++i) {
            out << "# reading " << i + 1 << "\n";
            print_derivation(out, proofs[i], a.common.notation());
            out << "\n";
        }
        return kOk;
    }

    ProofResult r = prove_detailed(seq, cfg);
    if (r.outcome != SearchOutcome::Proved) {
        std::string msg = "unprovable within depth " + std::to_string(cfg.max_depth);
        if (r.outcome == SearchOutcome::DepthExhausted && r.min_depth)
            msg += " (shortest derivation has depth " + std::to_string(*r.min_depth) + ")";
        throw DomainFailure(msg);
    }
    print_derivation(out, *r.derivation, a.common.notation());
    return kOk;
}

// compile -------------------------------------------------------------------

struct CompileArgs {
    Common common;
    std::string file;
    bool matrix = false;
};

int cmd_compile(const CompileArgs& a, std::ostream& out) {
    Derivation d = parse_sexpr(read_file(a.file));
    CalculusConfig cfg = a.common.config();
    cfg.validate();
    if (auto check = check_derivation(d, cfg); !check)
        throw DomainFailure("invalid derivation: " + check.reason);
    AtomDims dims = dims_arg(a.common.dims);
    LinearMap m = compile_derivation(d, dims, cfg);

    out << "sequent:  " << format_sequent(d.conclusion, a.common.notation()) << "\n";
    out << "domain:   " << format_shape(m.domain()) << "\n";
    for (std::size_t i = 0; i < m.domain_factors().size(); ++i)
        out << "  [" << i << "] " << format_formula(d.conclusion.antecedent[i], a.common.notation()) << " : "
            << format_shape(m.domain_factors()[i]) << "\n";
    out << "codomain: " << format_shape(m.codomain()) << "\n";
    if (a.matrix) {
        const std::size_t rows = m.codomain().total_dim(), cols = m.domain().total_dim();
        if (rows * cols > 1u << 20) throw DomainFailure("matrix too large to print");
        auto mat = matrix_of(m);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) out << (c ? " " : "") << mat[r * cols + c];
            out << "\n";
        }
    }
    return kOk;
}

// eval ----------------------------------------------------------------------

struct EvalArgs {
    Common common;
    std::string sentence;
    std::string lexicon;
    std::string goal = "s";
    std::string embeddings;
    std::string format = "word2vec";
    bool all = false;
    std::size_t limit = 10;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, Diagnostics& diag) {
    CalculusConfig cfg = a.common.config();
    cfg.validate();
    AtomDims dims = dims_arg(a.common.dims);
    Formula goal = [&] {
        try {
            return parse_formula(a.goal);
        } catch (const ParseError& e) {
            throw UsageError(std::string("--goal: ") + e.what());
        }
    }();

    std::optional<EmbeddingStore> emb;
    if (!a.embeddings.empty()) emb = load_embeddings(a.embeddings, parse_embedding_format(a.format), {}, &diag);
    LexiconSettings settings;
    settings.embeddings = emb ? &*emb : nullptr;
    settings.dims = dims;
    settings.k0 = cfg.k0;
    auto lexicon = load_lexicon(a.lexicon, settings, &diag);
    auto words = segment_sentence(a.sentence, lexicon);
    Sequent seq = sentence_sequent(words, goal);
    out << "sequent: " << format_sequent(seq, a.common.notation()) << "\n";

    auto readings = interpret(words, goal, dims, cfg, a.all ? a.limit : 1);
    if (readings.empty()) throw DomainFailure("unprovable within depth " + std::to_string(cfg.max_depth));
    for (std::size_t i = 0; i < readings.size(); ++i) {
        if (a.all) out << "# reading " << i + 1 << "\n";
        print_derivation(out, readings[i].derivation, a.common.notation());
        out << "meaning:\n";
        print_tensor(out, readings[i].meaning);
        if (a.all) out << "\n";
    }
    return kOk;
}

// experiment ----------------------------------------------------------------

struct ExperimentArgs {
    std::string dataset;
    std::vector<std::string> embeddings;
    std::vector<std::string> external;
    std::string format = "word2vec";
    std::string occurrences;
    std::string models;
    std::string grouping = "sentence1";
    std::string report;
    std::string cosines;
    std::string triplets;
    std::string unknown = "error";
    bool paired = false;
    bool no_normalize = false;
    bool no_counts = false;
};

std::pair<std::string, std::string> named_path(const std::string& arg) {
    auto eq = arg.find('=');
    if (eq == std::string::npos) return {std::filesystem::path(arg).stem().string(), arg};
    if (eq == 0 || eq + 1 == arg.size()) throw UsageError("expected NAME=PATH, got '" + arg + "'");
    return {arg.substr(0, eq), arg.substr(eq + 1)};
}

std::string resolve_embedding_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path) || fs::path(path).is_absolute()) return path;
    if (const char* dir = std::getenv("SLLM_EMBEDDING_DIR"); dir && *dir) {
        fs::path candidate = fs::path(dir) / path;
        if (fs::exists(candidate)) return candidate.string();
    }
    return path;
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, Diagnostics& diag) {
    EmbeddingOptions eopt;
    EvaluationOptions options;
    std::vector<ModelId> models;
    try {
        eopt.unknown = parse_unknown_policy(a.unknown);
        options.grouping = parse_grouping(a.grouping);
        if (!a.models.empty()) {
            std::stringstream ss(a.models);
            for (std::string name; std::getline(ss, name, ',');)
                if (!name.empty()) models.push_back(parse_model(name));
        }
        (void)parse_embedding_format(a.format);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    options.ttest.paired = a.paired;
    options.ttest.normalize_human = !a.no_normalize;
    if (a.embeddings.empty() && a.external.empty()) throw UsageError("give at least one --embeddings or --external");
    if (models.empty()) {
        for (ModelId m : all_models())
            if (m != ModelId::External || !a.external.empty()) models.push_back(m);
    }

    auto records = load_ellsim(a.dataset);
    std::vector<Triplet> triplets;
    if (!a.triplets.empty()) triplets = load_triplets(a.triplets);
    std::vector<SVOOccurrence> occurrences;
    if (!a.occurrences.empty()) occurrences = load_occurrences(a.occurrences);

    // Stable addresses for the sources.
    std::map<std::string, EmbeddingStore> stores, sentence_stores;
    std::map<std::string, VerbMatrices> verbs;
    std::vector<std::string> order;
    for (const auto& arg : a.embeddings) {
        auto [name, path] = named_path(arg);
        if (stores.count(name)) throw UsageError("duplicate embedding name '" + name + "'");
        auto it = stores
                      .emplace(name, load_embeddings(resolve_embedding_path(path), parse_embedding_format(a.format),
                                                     eopt, &diag))
                      .first;
        RelationalOptions ropt;
        ropt.use_counts = !a.no_counts;
        verbs[name] = occurrences.empty() ? VerbMatrices{}
                                          : verb_matrices(relational_verbs(occurrences, it->second, ropt, &diag));
        order.push_back(name);
    }
    for (const auto& arg : a.external) {
        auto [name, path] = named_path(arg);
        if (sentence_stores.count(name)) throw UsageError("duplicate external name '" + name + "'");
        sentence_stores.emplace(name, load_sentence_vectors(resolve_embedding_path(path)));
        if (!stores.count(name)) order.push_back(name);
    }

    std::vector<EmbeddingSource> sources;
    for (const auto& name : order) {
        EmbeddingSource src;
        src.name = name;
        if (auto it = stores.find(name); it != stores.end()) {
            src.embeddings = &it->second;
            src.verbs = &verbs[name];
        }
        if (auto it = sentence_stores.find(name); it != sentence_stores.end()) src.sentences = &it->second;
        sources.push_back(src);
    }

    auto reports = run_evaluation(records, triplets, models, sources, options, &diag);
    write_report_table(out, reports);
    if (!a.report.empty()) {
        std::ofstream f(a.report);
        if (!f) throw std::runtime_error("cannot write " + a.report);
        write_report_tsv(f, reports);
    }
    if (!a.cosines.empty()) {
        std::ofstream f(a.cosines);
        if (!f) throw std::runtime_error("cannot write " + a.cosines);
        write_cosines_tsv(f, records, reports);
    }
    return kOk;
}

// demo ----------------------------------------------------------------------

struct DemoArgs {
    Common common;
    std::string name;
    std::string data;
};

int cmd_demo(const DemoArgs& a, std::ostream& out) {
    DemoOptions opt;
    opt.name = a.name;
    opt.data_dir = a.data;
    opt.dims = dims_arg(a.common.dims);
    opt.k0 = a.common.k0;
    opt.depth = a.common.depth;
    DemoResult r = run_demo(opt);
    out << "sentence: " << r.sentence << "\n";
    out << "sequent:  " << format_sequent(r.sequent, a.common.notation()) << "\n\n";
    print_derivation(out, r.derivation, a.common.notation());
    out << "\nmeaning:\n";
    print_tensor(out, r.meaning);
    return kOk;
}

void flush_warnings(const Diagnostics& diag, std::ostream& err) {
    std::map<std::string, std::size_t> seen;
    std::vector<std::string> order;
    for (const auto& w : diag.warnings())
        if (seen[w]++ == 0) order.push_back(w);
    for (const auto& w : order) {
        err << "warning: " << w;
        if (seen[w] > 1) err << " (x" << seen[w] << ")";
        err << "\n";
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Proof search and vector semantics for Lambek calculus with soft subexponentials", "sllm"};
    app.require_subcommand(1);

    ProveArgs prove;
    auto* p = app.add_subcommand("prove", "search for a derivation of a sequent");
    p->add_option("sequent", prove.sequent, "e.g. \"n, n\\s -> s\"")->required();
    add_search_flags(p, prove.common);
    p->add_flag("--all", prove.all, "print derivations with distinct axiom linkings");
    p->add_option("--limit", prove.limit, "maximum number of derivations with --all")->check(CLI::PositiveNumber);

    CompileArgs compile;
    auto* c = app.add_subcommand("compile", "compile a derivation file to a linear map");
    c->add_option("file", compile.file, "s-expression derivation")->required()->check(CLI::ExistingFile);
    add_search_flags(c, compile.common);
    c->add_option("--dims", compile.common.dims, "atom dimensions, e.g. n=2,s=2");
    c->add_flag("--matrix", compile.matrix, "print the dense matrix");

    EvalArgs eval;
    auto* e = app.add_subcommand("eval", "interpret a sentence with a lexicon");
    e->add_option("sentence", eval.sentence)->required();
    e->add_option("--lexicon", eval.lexicon, "lexicon TSV")->required()->check(CLI::ExistingFile);
    e->add_option("--goal", eval.goal, "goal type");
    e->add_option("--dims", eval.common.dims, "atom dimensions, e.g. n=2,s=2");
    e->add_option("--embeddings", eval.embeddings, "word vectors for embed/tilde entries")->check(CLI::ExistingFile);
    e->add_option("--format", eval.format, "word2vec or glove");
    add_search_flags(e, eval.common);
    e->add_flag("--all", eval.all, "every reading up to --limit");
    e->add_option("--limit", eval.limit)->check(CLI::PositiveNumber);

    ExperimentArgs exp;
    auto* x = app.add_subcommand("experiment", "sentence-similarity evaluation on ELLSIM-style data");
    x->add_option("--dataset", exp.dataset, "similarity judgements")->required()->check(CLI::ExistingFile);
    x->add_option("--embeddings", exp.embeddings, "NAME=PATH, repeatable; relative paths also tried under $SLLM_EMBEDDING_DIR");
    x->add_option("--external", exp.external, "NAME=PATH of precomputed sentence vectors, repeatable");
    x->add_option("--format", exp.format, "word2vec or glove");
    x->add_option("--occurrences", exp.occurrences, "subject/verb/object counts for relational verbs")
        ->check(CLI::ExistingFile);
    x->add_option("--models", exp.models, "comma-separated, default all");
    x->add_option("--grouping", exp.grouping, "t-test groups: sentence1 or source-pair");
    x->add_option("--report", exp.report, "write the report as TSV");
    x->add_option("--cosines", exp.cosines, "write per-pair cosines as TSV");
    x->add_option("--triplets", exp.triplets, "triplet TSV; derived from the dataset when absent")
        ->check(CLI::ExistingFile);
    x->add_option("--unknown", exp.unknown, "unknown words: error, zero or hash");
    x->add_flag("--paired", exp.paired, "paired t-test");
    x->add_flag("--no-normalize", exp.no_normalize, "compare raw human scores with cosines");
    x->add_flag("--no-counts", exp.no_counts, "ignore occurrence counts");

    DemoArgs demo;
    auto* d = app.add_subcommand("demo", "run a bundled example");
    d->add_option("example", demo.name)->required()->check(CLI::IsMember(demo_names()));
    d->add_option("--dims", demo.common.dims, "atom dimensions, e.g. n=2,s=2");
    d->add_option("--data", demo.data, "directory of the demo lexicons");
    add_search_flags(d, demo.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& pe) {
        int code = app.exit(pe, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Diagnostics diag;
    int code = kOk;
    try {
        if (*p) code = cmd_prove(prove, out);
        else if (*c) code = cmd_compile(compile, out);
        else if (*e) code = cmd_eval(eval, out, diag);
        else if (*x) code = cmd_experiment(exp, out, diag);
        else if (*d) code = cmd_demo(demo, out);
    } catch (const UsageError& ue) {
        flush_warnings(diag, err);
        err << "error: " << ue.what() << "\n";
        return kUsage;
    } catch (const std::exception& ex) {
        flush_warnings(diag, err);
        err << "error: " << ex.what() << "\n";
        return kFailure;
    }
    flush_warnings(diag, err);
    return code;
}

}  // namespace sllm::cli
