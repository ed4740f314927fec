#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "brute_prover.hpp"
#include "generators.hpp"
#include "golden.hpp"
#include "naive.hpp"
#include "sllm/derivation.hpp"
#include "sllm/experiments.hpp"
#include "sllm/lexicon.hpp"
#include "sllm/linear_map.hpp"
#include "sllm/prover.hpp"

using namespace sllm;

namespace {

enum class Status { Pass, Fail, Skip };

struct Verdict {
    Status status;
    std::string detail;
};

Verdict pass(std::string d) { return {Status::Pass, std::move(d)}; }
Verdict fail(std::string d) { return {Status::Fail, std::move(d)}; }

CalculusConfig config(int k0 = 2, int depth = 40) {
    CalculusConfig cfg;
    cfg.k0 = k0;
    cfg.max_depth = depth;
    return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 2) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << x;
    return ss.str();
}

// 1 -------------------------------------------------------------------------

Verdict rule_soundness() {
    const auto t0 = std::chrono::steady_clock::now();
    oracle::Rng rng(20210705);
    const AtomDims dims{{"n", 2}, {"s", 3}};
    const CalculusConfig cfg = config(2);
    // nested ! makes dense spaces grow doubly exponentially
    constexpr std::size_t kMaxDim = 1 << 14;
    auto small = [&](const Sequent& s) {
        std::size_t total = shape_of(s.succedent, dims, 2).total_dim();
        for (const auto& f : s.antecedent) total += shape_of(f, dims, 2).total_dim();
        return total <= kMaxDim;
    };
    std::set<std::string> seen;
    std::size_t rules_used = 0, too_large = 0;
    std::set<Rule> rules;
    while (seen.size() < 500) {
        Sequent s = oracle::random_provable(rng, 5, 2, 8);
        if (seen.count(format_sequent(s))) continue;
        if (!small(s)) {
            ++too_large;
            continue;
        }
        seen.insert(format_sequent(s));
        auto d = prove(s, cfg);
        if (!d) return fail("no derivation for " + format_sequent(s));
        if (d->conclusion != s) return fail("derivation proves another sequent: " + format_sequent(s));
        if (auto c = check_derivation(*d, cfg); !c) return fail(format_sequent(s) + ": " + c.reason);
        LinearMap m = compile_derivation(*d, dims, cfg);
        if (m.domain_factors().size() != s.antecedent.size()) return fail("domain arity for " + format_sequent(s));
        for (std::size_t i = 0; i < s.antecedent.size(); ++i)
            if (m.domain_factors()[i] != shape_of(s.antecedent[i], dims, 2))
                return fail("domain shape for " + format_sequent(s));
        if (m.codomain() != shape_of(s.succedent, dims, 2)) return fail("codomain shape for " + format_sequent(s));
        std::function<void(const Derivation&)> walk = [&](const Derivation& x) {
            rules.insert(x.rule);
            for (const auto& p : x.premises) walk(p);
        };
        walk(*d);
    }
    rules_used = rules.size();
    const double secs = seconds_since(t0);
    if (secs >= 60.0) return fail("took " + fmt(secs) + " s");
    return pass("500 sequents, " + std::to_string(rules_used) + " of 13 rules exercised, " + std::to_string(too_large) +
                " with spaces over " + std::to_string(kMaxDim) + " dimensions redrawn, " + fmt(secs) + " s");
}

// 2 -------------------------------------------------------------------------

Verdict copying_identity() {
    std::mt19937_64 rng(2);
    std::size_t checks = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t d = 1 + rng() % 6;
        auto v = oracle::random_vec(rng, d);
        for (int k0 = 1; k0 <= 3; ++k0) {
            TensorValue t = fock_embed_tilde(TensorValue::vector(v), k0);
            for (int n = 0; n <= k0; ++n) {
                TensorValue layer = fock_project(t, n);
                if (layer.data() != oracle::power(v, n))
                    return fail("layer " + std::to_string(n) + " differs for dim " + std::to_string(d));
                std::vector<SpaceShape> copies(static_cast<std::size_t>(n), SpaceShape::base(d));
                if (layer.shape() != tensor_all(copies)) return fail("layer shape " + format_shape(layer.shape()));
                ++checks;
            }
        }
    }
    return pass(std::to_string(checks) + " projections equal v^n exactly");
}

// 3 -------------------------------------------------------------------------

TensorValue value_of(const std::string& type, const AtomDims& dims, std::vector<double> data) {
    return TensorValue(shape_of(parse_formula(type), dims, 2), std::move(data));
}

TensorValue random_value(const std::string& type, const AtomDims& dims, std::mt19937_64& rng) {
    SpaceShape s = shape_of(parse_formula(type), dims, 2);
    return TensorValue(s, oracle::random_vec(rng, s.total_dim()));
}

TensorValue tilde_of(const std::string& inner_type, const AtomDims& dims, const oracle::Vec& v) {
    return fock_embed_tilde(value_of(inner_type, dims, v), 2);
}

const char* kParasiticGap = "n, (n\\n)/(s/!@n), n, (n\\s)/n, ((n\\s)\\(n\\s))/n, n/n -> n";
const char* kAnaphora = "!@n, n\\s, @n\\n, n\\s -> s.s";
const char* kEllipsis = "n, !@(n\\s), n, @(n\\s)\\(n\\s) -> s.s";
const char* kAnaphoraEllipsis = "!@n, !@(!@(n\\s)/n), !@(@n\\n)/n, n, !@n, @(n\\s)\\(n\\s) -> s.s";

std::vector<TensorValue> strict_sloppy_values(const oracle::AnaphoraEllipsis& x, const AtomDims& dims) {
    const std::size_t dn = dims.at("n"), ds = dims.at("s");
    oracle::Vec likes;
    for (const auto& b : x.b) {
        auto t = oracle::tilde(b, 2);
        likes.insert(likes.end(), t.begin(), t.end());
    }
    oracle::Vec identity(dn * ds * dn * ds, 0.0);
    for (std::size_t i = 0; i < dn * ds; ++i) identity[i * dn * ds + i] = 1.0;
    return {tilde_of("n", dims, x.kim),
            tilde_of("!@(n\\s)/n", dims, likes),
            value_of("!@(@n\\n)/n", dims, oracle::kron(x.c, oracle::tilde(x.a, 2))),
            value_of("n", dims, x.code),
            tilde_of("n", dims, x.sam),
            value_of("@(n\\s)\\(n\\s)", dims, identity)};
}

oracle::AnaphoraEllipsis random_anaphora_ellipsis(const AtomDims& dims, std::mt19937_64& rng) {
    const std::size_t dn = dims.at("n"), ds = dims.at("s");
    oracle::AnaphoraEllipsis x;
    x.kim = oracle::random_vec(rng, dn);
    x.sam = oracle::random_vec(rng, dn);
    x.code = oracle::random_vec(rng, dn);
    x.c = oracle::random_vec(rng, dn);
    x.a = oracle::random_vec(rng, dn * dn);
    for (std::size_t j = 0; j < dn; ++j) x.b.push_back(oracle::random_vec(rng, dn * ds));
    return x;
}

Derivation load_derivation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sexpr(ss.str());
}

Verdict golden_derivations() {
    const CalculusConfig cfg = config(2, 40);
    std::map<std::string, Derivation> proofs;
    for (const char* text : {kParasiticGap, kAnaphora, kEllipsis, kAnaphoraEllipsis}) {
        auto d = prove(parse_sequent(text), cfg);
        if (!d) return fail(std::string("not provable within depth 40: ") + text);
        if (!check_derivation(*d, cfg)) return fail(std::string("invalid derivation: ") + text);
        proofs.emplace(text, *d);
    }

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        AtomDims dims{{"n", 2 + rng() % 2}, {"s", 2 + rng() % 2}};
        const std::size_t dn = dims.at("n"), ds = dims.at("s");

        auto j = oracle::random_vec(rng, dn);
        auto sleeps = random_value("n\\s", dims, rng), he = random_value("@n\\n", dims, rng),
             snores = random_value("n\\s", dims, rng);
        TensorValue a = apply_product(compile_derivation(proofs.at(kAnaphora), dims, cfg),
                                      {tilde_of("n", dims, j), sleeps, he, snores});
        if (!oracle::close(a.data(), oracle::anaphora(j, sleeps.data(), he.data(), snores.data())))
            return fail("anaphora differs from oracle on lexicon " + std::to_string(trial));

        auto john = oracle::random_vec(rng, dn), lisa = oracle::random_vec(rng, dn),
             pg = oracle::random_vec(rng, dn * ds);
        auto too = random_value("@(n\\s)\\(n\\s)", dims, rng);
        TensorValue e = apply_product(compile_derivation(proofs.at(kEllipsis), dims, cfg),
                                      {value_of("n", dims, john), tilde_of("n\\s", dims, pg), value_of("n", dims, lisa), too});
        if (!oracle::close(e.data(), oracle::ellipsis(john, pg, lisa, too.data())))
            return fail("ellipsis differs from oracle on lexicon " + std::to_string(trial));
    }

    // strict and sloppy readings
    const Sequent seq = parse_sequent(kAnaphoraEllipsis);
    const std::string dir = SLLM_DEMO_DATA;
    Derivation strict = load_derivation(dir + "/anaphora-ellipsis-strict.sexp");
    Derivation sloppy = load_derivation(dir + "/anaphora-ellipsis-sloppy.sexp");
    for (const Derivation* d : {&strict, &sloppy}) {
        if (d->conclusion != seq) return fail("stored reading proves " + format_sequent(d->conclusion));
        if (auto c = check_derivation(*d, cfg); !c) return fail("stored reading invalid: " + c.reason);
        if (d->logical_height() > 40) return fail("stored reading deeper than 40");
    }
    bool differ = false;
    for (int trial = 0; trial < 20; ++trial) {
        AtomDims dims{{"n", 2 + rng() % 2}, {"s", 2 + rng() % 2}};
        auto x = random_anaphora_ellipsis(dims, rng);
        auto values = strict_sloppy_values(x, dims);
        auto s1 = apply_product(compile_derivation(strict, dims, cfg), values).data();
        auto s2 = apply_product(compile_derivation(sloppy, dims, cfg), values).data();
        if (!oracle::close(s1, oracle::strict_reading(x))) return fail("strict reading differs from oracle");
        if (!oracle::close(s2, oracle::sloppy_reading(x))) return fail("sloppy reading differs from oracle");
        differ = differ || !oracle::close(s1, s2);
    }
    if (!differ) return fail("strict and sloppy maps agree on every lexicon");

    auto readings = enumerate_proofs(seq, cfg, 10);
    if (readings.size() < 2) return fail("fewer than two derivations of anaphora with ellipsis");
    AtomDims dims{{"n", 2}, {"s", 2}};
    auto values = strict_sloppy_values(random_anaphora_ellipsis(dims, rng), dims);
    std::vector<oracle::Vec> meanings;
    for (const auto& d : readings) {
        auto m = apply_product(compile_derivation(d, dims, cfg), values).data();
        bool fresh = true;
        for (const auto& o : meanings) fresh = fresh && !oracle::close(o, m);
        if (fresh) meanings.push_back(m);
    }
    if (meanings.size() < 2) return fail("enumerated readings all compile to the same map");
    return pass("4 sequents proved; 20 lexicons match oracles; strict != sloppy; " + std::to_string(readings.size()) +
                " enumerated readings give " + std::to_string(meanings.size()) + " distinct maps");
}

// 4 -------------------------------------------------------------------------

Verdict fock_functoriality() {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t a = 1 + rng() % 4, b = 1 + rng() % 4;
        int k0 = 1 + static_cast<int>(rng() % 3);
        auto m = oracle::random_vec(rng, a * b), v = oracle::random_vec(rng, a);
        LinearMap f = matrix_map(SpaceShape::base(a), SpaceShape::base(b), m);
        TensorValue lhs = apply(fock_map(f, k0), fock_embed_tilde(TensorValue::vector(v), k0));
        if (!oracle::close(lhs.data(), oracle::tilde(oracle::matvec(m, v), k0)))
            return fail("trial " + std::to_string(trial));
    }
    return pass("100 random (f, v) within 1e-10");
}

// 5 -------------------------------------------------------------------------

Verdict statistics_oracles() {
    std::mt19937_64 rng(5);
    std::size_t checks = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + rng() % 29;
        std::vector<double> x(n), y(n), human(n), cos(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng() % 8);
            y[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
            human[i] = 1.0 + static_cast<double>(rng() % 7);
            cos[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
        }

        double rho_expect = oracle::brute_spearman(x, y);
        if (std::isnan(rho_expect)) {
            try {
                spearman_rho(x, y);
                return fail("spearman defined on constant input");
            } catch (const std::domain_error&) {
            }
        } else if (std::fabs(spearman_rho(x, y) - rho_expect) > 1e-9) {
            return fail("spearman trial " + std::to_string(trial));
        }

        std::size_t g = 1 + rng() % 6;
        std::vector<std::vector<std::size_t>> groups(g);
        for (std::size_t i = 0; i < n; ++i) groups[rng() % g].push_back(i);
        const bool paired = rng() % 2, normalize = rng() % 2;
        auto expect = oracle::brute_t_report(groups, human, cos, paired, normalize);
        try {
            auto got = t_test_report(groups, human, cos, {paired, normalize});
            if (!expect.defined || std::fabs(got.mean_t - expect.mean) > 1e-9 || got.per_group.size() != expect.used)
                return fail("t-test trial " + std::to_string(trial));
        } catch (const std::domain_error&) {
            if (expect.defined) return fail("t-test undefined in trial " + std::to_string(trial));
        }

        std::size_t m = 1 + rng() % 30;
        std::vector<TripletScores> ts;
        std::vector<oracle::BruteTriplet> bs;
        for (std::size_t i = 0; i < m; ++i) {
            double c12 = static_cast<double>(rng() % 5) / 5, c13 = static_cast<double>(rng() % 5) / 5;
            double h12 = 1.0 + static_cast<double>(rng() % 4), h13 = 1.0 + static_cast<double>(rng() % 4);
            ts.push_back({c12, c13, h12, h13});
            bs.push_back({c12, c13, h12, h13});
        }
        if (std::fabs(classify_triplets(ts) - oracle::brute_accuracy(bs)) > 1e-9)
            return fail("classification trial " + std::to_string(trial));
        checks += 3;
    }
    return pass(std::to_string(checks) + " comparisons within 1e-9");
}

// 6 -------------------------------------------------------------------------

std::string toy_report() {
    const std::string dir = SLLM_TOY_DATA;
    auto records = load_ellsim(dir + "/ellsim.txt");
    if (records.size() != 8) throw std::runtime_error("toy dataset has " + std::to_string(records.size()) + " records");
    EmbeddingStore emb = load_embeddings(dir + "/embeddings.txt", EmbeddingFormat::Word2VecText);
    EmbeddingStore sentences = load_sentence_vectors(dir + "/sentences.tsv");
    VerbMatrices verbs = verb_matrices(relational_verbs(load_occurrences(dir + "/occurrences.tsv"), emb));
    EmbeddingSource src{"toy", &emb, &verbs, &sentences};
    Diagnostics diag;
    auto reports = run_evaluation(records, load_triplets(dir + "/triplets.tsv"), all_models(), {src}, {}, &diag);
    std::ostringstream out;
    write_report_tsv(out, reports);
    write_report_table(out, reports);
    write_cosines_tsv(out, records, reports);
    out << std::hexfloat;
    for (const auto& r : reports) {
        out << r.spearman_rho << ' ' << r.mean_t_score << ' ' << r.classification_accuracy;
        for (double c : r.per_pair_cosines) out << ' ' << c;
        out << '\n';
    }
    for (const auto& w : diag.warnings()) out << w << '\n';
    return out.str();
}

Verdict determinism() {
    std::string a = toy_report(), b = toy_report();
    if (a != b) return fail("reports differ between runs");
    return pass("two runs on 8 records, " + std::to_string(a.size()) + " identical bytes");
}

// 7 -------------------------------------------------------------------------

struct ReferenceRow {
    ModelId model;
    const char* source;
    double rho, t, accuracy;
};

// reference scores, accuracy in percent
const ReferenceRow kReference[] = {
    {ModelId::CopySubj, "word2vec", 0.644, 15.99, 71.18},       {ModelId::CopySubj, "fasttext", 0.591, 15.09, 73.44},
    {ModelId::CopyObj, "word2vec", 0.604, 14.82, 76.33},        {ModelId::CopyObj, "fasttext", 0.599, 14.40, 74.19},
    {ModelId::FrobAdd, "word2vec", 0.653, 14.86, 76.04},        {ModelId::FrobAdd, "fasttext", 0.610, 14.24, 73.67},
    {ModelId::FrobMult, "word2vec", 0.587, 15.97, 69.79},       {ModelId::FrobMult, "fasttext", 0.579, 14.85, 71.24},
    {ModelId::VerbOnlyVector, "word2vec", 0.583, 15.05, 76.44}, {ModelId::VerbOnlyVector, "fasttext", 0.651, 15.13, 78.53},
    {ModelId::VerbOnlyTensor, "word2vec", 0.566, 15.01, 73.30}, {ModelId::VerbOnlyTensor, "fasttext", 0.533, 14.56, 73.30},
    {ModelId::Additive, "word2vec", 0.768, 14.32, 82.00},       {ModelId::Additive, "fasttext", 0.783, 14.32, 81.77},
    {ModelId::External, "bert", 0.575, 13.76, 75.93},
};

Verdict pinned_assets(const std::string& dir) {
    namespace fs = std::filesystem;
    if (dir.empty()) return {Status::Skip, "no --pinned-assets directory given"};
    auto need = [&](const char* name) {
        fs::path p = fs::path(dir) / name;
        if (!fs::exists(p)) throw std::runtime_error("missing " + p.string());
        return p.string();
    };
    auto records = load_ellsim(need("ellsim.txt"));
    auto occurrences = load_occurrences(need("occurrences.tsv"));
    std::vector<Triplet> triplets;
    if (fs::exists(fs::path(dir) / "triplets.tsv")) triplets = load_triplets(need("triplets.tsv"));

    EmbeddingOptions opt;
    opt.unknown = UnknownWordPolicy::Zero;
    Diagnostics diag;
    std::map<std::string, EmbeddingStore> stores;
    std::map<std::string, VerbMatrices> verbs;
    for (const char* name : {"word2vec", "fasttext"}) {
        auto& e = stores.emplace(name, load_embeddings(need((std::string(name) + ".txt").c_str()),
                                                       EmbeddingFormat::Word2VecText, opt, &diag))
                      .first->second;
        verbs[name] = verb_matrices(relational_verbs(occurrences, e, {}, &diag));
    }
    EmbeddingStore bert = load_sentence_vectors(need("bert.tsv"));

    std::vector<std::string> failures;
    std::size_t rows = 0;
    for (const auto& row : kReference) {
        EmbeddingSource src{row.source, nullptr, nullptr, nullptr};
        if (row.model == ModelId::External) {
            src.sentences = &bert;
        } else {
            src.embeddings = &stores.at(row.source);
            src.verbs = &verbs.at(row.source);
        }
        auto rep = run_evaluation(records, triplets, {row.model}, {src}, {}, &diag).at(0);
        ++rows;
        std::string label = std::string(model_title(row.model)) + "/" + row.source;
        if (!(std::fabs(rep.spearman_rho - row.rho) <= 0.02))
            failures.push_back(label + " rho " + fmt(rep.spearman_rho, 3) + " vs " + fmt(row.rho, 3));
        if (!(std::fabs(rep.mean_t_score - row.t) <= 0.5))
            failures.push_back(label + " t " + fmt(rep.mean_t_score) + " vs " + fmt(row.t));
        if (!(std::fabs(100.0 * rep.classification_accuracy - row.accuracy) <= 2.0))
            failures.push_back(label + " accuracy " + fmt(100.0 * rep.classification_accuracy) + " vs " +
                               fmt(row.accuracy));
    }
    if (!failures.empty()) {
        std::string d = std::to_string(failures.size()) + " of " + std::to_string(3 * rows) + " values off:";
        for (const auto& f : failures) d += "\n       " + f;
        return fail(d);
    }
    return pass(std::to_string(rows) + " reference rows within tolerance");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string assets;
    std::vector<int> only;
    app.add_option("--pinned-assets", assets, "directory with ellsim.txt, occurrences.tsv, word2vec.txt, fasttext.txt, bert.tsv")
        ->check(CLI::ExistingDirectory);
    app.add_option("--only", only, "run only these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"rule soundness", rule_soundness},
        {"copying identity", copying_identity},
        {"golden derivations", golden_derivations},
        {"Fock functoriality", fock_functoriality},
        {"statistics oracles", statistics_oracles},
        {"pipeline determinism", determinism},
        {"reference scores with pinned assets", [&] { return pinned_assets(assets); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = fail(std::string("exception: ") + e.what());
        }
        const char* tag = v.status == Status::Pass ? "PASS" : v.status == Status::Fail ? "FAIL" : "SKIP";
        std::cout << "[" << tag << "] " << id << ". " << criteria[i].first << ": " << v.detail << std::endl;
        if (v.status == Status::Fail) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
