#include "sllm/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sllm {

namespace {

std::vector<std::string> words_of(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream ss{std::string(text)};
    for (std::string w; ss >> w;) {
        std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return out;
}

bool parse_number(std::string_view s, double& out) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

Band parse_band(std::string_view s) {
    auto w = words_of(s);
    if (w.size() == 1) {
        if (w[0] == "high") return Band::High;
        if (w[0] == "medium") return Band::Medium;
        if (w[0] == "low") return Band::Low;
    }
    return Band::Unknown;
}

bool is_comment(const std::string& line) {
    auto p = line.find_first_not_of(" \t\r");
    return p == std::string::npos || line[p] == '#';
}

ElidedSentence from_words(const std::vector<std::string>& w, std::size_t at) {
    return {w[at], w[at + 1], w[at + 2], w[at + 3]};
}

}  // namespace

std::string ElidedSentence::text() const { return subject + " " + verb + " " + object + " and " + subject_star + " does too"; }

ElidedSentence parse_elided_sentence(std::string_view text) {
    auto w = words_of(text);
    if (w.size() == 4) return from_words(w, 0);
    if (w.size() == 7 && w[3] == "and" && w[5] == "does" && w[6] == "too") return {w[0], w[1], w[2], w[4]};
    throw std::invalid_argument("not of the form 'subject verb object and subject* does too': '" + std::string(text) +
                                "'");
}

std::string_view band_name(Band band) {
    switch (band) {
    case Band::High: return "HIGH";
    case Band::Medium: return "MEDIUM";
    case Band::Low: return "LOW";
    case Band::Unknown: break;
    }
    return "unknown";
}

std::vector<SimilarityRecord> read_ellsim(std::istream& in, const std::string& source) {
    struct Acc {
        SimilarityRecord rec;
        double sum = 0.0;
        std::size_t n = 0;
    };
    std::vector<Acc> acc;
    std::map<std::string, std::size_t> index;
    std::string line;
    std::size_t lineno = 0;
    bool seen_row = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment(line)) continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        SimilarityRecord r;
        std::string score_field;
        std::string band_field;
        try {
            if (!seen_row) {
                auto w = words_of(line);
                double probe = 0;
                if (std::none_of(w.begin(), w.end(), [&](const std::string& x) { return parse_number(x, probe); }))
                    continue;  // header
            }
            auto tabs = split_tabs(line);
            bool sentence_form = tabs.size() >= 3 && tabs.size() <= 5 &&
                                 (tabs[tabs.size() >= 4 ? 1 : 0].find(' ') != std::string::npos ||
                                  tabs[tabs.size() >= 4 ? 2 : 1].find(' ') != std::string::npos);
            if (sentence_form) {
                double probe = 0;
                std::size_t first = 0;
                if (tabs.size() == 5 || (tabs.size() == 4 && !parse_number(tabs[2], probe))) first = 1;
                if (first + 3 > tabs.size()) throw std::invalid_argument("too few columns");
                if (!seen_row && !parse_number(tabs[first + 2], probe)) continue;  // header
                r.first = parse_elided_sentence(tabs[first]);
                r.second = parse_elided_sentence(tabs[first + 1]);
                score_field = tabs[first + 2];
                if (first + 3 < tabs.size()) band_field = tabs[first + 3];
            } else {
                auto w = words_of(line);
                double probe = 0;
                std::size_t first = 0;
                if (w.size() == 9) {
                    first = 0;
                } else if (w.size() == 10) {
                    first = parse_number(w[9], probe) ? 1 : 0;
                } else if (w.size() == 11) {
                    first = 1;
                } else {
                    throw std::invalid_argument("expected 9 to 11 columns, found " + std::to_string(w.size()));
                }
                if (!seen_row && !parse_number(w[first + 8], probe)) continue;  // header
                r.first = from_words(w, first);
                r.second = from_words(w, first + 4);
                score_field = w[first + 8];
                if (first + 9 < w.size()) band_field = w[first + 9];
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(where + e.what());
        }
        if (!parse_number(score_field, r.human_score)) throw std::runtime_error(where + "bad score '" + score_field + "'");
        if (r.human_score < 1.0 || r.human_score > 7.0)
            throw std::runtime_error(where + "score " + score_field + " outside the 1-7 scale");
        r.band = band_field.empty() ? Band::Unknown : parse_band(band_field);
        seen_row = true;

        std::string key = r.first.text() + "\t" + r.second.text();
        auto [it, fresh] = index.try_emplace(key, acc.size());
        if (fresh) acc.push_back({r, 0.0, 0});
        Acc& a = acc[it->second];
        a.sum += r.human_score;
        ++a.n;
        if (a.rec.band == Band::Unknown) a.rec.band = r.band;
    }
    std::vector<SimilarityRecord> out;
    for (auto& a : acc) {
        a.rec.human_score = a.sum / static_cast<double>(a.n);
        out.push_back(std::move(a.rec));
    }
    return out;
}

std::vector<SimilarityRecord> load_ellsim(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset " + path);
    return read_ellsim(in, path);
}

std::vector<Triplet> read_triplets(std::istream& in, const std::string& source) {
    std::vector<Triplet> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment(line)) continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        auto f = split_tabs(line);
        if (f.size() != 5) throw std::runtime_error(where + "expected 5 tab-separated columns");
        Triplet t;
        if (!parse_number(f[3], t.human12) || !parse_number(f[4], t.human13)) {
            if (out.empty()) continue;  // header
            throw std::runtime_error(where + "bad human score");
        }
        try {
            t.s1 = parse_elided_sentence(f[0]);
            t.s2 = parse_elided_sentence(f[1]);
            t.s3 = parse_elided_sentence(f[2]);
        } catch (const std::exception& e) {
            throw std::runtime_error(where + e.what());
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Triplet> load_triplets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open triplet file " + path);
    return read_triplets(in, path);
}

std::vector<Triplet> derive_triplets(const std::vector<SimilarityRecord>& records) {
    std::vector<Triplet> out;
    for (const auto& group : group_records(records, Grouping::FirstSentence))
        for (std::size_t a = 0; a < group.size(); ++a)
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                const auto& p = records[group[a]];
                const auto& q = records[group[b]];
                out.push_back({p.first, p.second, q.second, p.human_score, q.human_score});
            }
    return out;
}

Grouping parse_grouping(std::string_view name) {
    if (name == "sentence1" || name == "first-sentence") return Grouping::FirstSentence;
    if (name == "source-pair") return Grouping::SourcePair;
    throw std::invalid_argument("unknown grouping '" + std::string(name) + "' (sentence1 or source-pair)");
}

std::vector<std::vector<std::size_t>> group_records(const std::vector<SimilarityRecord>& records, Grouping grouping) {
    std::vector<std::vector<std::size_t>> groups;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        std::string key = grouping == Grouping::FirstSentence
                              ? r.first.text()
                              : r.first.verb + " " + r.first.object + "\t" + r.second.verb + " " + r.second.object;
        auto [it, fresh] = index.try_emplace(key, groups.size());
        if (fresh) groups.emplace_back();
        groups[it->second].push_back(i);
    }
    return groups;
}

namespace {

struct ModelInfo {
    ModelId id;
    std::string_view name;
    std::string_view title;
};

constexpr ModelInfo kModels[] = {
    {ModelId::CopySubj, "copy-subj", "Copy Subject"},
    {ModelId::CopyObj, "copy-obj", "Copy Object"},
    {ModelId::FrobAdd, "frob-add", "Frobenius Add."},
    {ModelId::FrobMult, "frob-mult", "Frobenius Mult."},
    {ModelId::VerbOnlyVector, "verb-only-vector", "Verb Only Vector"},
    {ModelId::VerbOnlyTensor, "verb-only-tensor", "Verb Only Tensor"},
    {ModelId::Additive, "additive", "Additive"},
    {ModelId::External, "external", "External"},
};

const ModelInfo& info(ModelId id) {
    for (const auto& m : kModels)
        if (m.id == id) return m;
    throw std::logic_error("unknown model id");
}

}  // namespace

std::string_view model_name(ModelId model) { return info(model).name; }
std::string_view model_title(ModelId model) { return info(model).title; }

ModelId parse_model(std::string_view name) {
    for (const auto& m : kModels)
        if (m.name == name) return m.id;
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::vector<ModelId> all_models() {
    std::vector<ModelId> out;
    for (const auto& m : kModels) out.push_back(m.id);
    return out;
}

VerbMatrices verb_matrices(const std::vector<std::pair<std::string, TensorValue>>& verbs) {
    VerbMatrices out;
    for (const auto& [v, m] : verbs) out.try_emplace(v, m.data());
    return out;
}

namespace {

std::vector<double> matvec(const std::vector<double>& m, const std::vector<double>& x, bool transpose) {
    const std::size_t d = x.size();
    std::vector<double> out(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out[i] += (transpose ? m[j * d + i] : m[i * d + j]) * x[j];
    return out;
}

std::vector<double> hadamard(std::vector<double> a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return a;
}

std::vector<double> plus(std::vector<double> a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

}  // namespace

std::vector<double> compose_sentence(ModelId model, const ElidedSentence& s, const CompositionInputs& inputs,
                                     Diagnostics* diag) {
    if (model == ModelId::External) {
        if (!inputs.sentences) throw std::invalid_argument("the external model needs sentence vectors");
        return inputs.sentences->lookup(s.text());
    }
    if (!inputs.embeddings) throw std::invalid_argument(std::string(model_name(model)) + " needs word embeddings");
    const EmbeddingStore& emb = *inputs.embeddings;
    const std::size_t d = emb.dim();

    auto verb_matrix = [&]() -> std::vector<double> {
        if (inputs.verbs) {
            auto it = inputs.verbs->find(emb.normalize(s.verb));
            if (it != inputs.verbs->end()) {
                if (it->second.size() != d * d)
                    throw std::invalid_argument("verb matrix for '" + s.verb + "' does not match the embedding size");
                return it->second;
            }
        }
        if (emb.options().unknown == UnknownWordPolicy::Error) throw UnknownWord(s.verb + " (no verb matrix)");
        warn(diag, "no verb matrix for '" + s.verb + "', using zeros");
        return std::vector<double>(d * d, 0.0);
    };

    switch (model) {
    case ModelId::VerbOnlyVector:
        return emb.lookup(s.verb);
    case ModelId::VerbOnlyTensor:
        return verb_matrix();
    case ModelId::Additive:
        return plus(plus(plus(emb.lookup(s.subject), emb.lookup(s.verb)), emb.lookup(s.object)),
                    emb.lookup(s.subject_star));
    default:
        break;
    }

    const std::vector<double> verb = verb_matrix();
    const std::vector<double> object = emb.lookup(s.object);
    const std::vector<double> verb_object = matvec(verb, object, false);
    auto copy_obj = [&](const std::vector<double>& subj) { return hadamard(verb_object, subj); };
    auto copy_subj = [&](const std::vector<double>& subj) { return hadamard(matvec(verb, subj, true), object); };
    auto base = [&](const std::vector<double>& subj) -> std::vector<double> {
        switch (model) {
        case ModelId::CopyObj: return copy_obj(subj);
        case ModelId::CopySubj: return copy_subj(subj);
        case ModelId::FrobAdd: return plus(copy_obj(subj), copy_subj(subj));
        case ModelId::FrobMult: return hadamard(copy_obj(subj), copy_subj(subj));
        default: break;
        }
        throw std::logic_error("not a structured model");
    };
    return plus(base(emb.lookup(s.subject)), base(emb.lookup(s.subject_star)));
}

EmbeddingStore read_sentence_vectors(std::istream& in, const std::string& source) {
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::string line;
    std::size_t lineno = 0, dim = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment(line)) continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw std::runtime_error(where + "expected sentence<TAB>values");
        std::vector<double> v;
        std::istringstream ss(line.substr(tab + 1));
        for (std::string w; ss >> w;) {
            double x = 0;
            if (!parse_number(w, x)) throw std::runtime_error(where + "bad number '" + w + "'");
            v.push_back(x);
        }
        if (dim == 0) dim = v.size();
        if (v.empty() || v.size() != dim)
            throw std::runtime_error(where + "row has " + std::to_string(v.size()) + " values, expected " +
                                     std::to_string(dim));
        std::string text;
        try {
            text = parse_elided_sentence(line.substr(0, tab)).text();
        } catch (const std::invalid_argument&) {
            auto w = words_of(line.substr(0, tab));
            for (const auto& x : w) text += (text.empty() ? "" : " ") + x;
        }
        rows.emplace_back(std::move(text), std::move(v));
    }
    if (rows.empty()) throw std::runtime_error(source + ": no sentence vectors");
    EmbeddingStore store(dim);
    for (auto& [t, v] : rows) store.insert(t, std::move(v));
    return store;
}

EmbeddingStore load_sentence_vectors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sentence vectors " + path);
    return read_sentence_vectors(in, path);
}

std::vector<EvaluationReport> run_evaluation(const std::vector<SimilarityRecord>& records,
                                             const std::vector<Triplet>& triplets, const std::vector<ModelId>& models,
                                             const std::vector<EmbeddingSource>& sources,
                                             const EvaluationOptions& options, Diagnostics* diag) {
    if (records.empty()) throw std::invalid_argument("evaluation: empty dataset");
    const std::vector<Triplet> derived = triplets.empty() ? derive_triplets(records) : std::vector<Triplet>{};
    const std::vector<Triplet>& trip = triplets.empty() ? derived : triplets;
    const auto groups = group_records(records, options.grouping);
    std::vector<double> human;
    for (const auto& r : records) human.push_back(r.human_score);

    std::vector<EvaluationReport> out;
    for (ModelId model : models) {
        for (const auto& src : sources) {
            const bool external = model == ModelId::External;
            if ((external && !src.sentences) || (!external && !src.embeddings)) {
                warn(diag, std::string(model_name(model)) + " skipped for source '" + src.name + "'");
                continue;
            }
            CompositionInputs inputs{src.embeddings, src.verbs, src.sentences};
            std::map<std::string, std::vector<double>> cache;
            auto vec = [&](const ElidedSentence& s) -> const std::vector<double>& {
                auto key = s.text();
                auto it = cache.find(key);
                if (it == cache.end()) it = cache.emplace(key, compose_sentence(model, s, inputs, diag)).first;
                return it->second;
            };

            EvaluationReport rep;
            rep.model = model;
            rep.embedding_source = src.name;
            for (const auto& r : records) rep.per_pair_cosines.push_back(cosine(vec(r.first), vec(r.second), diag));

            const std::string label = std::string(model_name(model)) + "/" + src.name + ": ";
            try {
                rep.spearman_rho = spearman_rho(rep.per_pair_cosines, human);
            } catch (const std::domain_error& e) {
                warn(diag, label + e.what());
                rep.spearman_rho = std::nan("");
            }
            try {
                TTestReport t = t_test_report(groups, human, rep.per_pair_cosines, options.ttest, nullptr);
                rep.mean_t_score = t.mean_t;
                rep.t_groups = t.per_group.size();
            } catch (const std::domain_error& e) {
                warn(diag, label + e.what());
                rep.mean_t_score = std::nan("");
            }
            if (trip.empty()) {
                warn(diag, label + "no triplets for the classification test");
                rep.classification_accuracy = std::nan("");
            } else {
                std::vector<TripletScores> scores;
                for (const auto& t : trip)
                    scores.push_back({cosine(vec(t.s1), vec(t.s2), diag), cosine(vec(t.s1), vec(t.s3), diag),
                                      t.human12, t.human13});
                rep.classification_accuracy = classify_triplets(scores);
                rep.triplets = scores.size();
            }
            out.push_back(std::move(rep));
        }
    }
    return out;
}

namespace {

std::string fixed(double x, int digits) {
    if (std::isnan(x)) return "NA";
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << x;
    return ss.str();
}

}  // namespace

void write_report_tsv(std::ostream& out, const std::vector<EvaluationReport>& reports) {
    out << "model\tembeddings\tspearman_rho\tmean_t\taccuracy\tpairs\tt_groups\ttriplets\n";
    for (const auto& r : reports) {
        out << model_name(r.model) << '\t' << r.embedding_source << '\t' << fixed(r.spearman_rho, 6) << '\t'
            << fixed(r.mean_t_score, 6) << '\t' << fixed(r.classification_accuracy, 6) << '\t'
            << r.per_pair_cosines.size() << '\t' << r.t_groups << '\t' << r.triplets << '\n';
    }
}

void write_report_table(std::ostream& out, const std::vector<EvaluationReport>& reports) {
    std::size_t wm = 6, we = 10;
    for (const auto& r : reports) {
        wm = std::max(wm, model_title(r.model).size());
        we = std::max(we, r.embedding_source.size());
    }
    auto rule = std::string(wm + we + 40, '-');
    out << std::left << std::setw(static_cast<int>(wm + 2)) << "Method" << std::setw(static_cast<int>(we + 2))
        << "Embeddings" << std::right << std::setw(12) << "Spearman" << std::setw(12) << "t-score" << std::setw(12)
        << "Accuracy" << '\n'
        << rule << '\n';
    for (const auto& r : reports) {
        std::string acc = std::isnan(r.classification_accuracy) ? "NA" : fixed(100.0 * r.classification_accuracy, 2) + "%";
        out << std::left << std::setw(static_cast<int>(wm + 2)) << model_title(r.model)
            << std::setw(static_cast<int>(we + 2)) << r.embedding_source << std::right << std::setw(12)
            << fixed(r.spearman_rho, 3) << std::setw(12) << fixed(r.mean_t_score, 2) << std::setw(12) << acc << '\n';
    }
}

void write_cosines_tsv(std::ostream& out, const std::vector<SimilarityRecord>& records,
                       const std::vector<EvaluationReport>& reports) {
    out << "pair\tsentence1\tsentence2\thuman";
    for (const auto& r : reports) out << '\t' << model_name(r.model) << '/' << r.embedding_source;
    out << '\n';
    for (std::size_t i = 0; i < records.size(); ++i) {
        out << i + 1 << '\t' << records[i].first.text() << '\t' << records[i].second.text() << '\t'
            << fixed(records[i].human_score, 6);
        for (const auto& r : reports) out << '\t' << fixed(r.per_pair_cosines.at(i), 6);
        out << '\n';
    }
}

}  // namespace sllm
