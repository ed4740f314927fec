#include "sllm/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "sllm/linear_map.hpp"
#include "sllm/prover.hpp"

namespace sllm {

namespace {

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

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool skippable(const std::string& line) {
    std::string t = trim(line);
    return t.empty() || t[0] == '#';
}

std::string resolve(const std::string& base, const std::string& path) {
    std::filesystem::path p(path);
    return p.is_absolute() ? path : (std::filesystem::path(base) / p).string();
}

}  // namespace

std::vector<SVOOccurrence> read_occurrences(std::istream& in, const std::string& source) {
    std::vector<SVOOccurrence> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        auto f = split_tabs(line);
        auto where = source + ":" + std::to_string(lineno) + ": ";
        if (f.size() != 3 && f.size() != 4) throw std::runtime_error(where + "expected 3 or 4 tab-separated fields");
        SVOOccurrence o{trim(f[0]), trim(f[1]), trim(f[2]), 1};
        if (o.subject.empty() || o.verb.empty() || o.object.empty()) throw std::runtime_error(where + "empty field");
        if (f.size() == 4) {
            std::string c = trim(f[3]);
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), o.count);
            if (ec != std::errc() || ptr != c.data() + c.size() || o.count < 1)
                throw std::runtime_error(where + "count must be a positive integer");
        }
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<SVOOccurrence> load_occurrences(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open occurrence file " + path);
    return read_occurrences(in, path);
}

TensorValue relational_verb(const std::vector<SVOOccurrence>& occurrences, const EmbeddingStore& emb,
                            const RelationalOptions& options, Diagnostics* diag) {
    const std::size_t d = emb.dim();
    std::vector<double> m(d * d, 0.0);
    std::size_t used = 0;
    for (const auto& o : occurrences) {
        const auto* s = emb.find(o.subject);
        const auto* x = emb.find(o.object);
        if (!s || !x) {
            warn(diag, "skipping " + o.subject + " " + o.verb + " " + o.object + ": '" + (s ? o.object : o.subject) +
                           "' has no embedding");
            continue;
        }
        double w = options.use_counts ? static_cast<double>(o.count) : 1.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m[i * d + j] += w * (*s)[i] * (*x)[j];
        ++used;
    }
    if (used == 0) throw std::runtime_error("relational verb: no usable occurrences");
    auto base = SpaceShape::base(d);
    return TensorValue(SpaceShape::tensor(base, base), std::move(m));
}

std::vector<std::pair<std::string, TensorValue>> relational_verbs(const std::vector<SVOOccurrence>& occurrences,
                                                                  const EmbeddingStore& emb,
                                                                  const RelationalOptions& options,
                                                                  Diagnostics* diag) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<SVOOccurrence>> by_verb;
    for (const auto& o : occurrences) {
        std::string v = emb.normalize(o.verb);
        auto [it, fresh] = by_verb.try_emplace(v);
        if (fresh) order.push_back(v);
        it->second.push_back(o);
    }
    std::vector<std::pair<std::string, TensorValue>> out;
    for (const auto& v : order) {
        try {
            out.emplace_back(v, relational_verb(by_verb[v], emb, options, diag));
        } catch (const std::runtime_error&) {
            warn(diag, "verb '" + v + "' has no usable occurrences");
        }
    }
    return out;
}

TensorValue transitive_from_matrix(const Formula& formula, const TensorValue& matrix, const AtomDims& dims, int k0) {
    auto fail = [&] {
        return std::invalid_argument("relational values need a transitive verb type (n\\s)/n or n\\(s/n), got " +
                                     format_formula(formula));
    };
    bool object_outer;
    if (formula.connective() == Connective::RightDiv && formula.left().connective() == Connective::LeftDiv) {
        object_outer = true;
    } else if (formula.connective() == Connective::LeftDiv && formula.right().connective() == Connective::RightDiv) {
        object_outer = false;
    } else {
        throw fail();
    }
    SpaceShape shape = shape_of(formula, dims, k0);
    SpaceShape outer = shape.left().inner();
    SpaceShape inner = shape.right().left().inner();
    SpaceShape sentence = shape.right().right();
    const std::size_t d = outer.total_dim();
    if (inner.total_dim() != d || sentence.total_dim() != d) {
        throw std::invalid_argument("relational values need equal subject, object and sentence dimensions, got " +
                                    format_shape(shape));
    }
    const SpaceShape& ms = matrix.shape();
    if (ms.kind() != ShapeKind::Tensor || ms.left().total_dim() != ms.right().total_dim()) {
        throw std::invalid_argument("relational matrix must be square, got " + format_shape(ms));
    }
    const std::size_t big = ms.left().total_dim();
    auto m = [&](std::size_t i, std::size_t j) { return i < big && j < big ? matrix[i * big + j] : 0.0; };

    std::vector<double> data(d * d * d, 0.0);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            std::size_t subj = object_outer ? b : a, obj = object_outer ? a : b;
            data[(a * d + b) * d + subj] = m(subj, obj);
        }
    return TensorValue(shape, std::move(data));
}

LexiconEntry make_entry(const std::string& word, const Formula& formula, std::string_view spec_view,
                        const LexiconSettings& settings, Diagnostics* diag) {
    const std::string spec = trim(spec_view);
    const SpaceShape shape = shape_of(formula, settings.dims, settings.k0);
    auto embedding = [&](std::size_t n) {
        if (!settings.embeddings) throw std::invalid_argument("value spec '" + spec + "' needs an embedding store");
        return fit_length(settings.embeddings->lookup(word), n);
    };
    auto bang_inner = [&]() -> SpaceShape {
        if (formula.connective() != Connective::Bang)
            throw std::invalid_argument("'" + spec + "' needs a !-type, got " + format_formula(formula));
        SpaceShape inner = shape.inner();
        if (inner.kind() == ShapeKind::Fock)
            throw std::invalid_argument("'" + spec + "' cannot fill a nested ! type");
        return inner;
    };
    auto checked = [&](TensorValue v) {
        if (v.shape() != shape) {
            throw std::invalid_argument("'" + word + "': value has shape " + format_shape(v.shape()) + " but " +
                                        format_formula(formula) + " needs " + format_shape(shape));
        }
        return LexiconEntry{word, formula, std::move(v)};
    };
    auto after = [&](std::string_view prefix) -> std::optional<std::string> {
        if (spec.rfind(prefix, 0) != 0) return std::nullopt;
        return spec.substr(prefix.size());
    };

    if (spec == "embed") return checked(TensorValue(shape, embedding(shape.total_dim())));
    if (spec == "tilde") {
        SpaceShape inner = bang_inner();
        return checked(fock_embed_tilde(TensorValue(inner, embedding(inner.total_dim())), settings.k0));
    }
    if (spec == "identity") {
        if (shape.kind() != ShapeKind::Tensor || shape.left().kind() != ShapeKind::Dual ||
            shape.left().inner() != shape.right()) {
            throw std::invalid_argument("identity needs a type of shape A*⊗A, got " + format_shape(shape));
        }
        const std::size_t d = shape.right().total_dim();
        std::vector<double> data(d * d, 0.0);
        for (std::size_t i = 0; i < d; ++i) data[i * d + i] = 1.0;
        return checked(TensorValue(shape, std::move(data)));
    }
    if (auto path = after("tilde-file:")) {
        SpaceShape inner = bang_inner();
        TensorValue v = load_tensor_file(resolve(settings.base_dir, *path));
        if (v.shape() != inner) {
            throw std::invalid_argument("'" + word + "': " + *path + " has shape " + format_shape(v.shape()) +
                                        ", tilde needs " + format_shape(inner));
        }
        return checked(fock_embed_tilde(v, settings.k0));
    }
    if (auto path = after("file:")) return checked(load_tensor_file(resolve(settings.base_dir, *path)));
    if (auto path = after("relational:")) {
        if (!settings.embeddings) throw std::invalid_argument("relational values need an embedding store");
        auto occ = load_occurrences(resolve(settings.base_dir, *path));
        TensorValue m = relational_verb(occ, *settings.embeddings, settings.relational, diag);
        return checked(transitive_from_matrix(formula, m, settings.dims, settings.k0));
    }
    if (auto seed = after("random:")) {
        unsigned long long s = 0;
        auto [ptr, ec] = std::from_chars(seed->data(), seed->data() + seed->size(), s);
        if (ec != std::errc() || ptr != seed->data() + seed->size())
            throw std::invalid_argument("random: needs an integer seed, got '" + *seed + "'");
        std::mt19937_64 rng(s);
        std::normal_distribution<double> normal;
        std::vector<double> data(shape.total_dim());
        for (double& x : data) x = normal(rng);
        return checked(TensorValue(shape, std::move(data)));
    }
    throw std::invalid_argument("unknown value spec '" + spec + "'");
}

std::vector<LexiconEntry> read_lexicon(std::istream& in, const LexiconSettings& settings, Diagnostics* diag,
                                       const std::string& source) {
    std::vector<LexiconEntry> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        auto f = split_tabs(line);
        auto where = source + ":" + std::to_string(lineno) + ": ";
        if (f.size() != 3) throw std::runtime_error(where + "expected word, formula and value spec separated by tabs");
        try {
            std::set<std::string> alphabet;
            for (const auto& [atom, dim] : settings.dims) alphabet.insert(atom);
            Formula formula = parse_formula(trim(f[1]), &alphabet);
            out.push_back(make_entry(lower(trim(f[0])), formula, f[2], settings, diag));
        } catch (const std::exception& e) {
            throw std::runtime_error(where + e.what());
        }
    }
    return out;
}

std::vector<LexiconEntry> load_lexicon(const std::string& path, LexiconSettings settings, Diagnostics* diag) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon " + path);
    if (settings.base_dir == ".") settings.base_dir = std::filesystem::path(path).parent_path().string();
    if (settings.base_dir.empty()) settings.base_dir = ".";
    return read_lexicon(in, settings, diag, path);
}

std::vector<const LexiconEntry*> segment_sentence(std::string_view sentence, const std::vector<LexiconEntry>& lexicon) {
    std::vector<std::string> tokens;
    std::istringstream ss{std::string(sentence)};
    for (std::string t; ss >> t;) {
        while (!t.empty() && (t.back() == '.' || t.back() == ',')) t.pop_back();
        if (!t.empty()) tokens.push_back(lower(t));
    }
    std::unordered_map<std::string, const LexiconEntry*> first;
    std::size_t longest = 1;
    for (const auto& e : lexicon) {
        first.try_emplace(e.word, &e);
        longest = std::max(longest, static_cast<std::size_t>(std::count(e.word.begin(), e.word.end(), ' ') + 1));
    }
    std::vector<const LexiconEntry*> out;
    for (std::size_t i = 0; i < tokens.size();) {
        bool found = false;
        for (std::size_t n = std::min(longest, tokens.size() - i); n >= 1 && !found; --n) {
            std::string phrase = tokens[i];
            for (std::size_t k = 1; k < n; ++k) phrase += " " + tokens[i + k];
            if (auto it = first.find(phrase); it != first.end()) {
                out.push_back(it->second);
                i += n;
                found = true;
            }
        }
        if (!found) throw UnknownWord(tokens[i]);
    }
    return out;
}

Sequent sentence_sequent(const std::vector<const LexiconEntry*>& words, const Formula& goal) {
    Sequent s{{}, goal};
    for (const auto* w : words) s.antecedent.push_back(w->formula);
    return s;
}

std::vector<Reading> interpret(const std::vector<const LexiconEntry*>& words, const Formula& goal,
                               const AtomDims& dims, const CalculusConfig& cfg, std::size_t limit) {
    Sequent seq = sentence_sequent(words, goal);
    std::vector<Derivation> derivations;
    if (limit <= 1) {
        if (auto d = prove(seq, cfg)) derivations.push_back(std::move(*d));
    } else {
        derivations = enumerate_proofs(seq, cfg, limit);
    }
    std::vector<TensorValue> values;
    for (const auto* w : words) values.push_back(w->value);
    std::vector<Reading> out;
    for (auto& d : derivations) {
        LinearMap m = compile_derivation(d, dims, cfg);
        TensorValue meaning = apply_product(m, values);
        out.push_back({std::move(d), std::move(meaning)});
    }
    return out;
}

}  // namespace sllm
