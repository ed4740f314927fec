#include "sllm/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sllm {

EmbeddingFormat parse_embedding_format(std::string_view name) {
    if (name == "word2vec" || name == "word2vec-text") return EmbeddingFormat::Word2VecText;
    if (name == "glove" || name == "glove-text") return EmbeddingFormat::GloveText;
    throw std::invalid_argument("unknown embedding format '" + std::string(name) + "'");
}

UnknownWordPolicy parse_unknown_policy(std::string_view name) {
    if (name == "error") return UnknownWordPolicy::Error;
    if (name == "zero") return UnknownWordPolicy::Zero;
    if (name == "hash" || name == "hash-random") return UnknownWordPolicy::HashRandom;
    throw std::invalid_argument("unknown word policy '" + std::string(name) + "'");
}

EmbeddingStore::EmbeddingStore(std::size_t dim, EmbeddingOptions options) : dim_(dim), options_(options) {
    if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
}

std::string EmbeddingStore::normalize(std::string_view word) const {
    std::string out(word);
    if (options_.lowercase)
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool EmbeddingStore::insert(std::string_view word, std::vector<double> vector) {
    if (vector.size() != dim_) {
        throw std::invalid_argument("vector for '" + std::string(word) + "' has length " +
                                    std::to_string(vector.size()) + ", expected " + std::to_string(dim_));
    }
    std::string key = normalize(word);
    auto [it, fresh] = vectors_.try_emplace(key, std::move(vector));
    if (fresh) words_.push_back(key);
    return fresh;
}

bool EmbeddingStore::contains(std::string_view word) const { return vectors_.count(normalize(word)) > 0; }

const std::vector<double>* EmbeddingStore::find(std::string_view word) const {
    auto it = vectors_.find(normalize(word));
    return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<double> EmbeddingStore::lookup(std::string_view word) const {
    if (const auto* v = find(word)) return *v;
    switch (options_.unknown) {
    case UnknownWordPolicy::Zero:
        return std::vector<double>(dim_, 0.0);
    case UnknownWordPolicy::HashRandom:
        return hash_vector(normalize(word), dim_, options_.seed);
    case UnknownWordPolicy::Error:
        break;
    }
    throw UnknownWord(std::string(word));
}

std::vector<double> hash_vector(std::string_view word, std::size_t dim, std::uint64_t seed) {
    // FNV-1a over the word, then splitmix64 per coordinate.
    std::uint64_t h = 1469598103934665603ULL ^ seed;
    for (unsigned char c : word) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::vector<double> out(dim);
    for (double& x : out) {
        h += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = h;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        x = static_cast<double>(z >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }
    return out;
}

namespace {

std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_size(std::string_view s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingStore read_embeddings(std::istream& in, EmbeddingFormat format, const EmbeddingOptions& options,
                               Diagnostics* diag, const std::string& source) {
    std::string line;
    std::size_t lineno = 0, dim = 0, declared = 0;
    bool has_header = false;
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::vector<std::size_t> row_lines;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto f = fields(line);
        if (f.empty()) continue;
        std::size_t a = 0, b = 0;
        if (format == EmbeddingFormat::Word2VecText && rows.empty() && !has_header && f.size() == 2 &&
            parse_size(f[0], a) && parse_size(f[1], b)) {
            has_header = true;
            declared = a;
            dim = b;
            continue;
        }
        std::vector<double> v;
        for (std::size_t k = 1; k < f.size(); ++k) {
            double x = 0;
            if (!parse_double(f[k], x)) {
                throw std::runtime_error(source + ":" + std::to_string(lineno) + ": bad number '" + std::string(f[k]) + "'");
            }
            v.push_back(x);
        }
        if (dim == 0) dim = v.size();
        if (v.size() != dim || dim == 0) {
            throw std::runtime_error(source + ":" + std::to_string(lineno) + ": row has " + std::to_string(v.size()) +
                                     " values, expected " + std::to_string(dim));
        }
        rows.emplace_back(std::string(f[0]), std::move(v));
        row_lines.push_back(lineno);
    }
    if (dim == 0) throw std::runtime_error(source + ": no embedding rows");
    if (has_header && declared != rows.size()) {
        warn(diag, source + ": header declares " + std::to_string(declared) + " words, found " +
                       std::to_string(rows.size()));
    }
    EmbeddingStore store(dim, options);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!store.insert(rows[i].first, std::move(rows[i].second))) {
            warn(diag, source + ":" + std::to_string(row_lines[i]) + ": duplicate word '" + rows[i].first +
                           "', keeping the first vector");
        }
    }
    return store;
}

EmbeddingStore load_embeddings(const std::string& path, EmbeddingFormat format, const EmbeddingOptions& options,
                               Diagnostics* diag) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings file " + path);
    return read_embeddings(in, format, options, diag, path);
}

std::vector<double> fit_length(const std::vector<double>& v, std::size_t dim) {
    std::vector<double> out(dim, 0.0);
    std::copy_n(v.begin(), std::min(dim, v.size()), out.begin());
    return out;
}

}  // namespace sllm
