#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sllm/diagnostics.hpp"

namespace sllm {

enum class EmbeddingFormat { Word2VecText, GloveText };

enum class UnknownWordPolicy { Error, Zero, HashRandom };

EmbeddingFormat parse_embedding_format(std::string_view name);
UnknownWordPolicy parse_unknown_policy(std::string_view name);

struct EmbeddingOptions {
    bool lowercase = true;
    UnknownWordPolicy unknown = UnknownWordPolicy::Error;
    std::uint64_t seed = 20210705;
};

class UnknownWord : public std::runtime_error {
public:
    explicit UnknownWord(const std::string& word)
        : std::runtime_error("unknown word '" + word + "'"), word_(word) {}
    const std::string& word() const noexcept { return word_; }

private:
    std::string word_;
};

/// Word vectors of one fixed dimension, in file order.
class EmbeddingStore {
public:
    explicit EmbeddingStore(std::size_t dim, EmbeddingOptions options = {});

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return words_.size(); }
    const EmbeddingOptions& options() const noexcept { return options_; }
    const std::vector<std::string>& words() const noexcept { return words_; }

    std::string normalize(std::string_view word) const;

    /// False (and no change) if the normalized word is already present.
    bool insert(std::string_view word, std::vector<double> vector);
    bool contains(std::string_view word) const;
    /// Null when absent; ignores the unknown-word policy.
    const std::vector<double>* find(std::string_view word) const;
    /// Applies the unknown-word policy.
    std::vector<double> lookup(std::string_view word) const;

private:
    std::size_t dim_;
    EmbeddingOptions options_;
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::vector<double>> vectors_;
};

/// Deterministic pseudo-random vector in [-1, 1]^dim for a word.
std::vector<double> hash_vector(std::string_view word, std::size_t dim, std::uint64_t seed);

/// `word v1 ... vD` per line. word2vec text may start with a `count D`
/// header. Duplicates keep the first vector and warn.
EmbeddingStore read_embeddings(std::istream& in, EmbeddingFormat format, const EmbeddingOptions& options = {},
                               Diagnostics* diag = nullptr, const std::string& source = "<stream>");
EmbeddingStore load_embeddings(const std::string& path, EmbeddingFormat format, const EmbeddingOptions& options = {},
                               Diagnostics* diag = nullptr);

/// First `dim` coordinates, zero-padded when the vector is shorter.
std::vector<double> fit_length(const std::vector<double>& v, std::size_t dim);

}  // namespace sllm
