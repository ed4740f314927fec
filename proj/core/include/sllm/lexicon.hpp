#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "sllm/derivation.hpp"
#include "sllm/diagnostics.hpp"
#include "sllm/embeddings.hpp"
#include "sllm/formula.hpp"
#include "sllm/shape.hpp"
#include "sllm/tensor.hpp"

namespace sllm {

struct SVOOccurrence {
    std::string subject;
    std::string verb;
    std::string object;
    long count = 1;
};

/// `subject<TAB>verb<TAB>object[<TAB>count]`; `#` starts a comment line.
std::vector<SVOOccurrence> read_occurrences(std::istream& in, const std::string& source = "<stream>");
std::vector<SVOOccurrence> load_occurrences(const std::string& path);

struct RelationalOptions {
    bool use_counts = true;
};

/// Σ count_i · s_i ⊗ o_i as a D×D matrix of shape tensor(D, D), subject
/// index first. Occurrences with a word missing from the store are skipped
/// with a warning. Throws when no occurrence is usable.
TensorValue relational_verb(const std::vector<SVOOccurrence>& occurrences, const EmbeddingStore& emb,
                            const RelationalOptions& options = {}, Diagnostics* diag = nullptr);

/// Relational matrices for every verb in the list, in first-seen order.
std::vector<std::pair<std::string, TensorValue>> relational_verbs(const std::vector<SVOOccurrence>& occurrences,
                                                                  const EmbeddingStore& emb,
                                                                  const RelationalOptions& options = {},
                                                                  Diagnostics* diag = nullptr);

/// Order-3 inhabitant of a transitive verb type built from a subject-by-object
/// matrix. Supports (n\s)/n and n\(s/n) with all three atoms of dimension d:
/// the subject coordinate is copied onto the sentence space, so applying the
/// entry to a subject and an object gives (M·object) ⊙ subject.
TensorValue transitive_from_matrix(const Formula& formula, const TensorValue& matrix, const AtomDims& dims, int k0);

struct LexiconEntry {
    std::string word;
    Formula formula;
    TensorValue value;
};

struct LexiconSettings {
    const EmbeddingStore* embeddings = nullptr;  ///< required by embed, tilde and relational
    AtomDims dims{{"n", 2}, {"s", 2}};
    int k0 = 2;
    std::string base_dir = ".";  ///< resolves file: and relational: paths
    RelationalOptions relational;
};

/// Value specs:
///   embed              the word's vector, cut or zero-padded to the entry size
///   tilde              ṽ of the word's vector, for !A entries
///   tilde-file:<path>  ṽ of a tensor file holding an A value, for !A entries
///   relational:<path>  transitive verb from an occurrence file
///   file:<path>        tensor file
///   identity           δ on A*⊗A
///   random:<seed>      standard normal coefficients
LexiconEntry make_entry(const std::string& word, const Formula& formula, std::string_view spec,
                        const LexiconSettings& settings, Diagnostics* diag = nullptr);

/// TSV `word<TAB>formula<TAB>value-spec`; words may contain spaces.
std::vector<LexiconEntry> read_lexicon(std::istream& in, const LexiconSettings& settings, Diagnostics* diag = nullptr,
                                       const std::string& source = "<stream>");
/// base_dir defaults to the lexicon file's directory.
std::vector<LexiconEntry> load_lexicon(const std::string& path, LexiconSettings settings, Diagnostics* diag = nullptr);

/// Greedy longest match of lowercase tokens against lexicon words; the first
/// entry of a word wins. Throws UnknownWord on a token with no entry.
std::vector<const LexiconEntry*> segment_sentence(std::string_view sentence, const std::vector<LexiconEntry>& lexicon);

struct Reading {
    Derivation derivation;
    TensorValue meaning;
};

/// Proves `words ⟶ goal`, compiles each reading (up to `limit`) and applies
/// it to the word values. Empty when the sequent is not derivable.
std::vector<Reading> interpret(const std::vector<const LexiconEntry*>& words, const Formula& goal,
                               const AtomDims& dims, const CalculusConfig& cfg, std::size_t limit = 1);

Sequent sentence_sequent(const std::vector<const LexiconEntry*>& words, const Formula& goal);

}  // namespace sllm
