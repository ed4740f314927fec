#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sllm/diagnostics.hpp"
#include "sllm/embeddings.hpp"
#include "sllm/statistics.hpp"
#include "sllm/tensor.hpp"

namespace sllm {

/// "Subject Verb Object and Subject* does too".
struct ElidedSentence {
    std::string subject;
    std::string verb;
    std::string object;
    std::string subject_star;

    std::string text() const;
    friend bool operator==(const ElidedSentence&, const ElidedSentence&) = default;
};

/// Accepts "s v o and s* does too" or the four words "s v o s*".
ElidedSentence parse_elided_sentence(std::string_view text);

enum class Band { High, Medium, Low, Unknown };
std::string_view band_name(Band band);

struct SimilarityRecord {
    ElidedSentence first;
    ElidedSentence second;
    double human_score = 0.0;
    Band band = Band::Unknown;
};

/// Whitespace-separated rows, one of
///   s1 v1 o1 s1* s2 v2 o2 s2* score [band]
///   participant s1 v1 o1 s1* s2 v2 o2 s2* score [band]
/// or tab-separated `sentence1<TAB>sentence2<TAB>score[<TAB>band]`, optionally
/// with a leading participant column. A header line naming the columns is
/// skipped. Rows of the same pair are averaged, in first-seen order.
std::vector<SimilarityRecord> read_ellsim(std::istream& in, const std::string& source = "<stream>");
std::vector<SimilarityRecord> load_ellsim(const std::string& path);

struct Triplet {
    ElidedSentence s1;
    ElidedSentence s2;
    ElidedSentence s3;
    double human12 = 0.0;
    double human13 = 0.0;
};

/// `sentence1<TAB>sentence2<TAB>sentence3<TAB>human12<TAB>human13`.
std::vector<Triplet> read_triplets(std::istream& in, const std::string& source = "<stream>");
std::vector<Triplet> load_triplets(const std::string& path);

/// Every two records sharing a first sentence form a triplet, in input order.
std::vector<Triplet> derive_triplets(const std::vector<SimilarityRecord>& records);

enum class Grouping { FirstSentence, SourcePair };
Grouping parse_grouping(std::string_view name);

/// Record indices per group, groups in first-seen order. SourcePair groups by
/// the two verb-object phrases.
std::vector<std::vector<std::size_t>> group_records(const std::vector<SimilarityRecord>& records, Grouping grouping);

enum class ModelId { CopySubj, CopyObj, FrobAdd, FrobMult, VerbOnlyVector, VerbOnlyTensor, Additive, External };

std::string_view model_name(ModelId model);     ///< command-line name, e.g. "frob-add"
std::string_view model_title(ModelId model);    ///< table name, e.g. "Frobenius Add."
ModelId parse_model(std::string_view name);
std::vector<ModelId> all_models();

/// Row-major D×D relational matrices, subject index first.
using VerbMatrices = std::unordered_map<std::string, std::vector<double>>;

VerbMatrices verb_matrices(const std::vector<std::pair<std::string, TensorValue>>& verbs);

struct CompositionInputs {
    const EmbeddingStore* embeddings = nullptr;
    const VerbMatrices* verbs = nullptr;
    /// Keyed by ElidedSentence::text(); required by External.
    const EmbeddingStore* sentences = nullptr;
};

/// The sentence vector of one model. The structured models resolve the
/// ellipsis by applying the composed verb phrase to both subjects and adding
/// the results; CopySubj contracts the verb matrix with the subject on its
/// subject index.
std::vector<double> compose_sentence(ModelId model, const ElidedSentence& sentence, const CompositionInputs& inputs,
                                     Diagnostics* diag = nullptr);

/// TSV `sentence<TAB>v1 v2 ...`, as produced by an external encoder.
EmbeddingStore read_sentence_vectors(std::istream& in, const std::string& source = "<stream>");
EmbeddingStore load_sentence_vectors(const std::string& path);

struct EmbeddingSource {
    std::string name;
    const EmbeddingStore* embeddings = nullptr;
    const VerbMatrices* verbs = nullptr;
    const EmbeddingStore* sentences = nullptr;
};

struct EvaluationOptions {
    Grouping grouping = Grouping::FirstSentence;
    TTestOptions ttest;
};

struct EvaluationReport {
    ModelId model = ModelId::Additive;
    std::string embedding_source;
    double spearman_rho = 0.0;
    double mean_t_score = 0.0;
    double classification_accuracy = 0.0;
    std::size_t t_groups = 0;
    std::size_t triplets = 0;
    std::vector<double> per_pair_cosines;
};

/// One report per (model, source) in the given order. A model that a source
/// cannot serve (External without sentence vectors) is skipped with a warning.
/// With no triplets, they are derived from the records.
std::vector<EvaluationReport> run_evaluation(const std::vector<SimilarityRecord>& records,
                                             const std::vector<Triplet>& triplets, const std::vector<ModelId>& models,
                                             const std::vector<EmbeddingSource>& sources,
                                             const EvaluationOptions& options = {}, Diagnostics* diag = nullptr);

void write_report_tsv(std::ostream& out, const std::vector<EvaluationReport>& reports);
void write_report_table(std::ostream& out, const std::vector<EvaluationReport>& reports);
void write_cosines_tsv(std::ostream& out, const std::vector<SimilarityRecord>& records,
                       const std::vector<EvaluationReport>& reports);

}  // namespace sllm
