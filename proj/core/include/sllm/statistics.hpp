#pragma once

#include <cstddef>
#include <vector>

#include "sllm/diagnostics.hpp"

namespace sllm {

/// u·v / (|u||v|); 0 with a warning when either vector is zero.
double cosine(const std::vector<double>& u, const std::vector<double>& v, Diagnostics* diag = nullptr);

/// 1-based ranks, ties share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& xs);

/// Pearson correlation of average ranks. Throws std::domain_error when either
/// input is constant and std::invalid_argument on bad lengths.
double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

struct TTestOptions {
    bool paired = false;
    /// Map human scores from [1,7] onto [0,1] before comparing them with cosines.
    bool normalize_human = true;
};

/// |t| of Student's pooled two-sample test, or of the paired test. Equal
/// samples with zero spread give 0; any other zero-spread case throws
/// std::domain_error.
double t_statistic(const std::vector<double>& a, const std::vector<double>& b, bool paired);

struct TTestReport {
    double mean_t = 0.0;
    std::vector<double> per_group;
    std::size_t skipped = 0;
};

/// One t statistic per group between human scores and cosines, averaged.
/// Groups with fewer than two members or an undefined statistic are skipped
/// with a warning. Throws std::domain_error when no group is usable.
TTestReport t_test_report(const std::vector<std::vector<std::size_t>>& groups, const std::vector<double>& human,
                          const std::vector<double>& cosines, const TTestOptions& options = {},
                          Diagnostics* diag = nullptr);

struct TripletScores {
    double cos12 = 0.0;
    double cos13 = 0.0;
    double human12 = 0.0;
    double human13 = 0.0;
};

/// Fraction of triplets where the model and the annotators order the two
/// pairs the same way. A tie on one side only counts as wrong.
double classify_triplets(const std::vector<TripletScores>& triplets);

}  // namespace sllm
