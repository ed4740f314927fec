#include "sllm/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sllm {

double cosine(const std::vector<double>& u, const std::vector<double>& v, Diagnostics* diag) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("cosine of vectors of lengths " + std::to_string(u.size()) + " and " +
                                    std::to_string(v.size()));
    }
    double dot = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        warn(diag, "cosine with a zero vector, using 0");
        return 0.0;
    }
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("spearman: inputs differ in length");
    if (xs.size() < 2) throw std::invalid_argument("spearman: need at least two observations");
    std::vector<double> rx = average_ranks(xs), ry = average_ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw std::domain_error("spearman: undefined for constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double sample_variance(const std::vector<double>& v, double m) {
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

double t_statistic(const std::vector<double>& a, const std::vector<double>& b, bool paired) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t-test: each sample needs two observations");
    double num, se;
    if (paired) {
        if (a.size() != b.size()) throw std::invalid_argument("paired t-test: samples differ in length");
        std::vector<double> d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
        num = mean(d);
        se = std::sqrt(sample_variance(d, num) / static_cast<double>(d.size()));
    } else {
        double ma = mean(a), mb = mean(b);
        double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
        double pooled = ((na - 1) * sample_variance(a, ma) + (nb - 1) * sample_variance(b, mb)) / (na + nb - 2);
        num = ma - mb;
        se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    }
    if (se == 0.0) {
        if (num == 0.0) return 0.0;
        throw std::domain_error("t-test: zero variance with different means");
    }
    return std::fabs(num / se);
}

TTestReport t_test_report(const std::vector<std::vector<std::size_t>>& groups, const std::vector<double>& human,
                          const std::vector<double>& cosines, const TTestOptions& options, Diagnostics* diag) {
    if (human.size() != cosines.size()) throw std::invalid_argument("t-test: score lists differ in length");
    TTestReport report;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& members = groups[g];
        if (members.size() < 2) {
            warn(diag, "t-test: group " + std::to_string(g) + " has fewer than two pairs, skipped");
            ++report.skipped;
            continue;
        }
        std::vector<double> h, c;
        for (std::size_t i : members) {
            if (i >= human.size()) throw std::out_of_range("t-test: group member out of range");
            h.push_back(options.normalize_human ? (human[i] - 1.0) / 6.0 : human[i]);
            c.push_back(cosines[i]);
        }
        try {
            report.per_group.push_back(t_statistic(h, c, options.paired));
        } catch (const std::domain_error& e) {
            warn(diag, "t-test: group " + std::to_string(g) + " skipped: " + e.what());
            ++report.skipped;
        }
    }
    if (report.per_group.empty()) throw std::domain_error("t-test: no usable group");
    report.mean_t = mean(report.per_group);
    return report;
}

double classify_triplets(const std::vector<TripletScores>& triplets) {
    if (triplets.empty()) throw std::invalid_argument("classification: no triplets");
    auto sign = [](double x) { return (x > 0) - (x < 0); };
    std::size_t correct = 0;
    for (const auto& t : triplets)
        if (sign(t.cos12 - t.cos13) == sign(t.human12 - t.human13)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(triplets.size());
}

}  // namespace sllm
