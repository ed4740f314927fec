#include "brute_prover.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <unordered_map>
#include <vector>

using sllm::Connective;
using sllm::Formula;
using sllm::Sequent;

namespace oracle {
namespace {

struct Alt {
    bool counts;
    std::vector<int> premises;
};

using Ctx = std::vector<Formula>;

Ctx cat(std::initializer_list<Ctx> parts) {
    Ctx out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

Ctx sub(const Ctx& c, std::size_t b, std::size_t e) { return Ctx(c.begin() + b, c.begin() + e); }

class Graph {
public:
    Graph(int k0, std::size_t cap) : k0_(k0), cap_(cap) {}

    int intern(const Sequent& s) {
        std::string key = sllm::format_sequent(s, sllm::Notation::Ascii);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(nodes_.size());
        index_.emplace(std::move(key), id);
        nodes_.push_back(s);
        alts_.emplace_back();
        todo_.push_back(id);
        return id;
    }

    bool expand_all() {
        while (!todo_.empty()) {
            if (nodes_.size() > cap_) return false;
            int id = todo_.front();
            todo_.pop_front();
            expand(id);
        }
        return true;
    }

    std::vector<int> solve() const {
        std::vector<int> h(nodes_.size(), INT_MAX);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                for (const auto& alt : alts_[i]) {
                    int m = 0;
                    bool ok = true;
                    for (int p : alt.premises) {
                        if (h[p] == INT_MAX) {
                            ok = false;
                            break;
                        }
                        m = std::max(m, h[p]);
                    }
                    if (!ok) continue;
                    int v = m + (alt.counts ? 1 : 0);
                    if (v < h[i]) {
                        h[i] = v;
                        changed = true;
                    }
                }
            }
        }
        return h;
    }

    std::size_t size() const { return nodes_.size(); }

private:
    void add(int id, bool counts, std::initializer_list<Sequent> premises) {
        Alt alt{counts, {}};
        for (const auto& p : premises) alt.premises.push_back(intern(p));
        alts_[id].push_back(std::move(alt));
    }

    void expand(int id) {
        const Sequent s = nodes_[id];
        const Ctx& g = s.antecedent;
        const Formula& c = s.succedent;
        const std::size_t n = g.size();

        if (n == 1 && g[0] == c) add(id, true, {});

        switch (c.connective()) {
        case Connective::LeftDiv:
            add(id, true, {Sequent{cat({{c.left()}, g}), c.right()}});
            break;
        case Connective::RightDiv:
            add(id, true, {Sequent{cat({g, {c.right()}}), c.left()}});
            break;
        case Connective::Product:
            for (std::size_t k = 0; k <= n; ++k)
                add(id, true, {Sequent{sub(g, 0, k), c.left()}, Sequent{sub(g, k, n), c.right()}});
            break;
        case Connective::Bang:
            if (n == 1 && g[0].connective() == Connective::Bang)
                add(id, true, {Sequent{{g[0].inner()}, c.inner()}});
            break;
        case Connective::Nabla:
            if (n == 1 && g[0].connective() == Connective::Nabla)
                add(id, true, {Sequent{{g[0].inner()}, c.inner()}});
            break;
        default:
            break;
        }

        for (std::size_t i = 0; i < n; ++i) {
            const Formula& f = g[i];
            switch (f.connective()) {
            case Connective::LeftDiv:  // Σ1, Γ, A\B, Σ2
                for (std::size_t j = 0; j <= i; ++j)
                    add(id, true,
                        {Sequent{sub(g, j, i), f.left()}, Sequent{cat({sub(g, 0, j), {f.right()}, sub(g, i + 1, n)}), c}});
                break;
            case Connective::RightDiv:  // Σ1, B/A, Γ, Σ2
                for (std::size_t e = i + 1; e <= n; ++e)
                    add(id, true,
                        {Sequent{sub(g, i + 1, e), f.right()}, Sequent{cat({sub(g, 0, i), {f.left()}, sub(g, e, n)}), c}});
                break;
            case Connective::Product:
                add(id, true, {Sequent{cat({sub(g, 0, i), {f.left(), f.right()}, sub(g, i + 1, n)}), c}});
                break;
            case Connective::Bang:
                for (int m = 1; m <= k0_; ++m)
                    add(id, true,
                        {Sequent{cat({sub(g, 0, i), Ctx(static_cast<std::size_t>(m), f.inner()), sub(g, i + 1, n)}), c}});
                break;
            case Connective::Nabla:
                add(id, true, {Sequent{cat({sub(g, 0, i), {f.inner()}, sub(g, i + 1, n)}), c}});
                for (std::size_t t = 0; t < n; ++t) {
                    if (t == i) continue;
                    Ctx moved = g;
                    moved.erase(moved.begin() + static_cast<std::ptrdiff_t>(i));
                    moved.insert(moved.begin() + static_cast<std::ptrdiff_t>(t), f);
                    add(id, false, {Sequent{moved, c}});
                }
                break;
            default:
                break;
            }
        }
    }

    int k0_;
    std::size_t cap_;
    std::unordered_map<std::string, int> index_;
    std::vector<Sequent> nodes_;
    std::vector<std::vector<Alt>> alts_;
    std::deque<int> todo_;
};

}  // namespace

BruteResult brute_prove(const Sequent& seq, int k0, std::size_t max_states) {
    Graph graph(k0, max_states);
    int root = graph.intern(seq);
    BruteResult r;
    r.complete = graph.expand_all();
    r.states = graph.size();
    if (!r.complete) return r;
    auto h = graph.solve();
    r.provable = h[root] != INT_MAX;
    r.min_height = r.provable ? h[root] : 0;
    return r;
}

}  // namespace oracle
