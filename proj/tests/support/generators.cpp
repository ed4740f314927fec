#include "generators.hpp"

#include <optional>

using sllm::Formula;
using sllm::Sequent;

namespace oracle {
namespace {

Formula atom(Rng& rng) { return Formula::atom(std::uniform_int_distribution<int>(0, 1)(rng) ? "s" : "n"); }

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

using Ctx = std::vector<Formula>;

Ctx splice(const Ctx& base, std::size_t at, std::size_t erase, const Ctx& insert) {
    Ctx out(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(at));
    out.insert(out.end(), insert.begin(), insert.end());
    out.insert(out.end(), base.begin() + static_cast<std::ptrdiff_t>(at + erase), base.end());
    return out;
}

std::optional<Sequent> step(Rng& rng, int budget, std::size_t max_formulas, int k0);

Sequent gen(Rng& rng, int budget, std::size_t max_formulas, int k0) {
    for (int attempt = 0; attempt < 20 && budget > 0; ++attempt) {
        auto s = step(rng, budget, max_formulas, k0);
        if (s && s->antecedent.size() <= max_formulas) return *s;
    }
    Formula p = atom(rng);
    return {{p}, p};
}

std::optional<Sequent> step(Rng& rng, int budget, std::size_t max_formulas, int k0) {
    const int half = budget / 2;
    switch (pick(rng, 11)) {
    case 0: {  // \_L
        Sequent a = gen(rng, half, max_formulas, k0), b = gen(rng, half, max_formulas, k0);
        if (b.antecedent.empty()) return std::nullopt;
        std::size_t i = pick(rng, b.antecedent.size());
        Ctx mid = a.antecedent;
        mid.push_back(Formula::left_div(a.succedent, b.antecedent[i]));
        return Sequent{splice(b.antecedent, i, 1, mid), b.succedent};
    }
    case 1: {  // /_L
        Sequent a = gen(rng, half, max_formulas, k0), b = gen(rng, half, max_formulas, k0);
        if (b.antecedent.empty()) return std::nullopt;
        std::size_t i = pick(rng, b.antecedent.size());
        Ctx mid{Formula::right_div(b.antecedent[i], a.succedent)};
        mid.insert(mid.end(), a.antecedent.begin(), a.antecedent.end());
        return Sequent{splice(b.antecedent, i, 1, mid), b.succedent};
    }
    case 2: {  // \_R
        Sequent p = gen(rng, budget - 1, max_formulas + 1, k0);
        if (p.antecedent.empty()) return std::nullopt;
        Formula a = p.antecedent.front();
        return Sequent{Ctx(p.antecedent.begin() + 1, p.antecedent.end()), Formula::left_div(a, p.succedent)};
    }
    case 3: {  // /_R
        Sequent p = gen(rng, budget - 1, max_formulas + 1, k0);
        if (p.antecedent.empty()) return std::nullopt;
        Formula a = p.antecedent.back();
        return Sequent{Ctx(p.antecedent.begin(), p.antecedent.end() - 1), Formula::right_div(p.succedent, a)};
    }
    case 4: {  // ·_L
        Sequent p = gen(rng, budget - 1, max_formulas + 1, k0);
        if (p.antecedent.size() < 2) return std::nullopt;
        std::size_t i = pick(rng, p.antecedent.size() - 1);
        return Sequent{splice(p.antecedent, i, 2, {Formula::product(p.antecedent[i], p.antecedent[i + 1])}),
                       p.succedent};
    }
    case 5: {  // ·_R
        Sequent a = gen(rng, half, max_formulas, k0), b = gen(rng, half, max_formulas, k0);
        Ctx g = a.antecedent;
        g.insert(g.end(), b.antecedent.begin(), b.antecedent.end());
        return Sequent{g, Formula::product(a.succedent, b.succedent)};
    }
    case 6: {  // !_L
        Sequent p = gen(rng, budget - 1, max_formulas + static_cast<std::size_t>(k0), k0);
        if (p.antecedent.empty()) return std::nullopt;
        std::size_t i = pick(rng, p.antecedent.size());
        std::size_t n = 1;
        while (n < static_cast<std::size_t>(k0) && i + n < p.antecedent.size() &&
               p.antecedent[i + n] == p.antecedent[i] && pick(rng, 3) != 0)
            ++n;
        return Sequent{splice(p.antecedent, i, n, {Formula::bang(p.antecedent[i])}), p.succedent};
    }
    case 7: {  // !_R
        Sequent p = gen(rng, budget - 1, max_formulas, k0);
        if (p.antecedent.size() != 1) return std::nullopt;
        return Sequent{{Formula::bang(p.antecedent[0])}, Formula::bang(p.succedent)};
    }
    case 8: {  // ∇_L
        Sequent p = gen(rng, budget - 1, max_formulas, k0);
        if (p.antecedent.empty()) return std::nullopt;
        std::size_t i = pick(rng, p.antecedent.size());
        return Sequent{splice(p.antecedent, i, 1, {Formula::nabla(p.antecedent[i])}), p.succedent};
    }
    case 9: {  // ∇_R
        Sequent p = gen(rng, budget - 1, max_formulas, k0);
        if (p.antecedent.size() != 1) return std::nullopt;
        return Sequent{{Formula::nabla(p.antecedent[0])}, Formula::nabla(p.succedent)};
    }
    default: {  // perm, perm'
        Sequent p = gen(rng, budget - 1, max_formulas, k0);
        std::vector<std::size_t> nablas;
        for (std::size_t i = 0; i < p.antecedent.size(); ++i)
            if (p.antecedent[i].connective() == sllm::Connective::Nabla) nablas.push_back(i);
        if (nablas.empty() || p.antecedent.size() < 2) return std::nullopt;
        std::size_t i = nablas[pick(rng, nablas.size())];
        Formula f = p.antecedent[i];
        Ctx g = splice(p.antecedent, i, 1, {});
        std::size_t t = pick(rng, g.size() + 1);
        g.insert(g.begin() + static_cast<std::ptrdiff_t>(t), f);
        return Sequent{g, p.succedent};
    }
    }
}

}  // namespace

Formula random_formula(Rng& rng, int depth) {
    if (depth <= 0 || pick(rng, 4) == 0) return atom(rng);
    switch (pick(rng, 5)) {
    case 0: return Formula::product(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 1: return Formula::left_div(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 2: return Formula::right_div(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 3: return Formula::bang(random_formula(rng, depth - 1));
    default: return Formula::nabla(random_formula(rng, depth - 1));
    }
}

std::vector<Formula> all_formulas(int depth) {
    std::vector<Formula> out{Formula::atom("n"), Formula::atom("s")};
    for (int d = 1; d <= depth; ++d) {
        std::vector<Formula> next = {Formula::atom("n"), Formula::atom("s")};
        for (const auto& a : out) {
            next.push_back(Formula::bang(a));
            next.push_back(Formula::nabla(a));
            for (const auto& b : out) {
                next.push_back(Formula::product(a, b));
                next.push_back(Formula::left_div(a, b));
                next.push_back(Formula::right_div(a, b));
            }
        }
        out = std::move(next);
    }
    return out;
}

Sequent random_sequent(Rng& rng, std::size_t max_formulas, int depth) {
    std::size_t n = pick(rng, max_formulas + 1);
    Sequent s{{}, random_formula(rng, depth)};
    for (std::size_t i = 0; i < n; ++i) s.antecedent.push_back(random_formula(rng, depth));
    return s;
}

Sequent random_provable(Rng& rng, std::size_t max_formulas, int k0, int rules) {
    for (;;) {
        Sequent s = gen(rng, rules, max_formulas, k0);
        if (s.antecedent.size() <= max_formulas && !s.antecedent.empty()) return s;
    }
}

}  // namespace oracle
