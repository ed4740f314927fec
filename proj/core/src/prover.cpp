#include "sllm/prover.hpp"

#include <algorithm>
#include <climits>
#include <iterator>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace sllm {

namespace {

constexpr int kUnprovable = INT_MAX / 4;

struct FormulaInfo {
    Formula formula;
    Connective connective;
    int left = -1;    // also the operand of ! and ∇
    int right = -1;
    long long weight = 1;
};

/// Search-local interning of formulas. Weights are chosen so that every rule
/// except perm strictly decreases the total weight of a sequent, with !A
/// outweighing any k0 copies of A.
class FormulaTable {
public:
    explicit FormulaTable(int k0) : k0_(k0) {}

    int intern(const Formula& f) {
        if (auto it = ids_.find(f); it != ids_.end()) return it->second;
        FormulaInfo info{f, f.connective()};
        if (f.is_binary()) {
            info.left = intern(f.left());
            info.right = intern(f.right());
            info.weight = infos_[info.left].weight + infos_[info.right].weight + 1;
        } else if (f.is_unary()) {
            info.left = intern(f.inner());
            long long w = infos_[info.left].weight;
            info.weight = f.connective() == Connective::Bang ? w * k0_ + 1 : w + 1;
        }
        int id = static_cast<int>(infos_.size());
        infos_.push_back(std::move(info));
        ids_.emplace(f, id);
        return id;
    }

    const FormulaInfo& operator[](int id) const { return infos_[static_cast<std::size_t>(id)]; }
    bool nabla(int id) const { return (*this)[id].connective == Connective::Nabla; }

    /// Per atom, the range of (positive − negative) occurrence counts the
    /// formula can contribute once every ! in antecedent position has been
    /// multiplexed. Call after all formulas are interned.
    using Balance = std::vector<std::pair<long long, long long>>;

    void compute_balances() {
        std::vector<int> atom_index(infos_.size(), -1);
        int atoms = 0;
        for (std::size_t id = 0; id < infos_.size(); ++id) {
            if (infos_[id].connective != Connective::Atom) continue;
            atom_index[id] = atoms++;
        }
        // Children are interned before parents, so one pass in id order suffices.
        negative_.assign(infos_.size(), Balance(static_cast<std::size_t>(atoms), {0, 0}));
        positive_.assign(infos_.size(), Balance(static_cast<std::size_t>(atoms), {0, 0}));
        auto add = [](Balance& out, const Balance& a) {
            for (std::size_t k = 0; k < out.size(); ++k) {
                out[k].first += a[k].first;
                out[k].second += a[k].second;
            }
        };
        for (std::size_t id = 0; id < infos_.size(); ++id) {
            const FormulaInfo& f = infos_[id];
            Balance& neg = negative_[id];
            Balance& pos = positive_[id];
            auto l = static_cast<std::size_t>(f.left);
            auto r = static_cast<std::size_t>(f.right);
            switch (f.connective) {
            case Connective::Atom:
                neg[static_cast<std::size_t>(atom_index[id])] = {-1, -1};
                pos[static_cast<std::size_t>(atom_index[id])] = {1, 1};
                break;
            case Connective::Product:
                add(neg, negative_[l]), add(neg, negative_[r]);
                add(pos, positive_[l]), add(pos, positive_[r]);
                break;
            case Connective::LeftDiv:
                add(neg, positive_[l]), add(neg, negative_[r]);
                add(pos, negative_[l]), add(pos, positive_[r]);
                break;
            case Connective::RightDiv:
                add(neg, negative_[l]), add(neg, positive_[r]);
                add(pos, positive_[l]), add(pos, negative_[r]);
                break;
            case Connective::Nabla:
                neg = negative_[l];
                pos = positive_[l];
                break;
            case Connective::Bang:
                pos = positive_[l];
                neg = negative_[l];
                for (auto& [lo, hi] : neg) {
                    lo = std::min(lo, lo * k0_);
                    hi = std::max(hi, hi * k0_);
                }
                break;
            }
        }
    }

    const Balance& balance(int id, bool positive) const {
        return (positive ? positive_ : negative_)[static_cast<std::size_t>(id)];
    }

private:
    int k0_;
    std::vector<FormulaInfo> infos_;
    std::unordered_map<Formula, int, FormulaHash> ids_;
    std::vector<Balance> negative_, positive_;
};

/// Occurrence labels: a path from a root occurrence through subformula and
/// copy segments. When disabled every occurrence carries label 0, which lets
/// identical subproblems share memo entries.
class Labeler {
public:
    explicit Labeler(bool enabled) : enabled_(enabled) { names_.emplace_back(); }

    int root(const std::string& name) { return enabled_ ? intern(name) : 0; }
    int child(int label, const std::string& segment) {
        return enabled_ ? intern(names_[static_cast<std::size_t>(label)] + segment) : 0;
    }

private:
    int intern(const std::string& name) {
        auto [it, inserted] = ids_.emplace(name, static_cast<int>(names_.size()));
        if (inserted) names_.push_back(name);
        return it->second;
    }

    bool enabled_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> ids_;
};

struct Elem {
    int f = 0;
    int label = 0;
    friend auto operator<=>(const Elem&, const Elem&) = default;
};

struct State {
    std::vector<Elem> fixed;      // non-∇ formulas, order significant
    std::vector<Elem> floating;   // ∇-formulas, sorted
    Elem goal;
};

using Key = std::vector<int>;

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
        std::size_t h = k.size();
        for (int v : k) h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

Key encode(const State& s, int extra = -1) {
    Key k;
    k.reserve(4 + 2 * (s.fixed.size() + s.floating.size()));
    k.push_back(static_cast<int>(s.fixed.size()));
    for (const auto& e : s.fixed) {
        k.push_back(e.f);
        k.push_back(e.label);
    }
    for (const auto& e : s.floating) {
        k.push_back(e.f);
        k.push_back(e.label);
    }
    k.push_back(s.goal.f);
    k.push_back(s.goal.label);
    k.push_back(extra);
    return k;
}

enum class StepKind { Axiom, ProdL, NablaL, LeftDivR, RightDivR, ProdR, LeftDivL, RightDivL, BangL, BangR, NablaR };

/// Rule choice on a quotient state. Meaning of the fields per kind:
///   ProdL, BangL: i = fixed index, n = multiplicity
///   NablaL: j = floating index, i = insertion point in fixed (-1 if the operand floats)
///   ProdR: i = split of fixed; take = floating indices sent left
///   LeftDivL: i = functor, Γ = fixed[j, i) plus take
///   RightDivL: i = functor, Γ = fixed(i, j) plus take
struct Step {
    StepKind kind;
    int i = 0;
    int j = 0;
    int n = 0;
    std::vector<int> take;
};

Step make_step(StepKind kind, int i = 0, int j = 0, int n = 0, std::vector<int> take = {}) {
    return Step{kind, i, j, n, std::move(take)};
}

/// A fused move applies `step` to reach `via`, then `then` to reach the premises.
struct Move {
    Step step;
    std::vector<State> premises;
    std::optional<State> via = std::nullopt;
    std::optional<Step> then = std::nullopt;

    int height() const { return then ? 2 : 1; }
};

struct PlanNode {
    Step step;
    std::vector<State> premises;
    std::vector<PlanNode> children;
};

using Signature = std::vector<std::pair<int, int>>;

class Engine {
public:
    Engine(const CalculusConfig& cfg, bool labelled) : k0_(cfg.k0), table_(cfg.k0), labels_(labelled) {}

    State root(const Sequent& seq) {
        State s;
        for (std::size_t i = 0; i < seq.antecedent.size(); ++i) {
            Elem e{table_.intern(seq.antecedent[i]), labels_.root("a" + std::to_string(i))};
            place(s, e, s.fixed.size());
        }
        s.goal = Elem{table_.intern(seq.succedent), labels_.root("g")};
        table_.compute_balances();
        return s;
    }

    /// Necessary condition for provability: every atom occurrence is consumed
    /// by exactly one axiom, so each atom's count must be able to balance.
    bool balanced(const State& s) const {
        FormulaTable::Balance total = table_.balance(s.goal.f, true);
        auto add = [&](const Elem& e) {
            const auto& b = table_.balance(e.f, false);
            for (std::size_t k = 0; k < total.size(); ++k) {
                total[k].first += b[k].first;
                total[k].second += b[k].second;
            }
        };
        for (const auto& e : s.fixed) add(e);
        for (const auto& e : s.floating) add(e);
        return std::all_of(total.begin(), total.end(), [](const auto& r) { return r.first <= 0 && 0 <= r.second; });
    }

    std::vector<Elem> root_context(const Sequent& seq) {
        std::vector<Elem> ctx;
        for (std::size_t i = 0; i < seq.antecedent.size(); ++i)
            ctx.push_back({table_.intern(seq.antecedent[i]), labels_.root("a" + std::to_string(i))});
        return ctx;
    }

    long long weight(const State& s) const {
        long long w = table_[s.goal.f].weight;
        for (const auto& e : s.fixed) w += table_[e.f].weight;
        for (const auto& e : s.floating) w += table_[e.f].weight;
        return w;
    }

    // ----- minimal-height search -----

    int solve(const State& s) {
        Key key = encode(s);
        if (auto it = min_memo_.find(key); it != min_memo_.end()) return it->second.first;
        std::vector<Move> moves;
        if (balanced(s)) moves = expand(s);
        int best = kUnprovable;
        int best_move = -1;
        for (std::size_t m = 0; m < moves.size() && best > 1; ++m) {
            int d = 0;
            for (const auto& p : moves[m].premises) {
                d = std::max(d, solve(p));
                if (d + moves[m].height() >= best) break;
            }
            d += moves[m].height();
            if (d < best) {
                best = d;
                best_move = static_cast<int>(m);
            }
        }
        min_memo_.emplace(std::move(key), std::make_pair(best, best_move));
        return best;
    }

    std::size_t states_explored() const { return min_memo_.size() + enum_memo_.size(); }

    PlanNode min_plan(const State& s) {
        const auto& [depth, move] = min_memo_.at(encode(s));
        if (move < 0) throw std::logic_error("no plan for an unprovable state");
        std::vector<Move> moves = expand(s);
        Move& mv = moves[static_cast<std::size_t>(move)];
        std::vector<PlanNode> children;
        for (const auto& p : mv.premises) children.push_back(min_plan(p));
        return plan_for(mv, std::move(children));
    }

    // ----- reading enumeration -----

    struct Item {
        Signature sig;
        int move;
        std::vector<int> picks;
    };
    struct EnumEntry {
        std::vector<Move> moves;
        std::vector<Item> items;
    };

    /// Unlabelled twin used to discard labelled states that have no proof
    /// within the remaining budget.
    void attach_oracle(const Sequent& seq, const CalculusConfig& cfg) {
        oracle_ = std::make_unique<Engine>(cfg, false);
        oracle_->root(seq);
    }

    const EnumEntry& enumerate(const State& s, long long budget, std::size_t limit) {
        static const EnumEntry kEmpty;
        budget = std::min(budget, weight(s));
        if (budget <= 0) return kEmpty;
        if (oracle_ && oracle_->solve(project(s)) > budget) return kEmpty;
        Key key = encode(s, static_cast<int>(budget));
        if (auto it = enum_memo_.find(key); it != enum_memo_.end()) return it->second;

        EnumEntry entry;
        if (balanced(s)) entry.moves = expand(s);
        std::set<Signature> seen;
        for (std::size_t m = 0; m < entry.moves.size() && entry.items.size() < limit; ++m) {
            const Move& mv = entry.moves[m];
            if (mv.step.kind == StepKind::Axiom) {
                const Elem& a = s.fixed.empty() ? s.floating[0] : s.fixed[0];
                Signature sig;
                axiom_links(a.f, a.label, s.goal.label, sig);
                std::sort(sig.begin(), sig.end());
                if (seen.insert(sig).second) entry.items.push_back({std::move(sig), static_cast<int>(m), {}});
                continue;
            }
            std::vector<const EnumEntry*> kids;
            for (const auto& p : mv.premises) kids.push_back(&enumerate(p, budget - mv.height(), limit));
            bool viable = std::all_of(kids.begin(), kids.end(), [](const EnumEntry* k) { return !k->items.empty(); });
            if (!viable) continue;
            std::vector<int> picks(kids.size(), 0);
            while (entry.items.size() < limit) {
                Signature sig;
                for (std::size_t k = 0; k < kids.size(); ++k) {
                    const Signature& part = kids[k]->items[static_cast<std::size_t>(picks[k])].sig;
                    Signature merged;
                    std::merge(sig.begin(), sig.end(), part.begin(), part.end(), std::back_inserter(merged));
                    sig = std::move(merged);
                }
                if (seen.insert(sig).second) entry.items.push_back({std::move(sig), static_cast<int>(m), picks});
                bool exhausted = true;
                for (std::size_t k = kids.size(); k-- > 0;) {
                    if (++picks[k] < static_cast<int>(kids[k]->items.size())) {
                        exhausted = false;
                        break;
                    }
                    picks[k] = 0;
                }
                if (exhausted) break;
            }
        }
        return enum_memo_.emplace(std::move(key), std::move(entry)).first->second;
    }

    PlanNode enum_plan(const State& s, long long budget, std::size_t limit, int item_index) {
        const EnumEntry& entry = enumerate(s, budget, limit);
        const Item& item = entry.items[static_cast<std::size_t>(item_index)];
        const Move& mv = entry.moves[static_cast<std::size_t>(item.move)];
        long long b = std::min(budget, weight(s));
        std::vector<PlanNode> children;
        for (std::size_t k = 0; k < mv.premises.size(); ++k)
            children.push_back(enum_plan(mv.premises[k], b - mv.height(), limit, item.picks[k]));
        return plan_for(mv, std::move(children));
    }

    static PlanNode plan_for(const Move& mv, std::vector<PlanNode> children) {
        if (!mv.then) return PlanNode{mv.step, mv.premises, std::move(children)};
        PlanNode applied{*mv.then, mv.premises, std::move(children)};
        return PlanNode{mv.step, {*mv.via}, {std::move(applied)}};
    }

    // ----- concrete derivations -----

    Derivation materialize(const std::vector<Elem>& ctx, const Elem& goal, const PlanNode& plan);

private:
    /// Inserts into fixed at `pos`, or into floating when ∇-rooted. Returns
    /// true when the fixed sequence grew.
    bool place(State& s, const Elem& e, std::size_t pos) const {
        if (table_.nabla(e.f)) {
            s.floating.insert(std::upper_bound(s.floating.begin(), s.floating.end(), e), e);
            return false;
        }
        s.fixed.insert(s.fixed.begin() + static_cast<std::ptrdiff_t>(pos), e);
        return true;
    }

    Elem left_of(const Elem& e) { return {table_[e.f].left, labels_.child(e.label, "l")}; }
    Elem right_of(const Elem& e) { return {table_[e.f].right, labels_.child(e.label, "r")}; }
    Elem inner_of(const Elem& e) { return {table_[e.f].left, labels_.child(e.label, "u")}; }
    // Copies from one multiplexing step share a label: they are interchangeable.
    Elem copy_of(const Elem& e) { return {table_[e.f].left, labels_.child(e.label, "c")}; }

    void axiom_links(int f, int la, int lg, Signature& out) {
        const FormulaInfo& info = table_[f];
        switch (info.connective) {
        case Connective::Atom:
            out.emplace_back(la, lg);
            return;
        case Connective::Bang:
        case Connective::Nabla:
            axiom_links(info.left, labels_.child(la, "u"), labels_.child(lg, "u"), out);
            return;
        default:
            axiom_links(info.left, labels_.child(la, "l"), labels_.child(lg, "l"), out);
            axiom_links(info.right, labels_.child(la, "r"), labels_.child(lg, "r"), out);
            return;
        }
    }

    /// Floating index vectors, one per sub-multiset, taking the first c members
    /// of each class of equal elements.
    static std::vector<std::vector<int>> subsets(const std::vector<Elem>& floating) {
        std::vector<std::pair<int, int>> classes;  // start, size
        for (std::size_t i = 0; i < floating.size(); ++i) {
            if (i > 0 && floating[i] == floating[i - 1]) classes.back().second++;
            else classes.emplace_back(static_cast<int>(i), 1);
        }
        std::vector<int> counts(classes.size(), 0);
        std::vector<std::vector<int>> out;
        while (true) {
            std::vector<int> take;
            for (std::size_t c = 0; c < classes.size(); ++c)
                for (int t = 0; t < counts[c]; ++t) take.push_back(classes[c].first + t);
            out.push_back(std::move(take));
            std::size_t c = 0;
            while (c < classes.size() && ++counts[c] > classes[c].second) counts[c++] = 0;
            if (c == classes.size()) break;
        }
        return out;
    }

    static std::pair<std::vector<Elem>, std::vector<Elem>> split_floating(const std::vector<Elem>& floating,
                                                                           const std::vector<int>& take) {
        std::vector<Elem> in, out;
        std::size_t t = 0;
        for (std::size_t i = 0; i < floating.size(); ++i) {
            if (t < take.size() && take[t] == static_cast<int>(i)) {
                in.push_back(floating[i]);
                ++t;
            } else {
                out.push_back(floating[i]);
            }
        }
        return {in, out};
    }

    static std::vector<Elem> range(const std::vector<Elem>& v, std::size_t b, std::size_t e) {
        return std::vector<Elem>(v.begin() + static_cast<std::ptrdiff_t>(b), v.begin() + static_cast<std::ptrdiff_t>(e));
    }

    /// \_L or /_L with the functor at fixed[i], over every choice of Γ.
    void division_moves(const State& s, std::size_t i, std::vector<Move>& out) {
        const auto& fx = s.fixed;
        const auto& fl = s.floating;
        const std::size_t nf = fx.size();
        Connective c = table_[fx[i].f].connective;
        if (c != Connective::LeftDiv && c != Connective::RightDiv) return;
        const std::vector<std::vector<int>> takes = subsets(fl);
        if (c == Connective::LeftDiv) {
            for (std::size_t j = i + 1; j-- > 0;) {
                for (const auto& take : takes) {
                    auto [in, rest] = split_floating(fl, take);
                    State a{range(fx, j, i), in, left_of(fx[i])};
                    State b{range(fx, 0, j), rest, s.goal};
                    b.fixed.insert(b.fixed.end(), fx.begin() + static_cast<std::ptrdiff_t>(i) + 1, fx.end());
                    place(b, right_of(fx[i]), j);
                    out.push_back({make_step(StepKind::LeftDivL, static_cast<int>(i), static_cast<int>(j), 0, take),
                                   {std::move(a), std::move(b)}});
                }
            }
            return;
        }
        for (std::size_t e = i + 1; e <= nf; ++e) {
            for (const auto& take : takes) {
                auto [in, rest] = split_floating(fl, take);
                State a{range(fx, i + 1, e), in, right_of(fx[i])};
                State b{range(fx, 0, i), rest, s.goal};
                b.fixed.insert(b.fixed.end(), fx.begin() + static_cast<std::ptrdiff_t>(e), fx.end());
                place(b, left_of(fx[i]), i);
                out.push_back({make_step(StepKind::RightDivL, static_cast<int>(i), static_cast<int>(e), 0, take),
                               {std::move(a), std::move(b)}});
            }
        }
    }

    std::vector<Move> expand(const State& s) {
        std::vector<Move> out;
        const auto& fx = s.fixed;
        const auto& fl = s.floating;
        const std::size_t nf = fx.size();
        const FormulaInfo& goal = table_[s.goal.f];

        if ((nf == 1 && fl.empty() && fx[0].f == s.goal.f) || (nf == 0 && fl.size() == 1 && fl[0].f == s.goal.f))
            out.push_back({make_step(StepKind::Axiom), {}});

        for (std::size_t i = 0; i < nf; ++i) {
            if (table_[fx[i].f].connective != Connective::Product) continue;
            State p = s;
            p.fixed.erase(p.fixed.begin() + static_cast<std::ptrdiff_t>(i));
            std::size_t pos = i;
            if (place(p, left_of(fx[i]), pos)) ++pos;
            place(p, right_of(fx[i]), pos);
            out.push_back({make_step(StepKind::ProdL, static_cast<int>(i)), {std::move(p)}});
        }

        for (std::size_t c = 0; c < fl.size(); ++c) {
            if (c > 0 && fl[c] == fl[c - 1]) continue;
            State base = s;
            base.floating.erase(base.floating.begin() + static_cast<std::ptrdiff_t>(c));
            Elem inner = inner_of(fl[c]);
            if (table_.nabla(inner.f)) {
                place(base, inner, 0);
                out.push_back({make_step(StepKind::NablaL, -1, static_cast<int>(c)), {std::move(base)}});
                continue;
            }
            Connective ic = table_[inner.f].connective;
            if (ic == Connective::Atom) {
                // An atom is only ever consumed by an axiom.
                if (nf == 0 && fl.size() == 1) {
                    place(base, inner, 0);
                    out.push_back({make_step(StepKind::NablaL, 0, static_cast<int>(c)), {std::move(base)}});
                }
                continue;
            }
            for (std::size_t k = 0; k <= nf; ++k) {
                State p = base;
                place(p, inner, k);
                Step unwrap = make_step(StepKind::NablaL, static_cast<int>(k), static_cast<int>(c));
                if (ic == Connective::LeftDiv || ic == Connective::RightDiv) {
                    // Unwrapping a functor only pays off when it is applied right away.
                    std::vector<Move> applied;
                    division_moves(p, k, applied);
                    for (auto& m : applied)
                        out.push_back({unwrap, std::move(m.premises), p, std::move(m.step)});
                } else {
                    out.push_back({unwrap, {std::move(p)}});
                }
            }
        }

        if (goal.connective == Connective::LeftDiv) {
            State p = s;
            p.goal = right_of(s.goal);
            place(p, left_of(s.goal), 0);
            out.push_back({make_step(StepKind::LeftDivR), {std::move(p)}});
        }
        if (goal.connective == Connective::RightDiv) {
            State p = s;
            p.goal = left_of(s.goal);
            place(p, right_of(s.goal), p.fixed.size());
            out.push_back({make_step(StepKind::RightDivR), {std::move(p)}});
        }

        std::vector<std::vector<int>> all_subsets;
        auto floating_subsets = [&]() -> const std::vector<std::vector<int>>& {
            if (all_subsets.empty()) all_subsets = subsets(fl);
            return all_subsets;
        };

        if (goal.connective == Connective::Product) {
            for (std::size_t m = 0; m <= nf; ++m) {
                for (const auto& take : floating_subsets()) {
                    auto [in, rest] = split_floating(fl, take);
                    State a{range(fx, 0, m), in, left_of(s.goal)};
                    State b{range(fx, m, nf), rest, right_of(s.goal)};
                    out.push_back({make_step(StepKind::ProdR, static_cast<int>(m), 0, 0, take), {std::move(a), std::move(b)}});
                }
            }
        }

        for (std::size_t i = 0; i < nf; ++i) division_moves(s, i, out);

        for (std::size_t i = 0; i < nf; ++i) {
            if (table_[fx[i].f].connective != Connective::Bang) continue;
            for (int n = 1; n <= k0_; ++n) {
                State p = s;
                p.fixed.erase(p.fixed.begin() + static_cast<std::ptrdiff_t>(i));
                std::size_t pos = i;
                for (int c = 1; c <= n; ++c)
                    if (place(p, copy_of(fx[i]), pos)) ++pos;
                out.push_back({make_step(StepKind::BangL, static_cast<int>(i), 0, n), {std::move(p)}});
            }
        }

        if (nf == 1 && fl.empty() && table_[fx[0].f].connective == Connective::Bang &&
            goal.connective == Connective::Bang) {
            State p;
            place(p, inner_of(fx[0]), 0);
            p.goal = inner_of(s.goal);
            out.push_back({make_step(StepKind::BangR), {std::move(p)}});
        }
        if (nf == 0 && fl.size() == 1 && goal.connective == Connective::Nabla) {
            State p;
            place(p, inner_of(fl[0]), 0);
            p.goal = inner_of(s.goal);
            out.push_back({make_step(StepKind::NablaR), {std::move(p)}});
        }
        return out;
    }

    State quotient(const std::vector<Elem>& ctx, const Elem& goal) const {
        State s;
        for (const auto& e : ctx) place(s, e, s.fixed.size());
        s.goal = goal;
        return s;
    }

    Sequent sequent(const std::vector<Elem>& ctx, const Elem& goal) const {
        Sequent q{{}, table_[goal.f].formula};
        for (const auto& e : ctx) q.antecedent.push_back(table_[e.f].formula);
        return q;
    }

    State project(const State& s) {
        auto id = [&](const Elem& e) { return Elem{oracle_->table_.intern(table_[e.f].formula), 0}; };
        State p;
        for (const auto& e : s.fixed) p.fixed.push_back(id(e));
        for (const auto& e : s.floating) p.floating.push_back(id(e));
        std::sort(p.floating.begin(), p.floating.end());
        p.goal = id(s.goal);
        return p;
    }

    int k0_;
    FormulaTable table_;
    Labeler labels_;
    std::unique_ptr<Engine> oracle_;
    std::unordered_map<Key, std::pair<int, int>, KeyHash> min_memo_;
    std::unordered_map<Key, EnumEntry, KeyHash> enum_memo_;
};

bool same_state(const State& a, const State& b) {
    return a.fixed == b.fixed && a.floating == b.floating && a.goal == b.goal;
}

Derivation Engine::materialize(const std::vector<Elem>& ctx, const Elem& goal, const PlanNode& plan) {
    const std::size_t len = ctx.size();
    std::vector<std::size_t> fixed_pos, float_pos;
    for (std::size_t p = 0; p < len; ++p)
        (table_.nabla(ctx[p].f) ? float_pos : fixed_pos).push_back(p);
    std::stable_sort(float_pos.begin(), float_pos.end(),
                     [&](std::size_t a, std::size_t b) { return ctx[a] < ctx[b]; });

    const Step& step = plan.step;
    std::vector<std::size_t> order(len);
    for (std::size_t p = 0; p < len; ++p) order[p] = p;

    auto by_bucket = [&](const std::vector<int>& bucket) {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return bucket[a] < bucket[b]; });
    };
    auto taken = [&](const std::vector<int>& take) {
        std::vector<bool> t(len, false);
        for (int idx : take) t[float_pos[static_cast<std::size_t>(idx)]] = true;
        return t;
    };
    std::vector<int> fixed_index(len, -1);
    for (std::size_t k = 0; k < fixed_pos.size(); ++k) fixed_index[fixed_pos[k]] = static_cast<int>(k);

    switch (step.kind) {
    case StepKind::NablaL:
        if (step.i >= 0) {
            std::size_t x = float_pos[static_cast<std::size_t>(step.j)];
            order.erase(std::find(order.begin(), order.end(), x));
            auto at = static_cast<std::size_t>(step.i) < fixed_pos.size()
                          ? std::find(order.begin(), order.end(), fixed_pos[static_cast<std::size_t>(step.i)])
                          : order.end();
            order.insert(at, x);
        }
        break;
    case StepKind::ProdR: {
        auto t = taken(step.take);
        std::vector<int> bucket(len);
        for (std::size_t p = 0; p < len; ++p)
            bucket[p] = fixed_index[p] >= 0 ? (fixed_index[p] < step.i ? 0 : 1) : (t[p] ? 0 : 1);
        by_bucket(bucket);
        break;
    }
    case StepKind::LeftDivL:
    case StepKind::RightDivL: {
        auto t = taken(step.take);
        std::size_t q = fixed_pos[static_cast<std::size_t>(step.i)];
        bool left = step.kind == StepKind::LeftDivL;
        std::vector<int> bucket(len);
        for (std::size_t p = 0; p < len; ++p) {
            int k = fixed_index[p];
            if (k >= 0) {
                if (left) bucket[p] = k < step.j ? 0 : k < step.i ? 1 : k == step.i ? 2 : 3;
                else bucket[p] = k < step.i ? 0 : k == step.i ? 1 : k < step.j ? 2 : 3;
            } else if (t[p]) {
                bucket[p] = left ? 1 : 2;
            } else {
                bucket[p] = p < q ? 0 : 3;
            }
        }
        by_bucket(bucket);
        break;
    }
    default:
        break;
    }

    // Perm moves turning ctx into the arrangement given by `order`.
    struct PermMove {
        Rule rule;
        std::size_t from, to;
        std::vector<Elem> before;
    };
    std::vector<PermMove> perms;
    std::vector<std::size_t> cur(len);
    for (std::size_t p = 0; p < len; ++p) cur[p] = p;
    auto snapshot = [&] {
        std::vector<Elem> v;
        for (std::size_t id : cur) v.push_back(ctx[id]);
        return v;
    };
    for (std::size_t t = 0; t < len;) {
        if (cur[t] == order[t]) {
            ++t;
            continue;
        }
        std::size_t x = order[t];
        std::size_t p = static_cast<std::size_t>(std::find(cur.begin(), cur.end(), x) - cur.begin());
        if (table_.nabla(ctx[x].f)) {
            perms.push_back({Rule::PermPrime, p, t, snapshot()});
            cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(p));
            cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(t), x);
        } else {
            std::size_t y = cur[t];
            if (!table_.nabla(ctx[y].f)) throw std::logic_error("arrangement reorders fixed formulas");
            perms.push_back({Rule::Perm, t, p, snapshot()});
            cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(t));
            cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(p), y);
        }
    }
    std::vector<Elem> a = snapshot();
    auto pos_of = [&](std::size_t original) {
        return static_cast<std::size_t>(std::find(cur.begin(), cur.end(), original) - cur.begin());
    };
    auto slice = [&](std::size_t b, std::size_t e) { return range(a, b, e); };
    auto join = [](std::vector<Elem> x, std::initializer_list<std::vector<Elem>> rest) {
        for (const auto& r : rest) x.insert(x.end(), r.begin(), r.end());
        return x;
    };

    Rule rule = Rule::Axiom;
    RuleData data;
    std::vector<std::pair<std::vector<Elem>, Elem>> premises;
    switch (step.kind) {
    case StepKind::Axiom:
        rule = Rule::Axiom;
        break;
    case StepKind::ProdL: {
        rule = Rule::ProdL;
        std::size_t p = pos_of(fixed_pos[static_cast<std::size_t>(step.i)]);
        data.at = p;
        premises.push_back({join(slice(0, p), {{left_of(a[p]), right_of(a[p])}, slice(p + 1, len)}), goal});
        break;
    }
    case StepKind::NablaL: {
        rule = Rule::NablaL;
        std::size_t p = pos_of(float_pos[static_cast<std::size_t>(step.j)]);
        data.at = p;
        std::vector<Elem> c = a;
        c[p] = inner_of(a[p]);
        premises.push_back({std::move(c), goal});
        break;
    }
    case StepKind::LeftDivR:
        rule = Rule::LeftDivR;
        premises.push_back({join({left_of(goal)}, {a}), right_of(goal)});
        break;
    case StepKind::RightDivR:
        rule = Rule::RightDivR;
        premises.push_back({join(a, {{right_of(goal)}}), left_of(goal)});
        break;
    case StepKind::ProdR: {
        rule = Rule::ProdR;
        std::size_t split = static_cast<std::size_t>(step.i) + step.take.size();
        data.split = split;
        premises.push_back({slice(0, split), left_of(goal)});
        premises.push_back({slice(split, len), right_of(goal)});
        break;
    }
    case StepKind::LeftDivL: {
        rule = Rule::LeftDivL;
        std::size_t q = pos_of(fixed_pos[static_cast<std::size_t>(step.i)]);
        std::size_t gamma = static_cast<std::size_t>(step.i - step.j) + step.take.size();
        data.at = q;
        data.length = gamma;
        premises.push_back({slice(q - gamma, q), left_of(a[q])});
        premises.push_back({join(slice(0, q - gamma), {{right_of(a[q])}, slice(q + 1, len)}), goal});
        break;
    }
    case StepKind::RightDivL: {
        rule = Rule::RightDivL;
        std::size_t q = pos_of(fixed_pos[static_cast<std::size_t>(step.i)]);
        std::size_t gamma = static_cast<std::size_t>(step.j - step.i - 1) + step.take.size();
        data.at = q;
        data.length = gamma;
        premises.push_back({slice(q + 1, q + 1 + gamma), right_of(a[q])});
        premises.push_back({join(slice(0, q), {{left_of(a[q])}, slice(q + 1 + gamma, len)}), goal});
        break;
    }
    case StepKind::BangL: {
        rule = Rule::BangL;
        std::size_t p = pos_of(fixed_pos[static_cast<std::size_t>(step.i)]);
        data.at = p;
        data.multiplicity = step.n;
        std::vector<Elem> copies;
        for (int c = 1; c <= step.n; ++c) copies.push_back(copy_of(a[p]));
        premises.push_back({join(slice(0, p), {copies, slice(p + 1, len)}), goal});
        break;
    }
    case StepKind::BangR:
    case StepKind::NablaR:
        rule = step.kind == StepKind::BangR ? Rule::BangR : Rule::NablaR;
        premises.push_back({{inner_of(a[0])}, inner_of(goal)});
        break;
    }

    if (premises.size() != plan.children.size()) throw std::logic_error("plan arity mismatch");
    Derivation node{sequent(a, goal), rule, data, {}};
    for (std::size_t k = 0; k < premises.size(); ++k) {
        if (!same_state(quotient(premises[k].first, premises[k].second), plan.premises[k]))
            throw std::logic_error("materialized premise diverges from the search state");
        node.premises.push_back(materialize(premises[k].first, premises[k].second, plan.children[k]));
    }
    for (auto it = perms.rbegin(); it != perms.rend(); ++it) {
        RuleData pd;
        pd.at = it->from;
        pd.target = it->to;
        node = Derivation{sequent(it->before, goal), it->rule, pd, {std::move(node)}};
    }
    return node;
}

}  // namespace

ProofResult prove_detailed(const Sequent& seq, const CalculusConfig& cfg) {
    cfg.validate();
    Engine engine(cfg, false);
    State root = engine.root(seq);
    int depth = engine.solve(root);
    ProofResult result;
    result.states_explored = engine.states_explored();
    if (depth >= kUnprovable) {
        result.outcome = SearchOutcome::Unprovable;
        return result;
    }
    result.min_depth = depth;
    if (depth > cfg.max_depth) {
        result.outcome = SearchOutcome::DepthExhausted;
        return result;
    }
    result.outcome = SearchOutcome::Proved;
    std::vector<Elem> ctx = engine.root_context(seq);
    Elem goal{root.goal};
    result.derivation = engine.materialize(ctx, goal, engine.min_plan(root));
    return result;
}

std::optional<Derivation> prove(const Sequent& seq, const CalculusConfig& cfg) {
    return prove_detailed(seq, cfg).derivation;
}

std::vector<Derivation> enumerate_proofs(const Sequent& seq, const CalculusConfig& cfg, std::size_t limit) {
    cfg.validate();
    std::vector<Derivation> out;
    if (limit == 0) return out;
    Engine engine(cfg, true);
    engine.attach_oracle(seq, cfg);
    State root = engine.root(seq);
    const auto& entry = engine.enumerate(root, cfg.max_depth, limit);
    std::vector<Elem> ctx = engine.root_context(seq);
    for (std::size_t k = 0; k < entry.items.size() && k < limit; ++k)
        out.push_back(engine.materialize(ctx, root.goal, engine.enum_plan(root, cfg.max_depth, limit, static_cast<int>(k))));
    return out;
}

}  // namespace sllm
