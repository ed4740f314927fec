#include "sllm/derivation.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sllm {

namespace {

struct RuleSpelling {
    Rule rule;
    std::string_view name;
};

constexpr RuleSpelling kRuleNames[] = {
    {Rule::Axiom, "axiom"},      {Rule::LeftDivL, "ldiv-l"},  {Rule::LeftDivR, "ldiv-r"},
    {Rule::RightDivL, "rdiv-l"}, {Rule::RightDivR, "rdiv-r"}, {Rule::ProdL, "prod-l"},
    {Rule::ProdR, "prod-r"},     {Rule::BangL, "bang-l"},     {Rule::BangR, "bang-r"},
    {Rule::NablaL, "nabla-l"},   {Rule::NablaR, "nabla-r"},   {Rule::Perm, "perm"},
    {Rule::PermPrime, "perm'"},
};

}  // namespace

std::string_view rule_name(Rule rule) {
    for (const auto& r : kRuleNames)
        if (r.rule == rule) return r.name;
    return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
    for (const auto& r : kRuleNames)
        if (r.name == name) return r.rule;
    return std::nullopt;
}

std::size_t Derivation::height() const {
    std::size_t h = 0;
    for (const auto& p : premises) h = std::max(h, p.height());
    return h + 1;
}

std::size_t Derivation::logical_height() const {
    std::size_t h = 0;
    for (const auto& p : premises) h = std::max(h, p.logical_height());
    bool counts = rule != Rule::Perm && rule != Rule::PermPrime;
    return h + (counts ? 1 : 0);
}

std::size_t Derivation::node_count() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.node_count();
    return n;
}

bool structurally_equal(const Derivation& a, const Derivation& b) {
    if (a.rule != b.rule || !(a.data == b.data) || a.conclusion != b.conclusion) return false;
    if (a.premises.size() != b.premises.size()) return false;
    for (std::size_t i = 0; i < a.premises.size(); ++i)
        if (!structurally_equal(a.premises[i], b.premises[i])) return false;
    return true;
}

std::string_view describe(CheckFailure failure) {
    switch (failure) {
    case CheckFailure::None: return "ok";
    case CheckFailure::WrongPremiseCount: return "wrong number of premises";
    case CheckFailure::PositionOutOfRange: return "position out of range";
    case CheckFailure::PrincipalMismatch: return "principal formula has the wrong connective";
    case CheckFailure::PremiseMismatch: return "premise does not match the rule";
    case CheckFailure::MultiplicityOutOfBound: return "multiplicity exceeds bound";
    case CheckFailure::NotSingleFormula: return "rule requires a single-formula antecedent";
    case CheckFailure::NotNablaRooted: return "moved formula is not nabla-rooted";
    case CheckFailure::AxiomMismatch: return "axiom sides differ";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Checking

namespace {

using Context = std::vector<Formula>;

Context slice(const Context& c, std::size_t begin, std::size_t end) {
    return Context(c.begin() + static_cast<std::ptrdiff_t>(begin),
                   c.begin() + static_cast<std::ptrdiff_t>(end));
}

Context concat(std::initializer_list<Context> parts) {
    Context out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

/// Expected premises of one node, or a failure.
struct Expectation {
    CheckFailure failure = CheckFailure::None;
    std::string detail;
    std::vector<Sequent> premises;
};

Expectation fail(CheckFailure f, std::string detail = {}) {
    Expectation e;
    e.failure = f;
    e.detail = std::move(detail);
    return e;
}

Expectation expect_premises(const Derivation& d, const CalculusConfig& cfg) {
    const Context& ctx = d.conclusion.antecedent;
    const Formula& goal = d.conclusion.succedent;
    const RuleData& rd = d.data;
    const std::size_t len = ctx.size();
    Expectation e;

    switch (d.rule) {
    case Rule::Axiom:
        if (len != 1) return fail(CheckFailure::NotSingleFormula);
        if (ctx[0] != goal) return fail(CheckFailure::AxiomMismatch);
        return e;

    case Rule::LeftDivL: {
        if (rd.at >= len || rd.length > rd.at) return fail(CheckFailure::PositionOutOfRange);
        const Formula& fn = ctx[rd.at];
        if (fn.connective() != Connective::LeftDiv) return fail(CheckFailure::PrincipalMismatch);
        std::size_t begin = rd.at - rd.length;
        e.premises.push_back({slice(ctx, begin, rd.at), fn.left()});
        e.premises.push_back(
            {concat({slice(ctx, 0, begin), {fn.right()}, slice(ctx, rd.at + 1, len)}), goal});
        return e;
    }
    case Rule::RightDivL: {
        if (rd.at >= len || rd.at + 1 + rd.length > len) return fail(CheckFailure::PositionOutOfRange);
        const Formula& fn = ctx[rd.at];
        if (fn.connective() != Connective::RightDiv) return fail(CheckFailure::PrincipalMismatch);
        std::size_t end = rd.at + 1 + rd.length;
        e.premises.push_back({slice(ctx, rd.at + 1, end), fn.right()});
        e.premises.push_back(
            {concat({slice(ctx, 0, rd.at), {fn.left()}, slice(ctx, end, len)}), goal});
        return e;
    }
    case Rule::LeftDivR:
        if (goal.connective() != Connective::LeftDiv) return fail(CheckFailure::PrincipalMismatch);
        e.premises.push_back({concat({{goal.left()}, ctx}), goal.right()});
        return e;
    case Rule::RightDivR:
        if (goal.connective() != Connective::RightDiv) return fail(CheckFailure::PrincipalMismatch);
        e.premises.push_back({concat({ctx, {goal.right()}}), goal.left()});
        return e;

    case Rule::ProdL: {
        if (rd.at >= len) return fail(CheckFailure::PositionOutOfRange);
        const Formula& p = ctx[rd.at];
        if (p.connective() != Connective::Product) return fail(CheckFailure::PrincipalMismatch);
        e.premises.push_back(
            {concat({slice(ctx, 0, rd.at), {p.left(), p.right()}, slice(ctx, rd.at + 1, len)}), goal});
        return e;
    }
    case Rule::ProdR:
        if (rd.split > len) return fail(CheckFailure::PositionOutOfRange);
        if (goal.connective() != Connective::Product) return fail(CheckFailure::PrincipalMismatch);
        e.premises.push_back({slice(ctx, 0, rd.split), goal.left()});
        e.premises.push_back({slice(ctx, rd.split, len), goal.right()});
        return e;

    case Rule::BangL: {
        if (rd.at >= len) return fail(CheckFailure::PositionOutOfRange);
        const Formula& b = ctx[rd.at];
        if (b.connective() != Connective::Bang) return fail(CheckFailure::PrincipalMismatch);
        if (rd.multiplicity < 1 || rd.multiplicity > cfg.k0) {
            return fail(CheckFailure::MultiplicityOutOfBound,
                        "n = " + std::to_string(rd.multiplicity) + ", k0 = " + std::to_string(cfg.k0));
        }
        Context copies(static_cast<std::size_t>(rd.multiplicity), b.inner());
        e.premises.push_back({concat({slice(ctx, 0, rd.at), copies, slice(ctx, rd.at + 1, len)}), goal});
        return e;
    }
    case Rule::BangR:
        if (len != 1) return fail(CheckFailure::NotSingleFormula);
        if (ctx[0].connective() != Connective::Bang || goal.connective() != Connective::Bang)
            return fail(CheckFailure::PrincipalMismatch);
        e.premises.push_back({{ctx[0].inner()}, goal.inner()});
        return e;

    case Rule::NablaL: {
        if (rd.at >= len) return fail(CheckFailure::PositionOutOfRange);
        const Formula& n = ctx[rd.at];
        if (n.connective() != Connective::Nabla) return fail(CheckFailure::PrincipalMismatch);
        Context premise = ctx;
        premise[rd.at] = n.inner();
        e.premises.push_back({std::move(premise), goal});
        return e;
    }
    case Rule::NablaR:
        if (len != 1) return fail(CheckFailure::NotSingleFormula);
        if (ctx[0].connective() != Connective::Nabla || goal.connective() != Connective::Nabla)
            return fail(CheckFailure::PrincipalMismatch);
        e.premises.push_back({{ctx[0].inner()}, goal.inner()});
        return e;

    case Rule::Perm:
    case Rule::PermPrime: {
        if (rd.at >= len || rd.target >= len) return fail(CheckFailure::PositionOutOfRange);
        if (d.rule == Rule::Perm && rd.target < rd.at) return fail(CheckFailure::PositionOutOfRange, "perm moves rightward");
        if (d.rule == Rule::PermPrime && rd.target > rd.at) return fail(CheckFailure::PositionOutOfRange, "perm' moves leftward");
        if (ctx[rd.at].connective() != Connective::Nabla) return fail(CheckFailure::NotNablaRooted);
        Context premise = ctx;
        Formula moved = premise[rd.at];
        premise.erase(premise.begin() + static_cast<std::ptrdiff_t>(rd.at));
        premise.insert(premise.begin() + static_cast<std::ptrdiff_t>(rd.target), moved);
        e.premises.push_back({std::move(premise), goal});
        return e;
    }
    }
    return fail(CheckFailure::PrincipalMismatch, "unknown rule");
}

bool check_node(const Derivation& d, const CalculusConfig& cfg, std::vector<std::size_t>& path,
                CheckResult& result) {
    Expectation e = expect_premises(d, cfg);
    auto report = [&](CheckFailure f, const std::string& detail) {
        result.ok = false;
        result.failure = f;
        result.path = path;
        result.reason = std::string(rule_name(d.rule)) + ": " + std::string(describe(f));
        if (!detail.empty()) result.reason += " (" + detail + ")";
        return false;
    };
    if (e.failure != CheckFailure::None) return report(e.failure, e.detail);
    if (e.premises.size() != d.premises.size()) return report(CheckFailure::WrongPremiseCount, {});
    for (std::size_t i = 0; i < e.premises.size(); ++i) {
        if (e.premises[i] != d.premises[i].conclusion) {
            return report(CheckFailure::PremiseMismatch,
                          "premise " + std::to_string(i) + " should be " +
                              format_sequent(e.premises[i], Notation::Ascii) + ", found " +
                              format_sequent(d.premises[i].conclusion, Notation::Ascii));
        }
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        path.push_back(i);
        if (!check_node(d.premises[i], cfg, path, result)) return false;
        path.pop_back();
    }
    return true;
}

}  // namespace

CheckResult check_derivation(const Derivation& d, const CalculusConfig& cfg) {
    CheckResult result;
    std::vector<std::size_t> path;
    check_node(d, cfg, path, result);
    return result;
}

// ---------------------------------------------------------------------------
// S-expressions

namespace {

void write_sexpr(const Derivation& d, int indent, std::string& out) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += '(';
    out += rule_name(d.rule);
    const RuleData& rd = d.data;
    auto kw = [&](const char* key, std::size_t v) {
        out += ' ';
        out += key;
        out += ' ';
        out += std::to_string(v);
    };
    switch (d.rule) {
    case Rule::LeftDivL:
    case Rule::RightDivL:
        kw(":at", rd.at);
        kw(":len", rd.length);
        break;
    case Rule::ProdL:
    case Rule::NablaL:
        kw(":at", rd.at);
        break;
    case Rule::BangL:
        kw(":at", rd.at);
        kw(":n", static_cast<std::size_t>(rd.multiplicity));
        break;
    case Rule::ProdR:
        kw(":split", rd.split);
        break;
    case Rule::Perm:
    case Rule::PermPrime:
        kw(":from", rd.at);
        kw(":to", rd.target);
        break;
    default:
        break;
    }
    out += " \"";
    out += format_sequent(d.conclusion, Notation::Ascii);
    out += '"';
    for (const auto& p : d.premises) {
        out += '\n';
        write_sexpr(p, indent + 1, out);
    }
    out += ')';
}

class SexprReader {
public:
    explicit SexprReader(std::string_view text) : text_(text) {}

    Derivation read() {
        Derivation d = node();
        skip_space();
        if (pos_ != text_.size()) throw ParseError("trailing input after derivation", pos_);
        return d;
    }

private:
    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string symbol() {
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"') break;
            ++pos_;
        }
        if (start == pos_) throw ParseError("expected a symbol", pos_);
        return std::string(text_.substr(start, pos_ - start));
    }

    std::size_t number() {
        std::size_t start = pos_;
        std::string s = symbol();
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("expected a number", start);
        return std::stoul(s);
    }

    Derivation node() {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != '(') throw ParseError("expected '('", pos_);
        ++pos_;
        skip_space();
        std::size_t rule_pos = pos_;
        auto rule = rule_from_name(symbol());
        if (!rule) throw ParseError("unknown rule", rule_pos);
        RuleData rd;
        skip_space();
        while (pos_ < text_.size() && text_[pos_] == ':') {
            std::size_t key_pos = pos_;
            std::string key = symbol();
            skip_space();
            std::size_t value = number();
            if (key == ":at" || key == ":from") rd.at = value;
            else if (key == ":len") rd.length = value;
            else if (key == ":split") rd.split = value;
            else if (key == ":n") rd.multiplicity = static_cast<int>(value);
            else if (key == ":to") rd.target = value;
            else throw ParseError("unknown key " + key, key_pos);
            skip_space();
        }
        if (pos_ >= text_.size() || text_[pos_] != '"') throw ParseError("expected quoted sequent", pos_);
        std::size_t close = text_.find('"', pos_ + 1);
        if (close == std::string_view::npos) throw ParseError("unterminated string", pos_);
        Sequent conclusion = [&] {
            try {
                return parse_sequent(text_.substr(pos_ + 1, close - pos_ - 1));
            } catch (const ParseError& e) {
                throw ParseError(std::string("in sequent: ") + e.what(), pos_ + 1 + e.position());
            }
        }();
        pos_ = close + 1;
        std::vector<Derivation> premises;
        skip_space();
        while (pos_ < text_.size() && text_[pos_] == '(') {
            premises.push_back(node());
            skip_space();
        }
        if (pos_ >= text_.size() || text_[pos_] != ')') throw ParseError("expected ')'", pos_);
        ++pos_;
        return Derivation{std::move(conclusion), *rule, rd, std::move(premises)};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void write_tree(const Derivation& d, Notation notation, const std::string& prefix, std::string& out) {
    out += prefix;
    out += format_sequent(d.conclusion, notation);
    out += "   [";
    out += rule_name(d.rule);
    if (d.rule == Rule::BangL) out += " n=" + std::to_string(d.data.multiplicity);
    out += "]\n";
    for (const auto& p : d.premises) write_tree(p, notation, prefix + "  ", out);
}

}  // namespace

std::string to_sexpr(const Derivation& d) {
    std::string out;
    write_sexpr(d, 0, out);
    out += '\n';
    return out;
}

Derivation parse_sexpr(std::string_view text) { return SexprReader(text).read(); }

std::string render_tree(const Derivation& d, Notation notation) {
    std::string out;
    write_tree(d, notation, "", out);
    return out;
}

}  // namespace sllm
