#include "sllm/formula.hpp"

#include <cctype>
#include <functional>

namespace sllm {

struct Formula::Node {
    Connective connective;
    std::string atom;
    std::vector<Formula> children;
    std::size_t hash;
    std::size_t size;
    std::size_t depth;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::make(Connective c, std::string atom, std::vector<Formula> children) {
    std::size_t h = mix(0, static_cast<std::size_t>(c));
    std::size_t size = 1;
    std::size_t depth = 0;
    if (c == Connective::Atom) h = mix(h, std::hash<std::string>{}(atom));
    for (const auto& child : children) {
        h = mix(h, child.hash());
        size += child.size();
        depth = std::max(depth, child.depth() + 1);
    }
    auto node = std::make_shared<Node>(
        Node{c, std::move(atom), std::move(children), h, size, depth});
    return Formula(std::move(node));
}

Formula Formula::atom(std::string name) {
    if (name.empty()) throw std::invalid_argument("atom name must be nonempty");
    return make(Connective::Atom, std::move(name), {});
}
Formula Formula::product(Formula left, Formula right) {
    return make(Connective::Product, {}, {std::move(left), std::move(right)});
}
Formula Formula::left_div(Formula left, Formula right) {
    return make(Connective::LeftDiv, {}, {std::move(left), std::move(right)});
}
Formula Formula::right_div(Formula left, Formula right) {
    return make(Connective::RightDiv, {}, {std::move(left), std::move(right)});
}
Formula Formula::bang(Formula inner) { return make(Connective::Bang, {}, {std::move(inner)}); }
Formula Formula::nabla(Formula inner) { return make(Connective::Nabla, {}, {std::move(inner)}); }

Connective Formula::connective() const noexcept { return node_->connective; }
std::size_t Formula::hash() const noexcept { return node_->hash; }
std::size_t Formula::size() const noexcept { return node_->size; }
std::size_t Formula::depth() const noexcept { return node_->depth; }

bool Formula::is_binary() const noexcept {
    auto c = connective();
    return c == Connective::Product || c == Connective::LeftDiv || c == Connective::RightDiv;
}

bool Formula::is_unary() const noexcept {
    auto c = connective();
    return c == Connective::Bang || c == Connective::Nabla;
}

const std::string& Formula::name() const {
    if (!is_atom()) throw std::logic_error("name() on a non-atomic formula");
    return node_->atom;
}

const Formula& Formula::left() const {
    if (!is_binary()) throw std::logic_error("left() on a non-binary formula");
    return node_->children[0];
}

const Formula& Formula::right() const {
    if (!is_binary()) throw std::logic_error("right() on a non-binary formula");
    return node_->children[1];
}

const Formula& Formula::inner() const {
    if (!is_unary()) throw std::logic_error("inner() on a formula without a modality");
    return node_->children[0];
}

void Formula::collect_atoms(std::set<std::string>& out) const {
    if (is_atom()) {
        out.insert(node_->atom);
        return;
    }
    for (const auto& child : node_->children) child.collect_atoms(out);
}

int Formula::compare(const Formula& a, const Formula& b) noexcept {
    if (a.node_ == b.node_) return 0;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.connective != y.connective) return x.connective < y.connective ? -1 : 1;
    if (x.connective == Connective::Atom) return x.atom.compare(y.atom) < 0 ? -1 : (x.atom == y.atom ? 0 : 1);
    for (std::size_t i = 0; i < x.children.size(); ++i) {
        if (int c = compare(x.children[i], y.children[i]); c != 0) return c;
    }
    return 0;
}

bool operator==(const Formula& a, const Formula& b) noexcept {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash()) return false;
    return Formula::compare(a, b) == 0;
}

bool operator<(const Formula& a, const Formula& b) noexcept { return Formula::compare(a, b) < 0; }

void CalculusConfig::validate() const {
    if (k0 < 1) throw std::invalid_argument("k0 must be at least 1");
    if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Atom, Product, LeftDiv, RightDiv, Bang, Nabla, LParen, RParen, Comma, Turnstile, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

bool starts_with(std::string_view s, std::size_t i, std::string_view prefix) {
    return s.substr(i, prefix.size()) == prefix;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < text.size()) {
                unsigned char d = static_cast<unsigned char>(text[j]);
                if (!(std::isalnum(d) || d == '_')) break;
                ++j;
            }
            out.push_back({Tok::Atom, std::string(text.substr(i, j - i)), i});
            i = j;
            continue;
        }
        struct Sym {
            std::string_view spelling;
            Tok kind;
        };
        static constexpr Sym symbols[] = {
            {"->", Tok::Turnstile},       {"\xE2\x9F\xB6", Tok::Turnstile},  // ⟶
            {"\xE2\x86\x92", Tok::Turnstile},                                // →
            {"\xC2\xB7", Tok::Product},   {"\xE2\x8B\x85", Tok::Product},    // · ⋅
            {"\xE2\x88\x87", Tok::Nabla},                                    // ∇
            {".", Tok::Product},          {"*", Tok::Product},
            {"\\", Tok::LeftDiv},         {"/", Tok::RightDiv},
            {"!", Tok::Bang},             {"@", Tok::Nabla},
            {"(", Tok::LParen},           {")", Tok::RParen},
            {",", Tok::Comma},
        };
        bool matched = false;
        for (const auto& sym : symbols) {
            if (starts_with(text, i, sym.spelling)) {
                out.push_back({sym.kind, std::string(sym.spelling), i});
                i += sym.spelling.size();
                matched = true;
                break;
            }
        }
        if (!matched) throw ParseError("unexpected character '" + std::string(1, text[i]) + "'", i);
    }
    out.push_back({Tok::End, "", text.size()});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const std::set<std::string>* alphabet)
        : tokens_(std::move(tokens)), alphabet_(alphabet) {}

    Formula formula() {
        Formula f = ldiv();
        while (peek().kind == Tok::RightDiv) {
            advance();
            f = Formula::right_div(std::move(f), ldiv());
        }
        return f;
    }

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    void expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(std::string("expected ") + what);
        advance();
    }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        if (t.kind == Tok::End) throw ParseError(message + ", found end of input", t.pos);
        throw ParseError(message + ", found '" + t.text + "'", t.pos);
    }

private:
    Formula ldiv() {
        Formula f = prod();
        if (peek().kind == Tok::LeftDiv) {
            advance();
            return Formula::left_div(std::move(f), ldiv());
        }
        return f;
    }

    Formula prod() {
        Formula f = unary();
        while (peek().kind == Tok::Product) {
            advance();
            f = Formula::product(std::move(f), unary());
        }
        return f;
    }

    Formula unary() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Bang:
            advance();
            return Formula::bang(unary());
        case Tok::Nabla:
            advance();
            return Formula::nabla(unary());
        case Tok::LParen: {
            advance();
            Formula f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        case Tok::Atom: {
            if (alphabet_ != nullptr && alphabet_->count(t.text) == 0) {
                throw ParseError("unknown atom '" + t.text + "'", t.pos);
            }
            std::string name = advance().text;
            return Formula::atom(std::move(name));
        }
        default:
            fail("expected a formula");
        }
    }

    std::vector<Token> tokens_;
    const std::set<std::string>* alphabet_;
    std::size_t pos_ = 0;
};

int level(const Formula& f) {
    switch (f.connective()) {
    case Connective::RightDiv: return 0;
    case Connective::LeftDiv: return 1;
    case Connective::Product: return 2;
    default: return 3;
    }
}

void render(const Formula& f, Notation notation, std::string& out);

void render_operand(const Formula& f, bool parens, Notation notation, std::string& out) {
    if (parens) out += '(';
    render(f, notation, out);
    if (parens) out += ')';
}

void render(const Formula& f, Notation notation, std::string& out) {
    const bool ascii = notation == Notation::Ascii;
    switch (f.connective()) {
    case Connective::Atom:
        out += f.name();
        return;
    case Connective::Bang:
        out += '!';
        render_operand(f.inner(), level(f.inner()) < 3, notation, out);
        return;
    case Connective::Nabla:
        out += ascii ? "@" : "\xE2\x88\x87";
        render_operand(f.inner(), level(f.inner()) < 3, notation, out);
        return;
    case Connective::Product:
        render_operand(f.left(), level(f.left()) < 2, notation, out);
        out += ascii ? "." : "\xC2\xB7";
        render_operand(f.right(), level(f.right()) <= 2, notation, out);
        return;
    case Connective::LeftDiv:
        render_operand(f.left(), level(f.left()) < 2, notation, out);
        out += '\\';
        render_operand(f.right(), level(f.right()) < 1, notation, out);
        return;
    case Connective::RightDiv:
        render_operand(f.left(), false, notation, out);
        out += '/';
        render_operand(f.right(), level(f.right()) < 1, notation, out);
        return;
    }
}

}  // namespace

Formula parse_formula(std::string_view text, const std::set<std::string>* alphabet) {
    Parser p(tokenize(text), alphabet);
    Formula f = p.formula();
    if (p.peek().kind != Tok::End) p.fail("unexpected trailing input");
    return f;
}

std::string format_formula(const Formula& f, Notation notation) {
    std::string out;
    render(f, notation, out);
    return out;
}

Sequent parse_sequent(std::string_view text, const std::set<std::string>* alphabet) {
    Parser p(tokenize(text), alphabet);
    std::vector<Formula> antecedent;
    if (p.peek().kind != Tok::Turnstile) {
        antecedent.push_back(p.formula());
        while (p.peek().kind == Tok::Comma) {
            p.advance();
            antecedent.push_back(p.formula());
        }
    }
    p.expect(Tok::Turnstile, "'->'");
    Formula succedent = p.formula();
    if (p.peek().kind != Tok::End) p.fail("unexpected trailing input");
    return Sequent{std::move(antecedent), std::move(succedent)};
}

std::string format_sequent(const Sequent& s, Notation notation) {
    std::string out;
    for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_formula(s.antecedent[i], notation);
    }
    if (!out.empty()) out += ' ';
    out += notation == Notation::Ascii ? "->" : "\xE2\x9F\xB6";
    out += ' ';
    out += format_formula(s.succedent, notation);
    return out;
}

}  // namespace sllm
