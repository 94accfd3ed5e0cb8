#include "modchar/formula.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace modchar {

// ── PropSignature ────────────────────────────────────────────────────────

PropSignature::PropSignature(std::vector<std::string> names) : names_(std::move(names)) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw std::invalid_argument("empty proposition name");
        if (!seen.insert(n).second)
            throw std::invalid_argument("duplicate proposition name: " + n);
    }
}

PropSignature PropSignature::with_partition(std::vector<std::string> positive,
                                            std::vector<std::string> negated) {
    std::vector<std::string> all = positive;
    all.insert(all.end(), negated.begin(), negated.end());
    PropSignature sig(std::move(all));  // checks disjointness via duplicates
    sig.positive_ = std::move(positive);
    sig.negated_ = std::move(negated);
    sig.has_partition_ = true;
    return sig;
}

bool PropSignature::contains(const std::string& name) const {
    return index_of(name) >= 0;
}

int PropSignature::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

// ── Formula factories ────────────────────────────────────────────────────

Formula Formula::top() {
    return Formula(std::make_shared<const Node>(Node{Kind::Top, {}, {}}));
}

Formula Formula::bot() {
    return Formula(std::make_shared<const Node>(Node{Kind::Bot, {}, {}}));
}

Formula Formula::atom(std::string name) {
    return Formula(std::make_shared<const Node>(Node{Kind::Atom, std::move(name), {}}));
}

Formula Formula::neg_atom(std::string name) {
    return Formula(std::make_shared<const Node>(Node{Kind::NegAtom, std::move(name), {}}));
}

static std::vector<Formula> flatten(Formula::Kind kind, std::vector<Formula> children) {
    std::vector<Formula> flat;
    flat.reserve(children.size());
    for (auto& c : children) {
        if (c.kind() == kind) {
            for (const auto& g : c.children()) flat.push_back(g);
        } else {
            flat.push_back(std::move(c));
        }
    }
    return flat;
}

Formula Formula::conj(std::vector<Formula> children) {
    if (children.empty()) throw std::invalid_argument("conj: empty child list");
    auto flat = flatten(Kind::And, std::move(children));
    if (flat.size() == 1) return flat.front();
    return Formula(std::make_shared<const Node>(Node{Kind::And, {}, std::move(flat)}));
}

Formula Formula::disj(std::vector<Formula> children) {
    if (children.empty()) throw std::invalid_argument("disj: empty child list");
    auto flat = flatten(Kind::Or, std::move(children));
    if (flat.size() == 1) return flat.front();
    return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, std::move(flat)}));
}

Formula Formula::dia(Formula child) {
    return Formula(std::make_shared<const Node>(Node{Kind::Dia, {}, {std::move(child)}}));
}

Formula Formula::box(Formula child) {
    return Formula(std::make_shared<const Node>(Node{Kind::Box, {}, {std::move(child)}}));
}

const std::string& Formula::name() const {
    if (kind() != Kind::Atom && kind() != Kind::NegAtom)
        throw std::logic_error("Formula::name on non-atom");
    return node_->name;
}

const std::vector<Formula>& Formula::children() const {
    if (kind() != Kind::And && kind() != Kind::Or)
        throw std::logic_error("Formula::children on non-And/Or");
    return node_->children;
}

const Formula& Formula::child() const {
    if (kind() != Kind::Dia && kind() != Kind::Box)
        throw std::logic_error("Formula::child on non-modal node");
    return node_->children.front();
}

int Formula::compare(const Formula& o) const {
    if (node_ == o.node_) return 0;
    if (node_->kind != o.node_->kind)
        return static_cast<int>(node_->kind) < static_cast<int>(o.node_->kind) ? -1 : 1;
    if (int c = node_->name.compare(o.node_->name); c != 0) return c < 0 ? -1 : 1;
    const auto& a = node_->children;
    const auto& b = o.node_->children;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (int c = a[i].compare(b[i]); c != 0) return c;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

// ── Connectives ──────────────────────────────────────────────────────────

bool Connectives::subset_of(const Connectives& o) const noexcept {
    return (!conj || o.conj) && (!disj || o.disj) && (!dia || o.dia) &&
           (!box || o.box) && (!top || o.top) && (!bot || o.bot) &&
           (!neg_atom || o.neg_atom);
}

Connectives Connectives::positive() {
    Connectives c;
    c.conj = c.disj = c.dia = c.box = true;
    return c;
}

Connectives Connectives::full() {
    Connectives c;
    c.conj = c.disj = c.dia = c.box = c.top = c.bot = c.neg_atom = true;
    return c;
}

Connectives connectives_of(const Formula& f) {
    Connectives c;
    switch (f.kind()) {
        case Formula::Kind::Top: c.top = true; break;
        case Formula::Kind::Bot: c.bot = true; break;
        case Formula::Kind::Atom: break;
        case Formula::Kind::NegAtom: c.neg_atom = true; break;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            if (f.kind() == Formula::Kind::And) c.conj = true; else c.disj = true;
            for (const auto& g : f.children()) {
                Connectives d = connectives_of(g);
                c.conj |= d.conj; c.disj |= d.disj; c.dia |= d.dia; c.box |= d.box;
                c.top |= d.top; c.bot |= d.bot; c.neg_atom |= d.neg_atom;
            }
            break;
        }
        case Formula::Kind::Dia:
        case Formula::Kind::Box: {
            if (f.kind() == Formula::Kind::Dia) c.dia = true; else c.box = true;
            Connectives d = connectives_of(f.child());
            c.conj |= d.conj; c.disj |= d.disj; c.dia |= d.dia; c.box |= d.box;
            c.top |= d.top; c.bot |= d.bot; c.neg_atom |= d.neg_atom;
            break;
        }
    }
    return c;
}

bool in_fragment(const Formula& f, const Connectives& s) {
    return connectives_of(f).subset_of(s);
}

// ── Parser ───────────────────────────────────────────────────────────────

namespace {

class Parser {
public:
    Parser(const std::string& text, const PropSignature& sig) : text_(text), sig_(sig) {}

    Formula run() {
        Formula f = parse_disj(false);
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    // `negated` tracks the polarity accumulated from surface-level "~",
    // so negation is pushed inward in a single pass.
    Formula parse_disj(bool negated) {
        std::vector<Formula> parts{parse_conj(negated)};
        while (try_consume("|")) parts.push_back(parse_conj(negated));
        if (parts.size() == 1) return parts.front();
        return negated ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }

    Formula parse_conj(bool negated) {
        std::vector<Formula> parts{parse_unary(negated)};
        while (try_consume("&")) parts.push_back(parse_unary(negated));
        if (parts.size() == 1) return parts.front();
        return negated ? Formula::disj(std::move(parts)) : Formula::conj(std::move(parts));
    }

    Formula parse_unary(bool negated) {
        skip_ws();
        if (try_consume("<>")) {
            Formula c = parse_unary(negated);
            return negated ? Formula::box(c) : Formula::dia(c);
        }
        if (try_consume("[]")) {
            Formula c = parse_unary(negated);
            return negated ? Formula::dia(c) : Formula::box(c);
        }
        if (try_consume("~")) return parse_unary(!negated);
        if (try_consume("(")) {
            Formula f = parse_disj(negated);
            if (!try_consume(")")) fail("expected ')'");
            return f;
        }
        return parse_atom(negated);
    }

    Formula parse_atom(bool negated) {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_]))))
            fail("expected formula");
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string word = text_.substr(start, pos_ - start);
        if (word == "true") return negated ? Formula::bot() : Formula::top();
        if (word == "false") return negated ? Formula::top() : Formula::bot();
        if (!sig_.contains(word))
            throw ParseError("unknown proposition name: " + word, start);
        return negated ? Formula::neg_atom(word) : Formula::atom(word);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool try_consume(const char* tok) {
        skip_ws();
        std::size_t len = std::char_traits<char>::length(tok);
        if (text_.compare(pos_, len, tok) == 0) {
            pos_ += len;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    const std::string& text_;
    const PropSignature& sig_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text, const PropSignature& sig) {
    return Parser(text, sig).run();
}

// ── Printer ──────────────────────────────────────────────────────────────

namespace {

// Precedence levels: 0 = disjunction, 1 = conjunction, 2 = unary.
void print_rec(const Formula& f, int level, std::string& out) {
    auto parens = [&](int needed, auto&& body) {
        bool wrap = needed < level;
        if (wrap) out += '(';
        body();
        if (wrap) out += ')';
    };
    switch (f.kind()) {
        case Formula::Kind::Top: out += "true"; break;
        case Formula::Kind::Bot: out += "false"; break;
        case Formula::Kind::Atom: out += f.name(); break;
        case Formula::Kind::NegAtom: out += '~'; out += f.name(); break;
        case Formula::Kind::Or:
            parens(0, [&] {
                bool first = true;
                for (const auto& c : f.children()) {
                    if (!first) out += " | ";
                    first = false;
                    print_rec(c, 1, out);
                }
            });
            break;
        case Formula::Kind::And:
            parens(1, [&] {
                bool first = true;
                for (const auto& c : f.children()) {
                    if (!first) out += " & ";
                    first = false;
                    print_rec(c, 2, out);
                }
            });
            break;
        case Formula::Kind::Dia:
            out += "<>";
            print_rec(f.child(), 2, out);
            break;
        case Formula::Kind::Box:
            out += "[]";
            print_rec(f.child(), 2, out);
            break;
    }
}

}  // namespace

std::string to_string(const Formula& f) {
    std::string out;
    print_rec(f, 0, out);
    return out;
}

// ── Measures ─────────────────────────────────────────────────────────────

int modal_depth(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Top:
        case Formula::Kind::Bot:
        case Formula::Kind::Atom:
        case Formula::Kind::NegAtom:
            return 0;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            int d = 0;
            for (const auto& c : f.children()) d = std::max(d, modal_depth(c));
            return d;
        }
        case Formula::Kind::Dia:
        case Formula::Kind::Box:
            return 1 + modal_depth(f.child());
    }
    return 0;
}

namespace {

void collect_subformulas(const Formula& f, std::vector<std::string>& keys,
                         std::unordered_set<std::string>& seen) {
    std::string k = to_string(f);
    if (!seen.insert(k).second) return;
    keys.push_back(std::move(k));
    switch (f.kind()) {
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (const auto& c : f.children()) collect_subformulas(c, keys, seen);
            break;
        case Formula::Kind::Dia:
        case Formula::Kind::Box:
            collect_subformulas(f.child(), keys, seen);
            break;
        default:
            break;
    }
}

}  // namespace

std::size_t formula_size(const Formula& f) {
    std::vector<std::string> keys;
    std::unordered_set<std::string> seen;
    collect_subformulas(f, keys, seen);
    return keys.size();
}

// ── Transformations ──────────────────────────────────────────────────────

Formula dual(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Top: return Formula::bot();
        case Formula::Kind::Bot: return Formula::top();
        case Formula::Kind::Atom: return f;
        case Formula::Kind::NegAtom:
            throw std::invalid_argument("dual: negated atom not in the dualizable fragment");
        case Formula::Kind::And: {
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) cs.push_back(dual(c));
            return Formula::disj(std::move(cs));
        }
        case Formula::Kind::Or: {
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) cs.push_back(dual(c));
            return Formula::conj(std::move(cs));
        }
        case Formula::Kind::Dia: return Formula::box(dual(f.child()));
        case Formula::Kind::Box: return Formula::dia(dual(f.child()));
    }
    throw std::logic_error("dual: unreachable");
}

Formula flip_formula(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Top:
        case Formula::Kind::Bot:
            return f;
        case Formula::Kind::Atom: return Formula::neg_atom(f.name());
        case Formula::Kind::NegAtom: return Formula::atom(f.name());
        case Formula::Kind::And: {
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) cs.push_back(flip_formula(c));
            return Formula::conj(std::move(cs));
        }
        case Formula::Kind::Or: {
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) cs.push_back(flip_formula(c));
            return Formula::disj(std::move(cs));
        }
        case Formula::Kind::Dia: return Formula::dia(flip_formula(f.child()));
        case Formula::Kind::Box: return Formula::box(flip_formula(f.child()));
    }
    throw std::logic_error("flip_formula: unreachable");
}

Formula negate_nnf(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Top: return Formula::bot();
        case Formula::Kind::Bot: return Formula::top();
        case Formula::Kind::Atom: return Formula::neg_atom(f.name());
        case Formula::Kind::NegAtom: return Formula::atom(f.name());
        case Formula::Kind::And: {
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) cs.push_back(negate_nnf(c));
            return Formula::disj(std::move(cs));
        }
        case Formula::Kind::Or: {
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) cs.push_back(negate_nnf(c));
            return Formula::conj(std::move(cs));
        }
        case Formula::Kind::Dia: return Formula::box(negate_nnf(f.child()));
        case Formula::Kind::Box: return Formula::dia(negate_nnf(f.child()));
    }
    throw std::logic_error("negate_nnf: unreachable");
}

std::string uniform_negated_name(const std::string& q) { return q + "_neg"; }

namespace {

Formula uniform_flip_rec(const Formula& f, const std::vector<std::string>& q) {
    auto in_q = [&](const std::string& n) {
        return std::find(q.begin(), q.end(), n) != q.end();
    };
    switch (f.kind()) {
        case Formula::Kind::Top:
        case Formula::Kind::Bot:
            return f;
        case Formula::Kind::Atom:
            if (in_q(f.name()))
                throw std::invalid_argument(
                    "uniform_flip: unnegated occurrence of negated-only variable " + f.name());
            return f;
        case Formula::Kind::NegAtom:
            if (!in_q(f.name()))
                throw std::invalid_argument(
                    "uniform_flip: negated occurrence of positive-only variable " + f.name());
            return Formula::atom(uniform_negated_name(f.name()));
        case Formula::Kind::And: {
            std::vector<Formula> cs;
            for (const auto& c : f.children()) cs.push_back(uniform_flip_rec(c, q));
            return Formula::conj(std::move(cs));
        }
        case Formula::Kind::Or: {
            std::vector<Formula> cs;
            for (const auto& c : f.children()) cs.push_back(uniform_flip_rec(c, q));
            return Formula::disj(std::move(cs));
        }
        case Formula::Kind::Dia: return Formula::dia(uniform_flip_rec(f.child(), q));
        case Formula::Kind::Box: return Formula::box(uniform_flip_rec(f.child(), q));
    }
    throw std::logic_error("uniform_flip: unreachable");
}

}  // namespace

Formula uniform_flip(const Formula& f, const std::vector<std::string>& negated_props) {
    return uniform_flip_rec(f, negated_props);
}

// ── Height formulas ──────────────────────────────────────────────────────

Formula dia_power(int n, Formula f) {
    for (int i = 0; i < n; ++i) f = Formula::dia(std::move(f));
    return f;
}

Formula box_power(int n, Formula f) {
    for (int i = 0; i < n; ++i) f = Formula::box(std::move(f));
    return f;
}

Formula height_formula(int n, HeightVariant variant) {
    if (n < 0) throw std::invalid_argument("height_formula: negative level");
    switch (variant) {
        case HeightVariant::Standard:
            return Formula::conj({box_power(n + 1, Formula::bot()),
                                  dia_power(n, Formula::top())});
        case HeightVariant::TopFree:
            return Formula::conj({box_power(n + 1, Formula::bot()),
                                  dia_power(n, Formula::box(Formula::bot()))});
        case HeightVariant::Negation:
            return Formula::disj({dia_power(n + 1, Formula::top()),
                                  box_power(n, Formula::dia(Formula::top()))});
    }
    throw std::logic_error("height_formula: unreachable");
}

}  // namespace modchar
