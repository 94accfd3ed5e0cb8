// ============================================================================
// formula.hpp — Modal formulas in negation normal form
// ============================================================================
//
// Formulas are immutable trees with shared subterms.  Negation exists only
// as a leaf applied to a propositional variable (NegAtom); the parser pushes
// surface-level negation inward, so every Formula is in negation normal
// form by construction.  And/Or are n-ary: the factory functions flatten
// nested nodes of the same kind and collapse singleton lists, so after
// construction every And/Or has at least two children.
//
// ============================================================================

#ifndef MODCHAR_FORMULA_HPP
#define MODCHAR_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modchar {

class PropSignature {
public:
    PropSignature() = default;

    // Names must be distinct and non-empty.
    explicit PropSignature(std::vector<std::string> names);

    // Builds a signature with a (P;Q) partition: P listed first, then Q.
    // P and Q must be disjoint.
    static PropSignature with_partition(std::vector<std::string> positive,
                                        std::vector<std::string> negated);

    const std::vector<std::string>& names() const noexcept { return names_; }
    std::size_t size() const noexcept { return names_.size(); }
    bool empty() const noexcept { return names_.empty(); }

    bool contains(const std::string& name) const;
    // Index into names(), or -1 when absent.
    int index_of(const std::string& name) const;

    bool has_partition() const noexcept { return has_partition_; }
    const std::vector<std::string>& positive_part() const { return positive_; }
    const std::vector<std::string>& negated_part() const { return negated_; }

    bool operator==(const PropSignature& o) const { return names_ == o.names_; }
    bool operator!=(const PropSignature& o) const { return !(*this == o); }

private:
    std::vector<std::string> names_;
    std::vector<std::string> positive_, negated_;
    bool has_partition_ = false;
};

class Formula {
public:
    enum class Kind : std::uint8_t { Top, Bot, Atom, NegAtom, And, Or, Dia, Box };

    // ── Factories ───────────────────────────────────────────────────────
    static Formula top();
    static Formula bot();
    static Formula atom(std::string name);
    static Formula neg_atom(std::string name);
    // conj/disj flatten nested same-kind children and collapse singletons;
    // the list must be non-empty.
    static Formula conj(std::vector<Formula> children);
    static Formula disj(std::vector<Formula> children);
    static Formula dia(Formula child);
    static Formula box(Formula child);

    Kind kind() const noexcept { return node_->kind; }
    bool is(Kind k) const noexcept { return node_->kind == k; }

    // Atom/NegAtom only.
    const std::string& name() const;
    // And/Or only; size >= 2.
    const std::vector<Formula>& children() const;
    // Dia/Box only.
    const Formula& child() const;

    // Total order on formula trees (kind rank, then name, then children).
    // Used for canonical sorting and deduplication.
    int compare(const Formula& o) const;
    bool operator==(const Formula& o) const { return compare(o) == 0; }
    bool operator!=(const Formula& o) const { return compare(o) != 0; }
    bool operator<(const Formula& o) const { return compare(o) < 0; }

    // Stable address of the shared node, usable as a memoization key while
    // the formula is alive.
    const void* id() const noexcept { return node_.get(); }

private:
    struct Node {
        Kind kind;
        std::string name;            // Atom/NegAtom
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// ── Connective sets ──────────────────────────────────────────────────────
// A fragment is identified by the set of connectives it may use.  Atoms are
// always allowed; Top/Bot/NegAtom are tracked as connectives.

struct Connectives {
    bool conj = false, disj = false, dia = false, box = false;
    bool top = false, bot = false, neg_atom = false;

    bool subset_of(const Connectives& o) const noexcept;
    bool operator==(const Connectives& o) const = default;

    // { And, Or, Dia, Box }, the positive fragment without constants.
    static Connectives positive();
    // All seven connectives.
    static Connectives full();
};

// The set of connectives occurring in f.
Connectives connectives_of(const Formula& f);

// True when f uses only connectives from s.
bool in_fragment(const Formula& f, const Connectives& s);

// ── Parsing and printing ────────────────────────────────────────────────

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg), position(pos) {}
    std::size_t position;
};

// Grammar:
//   formula := disj ; disj := conj ("|" conj)* ; conj := unary ("&" unary)* ;
//   unary := "<>" unary | "[]" unary | "~" unary | atom | "true" | "false"
//          | "(" formula ")" ;
//   atom := letter (letter|digit|"_")*
// General negation is accepted on the surface and pushed to the atoms, so
// the result is always in negation normal form.  Unknown proposition names
// are rejected against sig.
Formula parse_formula(const std::string& text, const PropSignature& sig);

// Inverse of parse_formula up to structural identity: parsing the printed
// form reproduces the tree.
std::string to_string(const Formula& f);

// ── Structural measures and transformations ─────────────────────────────

int modal_depth(const Formula& f);

// Number of distinct subformulas (shared subterms counted once).
std::size_t formula_size(const Formula& f);

// Dualization: swaps Box/Dia and And/Or (and Top/Bot), fixes atoms.
// Rejects NegAtom input.
Formula dual(const Formula& f);

// Substitutes every atom by its negation and eliminates double negations:
// Atom p <-> NegAtom p everywhere.  A syntactic involution.
Formula flip_formula(const Formula& f);

// Negation normal form of the negation of f.  On the {Box,Dia,And,Or}
// fragment this coincides with flip_formula(dual(f)).
Formula negate_nnf(const Formula& f);

// Fresh variable name standing for "not q" in the uniform-fragment
// reduction.
std::string uniform_negated_name(const std::string& q);

// Replaces NegAtom q by Atom q_neg for q in negated_props.  Requires f to be
// uniform: NegAtom only on negated_props, Atom never on negated_props.
Formula uniform_flip(const Formula& f, const std::vector<std::string>& negated_props);

// ── Height formulas ─────────────────────────────────────────────────────
//
// Standard:  Box^{n+1} false /\ Dia^n true, true exactly on models of
//            height n.
// TopFree:   Box^{n+1} false /\ Dia^n Box false, the equivalent form
//            without the constant true.
// Negation:  Dia^{n+1} true \/ Box^n Dia true, the negation normal form of
//            the standard formula's negation.

enum class HeightVariant { Standard, TopFree, Negation };

Formula height_formula(int n, HeightVariant variant = HeightVariant::Standard);

// Dia^n f and Box^n f.
Formula dia_power(int n, Formula f);
Formula box_power(int n, Formula f);

}  // namespace modchar

#endif  // MODCHAR_FORMULA_HPP
