// ============================================================================
// normalform.hpp — Fine normal form for the {Box,Dia,And,Or} fragment
// ============================================================================
//
// A basic normal form is a non-empty conjunction
//
//     pi /\ Dia f_1 /\ ... /\ Dia f_n /\ Box (g_1 \/ ... \/ g_m)
//
// where pi is a (possibly empty) set of positive atoms and every f_i, g_j
// is again a basic normal form of strictly smaller level.  A normal form is
// a non-empty disjunction of basic normal forms.  Truth constants never
// appear: the non-emptiness requirements exclude them.
//
// Rewriting distributes diamonds over disjunctions, merges conjoined boxes
// into one, and distributes conjunction over disjunction, innermost first.
// Duplicate conjuncts and disjuncts are removed under the canonical
// ordering; the inherent exponential growth is bounded by a configurable
// disjunct budget.
//
// ============================================================================

#ifndef MODCHAR_NORMALFORM_HPP
#define MODCHAR_NORMALFORM_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modchar/formula.hpp"

namespace modchar {

// Thrown when a rewrite or construction exceeds its configured budget.
struct SizeLimitError : std::runtime_error {
    explicit SizeLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NormalFormLimits {
    std::size_t max_disjuncts = 1'000'000;
};

struct BasicNormalForm {
    std::vector<std::string> atoms;                       // sorted, distinct
    std::vector<BasicNormalForm> diamonds;                // sorted, deduplicated
    std::optional<std::vector<BasicNormalForm>> box;      // non-empty when present
    int level = 0;                                        // modal nesting depth

    int compare(const BasicNormalForm& o) const;
    bool operator==(const BasicNormalForm& o) const { return compare(o) == 0; }
    bool operator<(const BasicNormalForm& o) const { return compare(o) < 0; }
};

struct NormalForm {
    std::vector<BasicNormalForm> disjuncts;  // non-empty, sorted, deduplicated
    int level = 0;                           // max disjunct level
};

// The four shapes a basic normal form can take.
enum class BnfCase {
    AtomsOnly,        // (i)   positive atoms, no modal part
    DiamondsNoBox,    // (ii)  pi + diamonds
    BoxNoDiamonds,    // (iii) pi + box
    DiamondsAndBox,   // (iv)  pi + diamonds + box
};

// Shape classification; throws std::invalid_argument on malformed input
// (empty conjunction, or modal parts on a level-0 form).
BnfCase classify_bnf(const BasicNormalForm& b);

// Checks the structural invariants of a basic normal form, including level
// bookkeeping of all children.
bool bnf_well_formed(const BasicNormalForm& b);

// Rewrites f into Fine normal form.  Requires f to lie in the
// {Box,Dia,And,Or} fragment; Top, Bot and negated atoms are rejected.
// The result is logically equivalent to f and its level equals
// modal_depth(f).
NormalForm to_normal_form(const Formula& f, const NormalFormLimits& limits = {});

// Renders back to a plain formula.
Formula bnf_to_formula(const BasicNormalForm& b);
Formula nf_to_formula(const NormalForm& nf);

}  // namespace modchar

#endif  // MODCHAR_NORMALFORM_HPP
