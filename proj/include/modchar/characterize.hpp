// ============================================================================
// characterize.hpp — Finite characterisations for {Box,Dia,And,Or} formulas
// ============================================================================
//
// Positive examples are built from the Fine normal form by gluing smaller
// examples below fresh roots, one construction per basic-normal-form shape.
// Negative examples need no separate construction: they are the positive
// examples of the dualized formula with every colour complemented.  The two
// sets form a weak-simulation duality, which makes them a finite
// characterisation of the input formula within the fragment.
//
// ============================================================================

#ifndef MODCHAR_CHARACTERIZE_HPP
#define MODCHAR_CHARACTERIZE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modchar/model.hpp"
#include "modchar/normalform.hpp"

namespace modchar {

struct CharacterizeLimits {
    NormalFormLimits normal_form{};
    // Cap on the size of any intermediate or final example set.  Deep box
    // nesting exceeds every practical budget by design; the guard turns
    // that into a clean SizeLimitError.
    std::size_t max_examples = 200'000;
};

struct Characterization {
    Formula formula;
    std::vector<PointedModel> positives;
    std::vector<PointedModel> negatives;
};

// Labeled example pair outcome: on a failed fit the offending example and
// its polarity are reported.
struct FitResult {
    bool ok = true;
    std::optional<PointedModel> counterexample;
    bool counterexample_positive = false;

    explicit operator bool() const noexcept { return ok; }
};

// ── Positive examples ────────────────────────────────────────────────────

// The recursive example construction, one case per basic-normal-form
// shape; disjunctions take the union of their disjuncts' sets.  The result
// is deduplicated up to isomorphism and sorted for reproducible output.
std::vector<PointedModel> pos_examples(const NormalForm& nf, const PropSignature& sig,
                                       const CharacterizeLimits& limits = {});

// ── Characterisation ─────────────────────────────────────────────────────

// Builds (E+, E-) for f: positives from the normal form of f, negatives by
// flipping the colours of the positives of dual(f).  Requires f in the
// {Box,Dia,And,Or} fragment.  The fit of f against the result is verified
// before returning; a violation would indicate a bug and raises
// std::logic_error.
Characterization characterize(const Formula& f, const PropSignature& sig,
                              const CharacterizeLimits& limits = {});

// True iff f holds on every positive and fails on every negative example.
FitResult fits(const Formula& f, const std::vector<PointedModel>& positives,
               const std::vector<PointedModel>& negatives);
FitResult fits(const Formula& f, const Characterization& c);

// The single-example characterisations of the truth constants: the empty
// loopstate is the positive example for Top, the full loopstate the
// negative example for Bot.
struct TopBotExamples {
    PointedModel top_positive;
    PointedModel bot_negative;
};
TopBotExamples extend_top_bot(const PropSignature& sig);

// ── Uniform formulas ─────────────────────────────────────────────────────

// Characterises f in the uniform fragment over (positive_props;
// negated_props): f is rewritten over the enlarged positive signature by
// renaming each negated atom q to the fresh atom q_neg, characterised
// there, and the examples are mapped back by decoding q_neg as the absence
// of q.  The fit of f itself is verified over the original signature.
Characterization characterize_uniform(const Formula& f,
                                      const std::vector<std::string>& positive_props,
                                      const std::vector<std::string>& negated_props,
                                      const CharacterizeLimits& limits = {});

// ── Minimality spoilers ──────────────────────────────────────────────────

// For a member of the positive example set of Box^{n+1} prop, returns a
// fragment formula that is refuted on exactly that member and satisfied on
// every other member of the set.  Throws std::invalid_argument when the
// model is not (isomorphic to) a member of the constructed set.
Formula minimality_spoiler(const PointedModel& target, int n, const std::string& prop,
                           const CharacterizeLimits& limits = {});

// ── Tower table ──────────────────────────────────────────────────────────

// tower(1, m) = m, tower(k+1, m) = 2^tower(k, m).
std::uint64_t tower(int n, std::uint64_t m);

struct TowerRow {
    int n;
    std::uint64_t constructed;  // |E+| for Box^n p after isomorphism dedup
    std::uint64_t expected;     // tower(n, 2)
};

// Rows for n = 1..max_n over the one-proposition signature {p}.
// Guarded at max_n <= 4; the n = 4 row already takes 65536 examples.
std::vector<TowerRow> tower_table(int max_n, const CharacterizeLimits& limits = {});

}  // namespace modchar

#endif  // MODCHAR_CHARACTERIZE_HPP
