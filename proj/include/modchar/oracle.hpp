// ============================================================================
// oracle.hpp — Independent verification machinery
// ============================================================================
//
// Everything here exists to check the example constructions against their
// claimed properties by routes independent of the constructions themselves:
// a modal-K tableau for satisfiability and equivalence, bounded enumerators
// for formulas and models, the duality / uniqueness / preservation
// verifiers, and the full-language spoiler that defeats any finite example
// set once truth constants are available.
//
// The verifier scans are data-parallel over independent candidates.  A
// `jobs` argument of 1 runs the plain serial loop; larger values run the
// same scan under OpenMP, and the reports are merged in candidate order so
// both paths produce identical output.
//
// ============================================================================

#ifndef MODCHAR_ORACLE_HPP
#define MODCHAR_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "modchar/characterize.hpp"
#include "modchar/model.hpp"

namespace modchar {

// ── Satisfiability ───────────────────────────────────────────────────────

struct SatResult {
    bool satisfiable = false;
    // A finite tree model of depth at most modal_depth(f), present exactly
    // when satisfiable.
    std::optional<PointedModel> witness;
};

// Tableau for the modal logic K on formulas in negation normal form:
// conjunctions and disjunctions are saturated (with branching), then every
// diamond is expanded against the box residue one modal step down.
SatResult sat_K(const Formula& f, const PropSignature& sig);

bool entails(const Formula& f, const Formula& g, const PropSignature& sig);

struct EquivalenceResult {
    bool equivalent = true;
    // When not equivalent: a model satisfying exactly one of the two, and
    // which one it satisfies.
    std::optional<PointedModel> separator;
    bool separator_satisfies_left = false;

    explicit operator bool() const noexcept { return equivalent; }
};

EquivalenceResult equivalent(const Formula& f, const Formula& g, const PropSignature& sig);

// ── Enumeration ──────────────────────────────────────────────────────────

// Formula size used by the enumerator and its bounds: the number of leaf
// occurrences plus the number of modal operators.  And/Or contribute no
// weight of their own, but their children must be at least two distinct
// formulas, which keeps every bound finite.
std::size_t formula_weight(const Formula& f);

struct FragmentSpec {
    Connectives allowed = Connectives::positive();
    // When set, leaves are restricted to unnegated atoms from `first` and
    // negated atoms from `second` (the uniform fragment).
    std::optional<std::pair<std::vector<std::string>, std::vector<std::string>>> uniform;
};

// All fragment formulas over sig with modal depth <= max_depth and weight
// <= max_size, one representative per associativity / commutativity /
// idempotence class (n-ary connectives, children sorted and distinct).
// Sorted by (weight, printed form).
std::vector<Formula> enumerate_formulas(const PropSignature& sig, const FragmentSpec& fragment,
                                        int max_depth, std::size_t max_size);

// All pointed models over sig with at most max_states states, up to
// point-preserving isomorphism.  Guarded at max_states <= 4.
std::vector<PointedModel> enumerate_models(const PropSignature& sig, int max_states);

// ── Random generation ────────────────────────────────────────────────────

PointedModel random_model(std::mt19937_64& rng, const PropSignature& sig, int min_states,
                          int max_states, double edge_density);

Formula random_formula(std::mt19937_64& rng, const PropSignature& sig,
                       const Connectives& allowed, int max_depth);

// Random formula of the uniform fragment over (positive; negated) atoms.
Formula random_uniform_formula(std::mt19937_64& rng,
                               const std::vector<std::string>& positive_props,
                               const std::vector<std::string>& negated_props, int max_depth);

// ── Verification reports ─────────────────────────────────────────────────

struct Counterexample {
    std::string reason;
    std::optional<Formula> formula;
    std::optional<PointedModel> model;
};

struct VerificationReport {
    bool pass = true;
    std::vector<Counterexample> counterexamples;
    std::uint64_t candidates = 0;
    double elapsed_seconds = 0.0;

    std::string to_json() const;
    std::string to_text() const;
};

// ── Verifiers ────────────────────────────────────────────────────────────

struct UniqueBounds {
    int max_depth = 2;
    std::size_t max_size = 7;
    FragmentSpec fragment{};
};

// Checks that every enumerated fragment formula fitting the labeled
// examples is equivalent to f.
VerificationReport verify_unique(const Formula& f, const Characterization& c,
                                 const UniqueBounds& bounds, int jobs = 1);

struct DualityBounds {
    int exhaustive_states = 3;
    int sample_count = 500;
    int sample_min_states = 4;
    int sample_max_states = 6;
    double edge_density = 0.5;
    std::uint64_t seed = 0;
};

// Checks, over all small models and a random sample of larger ones, that
// exactly one of the two halves holds for each model m: some positive
// example maps into m by a weak simulation, or m maps into some negative
// example; and that the first half holds exactly on the models of f.
VerificationReport verify_duality(const Formula& f, const Characterization& c,
                                  const DualityBounds& bounds, int jobs = 1);

struct PreservationBounds {
    int sample_count = 1000;
    int formula_depth = 3;
    int min_states = 1;
    int max_states = 6;
    double edge_density = 0.5;
    std::uint64_t seed = 0;
};

// Samples weakly related model pairs and checks that fragment truth never
// drops along the relation.
VerificationReport verify_preservation(const PropSignature& sig,
                                       const PreservationBounds& bounds, int jobs = 1);

// ── Full-language spoiler ────────────────────────────────────────────────

struct SpoilerResult {
    Formula spoiler;
    // True in the box-bounded case (the input entails Box^k false for some
    // k), where the spoiler weakens the formula by a height disjunct;
    // otherwise the spoiler strengthens it by a negated height conjunct.
    bool box_bounded = false;
    int height_level = 0;
    // A model separating the input from the spoiler.
    PointedModel witness;
};

// Given labeled examples fit by f (over the full language), produces a
// non-equivalent formula that still fits them, together with the
// separating model.
SpoilerResult spoiler_full_language(const Formula& f,
                                    const std::vector<PointedModel>& positives,
                                    const std::vector<PointedModel>& negatives,
                                    const PropSignature& sig);

// ── Fixtures ─────────────────────────────────────────────────────────────

// Four concrete models witnessing that pointed models with weak simulations
// admit no coproducts: a and b each map into both c and c_prime, yet no
// single model below both could satisfy everything a and b jointly force.
struct CoproductFixtures {
    PointedModel a, b, c, c_prime;
};

// Requires sig to contain p, q and r.
CoproductFixtures coproduct_fixtures(const PropSignature& sig);

}  // namespace modchar

#endif  // MODCHAR_ORACLE_HPP
