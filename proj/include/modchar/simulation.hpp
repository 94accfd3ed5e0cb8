// ============================================================================
// simulation.hpp — Bisimulation, n-bisimulation and weak simulation
// ============================================================================
//
// All procedures work on finite pointed models and compute greatest
// fixpoints by deleting violating pairs from an over-approximation until
// stable.  Weak simulations differ from plain simulations by their escape
// clauses: a successor that is bisimilar to the empty loopstate may be left
// unmatched on the forth side, and a successor bisimilar to the full
// loopstate may be left unmatched on the back side.
//
// ============================================================================

#ifndef MODCHAR_SIMULATION_HPP
#define MODCHAR_SIMULATION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modchar/model.hpp"

namespace modchar {

// A set of state pairs between two models, the left one fixed first.  Pairs
// are stored by state name so relations survive serialization.
struct Relation {
    PointedModel left;
    PointedModel right;
    std::vector<std::pair<std::string, std::string>> pairs;

    // Validates that every pair component names a state of its model.
    static Relation make(PointedModel left, PointedModel right,
                         std::vector<std::pair<std::string, std::string>> pairs);

    bool contains(const std::string& l, const std::string& r) const;

    std::string pairs_to_json() const;
    static std::vector<std::pair<std::string, std::string>> pairs_from_json(
        const std::string& json_text);
};

// The identity relation on m.
Relation identity_relation(const PointedModel& m);

// Relational composition; requires z1.right and z2.left to be the same
// model (structurally).
Relation compose(const Relation& z1, const Relation& z2);

// The converse relation, with left/right models swapped.
Relation converse(const Relation& z);

// ── Loopstate tests ──────────────────────────────────────────────────────

enum class Loopstate { Empty, Full };

// True iff (m, point) is bisimilar to the chosen loopstate, decided
// directly: every state reachable from the point must carry the empty
// (resp. full) colour and have at least one successor.
bool bisim_to_loopstate(const PointedModel& m, Loopstate which);

// Same test for every state of m at once (state-indexed).
std::vector<bool> loopstate_states(const PointedModel& m, Loopstate which);

// ── Bisimulation ─────────────────────────────────────────────────────────

// Greatest bisimulation between a and b restricted to the pairs reachable
// from (point, point); nullopt when the points are not bisimilar.
std::optional<Relation> bisimulation_witness(const PointedModel& a, const PointedModel& b);

bool bisimilar(const PointedModel& a, const PointedModel& b);

// Stratified n-round refinement; true when the points survive n rounds
// starting from colour agreement.  Requires n >= 1.
bool n_bisimilar(const PointedModel& a, const PointedModel& b, int n);

// ── Weak simulation ──────────────────────────────────────────────────────

// Greatest weak simulation from a into b restricted to pairs reachable
// from (point, point); nullopt when the points are not related, i.e. when
// no weak simulation witnesses a -> b.
std::optional<Relation> weak_simulation_witness(const PointedModel& a, const PointedModel& b);

// True iff some weak simulation relates a's point to b's point ("b weakly
// simulates a").
bool weak_simulates(const PointedModel& a, const PointedModel& b);

// Clause-by-clause verification of a given relation, including membership
// of the two points.
bool is_weak_simulation(const Relation& z);

}  // namespace modchar

#endif  // MODCHAR_SIMULATION_HPP
