// Test-only brute-force oracles, kept independent of the tableau and the
// canonical enumerator they are used to check.

#ifndef MODCHAR_TESTS_BRUTE_HPP
#define MODCHAR_TESTS_BRUTE_HPP

#include <vector>

#include "modchar/formula.hpp"
#include "modchar/model.hpp"

namespace modchar::testsupport {

// Number of distinct diamond subformulas of f; a branching bound for tree
// models of satisfiable formulas.
int distinct_diamonds(const Formula& f);

// All tree models over sig of depth <= depth with at most `branching`
// pairwise distinct subtrees per node.
std::vector<PointedModel> all_tree_models(const PropSignature& sig, int depth, int branching);

// Exhaustive satisfiability search over the trees above.
bool exhaustive_tree_sat(const Formula& f, const PropSignature& sig, int depth, int branching);

// Every formula tree of the {Box,Dia,And,Or} fragment with binary
// connectives, no deduplication of any kind.
std::vector<Formula> naive_formula_trees(const PropSignature& sig, int max_depth,
                                         std::size_t max_weight);

}  // namespace modchar::testsupport

#endif  // MODCHAR_TESTS_BRUTE_HPP
