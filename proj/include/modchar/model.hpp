// ============================================================================
// model.hpp — Finite pointed Kripke models
// ============================================================================
//
// A PointedModel is a finite set of named states with a binary accessibility
// relation, a colouring (valuation) of each state by propositions from a
// fixed signature, and a distinguished state.  Models are immutable after
// construction; all operations below return fresh values.
//
// Colourings are stored as bit masks over the signature, which caps the
// signature at 64 propositions.  State names are opaque strings; operations
// that combine models rename with a prefix scheme to keep names stable.
//
// ============================================================================

#ifndef MODCHAR_MODEL_HPP
#define MODCHAR_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "modchar/formula.hpp"

namespace modchar {

// Height of a pointed model: the length (in edges) of the longest path from
// the point, or infinite when a cycle is reachable.
class Height {
public:
    static Height infinite() { return Height(true, 0); }
    static Height of(int v) { return Height(false, v); }

    bool is_infinite() const noexcept { return infinite_; }
    int value() const {
        if (infinite_) throw std::logic_error("Height::value on infinite height");
        return value_;
    }

    bool operator==(const Height& o) const noexcept {
        return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
    }
    bool operator!=(const Height& o) const noexcept { return !(*this == o); }

    std::string to_string() const { return infinite_ ? "infinity" : std::to_string(value_); }

private:
    Height(bool inf, int v) : infinite_(inf), value_(v) {}
    bool infinite_;
    int value_;
};

class PointedModel {
public:
    // States listed in canonical order; edges and valuation refer to states
    // by name.  Validates that the point and all edge endpoints and
    // valuation keys are declared states and that all colours lie in sig.
    PointedModel(PropSignature sig,
                 std::vector<std::string> state_names,
                 std::vector<std::pair<std::string, std::string>> edges,
                 std::vector<std::pair<std::string, std::vector<std::string>>> valuation,
                 std::string point);

    const PropSignature& signature() const noexcept { return sig_; }
    int num_states() const noexcept { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& state_names() const noexcept { return names_; }
    const std::string& state_name(int i) const { return names_.at(i); }
    int state_index(const std::string& name) const;  // -1 when absent
    int point() const noexcept { return point_; }
    const std::string& point_name() const { return names_[point_]; }

    const std::vector<int>& successors(int state) const { return succ_.at(state); }
    const std::vector<int>& predecessors(int state) const { return pred_.at(state); }
    bool has_edge(int from, int to) const;
    int num_edges() const noexcept;

    std::uint64_t colour_mask(int state) const { return colour_.at(state); }
    bool state_has(int state, int prop_index) const {
        return (colour_.at(state) >> prop_index) & 1u;
    }
    std::vector<std::string> colour_names(int state) const;
    std::uint64_t full_mask() const;  // all props of the signature set

    bool operator==(const PointedModel& o) const;

    // ── Constructions ───────────────────────────────────────────────────

    // Single reflexive state with empty resp. full colouring.
    static PointedModel loopstate_empty(const PropSignature& sig);
    static PointedModel loopstate_full(const PropSignature& sig);

    // Single state, no edges, colour given by mask.
    static PointedModel deadlock(const PropSignature& sig, std::uint64_t colour = 0);

    // Directed path of `length` edges starting at the point, blank colours.
    static PointedModel path(const PropSignature& sig, int length);

private:
    PointedModel() = default;
    void rebuild_edges(const std::vector<std::pair<int, int>>& edges);

    friend PointedModel glue(const PropSignature&, const std::vector<std::string>&,
                             const std::vector<PointedModel>&);
    friend PointedModel generated_submodel(const PointedModel&);
    friend PointedModel tree_unravel(const PointedModel&, int);
    friend PointedModel flip_model(const PointedModel&);
    friend class ModelBuilder;

    PropSignature sig_;
    std::vector<std::string> names_;
    std::vector<std::vector<int>> succ_, pred_;
    std::vector<std::uint64_t> colour_;
    int point_ = 0;
};

// Incremental construction with integer state ids; used by the library
// internals where name bookkeeping would be noise.
class ModelBuilder {
public:
    explicit ModelBuilder(PropSignature sig) { m_.sig_ = std::move(sig); }

    int add_state(std::string name, std::uint64_t colour = 0);
    void add_edge(int from, int to);
    void set_point(int state) { m_.point_ = state; }
    int num_states() const { return static_cast<int>(m_.names_.size()); }

    PointedModel build();

private:
    PointedModel m_;
    std::vector<std::pair<int, int>> edges_;
};

// ── Semantics ────────────────────────────────────────────────────────────

// Kripke truth of f at the model's point.  Evaluated bottom-up with one bit
// vector per distinct subformula, O(|f| * (|states| + |edges|)).  Throws on
// atoms outside the model's signature.
bool modelcheck(const Formula& f, const PointedModel& m);

// Truth of f at every state; index by state id.
std::vector<bool> modelcheck_all(const Formula& f, const PointedModel& m);

// ── Structural operations ────────────────────────────────────────────────

Height height(const PointedModel& m);

// Restriction to the states reachable from the point.
PointedModel generated_submodel(const PointedModel& m);

// Depth-n tree unravelling: states are the paths of at most n edges from
// the point, edges extend a path by one step, and a path is coloured by its
// last state.  n = 0 yields the single-state model of the point alone.
PointedModel tree_unravel(const PointedModel& m, int n);

// Complements every state's colour relative to the signature.
PointedModel flip_model(const PointedModel& m);

// Glues the examples below a fresh root coloured by `root_props`; the
// root's successors are exactly the examples' points.  Example states are
// renamed "e<i>.<name>"; the root is named "r".
PointedModel glue(const PropSignature& sig, const std::vector<std::string>& root_props,
                  const std::vector<PointedModel>& examples);

// ── Isomorphism ──────────────────────────────────────────────────────────

// Point-preserving isomorphism of coloured digraphs.
bool isomorphic(const PointedModel& a, const PointedModel& b);

// Hash invariant under isomorphism (colour-refinement based); equal keys do
// not guarantee isomorphy, so callers pair this with isomorphic().
std::uint64_t canonical_key(const PointedModel& m);

// Removes isomorphic duplicates and orders the result by (state count,
// canonical key, edge count) for reproducible output.
std::vector<PointedModel> dedup_isomorphic(std::vector<PointedModel> models);

// ── Serialization ────────────────────────────────────────────────────────

// JSON schema:
//   {"signature":["p","q"],
//    "states":[{"id":"s0","props":["p"]}, ...],
//    "edges":[["s0","s1"], ...],
//    "point":"s0"}
// Unknown fields are rejected.
std::string to_json(const PointedModel& m);
PointedModel model_from_json(const std::string& json_text);
PointedModel load_model(const std::string& path);
void save_model(const PointedModel& m, const std::string& path);

// Graphviz export: one node per state labelled "name {props}", the point
// drawn with a double circle.
std::string to_dot(const PointedModel& m);

}  // namespace modchar

#endif  // MODCHAR_MODEL_HPP
