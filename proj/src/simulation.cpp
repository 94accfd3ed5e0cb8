#include "modchar/simulation.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace modchar {

// ── Relation ─────────────────────────────────────────────────────────────

Relation Relation::make(PointedModel left, PointedModel right,
                        std::vector<std::pair<std::string, std::string>> pairs) {
    for (const auto& [l, r] : pairs) {
        if (left.state_index(l) < 0)
            throw std::invalid_argument("relation pair names unknown left state: " + l);
        if (right.state_index(r) < 0)
            throw std::invalid_argument("relation pair names unknown right state: " + r);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return Relation{std::move(left), std::move(right), std::move(pairs)};
}

bool Relation::contains(const std::string& l, const std::string& r) const {
    return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(l, r));
}

std::string Relation::pairs_to_json() const {
    nlohmann::ordered_json j;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [l, r] : pairs) arr.push_back({l, r});
    j["pairs"] = arr;
    return j.dump(2);
}

std::vector<std::pair<std::string, std::string>> Relation::pairs_from_json(
    const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (!j.is_object() || !j.contains("pairs"))
        throw std::invalid_argument("relation JSON: missing \"pairs\"");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "pairs")
            throw std::invalid_argument("relation JSON: unknown field: " + it.key());
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : j.at("pairs")) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("relation JSON: pair must be a two-element array");
        out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return out;
}

Relation identity_relation(const PointedModel& m) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& n : m.state_names()) pairs.emplace_back(n, n);
    return Relation::make(m, m, std::move(pairs));
}

Relation compose(const Relation& z1, const Relation& z2) {
    if (!(z1.right == z2.left))
        throw std::invalid_argument("compose: middle models do not match");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& [a, b] : z1.pairs)
        for (const auto& [b2, c] : z2.pairs)
            if (b == b2) pairs.emplace_back(a, c);
    return Relation::make(z1.left, z2.right, std::move(pairs));
}

Relation converse(const Relation& z) {
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(z.pairs.size());
    for (const auto& [l, r] : z.pairs) pairs.emplace_back(r, l);
    return Relation::make(z.right, z.left, std::move(pairs));
}

// ── Loopstate tests ──────────────────────────────────────────────────────

std::vector<bool> loopstate_states(const PointedModel& m, Loopstate which) {
    // A state is bisimilar to the loopstate iff no "bad" state (wrong
    // colour or deadlocked) is reachable from it.  Propagate badness
    // backwards.
    std::uint64_t want = which == Loopstate::Empty ? 0 : m.full_mask();
    int n = m.num_states();
    std::vector<bool> bad(n, false);
    std::deque<int> work;
    for (int s = 0; s < n; ++s) {
        if (m.colour_mask(s) != want || m.successors(s).empty()) {
            bad[s] = true;
            work.push_back(s);
        }
    }
    while (!work.empty()) {
        int s = work.front();
        work.pop_front();
        for (int p : m.predecessors(s)) {
            if (!bad[p]) {
                bad[p] = true;
                work.push_back(p);
            }
        }
    }
    std::vector<bool> out(n);
    for (int s = 0; s < n; ++s) out[s] = !bad[s];
    return out;
}

bool bisim_to_loopstate(const PointedModel& m, Loopstate which) {
    return loopstate_states(m, which)[m.point()];
}

// ── Fixpoint machinery ───────────────────────────────────────────────────

namespace {

// Dense pair table between two models.
struct PairTable {
    int nb;
    std::vector<char> in;
    PairTable(int na, int nb_) : nb(nb_), in(static_cast<std::size_t>(na) * nb_, 0) {}
    char& at(int i, int j) { return in[static_cast<std::size_t>(i) * nb + j]; }
    char at(int i, int j) const { return in[static_cast<std::size_t>(i) * nb + j]; }
};

enum class Mode { Bisimulation, WeakSimulation };

// Deletes pairs violating the (weak) simulation clauses until stable,
// processing a worklist of pairs whose justification may have broken.
PairTable greatest_fixpoint(const PointedModel& a, const PointedModel& b, Mode mode) {
    int na = a.num_states(), nb = b.num_states();
    PairTable z(na, nb);

    std::vector<bool> a_empty, b_full;
    if (mode == Mode::WeakSimulation) {
        a_empty = loopstate_states(a, Loopstate::Empty);
        b_full = loopstate_states(b, Loopstate::Full);
    }

    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            bool atom_ok = mode == Mode::Bisimulation
                               ? a.colour_mask(i) == b.colour_mask(j)
                               : (a.colour_mask(i) & ~b.colour_mask(j)) == 0;
            z.at(i, j) = atom_ok ? 1 : 0;
        }

    auto violates = [&](int i, int j) {
        for (int u : a.successors(i)) {
            if (mode == Mode::WeakSimulation && a_empty[u]) continue;
            bool matched = false;
            for (int v : b.successors(j))
                if (z.at(u, v)) { matched = true; break; }
            if (!matched) return true;
        }
        for (int v : b.successors(j)) {
            if (mode == Mode::WeakSimulation && b_full[v]) continue;
            bool matched = false;
            for (int u : a.successors(i))
                if (z.at(u, v)) { matched = true; break; }
            if (!matched) return true;
        }
        return false;
    };

    std::deque<std::pair<int, int>> work;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            if (z.at(i, j)) work.emplace_back(i, j);

    while (!work.empty()) {
        auto [i, j] = work.front();
        work.pop_front();
        if (!z.at(i, j) || !violates(i, j)) continue;
        z.at(i, j) = 0;
        // Deleting (i, j) can only break pairs with an edge into it.
        for (int p : a.predecessors(i))
            for (int q : b.predecessors(j))
                if (z.at(p, q)) work.emplace_back(p, q);
    }
    return z;
}

// Restricts the fixpoint to pairs reachable from (point, point) through
// matched successor pairs, and renders it as a named Relation.
Relation restrict_to_reachable(const PointedModel& a, const PointedModel& b,
                               const PairTable& z) {
    int nb = b.num_states();
    std::vector<char> seen(static_cast<std::size_t>(a.num_states()) * nb, 0);
    std::deque<std::pair<int, int>> work;
    auto visit = [&](int i, int j) {
        char& s = seen[static_cast<std::size_t>(i) * nb + j];
        if (!s) {
            s = 1;
            work.emplace_back(i, j);
        }
    };
    visit(a.point(), b.point());
    std::vector<std::pair<std::string, std::string>> pairs;
    while (!work.empty()) {
        auto [i, j] = work.front();
        work.pop_front();
        pairs.emplace_back(a.state_name(i), b.state_name(j));
        for (int u : a.successors(i))
            for (int v : b.successors(j))
                if (z.at(u, v)) visit(u, v);
    }
    return Relation::make(a, b, std::move(pairs));
}

}  // namespace

// ── Bisimulation ─────────────────────────────────────────────────────────

std::optional<Relation> bisimulation_witness(const PointedModel& a, const PointedModel& b) {
    if (a.signature() != b.signature())
        throw std::invalid_argument("bisimulation: signature mismatch");
    PairTable z = greatest_fixpoint(a, b, Mode::Bisimulation);
    if (!z.at(a.point(), b.point())) return std::nullopt;
    return restrict_to_reachable(a, b, z);
}

bool bisimilar(const PointedModel& a, const PointedModel& b) {
    if (a.signature() != b.signature())
        throw std::invalid_argument("bisimulation: signature mismatch");
    PairTable z = greatest_fixpoint(a, b, Mode::Bisimulation);
    return z.at(a.point(), b.point()) != 0;
}

bool n_bisimilar(const PointedModel& a, const PointedModel& b, int n) {
    if (n < 1) throw std::invalid_argument("n_bisimilar: n must be at least 1");
    if (a.signature() != b.signature())
        throw std::invalid_argument("n_bisimilar: signature mismatch");
    int na = a.num_states(), nb = b.num_states();
    // One round = colour agreement; each further round adds a forth/back
    // refinement against the previous round's relation.
    PairTable cur(na, nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            cur.at(i, j) = a.colour_mask(i) == b.colour_mask(j) ? 1 : 0;
    for (int round = 2; round <= n; ++round) {
        PairTable next(na, nb);
        bool changed = false;
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j) {
                if (!cur.at(i, j)) { next.at(i, j) = 0; continue; }
                bool ok = true;
                for (int u : a.successors(i)) {
                    bool matched = false;
                    for (int v : b.successors(j))
                        if (cur.at(u, v)) { matched = true; break; }
                    if (!matched) { ok = false; break; }
                }
                if (ok)
                    for (int v : b.successors(j)) {
                        bool matched = false;
                        for (int u : a.successors(i))
                            if (cur.at(u, v)) { matched = true; break; }
                        if (!matched) { ok = false; break; }
                    }
                next.at(i, j) = ok ? 1 : 0;
                if (!ok) changed = true;
            }
        if (!changed) break;  // reached the full bisimulation fixpoint
        cur = std::move(next);
    }
    return cur.at(a.point(), b.point()) != 0;
}

// ── Weak simulation ──────────────────────────────────────────────────────

std::optional<Relation> weak_simulation_witness(const PointedModel& a, const PointedModel& b) {
    if (a.signature() != b.signature())
        throw std::invalid_argument("weak simulation: signature mismatch");
    PairTable z = greatest_fixpoint(a, b, Mode::WeakSimulation);
    if (!z.at(a.point(), b.point())) return std::nullopt;
    return restrict_to_reachable(a, b, z);
}

bool weak_simulates(const PointedModel& a, const PointedModel& b) {
    if (a.signature() != b.signature())
        throw std::invalid_argument("weak simulation: signature mismatch");
    PairTable z = greatest_fixpoint(a, b, Mode::WeakSimulation);
    return z.at(a.point(), b.point()) != 0;
}

bool is_weak_simulation(const Relation& z) {
    const PointedModel& a = z.left;
    const PointedModel& b = z.right;
    if (a.signature() != b.signature())
        throw std::invalid_argument("weak simulation: signature mismatch");
    if (!z.contains(a.point_name(), b.point_name())) return false;
    auto a_empty = loopstate_states(a, Loopstate::Empty);
    auto b_full = loopstate_states(b, Loopstate::Full);
    PairTable table(a.num_states(), b.num_states());
    for (const auto& [l, r] : z.pairs)
        table.at(a.state_index(l), b.state_index(r)) = 1;
    for (const auto& [l, r] : z.pairs) {
        int i = a.state_index(l), j = b.state_index(r);
        if ((a.colour_mask(i) & ~b.colour_mask(j)) != 0) return false;
        for (int u : a.successors(i)) {
            if (a_empty[u]) continue;
            bool matched = false;
            for (int v : b.successors(j))
                if (table.at(u, v)) { matched = true; break; }
            if (!matched) return false;
        }
        for (int v : b.successors(j)) {
            if (b_full[v]) continue;
            bool matched = false;
            for (int u : a.successors(i))
                if (table.at(u, v)) { matched = true; break; }
            if (!matched) return false;
        }
    }
    return true;
}

}  // namespace modchar
