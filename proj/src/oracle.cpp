#include "modchar/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "modchar/simulation.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace modchar {

// ── Tableau ──────────────────────────────────────────────────────────────

namespace {

struct WitnessTree {
    std::uint64_t colour = 0;
    std::vector<WitnessTree> kids;
};

using Branch = std::set<Formula>;

void insert_formula(Branch& branch, const Formula& f) {
    if (f.kind() == Formula::Kind::Top) return;  // never constrains a branch
    branch.insert(f);
}

// Expands a branch to a tree witness, or nullopt when the branch closes.
std::optional<WitnessTree> expand(const Branch& branch, const PropSignature& sig) {
    // Saturate the first unexpanded conjunction or disjunction.
    for (const auto& f : branch) {
        if (f.kind() == Formula::Kind::And) {
            Branch next = branch;
            next.erase(f);
            for (const auto& c : f.children()) insert_formula(next, c);
            return expand(next, sig);
        }
        if (f.kind() == Formula::Kind::Or) {
            for (const auto& c : f.children()) {
                Branch next = branch;
                next.erase(f);
                insert_formula(next, c);
                if (auto w = expand(next, sig)) return w;
            }
            return std::nullopt;
        }
    }

    // Only literals and modal formulas remain.
    std::uint64_t colour = 0;
    for (const auto& f : branch) {
        if (f.kind() == Formula::Kind::Bot) return std::nullopt;
        if (f.kind() == Formula::Kind::Atom) {
            int pi = sig.index_of(f.name());
            if (pi < 0)
                throw std::invalid_argument("sat_K: proposition outside the signature: " +
                                            f.name());
            colour |= (std::uint64_t{1} << pi);
        }
    }
    for (const auto& f : branch) {
        if (f.kind() == Formula::Kind::NegAtom) {
            int pi = sig.index_of(f.name());
            if (pi < 0)
                throw std::invalid_argument("sat_K: proposition outside the signature: " +
                                            f.name());
            if ((colour >> pi) & 1) return std::nullopt;  // clash
        }
    }

    std::vector<Formula> box_residue;
    for (const auto& f : branch)
        if (f.kind() == Formula::Kind::Box) box_residue.push_back(f.child());

    WitnessTree node;
    node.colour = colour;
    for (const auto& f : branch) {
        if (f.kind() != Formula::Kind::Dia) continue;
        Branch child;
        insert_formula(child, f.child());
        for (const auto& g : box_residue) insert_formula(child, g);
        auto sub = expand(child, sig);
        if (!sub) return std::nullopt;
        node.kids.push_back(std::move(*sub));
    }
    return node;
}

void emit_tree(const WitnessTree& t, ModelBuilder& b, int parent) {
    int node = b.add_state("w" + std::to_string(b.num_states()), t.colour);
    if (parent >= 0) b.add_edge(parent, node);
    else b.set_point(node);
    for (const auto& k : t.kids) emit_tree(k, b, node);
}

}  // namespace

SatResult sat_K(const Formula& f, const PropSignature& sig) {
    Branch root;
    insert_formula(root, f);
    auto tree = expand(root, sig);
    if (!tree) return {};
    ModelBuilder b(sig);
    emit_tree(*tree, b, -1);
    return {true, b.build()};
}

bool entails(const Formula& f, const Formula& g, const PropSignature& sig) {
    return !sat_K(Formula::conj({f, negate_nnf(g)}), sig).satisfiable;
}

EquivalenceResult equivalent(const Formula& f, const Formula& g, const PropSignature& sig) {
    SatResult left = sat_K(Formula::conj({f, negate_nnf(g)}), sig);
    if (left.satisfiable) return {false, left.witness, true};
    SatResult right = sat_K(Formula::conj({g, negate_nnf(f)}), sig);
    if (right.satisfiable) return {false, right.witness, false};
    return {};
}

// ── Formula weight ───────────────────────────────────────────────────────

std::size_t formula_weight(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Top:
        case Formula::Kind::Bot:
        case Formula::Kind::Atom:
        case Formula::Kind::NegAtom:
            return 1;
        case Formula::Kind::Dia:
        case Formula::Kind::Box:
            return 1 + formula_weight(f.child());
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::size_t w = 0;
            for (const auto& c : f.children()) w += formula_weight(c);
            return w;
        }
    }
    return 0;
}

// ── Formula enumeration ──────────────────────────────────────────────────

namespace {

class FormulaEnumerator {
public:
    FormulaEnumerator(const PropSignature& sig, const FragmentSpec& fragment, int max_depth,
                      std::size_t max_size)
        : sig_(sig), spec_(fragment), max_depth_(max_depth), max_size_(max_size) {}

    std::vector<Formula> run() {
        add_leaves();
        for (std::size_t w = 2; w <= max_size_; ++w) {
            add_modal_wraps(w);
            add_boolean_combos(w);
        }
        std::stable_sort(pool_.begin(), pool_.end(), [](const Entry& a, const Entry& b) {
            if (a.weight != b.weight) return a.weight < b.weight;
            return a.key < b.key;
        });
        std::vector<Formula> out;
        out.reserve(pool_.size());
        for (const auto& e : pool_) out.push_back(e.f);
        return out;
    }

private:
    struct Entry {
        Formula f;
        std::size_t weight;
        int depth;
        std::string key;
    };

    void add_leaves() {
        if (max_size_ < 1) return;
        if (spec_.uniform) {
            for (const auto& p : spec_.uniform->first) add(Formula::atom(p));
            for (const auto& q : spec_.uniform->second) add(Formula::neg_atom(q));
        } else {
            for (const auto& p : sig_.names()) {
                add(Formula::atom(p));
                if (spec_.allowed.neg_atom) add(Formula::neg_atom(p));
            }
        }
        if (spec_.allowed.top) add(Formula::top());
        if (spec_.allowed.bot) add(Formula::bot());
    }

    void add_modal_wraps(std::size_t w) {
        if (!spec_.allowed.dia && !spec_.allowed.box) return;
        // Children of weight w-1 are complete before weight w is processed.
        std::vector<Formula> children;
        for (const auto& e : pool_)
            if (e.weight == w - 1 && e.depth < max_depth_) children.push_back(e.f);
        for (const auto& c : children) {
            if (spec_.allowed.dia) add(Formula::dia(c));
            if (spec_.allowed.box) add(Formula::box(c));
        }
    }

    void add_boolean_combos(std::size_t w) {
        if (!spec_.allowed.conj && !spec_.allowed.disj) return;
        // Pool indices sorted by weight; every child weighs strictly less
        // than w because at least two children share the budget.
        std::vector<std::size_t> items;
        for (std::size_t i = 0; i < pool_.size(); ++i)
            if (pool_[i].weight < w) items.push_back(i);
        std::stable_sort(items.begin(), items.end(), [&](std::size_t a, std::size_t b) {
            return pool_[a].weight < pool_[b].weight;
        });
        std::vector<Formula> chosen;
        if (spec_.allowed.conj) combo_dfs(Formula::Kind::And, items, 0, w, chosen);
        if (spec_.allowed.disj) combo_dfs(Formula::Kind::Or, items, 0, w, chosen);
    }

    void combo_dfs(Formula::Kind kind, const std::vector<std::size_t>& items, std::size_t start,
                   std::size_t remaining, std::vector<Formula>& chosen) {
        if (remaining == 0) {
            if (chosen.size() >= 2) {
                std::vector<Formula> kids = chosen;
                std::sort(kids.begin(), kids.end());
                add(kind == Formula::Kind::And ? Formula::conj(std::move(kids))
                                               : Formula::disj(std::move(kids)));
            }
            return;
        }
        for (std::size_t idx = start; idx < items.size(); ++idx) {
            const Entry& e = pool_[items[idx]];
            if (e.weight > remaining) break;  // items sorted by weight
            if (e.f.kind() == kind) continue;  // flattened canonical form
            // Leave room for a second child when this is the first.
            if (chosen.empty() && e.weight == remaining) continue;
            chosen.push_back(e.f);
            combo_dfs(kind, items, idx + 1, remaining - e.weight, chosen);
            chosen.pop_back();
        }
    }

    void add(Formula f) {
        std::size_t w = formula_weight(f);
        if (w > max_size_) return;
        int d = modal_depth(f);
        if (d > max_depth_) return;
        std::string key = to_string(f);
        if (!seen_.insert(key).second) return;
        pool_.push_back({std::move(f), w, d, std::move(key)});
    }

    const PropSignature& sig_;
    const FragmentSpec& spec_;
    int max_depth_;
    std::size_t max_size_;
    std::vector<Entry> pool_;
    std::unordered_set<std::string> seen_;
};

}  // namespace

std::vector<Formula> enumerate_formulas(const PropSignature& sig, const FragmentSpec& fragment,
                                        int max_depth, std::size_t max_size) {
    if (fragment.uniform) {
        for (const auto& p : fragment.uniform->first)
            if (!sig.contains(p))
                throw std::invalid_argument("enumerate_formulas: unknown proposition: " + p);
        for (const auto& q : fragment.uniform->second)
            if (!sig.contains(q))
                throw std::invalid_argument("enumerate_formulas: unknown proposition: " + q);
    }
    return FormulaEnumerator(sig, fragment, max_depth, max_size).run();
}

// ── Model enumeration ────────────────────────────────────────────────────

std::vector<PointedModel> enumerate_models(const PropSignature& sig, int max_states) {
    if (max_states < 1 || max_states > 4)
        throw std::invalid_argument("enumerate_models: max_states must lie in 1..4");
    std::vector<PointedModel> out;
    std::vector<std::uint64_t> out_keys;
    std::uint64_t colours = std::uint64_t{1} << sig.size();

    for (int n = 1; n <= max_states; ++n) {
        std::vector<std::uint64_t> colour(n, 0);
        std::uint64_t edge_count = std::uint64_t{1} << (n * n);
        for (;;) {
            for (std::uint64_t edges = 0; edges < edge_count; ++edges) {
                ModelBuilder b(sig);
                for (int s = 0; s < n; ++s) b.add_state("s" + std::to_string(s), colour[s]);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if ((edges >> (i * n + j)) & 1) b.add_edge(i, j);
                b.set_point(0);
                PointedModel m = b.build();
                std::uint64_t key = canonical_key(m);
                bool dup = false;
                for (std::size_t i = 0; i < out.size(); ++i) {
                    if (out_keys[i] == key && out[i].num_states() == n &&
                        isomorphic(out[i], m)) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) {
                    out.push_back(std::move(m));
                    out_keys.push_back(key);
                }
            }
            // Odometer over the per-state colours.
            int i = 0;
            for (; i < n; ++i) {
                if (++colour[i] < colours) break;
                colour[i] = 0;
            }
            if (i == n) break;
        }
    }
    return out;
}

// ── Random generation ────────────────────────────────────────────────────

PointedModel random_model(std::mt19937_64& rng, const PropSignature& sig, int min_states,
                          int max_states, double edge_density) {
    std::uniform_int_distribution<int> size_dist(min_states, max_states);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int n = size_dist(rng);
    ModelBuilder b(sig);
    for (int s = 0; s < n; ++s) {
        std::uint64_t colour = 0;
        for (std::size_t p = 0; p < sig.size(); ++p)
            if (coin(rng) < 0.5) colour |= (std::uint64_t{1} << p);
        b.add_state("s" + std::to_string(s), colour);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (coin(rng) < edge_density) b.add_edge(i, j);
    b.set_point(0);
    return b.build();
}

namespace {

Formula random_formula_rec(std::mt19937_64& rng, const std::vector<Formula>& leaves,
                           const Connectives& allowed, int depth_left, int& budget) {
    std::uniform_int_distribution<int> pick(0, 99);
    std::uniform_int_distribution<std::size_t> leaf_pick(0, leaves.size() - 1);
    if (budget <= 1) return leaves[leaf_pick(rng)];
    --budget;
    int roll = pick(rng);
    bool modal_ok = depth_left > 0 && (allowed.dia || allowed.box);
    if (modal_ok && roll < 35) {
        bool use_dia = allowed.dia && (!allowed.box || pick(rng) < 50);
        Formula c = random_formula_rec(rng, leaves, allowed, depth_left - 1, budget);
        return use_dia ? Formula::dia(std::move(c)) : Formula::box(std::move(c));
    }
    if ((allowed.conj || allowed.disj) && roll < 80) {
        bool use_conj = allowed.conj && (!allowed.disj || pick(rng) < 50);
        std::uniform_int_distribution<int> arity_dist(2, 3);
        int arity = arity_dist(rng);
        std::vector<Formula> kids;
        for (int i = 0; i < arity; ++i)
            kids.push_back(random_formula_rec(rng, leaves, allowed, depth_left, budget));
        return use_conj ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    return leaves[leaf_pick(rng)];
}

std::vector<Formula> leaf_choices(const PropSignature& sig, const Connectives& allowed) {
    std::vector<Formula> leaves;
    for (const auto& p : sig.names()) {
        leaves.push_back(Formula::atom(p));
        if (allowed.neg_atom) leaves.push_back(Formula::neg_atom(p));
    }
    if (allowed.top) leaves.push_back(Formula::top());
    if (allowed.bot) leaves.push_back(Formula::bot());
    if (leaves.empty()) throw std::invalid_argument("random_formula: no leaves available");
    return leaves;
}

}  // namespace

Formula random_formula(std::mt19937_64& rng, const PropSignature& sig,
                       const Connectives& allowed, int max_depth) {
    auto leaves = leaf_choices(sig, allowed);
    std::uniform_int_distribution<int> budget_dist(3, 14);
    int budget = budget_dist(rng);
    return random_formula_rec(rng, leaves, allowed, max_depth, budget);
}

Formula random_uniform_formula(std::mt19937_64& rng,
                               const std::vector<std::string>& positive_props,
                               const std::vector<std::string>& negated_props, int max_depth) {
    std::vector<Formula> leaves;
    for (const auto& p : positive_props) leaves.push_back(Formula::atom(p));
    for (const auto& q : negated_props) leaves.push_back(Formula::neg_atom(q));
    if (leaves.empty())
        throw std::invalid_argument("random_uniform_formula: no leaves available");
    std::uniform_int_distribution<int> budget_dist(3, 14);
    int budget = budget_dist(rng);
    return random_formula_rec(rng, leaves, Connectives::positive(), max_depth, budget);
}

// ── Reports ──────────────────────────────────────────────────────────────

std::string VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["verdict"] = pass ? "pass" : "fail";
    auto arr = nlohmann::ordered_json::array();
    for (const auto& ce : counterexamples) {
        nlohmann::ordered_json e;
        e["reason"] = ce.reason;
        if (ce.formula) e["formula"] = to_string(*ce.formula);
        if (ce.model) e["model"] = nlohmann::ordered_json::parse(modchar::to_json(*ce.model));
        arr.push_back(e);
    }
    j["counterexamples"] = arr;
    j["stats"] = {{"candidates", candidates}, {"elapsed_seconds", elapsed_seconds}};
    return j.dump(2);
}

std::string VerificationReport::to_text() const {
    std::ostringstream out;
    out << (pass ? "pass" : "fail") << " (" << candidates << " candidates, "
        << elapsed_seconds << " s)\n";
    for (const auto& ce : counterexamples) {
        out << "  counterexample: " << ce.reason;
        if (ce.formula) out << "\n    formula: " << to_string(*ce.formula);
        if (ce.model) out << "\n    model point: " << ce.model->point_name();
        out << '\n';
    }
    return out.str();
}

// ── Scan driver ──────────────────────────────────────────────────────────

namespace {

// Runs check(i) for every candidate index and merges the violations in
// candidate order, so the serial and parallel paths emit identical reports.
template <typename CheckFn>
std::vector<Counterexample> scan(std::int64_t count, int jobs, CheckFn check) {
    std::vector<std::pair<std::int64_t, Counterexample>> found;
    if (jobs <= 1) {
        for (std::int64_t i = 0; i < count; ++i) {
            auto ce = check(i);
            if (ce) found.emplace_back(i, std::move(*ce));
        }
    } else {
#if defined(_OPENMP)
#pragma omp parallel num_threads(jobs)
        {
            std::vector<std::pair<std::int64_t, Counterexample>> local;
#pragma omp for schedule(dynamic, 16)
            for (std::int64_t i = 0; i < count; ++i) {
                auto ce = check(i);
                if (ce) local.emplace_back(i, std::move(*ce));
            }
#pragma omp critical
            found.insert(found.end(), local.begin(), local.end());
        }
#else
        for (std::int64_t i = 0; i < count; ++i) {
            auto ce = check(i);
            if (ce) found.emplace_back(i, std::move(*ce));
        }
#endif
    }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Counterexample> out;
    out.reserve(found.size());
    for (auto& [idx, ce] : found) out.push_back(std::move(ce));
    return out;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

// ── Verifiers ────────────────────────────────────────────────────────────

VerificationReport verify_unique(const Formula& f, const Characterization& c,
                                 const UniqueBounds& bounds, int jobs) {
    Stopwatch watch;
    const PropSignature& sig =
        c.positives.empty() ? c.negatives.front().signature() : c.positives.front().signature();
    std::vector<Formula> candidates =
        enumerate_formulas(sig, bounds.fragment, bounds.max_depth, bounds.max_size);

    auto check = [&](std::int64_t i) -> std::optional<Counterexample> {
        const Formula& psi = candidates[static_cast<std::size_t>(i)];
        if (!fits(psi, c.positives, c.negatives).ok) return std::nullopt;
        EquivalenceResult eq = equivalent(f, psi, sig);
        if (eq.equivalent) return std::nullopt;
        Counterexample ce;
        ce.reason = "fitting candidate is not equivalent to the input formula";
        ce.formula = psi;
        ce.model = eq.separator;
        return ce;
    };

    VerificationReport report;
    report.counterexamples = scan(static_cast<std::int64_t>(candidates.size()), jobs, check);
    report.pass = report.counterexamples.empty();
    report.candidates = candidates.size();
    report.elapsed_seconds = watch.seconds();
    return report;
}

VerificationReport verify_duality(const Formula& f, const Characterization& c,
                                  const DualityBounds& bounds, int jobs) {
    Stopwatch watch;
    const PropSignature& sig =
        c.positives.empty() ? c.negatives.front().signature() : c.positives.front().signature();

    std::vector<PointedModel> models = enumerate_models(sig, bounds.exhaustive_states);
    std::mt19937_64 rng(bounds.seed);
    for (int i = 0; i < bounds.sample_count; ++i)
        models.push_back(random_model(rng, sig, bounds.sample_min_states,
                                      bounds.sample_max_states, bounds.edge_density));

    auto check = [&](std::int64_t i) -> std::optional<Counterexample> {
        const PointedModel& m = models[static_cast<std::size_t>(i)];
        bool upward = false;
        for (const auto& e : c.positives)
            if (weak_simulates(e, m)) { upward = true; break; }
        bool downward = false;
        for (const auto& e : c.negatives)
            if (weak_simulates(m, e)) { downward = true; break; }
        bool holds = modelcheck(f, m);
        if (upward == downward) {
            Counterexample ce;
            ce.reason = upward ? "both duality halves hold" : "neither duality half holds";
            ce.model = m;
            return ce;
        }
        if (upward != holds) {
            Counterexample ce;
            ce.reason = "upward half disagrees with the formula's truth value";
            ce.model = m;
            return ce;
        }
        return std::nullopt;
    };

    VerificationReport report;
    report.counterexamples = scan(static_cast<std::int64_t>(models.size()), jobs, check);
    report.pass = report.counterexamples.empty();
    report.candidates = models.size();
    report.elapsed_seconds = watch.seconds();
    return report;
}

VerificationReport verify_preservation(const PropSignature& sig,
                                       const PreservationBounds& bounds, int jobs) {
    Stopwatch watch;
    // Candidate pairs are generated up front with one sub-seed per attempt;
    // acceptance depends only on the pair itself, so the accepted set does
    // not depend on the job count.
    struct Triple { PointedModel from, to; Formula formula; };
    std::vector<Triple> accepted;
    std::uint64_t attempt = 0;
    while (static_cast<int>(accepted.size()) < bounds.sample_count) {
        std::size_t batch = 4 * static_cast<std::size_t>(bounds.sample_count);
        std::vector<Triple> batch_triples;
        std::vector<char> ok(batch, 0);
        for (std::size_t k = 0; k < batch; ++k) {
            std::mt19937_64 rng(bounds.seed * 0x9e3779b97f4a7c15ull + attempt + k + 1);
            PointedModel from = random_model(rng, sig, bounds.min_states, bounds.max_states,
                                             bounds.edge_density);
            PointedModel to = from;
            switch ((attempt + k) % 3) {
                case 0:
                    to = random_model(rng, sig, bounds.min_states, bounds.max_states,
                                      bounds.edge_density);
                    break;
                case 1: {
                    // Enrich colours of a copy; the identity is then a
                    // candidate weak simulation.
                    ModelBuilder b(sig);
                    std::uniform_real_distribution<double> coin(0.0, 1.0);
                    for (int s = 0; s < from.num_states(); ++s) {
                        std::uint64_t colour = from.colour_mask(s);
                        for (std::size_t p = 0; p < sig.size(); ++p)
                            if (coin(rng) < 0.3) colour |= (std::uint64_t{1} << p);
                        b.add_state(from.state_name(s), colour);
                    }
                    for (int s = 0; s < from.num_states(); ++s)
                        for (int u : from.successors(s)) b.add_edge(s, u);
                    b.set_point(from.point());
                    to = b.build();
                    break;
                }
                case 2:
                    to = random_model(rng, sig, bounds.min_states, bounds.max_states,
                                      std::min(1.0, bounds.edge_density + 0.2));
                    break;
            }
            Formula phi = random_formula(rng, sig, Connectives::positive(),
                                         bounds.formula_depth);
            batch_triples.push_back({std::move(from), std::move(to), std::move(phi)});
        }
        // The weak-simulation filter is the expensive part; run it across
        // the batch, then keep the accepted prefix in order.
        auto filter = [&](std::int64_t i) -> std::optional<Counterexample> {
            ok[static_cast<std::size_t>(i)] =
                weak_simulates(batch_triples[static_cast<std::size_t>(i)].from,
                               batch_triples[static_cast<std::size_t>(i)].to)
                    ? 1
                    : 0;
            return std::nullopt;
        };
        scan(static_cast<std::int64_t>(batch), jobs, filter);
        for (std::size_t k = 0; k < batch; ++k) {
            if (ok[k] && static_cast<int>(accepted.size()) < bounds.sample_count)
                accepted.push_back(batch_triples[k]);
        }
        attempt += batch;
        if (attempt > 1000u * static_cast<std::uint64_t>(bounds.sample_count))
            throw std::runtime_error("verify_preservation: could not sample enough related pairs");
    }

    auto check = [&](std::int64_t i) -> std::optional<Counterexample> {
        const Triple& t = accepted[static_cast<std::size_t>(i)];
        if (modelcheck(t.formula, t.from) && !modelcheck(t.formula, t.to)) {
            Counterexample ce;
            ce.reason = "fragment truth lost along a weak simulation";
            ce.formula = t.formula;
            ce.model = t.from;
            return ce;
        }
        return std::nullopt;
    };

    VerificationReport report;
    report.counterexamples = scan(static_cast<std::int64_t>(accepted.size()), jobs, check);
    report.pass = report.counterexamples.empty();
    report.candidates = accepted.size();
    report.elapsed_seconds = watch.seconds();
    return report;
}

// ── Full-language spoiler ────────────────────────────────────────────────

SpoilerResult spoiler_full_language(const Formula& f,
                                    const std::vector<PointedModel>& positives,
                                    const std::vector<PointedModel>& negatives,
                                    const PropSignature& sig) {
    int d = modal_depth(f);
    SatResult probe = sat_K(Formula::conj({f, dia_power(d + 1, Formula::top())}), sig);

    if (!probe.satisfiable) {
        // Box-bounded case: f entails Box^{d+1} false, so adding a tall
        // height disjunct keeps every negative example negative while a
        // long path separates.
        int k = d + 1;
        int n = k;
        for (const auto& e : negatives) n = std::max(n, e.num_states());
        n += 1;
        Formula spoiler = Formula::disj({f, height_formula(n)});
        return {spoiler, true, n, PointedModel::path(sig, n)};
    }

    // Unbounded case: f stays satisfiable together with arbitrarily deep
    // diamonds, so conjoining the negated height formula keeps the fit
    // while the pumped witness separates.
    int n = d;
    for (const auto& e : positives) n = std::max(n, e.num_states());
    n += 1;
    Formula spoiler = Formula::conj({f, height_formula(n, HeightVariant::Negation)});

    const PointedModel& base = *probe.witness;
    // The tableau witness has height exactly d+1; pump it to height n.
    std::vector<int> depth(base.num_states(), -1);
    std::vector<int> queue{base.point()};
    depth[base.point()] = 0;
    int deepest = base.point();
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int s = queue[qi];
        if (depth[s] > depth[deepest]) deepest = s;
        for (int u : base.successors(s)) {
            if (depth[u] < 0) {
                depth[u] = depth[s] + 1;
                queue.push_back(u);
            }
        }
    }
    ModelBuilder b(sig);
    for (int s = 0; s < base.num_states(); ++s)
        b.add_state(base.state_name(s), base.colour_mask(s));
    for (int s = 0; s < base.num_states(); ++s)
        for (int u : base.successors(s)) b.add_edge(s, u);
    b.set_point(base.point());
    int prev = deepest;
    for (int i = 0; i < n - depth[deepest]; ++i) {
        int node = b.add_state("x" + std::to_string(i), 0);
        b.add_edge(prev, node);
        prev = node;
    }
    return {spoiler, false, n, b.build()};
}

// ── Coproduct fixtures ───────────────────────────────────────────────────

CoproductFixtures coproduct_fixtures(const PropSignature& sig) {
    for (const char* name : {"p", "q", "r"})
        if (!sig.contains(name))
            throw std::invalid_argument("coproduct_fixtures: signature must contain p, q, r");
    auto mask = [&](std::initializer_list<const char*> props) {
        std::uint64_t m = 0;
        for (const char* p : props) m |= (std::uint64_t{1} << sig.index_of(p));
        return m;
    };
    // Two branches below a blank root, each ending in a blank reflexive
    // state; the four models differ only in the colours along the branches.
    auto two_branch = [&](std::uint64_t left, std::uint64_t right) {
        ModelBuilder b(sig);
        int root = b.add_state("a", 0);
        int v = b.add_state("v", left);
        int u = b.add_state("u", right);
        int s = b.add_state("s", 0);
        int t = b.add_state("t", 0);
        b.add_edge(root, v);
        b.add_edge(root, u);
        b.add_edge(v, s);
        b.add_edge(u, t);
        b.add_edge(s, s);
        b.add_edge(t, t);
        b.set_point(root);
        return b.build();
    };

    CoproductFixtures out{
        two_branch(mask({"p"}), mask({"q"})),            // A
        PointedModel::loopstate_empty(sig),              // placeholder, replaced below
        two_branch(mask({"p", "r"}), mask({"q"})),       // C
        two_branch(mask({"p"}), mask({"q", "r"})),       // C'
    };

    ModelBuilder bb(sig);
    int root = bb.add_state("b", 0);
    int v = bb.add_state("v", mask({"r"}));
    int s = bb.add_state("s", 0);
    int u = bb.add_state("u", 0);
    bb.add_edge(root, v);
    bb.add_edge(root, u);
    bb.add_edge(v, s);
    bb.add_edge(s, s);
    bb.add_edge(u, u);
    bb.set_point(root);
    out.b = bb.build();
    return out;
}

}  // namespace modchar
