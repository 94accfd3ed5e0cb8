#include "modchar/characterize.hpp"

#include <algorithm>
#include <map>

#include "modchar/simulation.hpp"

namespace modchar {

// ── Positive examples ────────────────────────────────────────────────────

namespace {

class ExampleBuilder {
public:
    ExampleBuilder(const PropSignature& sig, const CharacterizeLimits& limits)
        : sig_(sig), limits_(limits), empty_loop_(PointedModel::loopstate_empty(sig)) {}

    std::vector<PointedModel> for_normal_form(const NormalForm& nf) {
        std::vector<PointedModel> out;
        for (const auto& b : nf.disjuncts) {
            const auto& part = for_bnf(b);
            out.insert(out.end(), part.begin(), part.end());
        }
        return dedup(std::move(out));
    }

private:
    const std::vector<PointedModel>& for_bnf(const BasicNormalForm& b) {
        auto it = memo_.find(b);
        if (it != memo_.end()) return it->second;
        std::vector<PointedModel> result;
        switch (classify_bnf(b)) {
            case BnfCase::AtomsOnly:
                result.push_back(glue(sig_, b.atoms, {empty_loop_}));
                break;
            case BnfCase::DiamondsNoBox: {
                // One example per choice of a positive example for each
                // diamond conjunct, glued together with the empty loopstate.
                std::vector<const std::vector<PointedModel>*> choices;
                for (const auto& d : b.diamonds) choices.push_back(&for_bnf(d));
                for_each_tuple(choices, [&](const std::vector<PointedModel>& picked) {
                    std::vector<PointedModel> members = picked;
                    members.push_back(empty_loop_);
                    add(result, glue(sig_, b.atoms, dedup_isomorphic(std::move(members))));
                });
                break;
            }
            case BnfCase::BoxNoDiamonds: {
                // One example per subset (including the empty one) of the
                // union of the box disjuncts' example sets.
                auto universe = union_of(*b.box);
                for_each_subset(universe, false, [&](const std::vector<PointedModel>& sub) {
                    add(result, glue(sig_, b.atoms, sub));
                });
                break;
            }
            case BnfCase::DiamondsAndBox: {
                // Diamond witnesses must themselves satisfy the box
                // disjunction, so each is drawn from the examples of the
                // conjunction (diamond child /\ box child), re-normalised.
                auto universe = union_of(*b.box);
                std::vector<std::vector<PointedModel>> witness_sets;
                for (const auto& d : b.diamonds) {
                    std::vector<PointedModel> ws;
                    for (const auto& g : *b.box) {
                        Formula conj = Formula::conj({bnf_to_formula(d), bnf_to_formula(g)});
                        NormalForm nf = to_normal_form(conj, limits_.normal_form);
                        for (const auto& disjunct : nf.disjuncts) {
                            const auto& part = for_bnf(disjunct);
                            ws.insert(ws.end(), part.begin(), part.end());
                        }
                    }
                    witness_sets.push_back(dedup(std::move(ws)));
                }
                std::vector<const std::vector<PointedModel>*> choices;
                for (const auto& ws : witness_sets) choices.push_back(&ws);
                for_each_tuple(choices, [&](const std::vector<PointedModel>& picked) {
                    for_each_subset(universe, true, [&](const std::vector<PointedModel>& sub) {
                        std::vector<PointedModel> members = picked;
                        members.insert(members.end(), sub.begin(), sub.end());
                        add(result, glue(sig_, b.atoms, dedup_isomorphic(std::move(members))));
                    });
                });
                break;
            }
        }
        result = dedup(std::move(result));
        return memo_.emplace(b, std::move(result)).first->second;
    }

    std::vector<PointedModel> union_of(const std::vector<BasicNormalForm>& bs) {
        std::vector<PointedModel> out;
        for (const auto& g : bs) {
            const auto& part = for_bnf(g);
            out.insert(out.end(), part.begin(), part.end());
        }
        return dedup(std::move(out));
    }

    template <typename Fn>
    void for_each_tuple(const std::vector<const std::vector<PointedModel>*>& choices, Fn fn) {
        std::size_t total = 1;
        for (const auto* c : choices) {
            if (c->empty()) return;
            total *= c->size();
            if (total > limits_.max_examples)
                throw SizeLimitError("example construction exceeds the example budget");
        }
        std::vector<std::size_t> idx(choices.size(), 0);
        std::vector<PointedModel> picked;
        for (;;) {
            picked.clear();
            for (std::size_t i = 0; i < choices.size(); ++i)
                picked.push_back((*choices[i])[idx[i]]);
            fn(picked);
            std::size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < choices[i]->size()) break;
                idx[i] = 0;
            }
            if (i == idx.size()) break;
        }
    }

    template <typename Fn>
    void for_each_subset(const std::vector<PointedModel>& universe, bool require_nonempty,
                         Fn fn) {
        if (universe.size() >= 63 ||
            (std::uint64_t{1} << universe.size()) > limits_.max_examples)
            throw SizeLimitError("subset enumeration exceeds the example budget");
        std::uint64_t count = std::uint64_t{1} << universe.size();
        for (std::uint64_t mask = require_nonempty ? 1 : 0; mask < count; ++mask) {
            std::vector<PointedModel> sub;
            for (std::size_t i = 0; i < universe.size(); ++i)
                if ((mask >> i) & 1) sub.push_back(universe[i]);
            fn(sub);
        }
    }

    void add(std::vector<PointedModel>& out, PointedModel m) {
        out.push_back(std::move(m));
        if (out.size() > limits_.max_examples)
            throw SizeLimitError("example construction exceeds the example budget");
    }

    std::vector<PointedModel> dedup(std::vector<PointedModel> models) {
        auto out = dedup_isomorphic(std::move(models));
        if (out.size() > limits_.max_examples)
            throw SizeLimitError("example construction exceeds the example budget");
        return out;
    }

    const PropSignature& sig_;
    const CharacterizeLimits& limits_;
    PointedModel empty_loop_;
    std::map<BasicNormalForm, std::vector<PointedModel>> memo_;
};

}  // namespace

std::vector<PointedModel> pos_examples(const NormalForm& nf, const PropSignature& sig,
                                       const CharacterizeLimits& limits) {
    ExampleBuilder builder(sig, limits);
    return builder.for_normal_form(nf);
}

// ── Characterisation ─────────────────────────────────────────────────────

FitResult fits(const Formula& f, const std::vector<PointedModel>& positives,
               const std::vector<PointedModel>& negatives) {
    for (const auto& e : positives) {
        if (!modelcheck(f, e)) {
            FitResult r;
            r.ok = false;
            r.counterexample = e;
            r.counterexample_positive = true;
            return r;
        }
    }
    for (const auto& e : negatives) {
        if (modelcheck(f, e)) {
            FitResult r;
            r.ok = false;
            r.counterexample = e;
            r.counterexample_positive = false;
            return r;
        }
    }
    return {};
}

FitResult fits(const Formula& f, const Characterization& c) {
    return fits(f, c.positives, c.negatives);
}

Characterization characterize(const Formula& f, const PropSignature& sig,
                              const CharacterizeLimits& limits) {
    if (!in_fragment(f, Connectives::positive()))
        throw std::invalid_argument(
            "characterize: formula must use only Box, Dia, And, Or over atoms");
    NormalForm nf = to_normal_form(f, limits.normal_form);
    Characterization c{f, pos_examples(nf, sig, limits), {}};

    NormalForm nf_dual = to_normal_form(dual(f), limits.normal_form);
    for (auto& e : pos_examples(nf_dual, sig, limits))
        c.negatives.push_back(flip_model(e));
    c.negatives = dedup_isomorphic(std::move(c.negatives));

    if (FitResult r = fits(f, c); !r.ok)
        throw std::logic_error("characterize: constructed examples do not fit the formula");
    return c;
}

TopBotExamples extend_top_bot(const PropSignature& sig) {
    return {PointedModel::loopstate_empty(sig), PointedModel::loopstate_full(sig)};
}

// ── Uniform formulas ─────────────────────────────────────────────────────

namespace {

// Decodes a model over P + Q_neg back to the (P;Q) signature: q holds
// exactly where q_neg does not.
PointedModel decode_uniform(const PointedModel& m, const PropSignature& target,
                            const std::vector<std::string>& positive_props,
                            const std::vector<std::string>& negated_props) {
    ModelBuilder b(target);
    for (int s = 0; s < m.num_states(); ++s) {
        std::uint64_t colour = 0;
        for (const auto& p : positive_props) {
            int from = m.signature().index_of(p);
            int to = target.index_of(p);
            if (m.state_has(s, from)) colour |= (std::uint64_t{1} << to);
        }
        for (const auto& q : negated_props) {
            int from = m.signature().index_of(uniform_negated_name(q));
            int to = target.index_of(q);
            if (!m.state_has(s, from)) colour |= (std::uint64_t{1} << to);
        }
        b.add_state(m.state_name(s), colour);
    }
    for (int s = 0; s < m.num_states(); ++s)
        for (int u : m.successors(s)) b.add_edge(s, u);
    b.set_point(m.point());
    return b.build();
}

}  // namespace

Characterization characterize_uniform(const Formula& f,
                                      const std::vector<std::string>& positive_props,
                                      const std::vector<std::string>& negated_props,
                                      const CharacterizeLimits& limits) {
    Connectives uniform_allowed = Connectives::positive();
    uniform_allowed.neg_atom = true;
    if (!in_fragment(f, uniform_allowed))
        throw std::invalid_argument("characterize_uniform: formula outside the uniform fragment");

    Formula renamed = uniform_flip(f, negated_props);  // validates the (P;Q) discipline

    std::vector<std::string> enlarged = positive_props;
    for (const auto& q : negated_props) enlarged.push_back(uniform_negated_name(q));
    PropSignature enlarged_sig{enlarged};
    Characterization inner = characterize(renamed, enlarged_sig, limits);

    PropSignature target = PropSignature::with_partition(positive_props, negated_props);
    Characterization c{f, {}, {}};
    for (const auto& e : inner.positives)
        c.positives.push_back(decode_uniform(e, target, positive_props, negated_props));
    for (const auto& e : inner.negatives)
        c.negatives.push_back(decode_uniform(e, target, positive_props, negated_props));

    if (FitResult r = fits(f, c); !r.ok)
        throw std::logic_error(
            "characterize_uniform: constructed examples do not fit the formula");
    return c;
}

// ── Minimality spoilers ──────────────────────────────────────────────────

namespace {

// Matches each successor of the root of `member` against the previous
// level's example set, returning the distinct member indices.
std::vector<std::size_t> decompose_glued(const PointedModel& member,
                                         const std::vector<PointedModel>& prev_level) {
    std::vector<std::size_t> picked;
    for (int u : member.successors(member.point())) {
        // The glued submodel below u, re-pointed.
        ModelBuilder b(member.signature());
        for (int s = 0; s < member.num_states(); ++s)
            b.add_state(member.state_name(s), member.colour_mask(s));
        for (int s = 0; s < member.num_states(); ++s)
            for (int v : member.successors(s)) b.add_edge(s, v);
        b.set_point(u);
        PointedModel sub = generated_submodel(b.build());
        bool found = false;
        for (std::size_t i = 0; i < prev_level.size(); ++i) {
            if (isomorphic(sub, prev_level[i])) {
                if (std::find(picked.begin(), picked.end(), i) == picked.end())
                    picked.push_back(i);
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument(
                "minimality_spoiler: model is not a member of the constructed example set");
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

Formula spoiler_rec(int level, std::size_t member_index,
                    const std::vector<std::vector<PointedModel>>& levels,
                    const std::string& prop) {
    if (level == 0) {
        // The level-0 set is the singleton {glue({p}, empty loopstate)};
        // any fragment formula refuted there will do, and the example's
        // sole successor has a blank colour, so Dia p fails.
        return Formula::dia(Formula::atom(prop));
    }
    const PointedModel& member = levels[level][member_index];
    auto picked = decompose_glued(member, levels[level - 1]);
    if (picked.empty()) {
        // The deadlock member refutes every diamond formula, while all
        // other members' successors satisfy Box^{level-1} p.
        return Formula::dia(box_power(level - 1, Formula::atom(prop)));
    }
    std::vector<Formula> disjuncts;
    std::vector<Formula> conjuncts;
    for (std::size_t i : picked) {
        Formula psi = spoiler_rec(level - 1, i, levels, prop);
        disjuncts.push_back(Formula::box(psi));
        conjuncts.push_back(psi);
    }
    disjuncts.push_back(Formula::dia(Formula::conj(std::move(conjuncts))));
    return Formula::disj(std::move(disjuncts));
}

}  // namespace

Formula minimality_spoiler(const PointedModel& target, int n, const std::string& prop,
                           const CharacterizeLimits& limits) {
    if (n < 0 || n > 3)
        throw std::invalid_argument("minimality_spoiler: level must lie in 0..3");
    const PropSignature& sig = target.signature();
    if (!sig.contains(prop))
        throw std::invalid_argument("minimality_spoiler: proposition outside the signature");

    std::vector<std::vector<PointedModel>> levels;
    Formula body = Formula::atom(prop);
    for (int k = 0; k <= n + 1; ++k) {
        NormalForm nf = to_normal_form(box_power(k, body), limits.normal_form);
        levels.push_back(pos_examples(nf, sig, limits));
    }
    const auto& top = levels[n + 1];
    for (std::size_t i = 0; i < top.size(); ++i)
        if (isomorphic(target, top[i])) return spoiler_rec(n + 1, i, levels, prop);
    throw std::invalid_argument(
        "minimality_spoiler: model is not a member of the constructed example set");
}

// ── Tower table ──────────────────────────────────────────────────────────

std::uint64_t tower(int n, std::uint64_t m) {
    if (n < 1) throw std::invalid_argument("tower: level must be at least 1");
    if (n == 1) return m;
    std::uint64_t below = tower(n - 1, m);
    if (below >= 64) throw std::overflow_error("tower: value exceeds 64 bits");
    return std::uint64_t{1} << below;
}

std::vector<TowerRow> tower_table(int max_n, const CharacterizeLimits& limits) {
    if (max_n < 1 || max_n > 4)
        throw std::invalid_argument("tower_table: max_n must lie in 1..4");
    PropSignature sig{{"p"}};
    Formula p = Formula::atom("p");
    std::vector<TowerRow> rows;
    for (int n = 1; n <= max_n; ++n) {
        NormalForm nf = to_normal_form(box_power(n, p), limits.normal_form);
        auto examples = pos_examples(nf, sig, limits);
        rows.push_back({n, examples.size(), tower(n, 2)});
    }
    return rows;
}

}  // namespace modchar
