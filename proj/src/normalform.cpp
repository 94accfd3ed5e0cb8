#include "modchar/normalform.hpp"

#include <algorithm>

namespace modchar {

// ── Ordering ─────────────────────────────────────────────────────────────

namespace {

int compare_bnf_lists(const std::vector<BasicNormalForm>& a,
                      const std::vector<BasicNormalForm>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (int c = a[i].compare(b[i]); c != 0) return c;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

void sort_dedup(std::vector<BasicNormalForm>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

int BasicNormalForm::compare(const BasicNormalForm& o) const {
    if (level != o.level) return level < o.level ? -1 : 1;
    if (atoms != o.atoms) return atoms < o.atoms ? -1 : 1;
    if (int c = compare_bnf_lists(diamonds, o.diamonds); c != 0) return c;
    if (box.has_value() != o.box.has_value()) return box.has_value() ? 1 : -1;
    if (box) return compare_bnf_lists(*box, *o.box);
    return 0;
}

// ── Validation and classification ────────────────────────────────────────

bool bnf_well_formed(const BasicNormalForm& b) {
    if (b.atoms.empty() && b.diamonds.empty() && !b.box) return false;
    if (b.box && b.box->empty()) return false;
    int expect = 0;
    for (const auto& d : b.diamonds) {
        if (!bnf_well_formed(d)) return false;
        expect = std::max(expect, d.level + 1);
    }
    if (b.box) {
        for (const auto& g : *b.box) {
            if (!bnf_well_formed(g)) return false;
            expect = std::max(expect, g.level + 1);
        }
    }
    if (!std::is_sorted(b.atoms.begin(), b.atoms.end())) return false;
    if (std::adjacent_find(b.atoms.begin(), b.atoms.end()) != b.atoms.end()) return false;
    return b.level == expect;
}

BnfCase classify_bnf(const BasicNormalForm& b) {
    if (b.atoms.empty() && b.diamonds.empty() && !b.box)
        throw std::invalid_argument("classify_bnf: empty conjunction");
    if (b.box && b.box->empty())
        throw std::invalid_argument("classify_bnf: empty disjunction under box");
    if (b.level == 0 && (!b.diamonds.empty() || b.box))
        throw std::invalid_argument("classify_bnf: level-0 form with modal parts");
    if (b.diamonds.empty() && !b.box) return BnfCase::AtomsOnly;
    if (!b.diamonds.empty() && !b.box) return BnfCase::DiamondsNoBox;
    if (b.diamonds.empty()) return BnfCase::BoxNoDiamonds;
    return BnfCase::DiamondsAndBox;
}

// ── Rewriting ────────────────────────────────────────────────────────────

namespace {

int level_of(const BasicNormalForm& b) {
    int lvl = 0;
    for (const auto& d : b.diamonds) lvl = std::max(lvl, d.level + 1);
    if (b.box)
        for (const auto& g : *b.box) lvl = std::max(lvl, g.level + 1);
    return lvl;
}

class Rewriter {
public:
    explicit Rewriter(const NormalFormLimits& limits) : limits_(limits) {}

    std::vector<BasicNormalForm> rewrite(const Formula& f) {
        switch (f.kind()) {
            case Formula::Kind::Top:
            case Formula::Kind::Bot:
                throw std::invalid_argument(
                    "to_normal_form: truth constants are outside the normal-form fragment");
            case Formula::Kind::NegAtom:
                throw std::invalid_argument(
                    "to_normal_form: negated atoms are outside the normal-form fragment");
            case Formula::Kind::Atom: {
                BasicNormalForm b;
                b.atoms = {f.name()};
                return {b};
            }
            case Formula::Kind::Or: {
                std::vector<BasicNormalForm> out;
                for (const auto& c : f.children()) {
                    auto part = rewrite(c);
                    out.insert(out.end(), part.begin(), part.end());
                }
                sort_dedup(out);
                charge(out.size());
                return out;
            }
            case Formula::Kind::Dia: {
                auto inner = rewrite(f.child());
                std::vector<BasicNormalForm> out;
                out.reserve(inner.size());
                for (auto& b : inner) {
                    BasicNormalForm d;
                    d.diamonds = {std::move(b)};
                    d.level = level_of(d);
                    out.push_back(std::move(d));
                }
                sort_dedup(out);
                return out;
            }
            case Formula::Kind::Box: {
                auto inner = rewrite(f.child());
                BasicNormalForm b;
                b.box = std::move(inner);
                b.level = level_of(b);
                return {b};
            }
            case Formula::Kind::And: {
                std::vector<BasicNormalForm> acc;
                bool first = true;
                for (const auto& c : f.children()) {
                    auto part = rewrite(c);
                    if (first) {
                        acc = std::move(part);
                        first = false;
                        continue;
                    }
                    std::vector<BasicNormalForm> next;
                    charge(acc.size() * part.size());
                    for (const auto& x : acc)
                        for (const auto& y : part) next.push_back(merge(x, y));
                    sort_dedup(next);
                    acc = std::move(next);
                }
                return acc;
            }
        }
        throw std::logic_error("to_normal_form: unreachable");
    }

private:
    // Conjunction of two basic normal forms, itself a basic normal form:
    // atoms and diamonds accumulate, conjoined boxes merge into one box
    // whose disjunction is distributed pairwise.
    BasicNormalForm merge(const BasicNormalForm& x, const BasicNormalForm& y) {
        BasicNormalForm out;
        std::set_union(x.atoms.begin(), x.atoms.end(), y.atoms.begin(), y.atoms.end(),
                       std::back_inserter(out.atoms));
        out.diamonds = x.diamonds;
        out.diamonds.insert(out.diamonds.end(), y.diamonds.begin(), y.diamonds.end());
        sort_dedup(out.diamonds);
        if (x.box && y.box) {
            std::vector<BasicNormalForm> box;
            charge(x.box->size() * y.box->size());
            for (const auto& g : *x.box)
                for (const auto& h : *y.box) box.push_back(merge(g, h));
            sort_dedup(box);
            out.box = std::move(box);
        } else if (x.box) {
            out.box = x.box;
        } else if (y.box) {
            out.box = y.box;
        }
        out.level = level_of(out);
        return out;
    }

    void charge(std::size_t produced) {
        budget_used_ += produced;
        if (budget_used_ > limits_.max_disjuncts)
            throw SizeLimitError("normal form exceeds the disjunct budget (" +
                                 std::to_string(limits_.max_disjuncts) + ")");
    }

    const NormalFormLimits& limits_;
    std::size_t budget_used_ = 0;
};

}  // namespace

NormalForm to_normal_form(const Formula& f, const NormalFormLimits& limits) {
    Rewriter rw(limits);
    NormalForm nf;
    nf.disjuncts = rw.rewrite(f);
    for (const auto& b : nf.disjuncts) nf.level = std::max(nf.level, b.level);
    return nf;
}

// ── Rendering ────────────────────────────────────────────────────────────

Formula bnf_to_formula(const BasicNormalForm& b) {
    std::vector<Formula> conjuncts;
    for (const auto& a : b.atoms) conjuncts.push_back(Formula::atom(a));
    for (const auto& d : b.diamonds) conjuncts.push_back(Formula::dia(bnf_to_formula(d)));
    if (b.box) {
        std::vector<Formula> disjuncts;
        disjuncts.reserve(b.box->size());
        for (const auto& g : *b.box) disjuncts.push_back(bnf_to_formula(g));
        conjuncts.push_back(Formula::box(Formula::disj(std::move(disjuncts))));
    }
    if (conjuncts.empty())
        throw std::invalid_argument("bnf_to_formula: empty conjunction");
    return Formula::conj(std::move(conjuncts));
}

Formula nf_to_formula(const NormalForm& nf) {
    if (nf.disjuncts.empty())
        throw std::invalid_argument("nf_to_formula: empty disjunction");
    std::vector<Formula> parts;
    parts.reserve(nf.disjuncts.size());
    for (const auto& b : nf.disjuncts) parts.push_back(bnf_to_formula(b));
    return Formula::disj(std::move(parts));
}

}  // namespace modchar
