// ============================================================================
// acceptance.cpp — end-to-end acceptance suite
// ============================================================================
//
// One criterion per section, one pass/fail line each, every bound and
// tolerance pinned in code.  Exit status is nonzero when any criterion
// fails.  An optional argv[1] sets the verifier concurrency (default 4).
//
// ============================================================================

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "modchar/characterize.hpp"
#include "modchar/oracle.hpp"
#include "modchar/simulation.hpp"
#include "support/brute.hpp"

using namespace modchar;

namespace {

int jobs = 4;

struct Outcome {
    bool pass;
    std::string details;
};

const PropSignature kOne{{"p"}};
const PropSignature kTwo{{"p", "q"}};

// Criterion 1: the example counts for Box^n p equal tower(n, 2) exactly for
// n = 1, 2, 3, within 10 seconds.
Outcome tower_counts() {
    auto start = std::chrono::steady_clock::now();
    auto rows = tower_table(3);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::uint64_t expected[] = {2, 4, 16};
    bool ok = rows.size() == 3;
    std::ostringstream d;
    for (std::size_t i = 0; ok && i < rows.size(); ++i) {
        ok = rows[i].constructed == expected[i] && rows[i].expected == expected[i];
        d << "n=" << rows[i].n << ":" << rows[i].constructed << " ";
    }
    ok = ok && elapsed < 10.0;
    d << "in " << elapsed << "s (limit 10s)";
    return {ok, d.str()};
}

// Criterion 2: 200 random fragment formulas of depth <= 3 over two
// propositions characterise under the size guard and fit their own
// examples, within 2 minutes.
Outcome fit_suite() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0);
    CharacterizeLimits limits;
    limits.max_examples = 3000;
    int done = 0, skipped = 0;
    while (done < 200) {
        Formula f = random_formula(rng, kTwo, Connectives::positive(), 3);
        try {
            Characterization c = characterize(f, kTwo, limits);
            if (!fits(f, c).ok)
                return {false, "fit failed for " + to_string(f)};
            ++done;
        } catch (const SizeLimitError&) {
            if (++skipped > 4000) return {false, "size guard rejected too many samples"};
        }
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream d;
    d << "200 formulas fit, " << skipped << " over the guard, in " << elapsed
      << "s (limit 120s)";
    return {elapsed < 120.0, d.str()};
}

struct CorpusEntry {
    const char* text;
    const PropSignature* sig;
};

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = {
        {"p", &kOne},          {"<>p", &kOne},        {"[]p", &kOne},
        {"[][]p", &kOne},      {"<><>p", &kOne},      {"p & <>p", &kOne},
        {"p | <>p", &kOne},    {"[]p & <>p", &kOne},  {"q", &kTwo},
        {"p & q", &kTwo},      {"p | q", &kTwo},      {"<>(p & q)", &kTwo},
        {"[](p | q)", &kTwo},  {"[]p & <>q", &kTwo},  {"<>(p | q)", &kTwo},
        {"[](p & q)", &kTwo},  {"<>p & <>q", &kTwo},  {"[]p | []q", &kTwo},
        {"p & <>q", &kTwo},    {"<>[]p", &kTwo},
    };
    return entries;
}

// Criterion 3: no fitting non-equivalent candidate of depth <= 2 and size
// <= 7 exists for any corpus formula, within 10 minutes.
Outcome unique_characterisation() {
    auto start = std::chrono::steady_clock::now();
    UniqueBounds bounds;
    bounds.max_depth = 2;
    bounds.max_size = 7;
    std::uint64_t candidates = 0;
    for (const auto& entry : corpus()) {
        Formula f = parse_formula(entry.text, *entry.sig);
        Characterization c = characterize(f, *entry.sig);
        VerificationReport report = verify_unique(f, c, bounds, jobs);
        candidates += report.candidates;
        if (!report.pass) {
            std::string culprit = report.counterexamples.empty()
                                      ? std::string("?")
                                      : to_string(*report.counterexamples[0].formula);
            return {false, std::string(entry.text) + " admits fitting candidate " + culprit};
        }
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream d;
    d << "20 formulas, " << candidates << " candidates scanned, in " << elapsed
      << "s (limit 600s)";
    return {elapsed < 600.0, d.str()};
}

// Criterion 4: for every corpus formula, the upward closure of the
// positives and the downward closure of the negatives partition all models
// with <= 3 states plus 500 sampled models of 4..6 states, within 10
// minutes.
Outcome duality_partition() {
    auto start = std::chrono::steady_clock::now();
    DualityBounds bounds;
    bounds.exhaustive_states = 3;
    bounds.sample_count = 500;
    bounds.sample_min_states = 4;
    bounds.sample_max_states = 6;
    bounds.seed = 0;
    std::uint64_t models = 0;
    for (const auto& entry : corpus()) {
        Formula f = parse_formula(entry.text, *entry.sig);
        Characterization c = characterize(f, *entry.sig);
        VerificationReport report = verify_duality(f, c, bounds, jobs);
        models += report.candidates;
        if (!report.pass)
            return {false, std::string(entry.text) + ": " +
                               report.counterexamples[0].reason};
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream d;
    d << "20 formulas, " << models << " models checked, in " << elapsed << "s (limit 600s)";
    return {elapsed < 600.0, d.str()};
}

// Criterion 5: 1000 weakly related pairs show no fragment truth loss.
Outcome preservation() {
    PreservationBounds bounds;
    bounds.sample_count = 1000;
    bounds.formula_depth = 3;
    bounds.seed = 0;
    VerificationReport report = verify_preservation(kTwo, bounds, jobs);
    std::ostringstream d;
    d << report.candidates << " related pairs, " << report.counterexamples.size()
      << " violations";
    return {report.pass, d.str()};
}

// Criterion 6: for 100 random labeled example sets with a fitting
// full-language formula, the spoiler fits, is non-equivalent, and the
// separating model checks out.
Outcome spoiler_reproduction() {
    std::mt19937_64 rng(0);
    for (int i = 0; i < 100; ++i) {
        Formula f = random_formula(rng, kTwo, Connectives::full(), 2);
        std::vector<PointedModel> pos, neg;
        std::uniform_int_distribution<int> count_dist(2, 6);
        int count = count_dist(rng);
        for (int k = 0; k < count; ++k) {
            PointedModel m = random_model(rng, kTwo, 1, 4, 0.4);
            (modelcheck(f, m) ? pos : neg).push_back(m);
        }
        SpoilerResult r = spoiler_full_language(f, pos, neg, kTwo);
        if (!fits(r.spoiler, pos, neg).ok)
            return {false, "spoiler does not fit for " + to_string(f)};
        if (equivalent(f, r.spoiler, kTwo).equivalent)
            return {false, "spoiler equivalent to " + to_string(f)};
        if (modelcheck(f, r.witness) == modelcheck(r.spoiler, r.witness))
            return {false, "witness fails to separate for " + to_string(f)};
    }
    return {true, "100 spoilers fit and separate"};
}

// Criterion 7: at n = 1 and n = 2, deleting any single positive example of
// Box^n p admits the fitting non-equivalent formula Box^n p /\ spoiler.
Outcome minimality() {
    for (int n = 1; n <= 2; ++n) {
        Formula box_n = box_power(n, Formula::atom("p"));
        Characterization c = characterize(box_n, kOne);
        for (std::size_t drop = 0; drop < c.positives.size(); ++drop) {
            Formula spoiler = minimality_spoiler(c.positives[drop], n - 1, "p");
            Formula candidate = Formula::conj({box_n, spoiler});
            std::vector<PointedModel> reduced;
            for (std::size_t i = 0; i < c.positives.size(); ++i)
                if (i != drop) reduced.push_back(c.positives[i]);
            if (!fits(candidate, reduced, c.negatives).ok)
                return {false, "candidate does not fit after dropping example " +
                                   std::to_string(drop) + " at n=" + std::to_string(n)};
            if (equivalent(candidate, box_n, kOne).equivalent)
                return {false, "candidate equivalent at n=" + std::to_string(n)};
        }
    }
    return {true, "every single-example deletion at n=1,2 is defeated"};
}

// Criterion 8: the concrete fixture facts, exact and under a second.
Outcome fixtures() {
    auto start = std::chrono::steady_clock::now();
    PropSignature sig{{"p", "q", "r"}};
    CoproductFixtures fx = coproduct_fixtures(sig);
    auto holds = [&](const char* text, const PointedModel& m) {
        return modelcheck(parse_formula(text, sig), m);
    };
    bool mc = holds("[](p | q)", fx.a) && holds("<>r", fx.b) &&
              !holds("<>(q & r)", fx.c) && !holds("<>(p & r)", fx.c_prime) &&
              holds("<>(p & r)", fx.c) && holds("<>(q & r)", fx.c_prime);
    bool ws = weak_simulates(fx.a, fx.c) && weak_simulates(fx.b, fx.c) &&
              weak_simulates(fx.a, fx.c_prime) && weak_simulates(fx.b, fx.c_prime);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream d;
    d << "6 model-checking and 4 weak-simulation facts in " << elapsed << "s (limit 1s)";
    return {mc && ws && elapsed < 1.0, d.str()};
}

// Criterion 9: 50 random uniform formulas over ({p}; {q}) of depth <= 2
// characterise, fit, and admit no fitting non-equivalent uniform candidate
// (candidate bounds: depth <= 2, size <= 6).
Outcome uniform_fragment() {
    std::mt19937_64 rng(0);
    UniqueBounds bounds;
    bounds.max_depth = 2;
    bounds.max_size = 6;
    bounds.fragment.uniform = {{std::vector<std::string>{"p"}, std::vector<std::string>{"q"}}};
    CharacterizeLimits limits;
    limits.max_examples = 3000;
    int done = 0, skipped = 0;
    while (done < 50) {
        Formula f = random_uniform_formula(rng, {"p"}, {"q"}, 2);
        try {
            Characterization c = characterize_uniform(f, {"p"}, {"q"}, limits);
            if (!fits(f, c).ok) return {false, "fit failed for " + to_string(f)};
            VerificationReport report = verify_unique(f, c, bounds, jobs);
            if (!report.pass)
                return {false, "uniqueness failed for " + to_string(f) + " with " +
                                   to_string(*report.counterexamples[0].formula)};
            ++done;
        } catch (const SizeLimitError&) {
            if (++skipped > 1000) return {false, "size guard rejected too many samples"};
        }
    }
    std::ostringstream d;
    d << "50 uniform formulas characterised and unique (" << skipped << " over the guard)";
    return {true, d.str()};
}

// Criterion 10: the tableau agrees with exhaustive bounded-tree search on
// 500 random full-language formulas of depth <= 2.
Outcome oracle_cross_check() {
    std::mt19937_64 rng(0);
    int checked = 0;
    while (checked < 500) {
        Formula f = random_formula(rng, kTwo, Connectives::full(), 2);
        int branching = testsupport::distinct_diamonds(f);
        if (branching > 2) continue;  // keeps the exhaustive side exact and finite
        bool tableau = sat_K(f, kTwo).satisfiable;
        bool brute = testsupport::exhaustive_tree_sat(f, kTwo, modal_depth(f), branching);
        if (tableau != brute)
            return {false, "disagreement on " + to_string(f)};
        ++checked;
    }
    return {true, "500 formulas, tableau and tree search agree"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) jobs = std::atoi(argv[1]);
    struct Criterion {
        int number;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "tower table counts", tower_counts},
        {2, "fit suite on random formulas", fit_suite},
        {3, "unique characterisation on the corpus", unique_characterisation},
        {4, "duality partition on the corpus", duality_partition},
        {5, "preservation under weak simulations", preservation},
        {6, "full-language spoiler reproduction", spoiler_reproduction},
        {7, "minimality of the example sets", minimality},
        {8, "coproduct fixture facts", fixtures},
        {9, "uniform fragment characterisations", uniform_fragment},
        {10, "tableau versus exhaustive tree search", oracle_cross_check},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome{false, "exception"};
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL",
                    c.number, c.name, outcome.details.c_str(), elapsed);
        std::fflush(stdout);
        if (!outcome.pass) ++failed;
    }
    if (failed) std::printf("%d criterion(s) failed\n", failed);
    else std::printf("all 10 criteria passed\n");
    return failed ? 1 : 0;
}
