#include <doctest.h>

#include <random>

#include "modchar/normalform.hpp"
#include "modchar/oracle.hpp"

using namespace modchar;

namespace {

const PropSignature kSig{{"p", "q", "r"}};

Formula parse(const std::string& text) { return parse_formula(text, kSig); }

// Random basic normal form of the given level; small by construction.
BasicNormalForm random_bnf(std::mt19937_64& rng, int level) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> prop(0, 2);
    BasicNormalForm b;
    int parts = 0;
    while (parts == 0) {
        for (int i = 0; i < 3; ++i)
            if (coin(rng)) b.atoms.push_back(kSig.names()[prop(rng)]);
        std::sort(b.atoms.begin(), b.atoms.end());
        b.atoms.erase(std::unique(b.atoms.begin(), b.atoms.end()), b.atoms.end());
        parts = static_cast<int>(b.atoms.size());
        if (level > 0) {
            int diamonds = coin(rng) + coin(rng);
            for (int i = 0; i < diamonds; ++i)
                b.diamonds.push_back(random_bnf(rng, level - 1));
            std::sort(b.diamonds.begin(), b.diamonds.end());
            b.diamonds.erase(std::unique(b.diamonds.begin(), b.diamonds.end()),
                             b.diamonds.end());
            if (coin(rng)) {
                std::vector<BasicNormalForm> box;
                int disjuncts = 1 + coin(rng);
                for (int i = 0; i < disjuncts; ++i) box.push_back(random_bnf(rng, level - 1));
                std::sort(box.begin(), box.end());
                box.erase(std::unique(box.begin(), box.end()), box.end());
                b.box = std::move(box);
            }
            parts += static_cast<int>(b.diamonds.size()) + (b.box ? 1 : 0);
        }
    }
    int lvl = 0;
    for (const auto& d : b.diamonds) lvl = std::max(lvl, d.level + 1);
    if (b.box)
        for (const auto& g : *b.box) lvl = std::max(lvl, g.level + 1);
    b.level = lvl;
    return b;
}

}  // namespace

TEST_CASE("distribution examples") {
    NormalForm nf = to_normal_form(parse("p & (q | r)"));
    CHECK(nf.level == 0);
    REQUIRE(nf.disjuncts.size() == 2);
    CHECK(nf.disjuncts[0].atoms == std::vector<std::string>{"p", "q"});
    CHECK(nf.disjuncts[1].atoms == std::vector<std::string>{"p", "r"});

    // Diamonds distribute over disjunction.
    nf = to_normal_form(parse("<>(p | q)"));
    REQUIRE(nf.disjuncts.size() == 2);
    for (const auto& b : nf.disjuncts) {
        CHECK(b.atoms.empty());
        CHECK(b.diamonds.size() == 1);
        CHECK_FALSE(b.box.has_value());
    }

    // Conjoined boxes merge into one.
    nf = to_normal_form(parse("[]p & []q"));
    REQUIRE(nf.disjuncts.size() == 1);
    const auto& b = nf.disjuncts[0];
    REQUIRE(b.box.has_value());
    REQUIRE(b.box->size() == 1);
    CHECK(b.box->front().atoms == std::vector<std::string>{"p", "q"});
    CHECK(b.diamonds.empty());
}

TEST_CASE("rejected inputs") {
    CHECK_THROWS_AS(to_normal_form(parse("true")), std::invalid_argument);
    CHECK_THROWS_AS(to_normal_form(parse("p & false")), std::invalid_argument);
    CHECK_THROWS_AS(to_normal_form(parse("~p")), std::invalid_argument);
}

TEST_CASE("shape classification") {
    CHECK(classify_bnf(to_normal_form(parse("p & q")).disjuncts[0]) == BnfCase::AtomsOnly);

    NormalForm dia = to_normal_form(parse("<>p"));
    CHECK(classify_bnf(dia.disjuncts[0]) == BnfCase::DiamondsNoBox);
    CHECK(dia.disjuncts[0].atoms.empty());

    CHECK(classify_bnf(to_normal_form(parse("[](p | q) & <>p")).disjuncts[0]) ==
          BnfCase::DiamondsAndBox);
    CHECK(classify_bnf(to_normal_form(parse("q & [](p | q)")).disjuncts[0]) ==
          BnfCase::BoxNoDiamonds);

    BasicNormalForm malformed;
    CHECK_THROWS_AS(classify_bnf(malformed), std::invalid_argument);
}

TEST_CASE("rendering round-trips") {
    BasicNormalForm lit;
    lit.atoms = {"p"};
    CHECK(bnf_to_formula(lit) == parse("p"));

    BasicNormalForm dia;
    dia.diamonds = {lit};
    dia.level = 1;
    CHECK(bnf_to_formula(dia) == parse("<>p"));

    std::mt19937_64 rng(31);
    for (int i = 0; i < 500; ++i) {
        BasicNormalForm b = random_bnf(rng, 2);
        REQUIRE(bnf_well_formed(b));
        Formula f = bnf_to_formula(b);
        NormalForm nf = to_normal_form(f);
        CHECK(equivalent(f, nf_to_formula(nf), kSig).equivalent);
    }
}

TEST_CASE("normal forms are equivalent, level-exact and constant-free") {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 400; ++i) {
        Formula f = random_formula(rng, kSig, Connectives::positive(), 3);
        CAPTURE(to_string(f));
        NormalForm nf = to_normal_form(f);
        REQUIRE_FALSE(nf.disjuncts.empty());
        for (const auto& b : nf.disjuncts) CHECK(bnf_well_formed(b));
        CHECK(nf.level == modal_depth(f));
        Formula rendered = nf_to_formula(nf);
        CHECK(in_fragment(rendered, Connectives::positive()));
        CHECK(equivalent(f, rendered, kSig).equivalent);
        // Idempotence up to equivalence.
        CHECK(equivalent(rendered, nf_to_formula(to_normal_form(rendered)), kSig).equivalent);
    }
}

TEST_CASE("the disjunct budget aborts oversized rewrites") {
    NormalFormLimits tiny;
    tiny.max_disjuncts = 8;
    Formula f = parse("(p | q) & (p | r) & (q | r) & <>(p | q | r)");
    CHECK_THROWS_AS(to_normal_form(f, tiny), SizeLimitError);
    CHECK_NOTHROW(to_normal_form(f));
}
