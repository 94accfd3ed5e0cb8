#include <doctest.h>

#include <random>

#include "modchar/formula.hpp"
#include "modchar/oracle.hpp"

using namespace modchar;

namespace {

const PropSignature kSig{{"p", "q", "r"}};

Formula parse(const std::string& text) { return parse_formula(text, kSig); }

}  // namespace

TEST_CASE("parsing produces the expected trees") {
    Formula f = parse("p & (q | r)");
    REQUIRE(f.kind() == Formula::Kind::And);
    REQUIRE(f.children().size() == 2);
    CHECK(f.children()[0] == Formula::atom("p"));
    CHECK(f.children()[1] == Formula::disj({Formula::atom("q"), Formula::atom("r")}));

    CHECK(parse("<>p") == Formula::dia(Formula::atom("p")));
    CHECK(parse("[]p") == Formula::box(Formula::atom("p")));
    CHECK(parse("true") == Formula::top());
    CHECK(parse("false") == Formula::bot());
}

TEST_CASE("surface negation is pushed to the atoms") {
    CHECK(parse("~(<>p)") == Formula::box(Formula::neg_atom("p")));
    CHECK(parse("~~p") == Formula::atom("p"));
    CHECK(parse("~(p & q)") ==
          Formula::disj({Formula::neg_atom("p"), Formula::neg_atom("q")}));
    CHECK(parse("~true") == Formula::bot());
    CHECK(parse("~[](p | ~q)") ==
          Formula::dia(Formula::conj({Formula::neg_atom("p"), Formula::atom("q")})));
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(parse("p &"), ParseError);
    CHECK_THROWS_AS(parse("(p"), ParseError);
    CHECK_THROWS_AS(parse("p p"), ParseError);
    CHECK_THROWS_AS(parse("unknown_prop"), ParseError);
    try {
        parse("p & unknown_prop");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("and/or flatten and collapse singletons") {
    Formula f = Formula::conj({Formula::atom("p"),
                               Formula::conj({Formula::atom("q"), Formula::atom("r")})});
    REQUIRE(f.children().size() == 3);
    CHECK(Formula::conj({Formula::atom("p")}) == Formula::atom("p"));
    CHECK(parse("p & q & r").children().size() == 3);
}

TEST_CASE("modal depth") {
    CHECK(modal_depth(parse("p & q")) == 0);
    CHECK(modal_depth(parse("[](p | <>q)")) == 2);
    // height_3 spelled out: four nested boxes on the left conjunct.
    CHECK(modal_depth(height_formula(3)) == 4);
}

TEST_CASE("dualization swaps operators and fixes atoms") {
    CHECK(dual(parse("[]p")) == parse("<>p"));
    CHECK(dual(parse("p & q")) == parse("p | q"));
    CHECK(dual(dual(parse("<>(p & q)"))) == parse("<>(p & q)"));
    CHECK_THROWS_AS(dual(parse("~p")), std::invalid_argument);
}

TEST_CASE("flip exchanges atoms with negated atoms") {
    CHECK(flip_formula(parse("p")) == parse("~p"));
    CHECK(flip_formula(flip_formula(parse("[](p | ~q)"))) == parse("[](p | ~q)"));
    CHECK(flip_formula(parse("[]p & <>q")) == parse("[]~p & <>~q"));
}

TEST_CASE("properties of dual, flip and printing on random formulas") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        Formula f = random_formula(rng, kSig, Connectives::positive(), 3);
        CAPTURE(to_string(f));
        CHECK(dual(dual(f)) == f);
        CHECK(flip_formula(flip_formula(f)) == f);
        CHECK(modal_depth(dual(f)) == modal_depth(f));
        CHECK(connectives_of(dual(f)).subset_of(Connectives::positive()));
        // NNF of the negation coincides with flip-after-dual on this
        // fragment, syntactically.
        CHECK(negate_nnf(f) == flip_formula(dual(f)));
        // Printing round-trips structurally.
        CHECK(parse_formula(to_string(f), kSig) == f);
    }
    for (int i = 0; i < 300; ++i) {
        Formula f = random_formula(rng, kSig, Connectives::full(), 3);
        CAPTURE(to_string(f));
        CHECK(parse_formula(to_string(f), kSig) == f);
        CHECK(negate_nnf(negate_nnf(f)) == f);
    }
}

TEST_CASE("fragment classification") {
    CHECK(in_fragment(parse("[]p & <>q"), Connectives::positive()));
    CHECK_FALSE(in_fragment(parse("~p"), Connectives::positive()));
    CHECK_FALSE(in_fragment(parse("true"), Connectives::positive()));
    Connectives c = connectives_of(parse("<>(p | q)"));
    CHECK(c.dia);
    CHECK(c.disj);
    CHECK_FALSE(c.conj);
    CHECK_FALSE(c.box);
}

TEST_CASE("uniform flip renames negated atoms") {
    CHECK(uniform_flip(parse("<>~q"), {"q"}) ==
          Formula::dia(Formula::atom("q_neg")));
    CHECK(uniform_flip(parse("p & []~q"), {"q"}) ==
          Formula::conj({Formula::atom("p"), Formula::box(Formula::atom("q_neg"))}));
    // Empty negated set is the identity.
    CHECK(uniform_flip(parse("p & <>q"), {}) == parse("p & <>q"));
    // Violations of the (P;Q) discipline are rejected.
    CHECK_THROWS_AS(uniform_flip(parse("q & ~q"), {"q"}), std::invalid_argument);
    CHECK_THROWS_AS(uniform_flip(parse("~p"), {"q"}), std::invalid_argument);
}

TEST_CASE("height formulas") {
    CHECK(height_formula(0) == Formula::conj({Formula::box(Formula::bot()), Formula::top()}));
    CHECK(to_string(height_formula(2)) == "[][][]false & <><>true");
    CHECK(height_formula(1, HeightVariant::Negation) ==
          parse("<><>true | []<>true"));
    // The TopFree variant avoids the constant true.
    Connectives c = connectives_of(height_formula(2, HeightVariant::TopFree));
    CHECK_FALSE(c.top);
    CHECK(c.bot);
}
