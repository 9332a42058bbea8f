#include <gtest/gtest.h>

#include "generators.hpp"
#include "msadl/model_set.hpp"
#include "msadl/parser.hpp"
#include "msadl/printer.hpp"

namespace msadl {
namespace {

using testing::Gen;

SourceUnit reparse(const SourceUnit& u) {
    std::string text = serialize(u);
    ParseResult r = parse_unit(text, u.view, u.path);
    if (!r.ok()) {
        ADD_FAILURE() << format_diagnostic(r.diagnostics.front()) << "\n" << text;
        return {};
    }
    return *r.unit;
}

TEST(Printer, PersonListingCanonicalForm) {
    ParseResult r = parse_unit(
        "/// @entity { identity = [ SSN, country ] } \n"
        "type Person { SSN: string, country: string( length(3) ), name: string }\n",
        View::Jolie);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(serialize(*r.unit),
              "view jolie\n\n"
              "/// @entity { identity = [ SSN, country ] }\n"
              "type Person {\n"
              "    SSN: string\n"
              "    country: string(length(3))\n"
              "    name: string\n"
              "}\n");
}

TEST(Printer, PersonTypeReparsesEqual) {
    ParseResult r = parse_unit(
        "/// @entity { identity = [ SSN, country ] }\n"
        "type Person { SSN: string, country: string( length(3) ), name: string }\n",
        View::Jolie);
    ASSERT_TRUE(r.ok());
    const TypeDecl& original = r.unit->types.front();
    ParseResult again = parse_unit(serialize(*r.unit), View::Jolie);
    ASSERT_TRUE(again.ok());
    EXPECT_EQ(again.unit->types.front(), original);
}

TEST(Printer, RefinementsAndCardinalities) {
    const char* text =
        "type T {\n"
        "    a[0,*]: string(regex(\"[a-z]+\"))\n"
        "    b[2,3]: int(range(-1, 9))\n"
        "    c[0,1]: double(range(0.5, 2))\n"
        "    d: string(enum(\"x\", \"y\"))\n"
        "    e: string(length(1, 4))\n"
        "}\n";
    ParseResult r = parse_unit(text, View::Jolie);
    ASSERT_TRUE(r.ok()) << format_diagnostic(r.diagnostics.front());
    EXPECT_EQ(serialize(r.unit->types.front()), text);
}

TEST(Printer, SequenceBindsTighterThanParallel) {
    auto r = parse_behaviour("a@P(1); b@P(2) | c@P(3)");
    ASSERT_TRUE(r.term);
    Term expected = parallel(sequence(invoke("P", "a", literal(std::int64_t{1})), invoke("P", "b", literal(std::int64_t{2}))),
                             invoke("P", "c", literal(std::int64_t{3})));
    EXPECT_EQ(*r.term, expected);
    auto again = parse_behaviour(serialize(*r.term));
    ASSERT_TRUE(again.term);
    EXPECT_EQ(*again.term, expected);
}

TEST(Printer, NestedCompositionKeepsShape) {
    Term left_nested = sequence(sequence(nil_term(), invoke("P", "a", literal(Unit{}))), nil_term());
    Term par_in_seq = sequence(nil_term(), parallel(nil_term(), nil_term()));
    Term par_left = parallel(parallel(nil_term(), invoke("P", "b", literal(true))), nil_term());
    for (const Term& t : {left_nested, par_in_seq, par_left}) {
        auto r = parse_behaviour(serialize(t));
        ASSERT_TRUE(r.term) << serialize(t);
        EXPECT_EQ(*r.term, t) << serialize(t);
    }
}

TEST(Printer, EmptyUnit) {
    SourceUnit u;
    u.view = View::Lemma;
    EXPECT_EQ(serialize(u), "view lemma\n");
    ParseResult r = parse_unit(serialize(u), std::nullopt);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.unit->view, View::Lemma);
}

TEST(Generators, UnitsValidate) {
    Gen g(5);
    for (int i = 0; i < 100; ++i) {
        SourceUnit u = i % 2 ? testing::gen_jolie_unit(g, "gen.jsm") : testing::gen_lemma_unit(g, "gen.lsm");
        auto diags = validate(resolve({u}).set);
        ASSERT_FALSE(has_errors(diags)) << format_diagnostic(diags.front()) << "\n" << serialize(u);
    }
}

TEST(PrinterProperty, RandomBehaviourTermsRoundTrip) {
    Gen g(7);
    for (int i = 0; i < 300; ++i) {
        Term t = testing::gen_term(g, 4);
        std::string text = serialize(t);
        auto r = parse_behaviour(text);
        ASSERT_TRUE(r.term) << text << "\n" << format_diagnostic(r.diagnostics.front());
        ASSERT_EQ(*r.term, t) << text;
    }
}

TEST(PrinterProperty, RandomJolieUnitsRoundTrip) {
    Gen g(11);
    for (int i = 0; i < 150; ++i) {
        SourceUnit u = testing::gen_jolie_unit(g, "gen.jsm");
        SourceUnit back = reparse(u);
        ASSERT_EQ(back, u) << serialize(u);
        ASSERT_EQ(serialize(back), serialize(u));
    }
}

TEST(PrinterProperty, RandomLemmaUnitsRoundTrip) {
    Gen g(13);
    for (int i = 0; i < 150; ++i) {
        SourceUnit u = testing::gen_lemma_unit(g, "gen.lsm");
        SourceUnit back = reparse(u);
        ASSERT_EQ(back, u) << serialize(u);
        ASSERT_EQ(serialize(back), serialize(u));
    }
}

}  // namespace
}  // namespace msadl
