#include <gtest/gtest.h>

#include "capdl/model_io.hpp"
#include "support/generators.hpp"

using namespace capdl;

TEST(ModelText, ParsesEdgesForbiddenInit) {
    ParsedModel pm = parse_model_text(
        "# comment\n"
        "edge c3 c10 -> c12\n"
        "forbidden c12\n"
        "init c3\n");
    EXPECT_EQ(pm.sm.atom_count(), 3u);
    EXPECT_EQ(pm.sm.h.edge_count(), 1u);
    EXPECT_TRUE(pm.sm.forbidden.test(pm.sm.names.id_of("c12")));
    EXPECT_TRUE(pm.init.test(pm.sm.names.id_of("c3")));
}

TEST(ModelText, MultiHeadEdgesSplit) {
    ParsedModel pm = parse_model_text("edge c1 -> c3 c7\n");
    EXPECT_EQ(pm.sm.h.edge_count(), 2u);
}

TEST(ModelText, EmptyFileGivesEmptyModel) {
    ParsedModel pm = parse_model_text("");
    EXPECT_EQ(pm.sm.atom_count(), 0u);
    EXPECT_EQ(pm.sm.h.edge_count(), 0u);
}

TEST(ModelText, ErrorsCarryLineNumbers) {
    try {
        parse_model_text("edge a -> b\nbogus x\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line_no, 2u);
    }
    try {
        parse_model_text("\n\nedge a -> a\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line_no, 3u);
    }
}

TEST(ModelText, ParseSerializeParseIsIdentity) {
    testgen::Rng rng(9501);
    for (int i = 0; i < 100; ++i) {
        SafetyModel sm = testgen::random_model(rng, 10, 16, 3);
        AtomSet init = testgen::random_config(rng, sm.atom_count());
        std::string text = serialize_model_text(sm, init);
        ParsedModel pm = parse_model_text(text);
        EXPECT_EQ(serialize_model_text(pm.sm, pm.init), text);
        EXPECT_EQ(pm.sm.atom_count(), sm.atom_count());
        EXPECT_EQ(pm.sm.h.edge_count(), sm.h.edge_count());
        EXPECT_EQ(pm.sm.forbidden, sm.forbidden);
        EXPECT_EQ(pm.init, init);
    }
}

TEST(ModelJson, RoundTripsThroughText) {
    testgen::Rng rng(9502);
    for (int i = 0; i < 50; ++i) {
        SafetyModel sm = testgen::random_model(rng, 8, 12, 3);
        AtomSet init = testgen::random_config(rng, sm.atom_count());
        ParsedModel pm = parse_model_json(serialize_model_json(sm, init));
        EXPECT_EQ(serialize_model_text(pm.sm, pm.init), serialize_model_text(sm, init));
    }
}

TEST(ModelJson, RejectsMalformedInput) {
    EXPECT_THROW(parse_model_json("{"), ParseError);
}
