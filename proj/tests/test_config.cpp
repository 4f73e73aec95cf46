#include <gtest/gtest.h>

#include <cmath>

#include "hybridmech.hpp"

using namespace hybridmech;

TEST(Config, EmptyDocumentIsTable1) {
    const Config c = config_from_json(json::object());
    EXPECT_EQ(c.membrane, table1_membrane());
    EXPECT_EQ(c.atoms, table1_atoms());
    EXPECT_EQ(c.cavity, table1_cavity());
}

TEST(Config, RoundTrip) {
    Config c;
    c.membrane.Q_m = INFINITY;
    c.membrane.placement = Placement::at_position(0.0049);
    c.membrane.r_m_override.reset();
    c.atoms.omega_L_listed.reset();
    c.cavity.geometry = Geometry::MovableMirror;
    c.cavity.finesse = 313.25;
    c.cooling.gamma_cool = 1.234567890123e5;
    const json doc = config_to_json(c);
    const Config back = config_from_json(json::parse(doc.dump()));
    EXPECT_EQ(back.membrane, c.membrane);
    EXPECT_EQ(back.atoms, c.atoms);
    EXPECT_EQ(back.cavity, c.cavity);
    EXPECT_EQ(back.cooling.gamma_cool, c.cooling.gamma_cool);
    EXPECT_EQ(config_to_json(back), doc);
}

TEST(Config, RoundTripPreservesDerivedQuantities) {
    const Config c;
    const Config back = config_from_json(json::parse(config_to_json(c).dump()));
    const SystemParams a = c.system();
    const SystemParams b = back.system();
    EXPECT_EQ(a.derived().alpha, b.derived().alpha);
    EXPECT_EQ(a.derived().kappa, b.derived().kappa);
    EXPECT_EQ(full_rates(a).g, full_rates(b).g);
}

TEST(Config, UnknownKeysRejected) {
    EXPECT_THROW(config_from_json(json{{"cavty", json::object()}}), ValidationError);
    EXPECT_THROW(config_from_json(json{{"cavity", {{"finess", 400}}}}), ValidationError);
    EXPECT_THROW(config_from_json(json{{"membrane", {{"placement", {{"at", 1e-3}}}}}}), ValidationError);
}

TEST(Config, TypeErrors) {
    EXPECT_THROW(config_from_json(json{{"cavity", {{"finesse", "high"}}}}), ValidationError);
    EXPECT_THROW(config_from_json(json{{"cavity", {{"geometry", "ring"}}}}), ValidationError);
    EXPECT_THROW(config_from_json(json{{"cooling", {{"gamma_cool", -1}}}}), ValidationError);
}

TEST(Config, NullClearsOptional) {
    const Config c = config_from_json(json{{"membrane", {{"r_m_override", nullptr}}}});
    EXPECT_FALSE(c.membrane.r_m_override);
    EXPECT_NEAR(c.system().derived().abs_r_m, 0.476, 0.005);
}

TEST(Config, Overrides) {
    json doc = json::object();
    apply_override(doc, "cavity.finesse=300");
    apply_override(doc, "membrane.placement=on_slope");
    apply_override(doc, "membrane.Q_m=inf");
    apply_override(doc, "cooling.gamma_cool=1e5");
    const Config c = config_from_json(doc);
    EXPECT_EQ(c.cavity.finesse, 300.0);
    EXPECT_TRUE(std::isinf(c.membrane.Q_m));
    EXPECT_EQ(c.cooling.gamma_cool, 1e5);
    EXPECT_THROW(apply_override(doc, "novalue"), ValidationError);
    EXPECT_THROW(apply_override(doc, "cavity..finesse=1"), ValidationError);
}

TEST(Config, OverrideWinsOverFile) {
    json doc{{"cavity", {{"finesse", 200}}}};
    apply_override(doc, "cavity.finesse=450");
    EXPECT_EQ(config_from_json(doc).cavity.finesse, 450.0);
}

TEST(Config, MissingFile) {
    try {
        read_json_file("/nonexistent/missing.json");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("file not found"), std::string::npos);
    }
}

TEST(Config, HashStable) {
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
    const Config a;
    Config b;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.cavity.finesse = 451.0;
    EXPECT_NE(config_hash(a), config_hash(b));
}
