#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "kresling/design_space.hpp"
#include "support/generators.hpp"

using namespace kresling;

TEST_CASE("parse: two-unit design from the standard notation") {
    const ActuatorDesign design = parse_design("[2//3;4//6]");
    REQUIRE(design.size() == 2);
    CHECK(design.units[0].kind == ModuleKind::delta2);
    CHECK(design.units[0].chirality == Chirality::clockwise);
    CHECK(design.units[0].face == 3);
    CHECK(design.units[1].kind == ModuleKind::delta4);
    CHECK(design.units[1].chirality == Chirality::clockwise);
    CHECK(design.units[1].face == 6);
}

TEST_CASE("parse: single Kresling unit") {
    const ActuatorDesign design = parse_design("[K//]");
    REQUIRE(design.size() == 1);
    CHECK(design.units[0].kind == ModuleKind::kresling);
    CHECK(design.units[0].chirality == Chirality::clockwise);
}

TEST_CASE("parse: anticlockwise chirality") {
    const ActuatorDesign design = parse_design("[4\\\\2;3//6;4\\\\2]");
    REQUIRE(design.size() == 3);
    CHECK(design.units[0].chirality == Chirality::anticlockwise);
    CHECK(design.units[1].chirality == Chirality::clockwise);
    CHECK(design.units[0].face == 2);
}

TEST_CASE("parse: depth outside 2..4 is rejected") {
    CHECK_THROWS_WITH_AS(parse_design("[5//1]"),
                         doctest::Contains("depth must be 2, 3, or 4"), DesignParseError);
    CHECK_THROWS_AS(parse_design("[1//1]"), DesignParseError);
}

TEST_CASE("parse: face errors") {
    CHECK_THROWS_WITH_AS(parse_design("[K//3]"), doctest::Contains("not allowed on a Kresling"),
                         DesignParseError);
    CHECK_THROWS_WITH_AS(parse_design("[2//]"), doctest::Contains("missing its face index"),
                         DesignParseError);
    CHECK_THROWS_AS(parse_design("[2//7]"), DesignParseError);
    CHECK_THROWS_AS(parse_design("[2//0]"), DesignParseError);
}

TEST_CASE("parse: syntax errors carry a position") {
    try {
        parse_design("[2//3;4/6]");
        FAIL("expected DesignParseError");
    } catch (const DesignParseError& e) {
        CHECK(e.position() == 8);  // the second '/' is missing
    }
    CHECK_THROWS_AS(parse_design("2//3"), DesignParseError);
    CHECK_THROWS_AS(parse_design("[2//3"), DesignParseError);
    CHECK_THROWS_AS(parse_design("[]"), DesignParseError);
    CHECK_THROWS_AS(parse_design("[2//3]x"), DesignParseError);
}

TEST_CASE("parse: length guard") {
    std::string sixteen = "[2//1";
    for (int i = 0; i < 15; ++i) sixteen += ";2//1";
    sixteen += "]";
    CHECK_THROWS_AS(parse_design(sixteen), DesignParseError);
}

TEST_CASE("format round-trips over the full n=1 token set") {
    for (int rank = 0; rank < ModuleSpec::kTokenCount; ++rank) {
        ActuatorDesign design;
        design.units.push_back(ModuleSpec::from_token_rank(rank));
        const std::string text = format_design(design);
        CHECK(parse_design(text) == design);
        CHECK(format_design(parse_design(text)) == text);
    }
}

TEST_CASE("format/parse round-trip over random larger designs") {
    std::mt19937_64 rng(0x5eed0001);
    std::uniform_int_distribution<std::size_t> length(1, 15);
    for (int i = 0; i < 10000; ++i) {
        const ActuatorDesign design = testing::random_design(rng, length(rng));
        CHECK(parse_design(format_design(design)) == design);
    }
}

TEST_CASE("design space sizes") {
    CHECK(design_space_size(1) == 38);
    CHECK(design_space_size(2) == 1444);
    CHECK(design_space_size(3) == 54872);
    CHECK(design_space_size(4) == 2085136);
}

TEST_CASE("enumeration yields each design exactly once, in canonical order") {
    std::set<std::string> seen;
    std::string previous;
    std::uint64_t count = 0;
    for_each_design(2, [&](const ActuatorDesign& design) {
        const std::string text = format_design(design);
        CHECK(seen.insert(text).second);
        if (count > 0) CHECK(previous < text);
        previous = text;
        ++count;
    });
    CHECK(count == 1444);
}

TEST_CASE("enumeration count for n=3") {
    std::uint64_t count = 0;
    for_each_design(3, [&](const ActuatorDesign&) { ++count; });
    CHECK(count == 54872);
}

TEST_CASE("enumeration guard") {
    CHECK_THROWS_AS(DesignEnumerator(7), std::invalid_argument);
    CHECK_NOTHROW(DesignEnumerator(7, true));
}

TEST_CASE("design_at matches enumeration order and design_index inverts it") {
    DesignEnumerator it(2);
    ActuatorDesign design;
    std::uint64_t index = 0;
    while (it.next(design)) {
        CHECK(design_at(2, index) == design);
        CHECK(design_index(design) == index);
        ++index;
    }
}

TEST_CASE("token rank ordering matches byte-wise design string order") {
    for (int a = 0; a + 1 < ModuleSpec::kTokenCount; ++a) {
        CHECK(ModuleSpec::from_token_rank(a).to_string() <
              ModuleSpec::from_token_rank(a + 1).to_string());
    }
}

TEST_CASE("face rotation and mirroring") {
    const ActuatorDesign design = parse_design("[2//3;K\\\\;4//6]");
    const ActuatorDesign rotated = rotate_faces(design, 1);
    CHECK(rotated.units[0].face == 4);
    CHECK(rotated.units[1].kind == ModuleKind::kresling);
    CHECK(rotated.units[2].face == 1);  // 6 wraps to 1

    const ActuatorDesign mirrored = mirror_design(design);
    CHECK(mirrored.units[0].chirality == Chirality::anticlockwise);
    CHECK(mirrored.units[1].chirality == Chirality::clockwise);
    CHECK(mirrored.units[0].face == 5);  // 3 <-> 5 about the x axis
    CHECK(mirrored.units[2].face == 2);  // 6 <-> 2
}

TEST_CASE("face canonicalization quotients out global rotation") {
    std::mt19937_64 rng(0x5eed0002);
    for (int i = 0; i < 200; ++i) {
        const ActuatorDesign design = testing::random_design(rng, 3);
        const ActuatorDesign canonical = canonicalize_face_rotation(design);
        for (int increment = 0; increment < 6; ++increment)
            CHECK(canonicalize_face_rotation(rotate_faces(design, increment)) == canonical);
        CHECK(!(canonical.units.empty()));
        CHECK((canonical < design || canonical == design));
    }
}

TEST_CASE("unique_deltas is sorted and deduplicated") {
    CHECK(parse_design("[4\\\\2;3//6;4\\\\2]").unique_deltas() == std::vector<int>{3, 4});
    CHECK(parse_design("[K//;K\\\\]").unique_deltas().empty());
    CHECK(parse_design("[2//1;3//1;4//1]").unique_deltas() == std::vector<int>{2, 3, 4});
}
