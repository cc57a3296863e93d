#include <cmath>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "kresling/calibration.hpp"
#include "kresling/io.hpp"
#include "support/generators.hpp"

using namespace kresling;
using nlohmann::json;

TEST_CASE("default table carries the measured delta3 thresholds") {
    const KeypointTable& table = KeypointTable::default_table();
    CHECK(table.p_plus(ModuleKind::delta3) == 26.1);
    CHECK(table.p_minus(ModuleKind::delta3) == -21.2);
    CHECK(table.constants().h_mm == 24.0);
    CHECK(table.constants().l_mm == 30.0);
    CHECK(table.constants().alpha_deg == 30.0);
    CHECK(table.max_inflation_kpa() == 35.0);
    CHECK(table.max_deflation_kpa() == -30.0);
}

TEST_CASE("threshold magnitudes increase with panel depth") {
    const KeypointTable& t = KeypointTable::default_table();
    CHECK(t.p_plus(ModuleKind::delta2) < t.p_plus(ModuleKind::delta3));
    CHECK(t.p_plus(ModuleKind::delta3) < t.p_plus(ModuleKind::delta4));
    CHECK(t.p_minus(ModuleKind::delta2) > t.p_minus(ModuleKind::delta3));
    CHECK(t.p_minus(ModuleKind::delta3) > t.p_minus(ModuleKind::delta4));
}

TEST_CASE("shipped data file matches the embedded default") {
    const std::string path = std::string(KRESLING_DATA_DIR) + "/default_calibration.json";
    CHECK(read_text_file(path) == std::string(default_calibration_text()));
    const KeypointTable from_file = KeypointTable::load_file(path);
    CHECK(from_file.to_json_text() == KeypointTable::default_table().to_json_text());
    CHECK(from_file.checksum() == KeypointTable::default_table().checksum());
}

TEST_CASE("positive p_minus is rejected with the offending field named") {
    json doc = json::parse(default_calibration_text());
    doc["kinds"]["delta2"]["p_minus_kpa"] = 5.0;
    CHECK_THROWS_WITH_AS(KeypointTable::from_json_text(doc.dump()),
                         doctest::Contains("p_minus must be negative"), CalibrationError);
}

TEST_CASE("missing kind is rejected by name") {
    json doc = json::parse(default_calibration_text());
    doc["kinds"].erase("delta4");
    CHECK_THROWS_WITH_AS(KeypointTable::from_json_text(doc.dump()),
                         doctest::Contains("missing kind 'delta4'"), CalibrationError);
}

TEST_CASE("threshold ordering violations fail to load") {
    json doc = json::parse(default_calibration_text());
    doc["kinds"]["delta2"]["p_plus_kpa"] = 27.0;  // above delta3's 26.1
    // Keep the keypoint roles aligned with the moved threshold.
    for (auto& kp : doc["kinds"]["delta2"]["keypoints"])
        if (kp["pressure_kpa"] == 21.5) kp["pressure_kpa"] = 27.0;
    CHECK_THROWS_WITH_AS(KeypointTable::from_json_text(doc.dump()),
                         doctest::Contains("strictly increasing"), CalibrationError);
}

TEST_CASE("equal thresholds across kinds fail to load") {
    json doc = json::parse(default_calibration_text());
    doc["kinds"]["delta2"]["p_plus_kpa"] = 26.1;
    for (auto& kp : doc["kinds"]["delta2"]["keypoints"])
        if (kp["pressure_kpa"] == 21.5) kp["pressure_kpa"] = 26.1;
    CHECK_THROWS_AS(KeypointTable::from_json_text(doc.dump()), CalibrationError);
}

TEST_CASE("schema violations name the field") {
    json doc = json::parse(default_calibration_text());
    doc["kinds"]["delta3"].erase("p_plus_kpa");
    CHECK_THROWS_WITH_AS(KeypointTable::from_json_text(doc.dump()),
                         doctest::Contains("missing field 'p_plus_kpa'"), CalibrationError);

    json doc2 = json::parse(default_calibration_text());
    doc2["kinds"]["delta3"]["keypoints"][0]["theta_deg"] = "big";
    CHECK_THROWS_WITH_AS(KeypointTable::from_json_text(doc2.dump()),
                         doctest::Contains("'theta_deg' must be a number"), CalibrationError);

    json doc3 = json::parse(default_calibration_text());
    doc3["kinds"]["delta3"]["keypoints"][0]["state"] = "s2";
    CHECK_THROWS_AS(KeypointTable::from_json_text(doc3.dump()), CalibrationError);

    json doc4 = json::parse(default_calibration_text());
    doc4["typo_field"] = 1;
    CHECK_THROWS_WITH_AS(KeypointTable::from_json_text(doc4.dump()),
                         doctest::Contains("unknown field 'typo_field'"), CalibrationError);
}

TEST_CASE("s0 bend bound and s1 positivity are enforced") {
    json doc = json::parse(default_calibration_text());
    doc["kinds"]["delta3"]["keypoints"][1]["theta_deg"] = 5.0;  // s0 keypoint
    CHECK_THROWS_WITH_AS(KeypointTable::from_json_text(doc.dump()),
                         doctest::Contains("theta_deg <= 3"), CalibrationError);

    json doc2 = json::parse(default_calibration_text());
    for (auto& kp : doc2["kinds"]["delta3"]["keypoints"])
        if (kp["state"] == "s1" && kp["pressure_kpa"] == 0.0) kp["theta_deg"] = 0.0;
    CHECK_THROWS_WITH_AS(KeypointTable::from_json_text(doc2.dump()),
                         doctest::Contains("theta_deg > 0"), CalibrationError);
}

TEST_CASE("rest kinematics are exact") {
    const KeypointTable& table = KeypointTable::default_table();
    const UnitKinematics rest = table.kinematics_at(ModuleKind::delta3, PanelBranch::s0, 0.0);
    CHECK(rest.axial_mm == 0.0);
    CHECK(rest.bend_deg == 0.0);
    CHECK(rest.twist_deg == 0.0);
}

TEST_CASE("maximum bend sits at the snap-back threshold") {
    const KeypointTable& table = KeypointTable::default_table();
    const UnitKinematics kin = table.kinematics_at(ModuleKind::delta3, PanelBranch::s1, -21.2);
    CHECK(kin.bend_deg == 21.7);
    CHECK(table.theta_max_deg(ModuleKind::delta3) == 21.7);
}

TEST_CASE("interpolation midpoint on the delta4 inflation branch") {
    // Hand-derived from the shipped keypoints (0, 0, 0, 0) and
    // (30.9, 3.0, 0, -7.5): the midpoint pressure 15.45 kPa lies exactly
    // halfway, so every field is the average.
    const KeypointTable& table = KeypointTable::default_table();
    const UnitKinematics kin =
        table.kinematics_at(ModuleKind::delta4, PanelBranch::s0, 0.5 * 30.9);
    CHECK(kin.axial_mm == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(kin.bend_deg == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(kin.twist_deg == doctest::Approx(-3.75).epsilon(1e-12));
}

TEST_CASE("interpolation reproduces every keypoint exactly") {
    const KeypointTable& table = KeypointTable::default_table();
    for (ModuleKind kind : {ModuleKind::kresling, ModuleKind::delta2, ModuleKind::delta3,
                            ModuleKind::delta4}) {
        for (const CalibrationKeypoint& kp : table.kind(kind).keypoints) {
            const UnitKinematics got = table.kinematics_at(kind, kp.state, kp.pressure_kpa);
            CHECK(got.axial_mm == kp.kinematics.axial_mm);
            CHECK(got.bend_deg == kp.kinematics.bend_deg);
            CHECK(got.twist_deg == kp.kinematics.twist_deg);
        }
    }
}

TEST_CASE("interpolation is continuous in pressure within a branch") {
    const KeypointTable& table = KeypointTable::default_table();
    const auto [lo, hi] = table.branch_range(ModuleKind::delta3, PanelBranch::s1);
    // Lipschitz constant from the steepest keypoint segment.
    double max_slope = 0.0;
    const auto points = table.kind(ModuleKind::delta3).branch(PanelBranch::s1);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double dp = points[i].pressure_kpa - points[i - 1].pressure_kpa;
        max_slope = std::max(
            {max_slope,
             std::abs(points[i].kinematics.axial_mm - points[i - 1].kinematics.axial_mm) / dp,
             std::abs(points[i].kinematics.bend_deg - points[i - 1].kinematics.bend_deg) / dp,
             std::abs(points[i].kinematics.twist_deg - points[i - 1].kinematics.twist_deg) / dp});
    }
    const double step = (hi - lo) / 500.0;
    UnitKinematics previous = table.kinematics_at(ModuleKind::delta3, PanelBranch::s1, lo);
    for (int i = 1; i <= 500; ++i) {
        const UnitKinematics current =
            table.kinematics_at(ModuleKind::delta3, PanelBranch::s1, lo + i * step);
        CHECK(std::abs(current.axial_mm - previous.axial_mm) <= max_slope * step + 1e-9);
        CHECK(std::abs(current.bend_deg - previous.bend_deg) <= max_slope * step + 1e-9);
        CHECK(std::abs(current.twist_deg - previous.twist_deg) <= max_slope * step + 1e-9);
        previous = current;
    }
}

TEST_CASE("strict mode rejects extrapolation; clamp mode pins the endpoint") {
    const KeypointTable& table = KeypointTable::default_table();
    CHECK_THROWS_AS(table.kinematics_at(ModuleKind::delta3, PanelBranch::s1, -25.0),
                    ExtrapolationError);
    const UnitKinematics clamped =
        table.kinematics_at(ModuleKind::delta3, PanelBranch::s1, -25.0, Clamp::clamp);
    CHECK(clamped.bend_deg == 21.7);
    CHECK_THROWS_AS(table.kinematics_at(ModuleKind::kresling, PanelBranch::s1, 0.0),
                    CalibrationError);
}

TEST_CASE("serialization round-trips semantically") {
    const KeypointTable& table = KeypointTable::default_table();
    const std::string text = table.to_json_text();
    const KeypointTable reloaded = KeypointTable::from_json_text(text);
    CHECK(reloaded.to_json_text() == text);
    CHECK(reloaded.checksum() == table.checksum());

    // Field-for-field equality of the numbers against the original document.
    const json original = json::parse(default_calibration_text());
    const json canonical = json::parse(text);
    for (const auto& kind : {"kresling", "delta2", "delta3", "delta4"}) {
        const auto& a = original["kinds"][kind]["keypoints"];
        const auto& b = canonical["kinds"][kind]["keypoints"];
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i]["pressure_kpa"].get<double>() == b[i]["pressure_kpa"].get<double>());
            CHECK(a[i]["u_z_mm"].get<double>() == b[i]["u_z_mm"].get<double>());
            CHECK(a[i]["theta_deg"].get<double>() == b[i]["theta_deg"].get<double>());
            CHECK(a[i]["phi_deg"].get<double>() == b[i]["phi_deg"].get<double>());
            CHECK(a[i]["state"] == b[i]["state"]);
        }
    }
}

TEST_CASE("checksum reacts to any value change") {
    json doc = json::parse(default_calibration_text());
    doc["kinds"]["delta3"]["keypoints"][2]["u_z_mm"] = 0.001;
    const KeypointTable perturbed = KeypointTable::from_json_text(doc.dump());
    CHECK(perturbed.checksum() != KeypointTable::default_table().checksum());
}

TEST_CASE("random generated tables satisfy the invariants") {
    std::mt19937_64 rng(0x5eed0201);
    for (int i = 0; i < 50; ++i) {
        const KeypointTable table = testing::random_table(rng);
        CHECK(table.p_plus(ModuleKind::delta2) < table.p_plus(ModuleKind::delta3));
        CHECK(table.p_minus(ModuleKind::delta3) > table.p_minus(ModuleKind::delta4));
        // Round-trip through text as well.
        const KeypointTable reloaded = KeypointTable::from_json_text(table.to_json_text());
        CHECK(reloaded.to_json_text() == table.to_json_text());
    }
}
