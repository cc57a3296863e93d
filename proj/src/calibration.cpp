#include "kresling/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kresling {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr ModuleKind kKindOrder[] = {ModuleKind::kresling, ModuleKind::delta2,
                                     ModuleKind::delta3, ModuleKind::delta4};

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw CalibrationError("calibration " + context + ": " + message);
}

double require_number(const nlohmann::json& obj, const std::string& key,
                      const std::string& context) {
    if (!obj.contains(key)) fail(context, "missing field '" + key + "'");
    const auto& value = obj.at(key);
    if (!value.is_number()) fail(context, "field '" + key + "' must be a number");
    double number = value.get<double>();
    if (!std::isfinite(number)) fail(context, "field '" + key + "' must be finite");
    return number;
}

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known) fail(context, "unknown field '" + item.key() + "'");
    }
}

}  // namespace

std::string_view branch_name(PanelBranch branch) {
    return branch == PanelBranch::s0 ? "s0" : "s1";
}

std::vector<CalibrationKeypoint> KindCalibration::branch(PanelBranch b) const {
    std::vector<CalibrationKeypoint> out;
    for (const CalibrationKeypoint& kp : keypoints)
        if (kp.state == b) out.push_back(kp);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b2) {
        return a.pressure_kpa < b2.pressure_kpa;
    });
    return out;
}

KeypointTable::KeypointTable(ModelConstants constants, std::vector<KindCalibration> kinds)
    : constants_(constants) {
    // Keep the fixed kind order and sorted keypoints so serialization is
    // canonical regardless of input order.
    for (ModuleKind k : kKindOrder) {
        for (KindCalibration& kc : kinds) {
            if (kc.kind != k) continue;
            std::stable_sort(kc.keypoints.begin(), kc.keypoints.end(),
                             [](const CalibrationKeypoint& a, const CalibrationKeypoint& b) {
                                 if (a.state != b.state) return a.state < b.state;
                                 return a.pressure_kpa < b.pressure_kpa;
                             });
            kinds_.push_back(kc);
        }
    }
    for (const KindCalibration& kc : kinds)
        if (std::count_if(kinds_.begin(), kinds_.end(),
                          [&](const KindCalibration& x) { return x.kind == kc.kind; }) > 1)
            fail(std::string(kind_name(kc.kind)), "kind listed more than once");
    validate();

    for (const KindCalibration& kc : kinds_)
        branches_.push_back({kc.branch(PanelBranch::s0), kc.branch(PanelBranch::s1)});

    const auto& kres_s0 = cached_branch(ModuleKind::kresling, PanelBranch::s0);
    max_deflation_ = kres_s0.front().pressure_kpa;
    max_inflation_ = kres_s0.back().pressure_kpa;
}

const std::vector<CalibrationKeypoint>& KeypointTable::cached_branch(ModuleKind kind,
                                                                     PanelBranch branch) const {
    for (std::size_t i = 0; i < kinds_.size(); ++i)
        if (kinds_[i].kind == kind) return branches_[i][branch == PanelBranch::s1 ? 1 : 0];
    fail(std::string(kind_name(kind)), "kind not present in table");
}

const KindCalibration* KeypointTable::find(ModuleKind kind) const {
    for (const KindCalibration& kc : kinds_)
        if (kc.kind == kind) return &kc;
    return nullptr;
}

const KindCalibration& KeypointTable::kind(ModuleKind kind) const {
    const KindCalibration* kc = find(kind);
    if (!kc) fail(std::string(kind_name(kind)), "kind not present in table");
    return *kc;
}

double KeypointTable::p_plus(ModuleKind k) const {
    if (!is_bistable(k)) fail("kresling", "Kresling units have no snap thresholds");
    return kind(k).p_plus_kpa;
}

double KeypointTable::p_minus(ModuleKind k) const {
    if (!is_bistable(k)) fail("kresling", "Kresling units have no snap thresholds");
    return kind(k).p_minus_kpa;
}

std::pair<double, double> KeypointTable::branch_range(ModuleKind k, PanelBranch branch) const {
    const auto& points = cached_branch(k, branch);
    if (points.empty())
        fail(std::string(kind_name(k)),
             "no keypoints on branch " + std::string(branch_name(branch)));
    return {points.front().pressure_kpa, points.back().pressure_kpa};
}

double KeypointTable::theta_max_deg(ModuleKind k) const {
    double theta = 0.0;
    for (const CalibrationKeypoint& kp : kind(k).keypoints)
        theta = std::max(theta, kp.kinematics.bend_deg);
    return theta;
}

UnitKinematics KeypointTable::kinematics_at(ModuleKind k, PanelBranch branch,
                                            double pressure_kpa, Clamp clamp) const {
    if (!is_bistable(k) && branch == PanelBranch::s1)
        fail("kresling", "Kresling units have no s1 branch");
    const auto& points = cached_branch(k, branch);

    const double lo = points.front().pressure_kpa;
    const double hi = points.back().pressure_kpa;
    if (pressure_kpa < lo || pressure_kpa > hi) {
        if (clamp == Clamp::strict) {
            std::ostringstream msg;
            msg << "calibration " << kind_name(k) << "/" << branch_name(branch)
                << ": pressure " << pressure_kpa << " kPa outside covered range [" << lo
                << ", " << hi << "]";
            throw ExtrapolationError(msg.str());
        }
        pressure_kpa = std::clamp(pressure_kpa, lo, hi);
    }

    // Exact keypoint pressures return the keypoint verbatim.
    for (const CalibrationKeypoint& kp : points)
        if (kp.pressure_kpa == pressure_kpa) return kp.kinematics;

    auto upper = std::upper_bound(points.begin(), points.end(), pressure_kpa,
                                  [](double p, const CalibrationKeypoint& kp) {
                                      return p < kp.pressure_kpa;
                                  });
    const CalibrationKeypoint& b = *upper;
    const CalibrationKeypoint& a = *(upper - 1);
    const double t = (pressure_kpa - a.pressure_kpa) / (b.pressure_kpa - a.pressure_kpa);

    UnitKinematics kin;
    kin.axial_mm = a.kinematics.axial_mm + t * (b.kinematics.axial_mm - a.kinematics.axial_mm);
    kin.bend_deg = a.kinematics.bend_deg + t * (b.kinematics.bend_deg - a.kinematics.bend_deg);
    kin.twist_deg = a.kinematics.twist_deg + t * (b.kinematics.twist_deg - a.kinematics.twist_deg);
    return kin;
}

void KeypointTable::validate() const {
    if (!(std::isfinite(constants_.h_mm) && constants_.h_mm > 0))
        fail("constants", "h_mm must be a positive number");
    if (!(std::isfinite(constants_.l_mm) && constants_.l_mm > 0))
        fail("constants", "l_mm must be a positive number");
    if (!std::isfinite(constants_.alpha_deg)) fail("constants", "alpha_deg must be finite");

    for (ModuleKind k : kKindOrder)
        if (!find(k)) fail(std::string(kind_name(k)), "missing kind '" + std::string(kind_name(k)) + "'");

    for (const KindCalibration& kc : kinds_) {
        const std::string context{kind_name(kc.kind)};
        if (kc.keypoints.empty()) fail(context, "keypoints must be non-empty");
        for (const CalibrationKeypoint& kp : kc.keypoints) {
            if (!std::isfinite(kp.pressure_kpa)) fail(context, "keypoint pressure must be finite");
            if (!kp.kinematics.is_finite()) fail(context, "keypoint kinematics must be finite");
            if (kp.kinematics.bend_deg < 0) fail(context, "theta_deg must be non-negative");
            if (kp.state == PanelBranch::s0 && kp.kinematics.bend_deg > 3.0)
                fail(context, "s0 keypoints must have theta_deg <= 3");
            if (kp.state == PanelBranch::s1 && !(kp.kinematics.bend_deg > 0))
                fail(context, "s1 keypoints must have theta_deg > 0");
            if (!is_bistable(kc.kind) && kp.state == PanelBranch::s1)
                fail(context, "Kresling kind carries only s0 keypoints");
        }
        for (PanelBranch b : {PanelBranch::s0, PanelBranch::s1}) {
            auto points = kc.branch(b);
            for (std::size_t i = 1; i < points.size(); ++i)
                if (!(points[i - 1].pressure_kpa < points[i].pressure_kpa))
                    fail(context, "keypoint pressures on branch " + std::string(branch_name(b)) +
                                      " must be strictly monotone");
        }
    }

    // Bistable invariants and the required keypoint roles on both branches.
    for (const KindCalibration& kc : kinds_) {
        if (!is_bistable(kc.kind)) continue;
        const std::string context{kind_name(kc.kind)};
        if (!std::isfinite(kc.p_plus_kpa) || !(kc.p_plus_kpa > 0))
            fail(context, "p_plus_kpa must be positive");
        if (!std::isfinite(kc.p_minus_kpa) || !(kc.p_minus_kpa < 0))
            fail(context, "p_minus_kpa must be negative");

        auto require_at = [&](PanelBranch b, double pressure, const char* role) {
            for (const CalibrationKeypoint& kp : kc.keypoints)
                if (kp.state == b && kp.pressure_kpa == pressure) return;
            fail(context, "missing " + std::string(branch_name(b)) + " keypoint at " + role);
        };
        require_at(PanelBranch::s0, 0.0, "rest (p = 0)");
        require_at(PanelBranch::s0, kc.p_plus_kpa, "p_plus_kpa (just before snap-out)");
        require_at(PanelBranch::s0, kc.p_minus_kpa, "p_minus_kpa (just after snap-back)");
        require_at(PanelBranch::s1, 0.0, "rest (p = 0)");
        require_at(PanelBranch::s1, kc.p_plus_kpa, "p_plus_kpa (just after snap-out)");
        require_at(PanelBranch::s1, kc.p_minus_kpa, "p_minus_kpa (just before snap-back)");

        auto s0 = kc.branch(PanelBranch::s0);
        auto s1 = kc.branch(PanelBranch::s1);
        if (s0.back().pressure_kpa != kc.p_plus_kpa)
            fail(context, "s0 branch must end at p_plus_kpa (the panel snaps out there)");
        if (s1.front().pressure_kpa != kc.p_minus_kpa)
            fail(context, "s1 branch must start at p_minus_kpa (the panel snaps back there)");
        if (!(s1.back().pressure_kpa > kc.p_plus_kpa))
            fail(context, "s1 branch must extend above p_plus_kpa (max inflation keypoint)");
        if (!(s0.front().pressure_kpa < kc.p_minus_kpa))
            fail(context, "s0 branch must extend below p_minus_kpa (max deflation keypoint)");
    }

    {
        auto kres = kind(ModuleKind::kresling).branch(PanelBranch::s0);
        bool has_rest = false;
        for (const CalibrationKeypoint& kp : kres) has_rest |= kp.pressure_kpa == 0.0;
        if (!has_rest) fail("kresling", "missing s0 keypoint at rest (p = 0)");
        if (kres.size() < 3)
            fail("kresling", "expected rest, max inflation, and max deflation keypoints");
    }

    // Threshold ordering across kinds: magnitudes increase with depth.
    const KindCalibration& d2 = kind(ModuleKind::delta2);
    const KindCalibration& d3 = kind(ModuleKind::delta3);
    const KindCalibration& d4 = kind(ModuleKind::delta4);
    if (!(d2.p_plus_kpa < d3.p_plus_kpa && d3.p_plus_kpa < d4.p_plus_kpa))
        fail("thresholds", "p_plus_kpa must be strictly increasing with depth "
                           "(delta2 < delta3 < delta4)");
    if (!(d2.p_minus_kpa > d3.p_minus_kpa && d3.p_minus_kpa > d4.p_minus_kpa))
        fail("thresholds", "p_minus_kpa must be strictly decreasing with depth "
                           "(delta2 > delta3 > delta4)");

    // One shared pressure supply: every kind must cover one common
    // [max deflation, max inflation] window, reaching past every threshold.
    auto bottom_lo = [&](const KindCalibration& kc) {
        return kc.branch(PanelBranch::s0).front().pressure_kpa;
    };
    auto top_hi = [&](const KindCalibration& kc) {
        PanelBranch top = is_bistable(kc.kind) ? PanelBranch::s1 : PanelBranch::s0;
        return kc.branch(top).back().pressure_kpa;
    };
    const double deflation = bottom_lo(kind(ModuleKind::kresling));
    const double inflation = top_hi(kind(ModuleKind::kresling));
    for (const KindCalibration& kc : kinds_) {
        if (bottom_lo(kc) != deflation)
            fail(std::string(kind_name(kc.kind)),
                 "max deflation keypoint pressure must match all other kinds");
        if (top_hi(kc) != inflation)
            fail(std::string(kind_name(kc.kind)),
                 "max inflation keypoint pressure must match all other kinds");
    }
    if (!(deflation < d4.p_minus_kpa))
        fail("thresholds", "max deflation must lie below every p_minus_kpa");
    if (!(inflation > d4.p_plus_kpa))
        fail("thresholds", "max inflation must lie above every p_plus_kpa");
}

KeypointTable KeypointTable::from_json_text(std::string_view text, std::string_view source_name) {
    const std::string context{source_name};
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(context, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(context, "top level must be an object");
    reject_unknown_keys(doc, {"h_mm", "l_mm", "alpha_deg", "kinds"}, context);

    ModelConstants constants;
    constants.h_mm = require_number(doc, "h_mm", context);
    constants.l_mm = require_number(doc, "l_mm", context);
    constants.alpha_deg = require_number(doc, "alpha_deg", context);

    if (!doc.contains("kinds") || !doc.at("kinds").is_object())
        fail(context, "missing 'kinds' object");

    std::vector<KindCalibration> kinds;
    for (const auto& item : doc.at("kinds").items()) {
        const std::string kind_context = context + ": kind '" + item.key() + "'";
        KindCalibration kc;
        if (item.key() == "kresling") kc.kind = ModuleKind::kresling;
        else if (item.key() == "delta2") kc.kind = ModuleKind::delta2;
        else if (item.key() == "delta3") kc.kind = ModuleKind::delta3;
        else if (item.key() == "delta4") kc.kind = ModuleKind::delta4;
        else fail(context, "unknown kind '" + item.key() + "'");

        const auto& body = item.value();
        if (!body.is_object()) fail(kind_context, "must be an object");
        if (is_bistable(kc.kind)) {
            reject_unknown_keys(body, {"p_plus_kpa", "p_minus_kpa", "keypoints", "note"},
                                kind_context);
            kc.p_plus_kpa = require_number(body, "p_plus_kpa", kind_context);
            kc.p_minus_kpa = require_number(body, "p_minus_kpa", kind_context);
            if (!(kc.p_minus_kpa < 0))
                fail(kind_context, "p_minus must be negative (got " +
                                       std::to_string(kc.p_minus_kpa) + ")");
            if (!(kc.p_plus_kpa > 0))
                fail(kind_context, "p_plus must be positive (got " +
                                       std::to_string(kc.p_plus_kpa) + ")");
        } else {
            reject_unknown_keys(body, {"keypoints", "note"}, kind_context);
        }
        if (body.contains("note")) {
            if (!body.at("note").is_string()) fail(kind_context, "'note' must be a string");
            kc.note = body.at("note").get<std::string>();
        }
        if (!body.contains("keypoints") || !body.at("keypoints").is_array())
            fail(kind_context, "missing 'keypoints' array");
        for (const auto& kp_json : body.at("keypoints")) {
            const std::string kp_context = kind_context + " keypoint";
            if (!kp_json.is_object()) fail(kp_context, "must be an object");
            reject_unknown_keys(kp_json,
                                {"pressure_kpa", "state", "u_z_mm", "theta_deg", "phi_deg"},
                                kp_context);
            CalibrationKeypoint kp;
            kp.pressure_kpa = require_number(kp_json, "pressure_kpa", kp_context);
            if (!kp_json.contains("state") || !kp_json.at("state").is_string())
                fail(kp_context, "missing 'state' string");
            const std::string state = kp_json.at("state").get<std::string>();
            if (state == "s0") kp.state = PanelBranch::s0;
            else if (state == "s1") kp.state = PanelBranch::s1;
            else fail(kp_context, "state must be 's0' or 's1' (got '" + state + "')");
            kp.kinematics.axial_mm = require_number(kp_json, "u_z_mm", kp_context);
            kp.kinematics.bend_deg = require_number(kp_json, "theta_deg", kp_context);
            kp.kinematics.twist_deg = require_number(kp_json, "phi_deg", kp_context);
            kc.keypoints.push_back(kp);
        }
        kinds.push_back(std::move(kc));
    }

    return KeypointTable(constants, std::move(kinds));
}

KeypointTable KeypointTable::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open calibration file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str(), path);
}

const KeypointTable& KeypointTable::default_table() {
    static const KeypointTable table =
        from_json_text(default_calibration_text(), "<default>");
    return table;
}

std::string KeypointTable::to_json_text() const {
    ordered_json doc;
    doc["h_mm"] = constants_.h_mm;
    doc["l_mm"] = constants_.l_mm;
    doc["alpha_deg"] = constants_.alpha_deg;
    ordered_json kinds = ordered_json::object();
    for (const KindCalibration& kc : kinds_) {
        ordered_json body;
        if (is_bistable(kc.kind)) {
            body["p_plus_kpa"] = kc.p_plus_kpa;
            body["p_minus_kpa"] = kc.p_minus_kpa;
        }
        if (kc.note) body["note"] = *kc.note;
        ordered_json keypoints = ordered_json::array();
        for (const CalibrationKeypoint& kp : kc.keypoints) {
            ordered_json kp_json;
            kp_json["pressure_kpa"] = kp.pressure_kpa;
            kp_json["state"] = std::string(branch_name(kp.state));
            kp_json["u_z_mm"] = kp.kinematics.axial_mm;
            kp_json["theta_deg"] = kp.kinematics.bend_deg;
            kp_json["phi_deg"] = kp.kinematics.twist_deg;
            keypoints.push_back(kp_json);
        }
        body["keypoints"] = keypoints;
        kinds[std::string(kind_name(kc.kind))] = body;
    }
    doc["kinds"] = kinds;
    return doc.dump(2) + "\n";
}

std::uint64_t KeypointTable::checksum() const {
    const std::string text = to_json_text();
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

}  // namespace kresling
