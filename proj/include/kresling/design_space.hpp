#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "kresling/errors.hpp"

namespace kresling {

/// Module family of one unit: the plain Kresling layer or a bistable unit
/// whose modified panel has inset depth 2, 3, or 4 mm.
enum class ModuleKind : std::uint8_t { kresling, delta2, delta3, delta4 };

/// Rotation sense of the upper cap relative to the lower one.
/// Notation: "//" clockwise, "\\" anticlockwise.
enum class Chirality : std::uint8_t { clockwise, anticlockwise };

bool is_bistable(ModuleKind kind);

/// Panel depth in mm (2, 3, or 4). Only valid for bistable kinds.
int delta_mm(ModuleKind kind);

/// Inverse of delta_mm. Throws DesignParseError for depths outside {2,3,4}.
ModuleKind kind_from_delta(int delta, std::size_t position = 0);

std::string_view kind_name(ModuleKind kind);     // "kresling", "delta2", ...
std::string_view chirality_token(Chirality c);   // "//" or "\\"
double chirality_sign(Chirality c);              // +1 clockwise, -1 anticlockwise

/// Design choice for a single unit. Face index selects the side carrying the
/// modified panel (1..6); Kresling units have no modified panel and keep the
/// canonical sentinel face 1 so equality and ordering are well defined.
struct ModuleSpec {
    ModuleKind kind = ModuleKind::kresling;
    Chirality chirality = Chirality::clockwise;
    int face = 1;

    /// Options per position: 3 depths x 2 chiralities x 6 faces + 2 Kresling.
    static constexpr int kTokenCount = 38;

    /// Canonical rank in 0..37. The ordering matches byte-wise comparison of
    /// canonical design strings: depth digits before "K", "//" before "\\",
    /// faces ascending.
    int token_rank() const;
    static ModuleSpec from_token_rank(int rank);

    bool operator==(const ModuleSpec& other) const {
        return token_rank() == other.token_rank();
    }
    bool operator<(const ModuleSpec& other) const {
        return token_rank() < other.token_rank();
    }

    std::string to_string() const;  // e.g. "2//3" or "K\\"
};

/// Ordered unit sequence; units[0] is the bottom module.
struct ActuatorDesign {
    std::vector<ModuleSpec> units;

    static constexpr std::size_t kDefaultMaxUnits = 15;

    std::size_t size() const { return units.size(); }
    bool operator==(const ActuatorDesign& other) const { return units == other.units; }
    bool operator<(const ActuatorDesign& other) const;

    /// Unique bistable depths present, ascending (e.g. {2,4}). Empty for
    /// all-Kresling designs.
    std::vector<int> unique_deltas() const;

    /// Throws DesignParseError when empty or longer than max_units.
    void validate(std::size_t max_units = kDefaultMaxUnits) const;
};

/// Parses the bracketed design notation, e.g. "[2//3;4//6]" or "[K//]".
/// Grammar: design := "[" unit (";" unit)* "]"
///          unit   := ("K" | digit) chirality [face]
///          chirality := "//" | "\\"
/// Faces are required on bistable units and forbidden on "K" units.
ActuatorDesign parse_design(std::string_view text,
                            std::size_t max_units = ActuatorDesign::kDefaultMaxUnits);

/// Canonical form; round-trips with parse_design.
std::string format_design(const ActuatorDesign& design);

/// 38^n. Throws std::overflow_error when the count exceeds 2^64-1 (n > 12).
std::uint64_t design_space_size(std::size_t n);

/// Decodes the design with the given lexicographic index (mixed-radix base
/// 38, bottom unit most significant). Inverse of design_index.
ActuatorDesign design_at(std::size_t n, std::uint64_t index);
std::uint64_t design_index(const ActuatorDesign& design);

/// Full enumeration is guarded above this length; pass force=true to lift.
constexpr std::size_t kEnumerationGuardMax = 6;

/// Streams all 38^n designs exactly once, in canonical lexicographic order.
/// Half-open index ranges allow chunked, independent traversal.
class DesignEnumerator {
public:
    DesignEnumerator(std::size_t n, bool force = false);
    DesignEnumerator(std::size_t n, std::uint64_t begin, std::uint64_t end);

    /// Writes the next design into out; returns false when exhausted.
    bool next(ActuatorDesign& out);

    std::uint64_t remaining() const { return end_ - next_; }

private:
    std::size_t n_;
    std::uint64_t next_ = 0;
    std::uint64_t end_ = 0;
    bool first_ = true;
    ActuatorDesign current_;
};

void for_each_design(std::size_t n, const std::function<void(const ActuatorDesign&)>& fn,
                     bool force = false);

/// Adds increment to every bistable face index (mod 6, staying in 1..6).
/// Kresling units are untouched.
ActuatorDesign rotate_faces(const ActuatorDesign& design, int increment);

/// Flips every chirality and mirrors every bistable face about the x-axis
/// (f -> ((7 - f) mod 6) + 1). The mirrored design's tip is the reflection
/// of the original's through the x-z plane.
ActuatorDesign mirror_design(const ActuatorDesign& design);

/// Quotients out the global face rotation: returns the lexicographically
/// smallest of the six face-rotated variants. Designs differing only by a
/// rigid rotation about z share one canonical representative.
ActuatorDesign canonicalize_face_rotation(const ActuatorDesign& design);

}  // namespace kresling
