#include "kresling/design_space.hpp"

#include <algorithm>
#include <stdexcept>

namespace kresling {

bool is_bistable(ModuleKind kind) { return kind != ModuleKind::kresling; }

int delta_mm(ModuleKind kind) {
    switch (kind) {
        case ModuleKind::delta2: return 2;
        case ModuleKind::delta3: return 3;
        case ModuleKind::delta4: return 4;
        case ModuleKind::kresling: break;
    }
    throw std::logic_error("delta_mm: Kresling units have no panel depth");
}

ModuleKind kind_from_delta(int delta, std::size_t position) {
    switch (delta) {
        case 2: return ModuleKind::delta2;
        case 3: return ModuleKind::delta3;
        case 4: return ModuleKind::delta4;
        default:
            throw DesignParseError(
                "panel depth must be 2, 3, or 4 (got " + std::to_string(delta) + ")",
                position);
    }
}

std::string_view kind_name(ModuleKind kind) {
    switch (kind) {
        case ModuleKind::kresling: return "kresling";
        case ModuleKind::delta2: return "delta2";
        case ModuleKind::delta3: return "delta3";
        case ModuleKind::delta4: return "delta4";
    }
    return "?";
}

std::string_view chirality_token(Chirality c) {
    return c == Chirality::clockwise ? "//" : "\\\\";
}

double chirality_sign(Chirality c) {
    return c == Chirality::clockwise ? 1.0 : -1.0;
}

int ModuleSpec::token_rank() const {
    int c = chirality == Chirality::anticlockwise ? 1 : 0;
    if (kind == ModuleKind::kresling) return 36 + c;
    return (delta_mm(kind) - 2) * 12 + c * 6 + (face - 1);
}

ModuleSpec ModuleSpec::from_token_rank(int rank) {
    if (rank < 0 || rank >= kTokenCount)
        throw std::out_of_range("module token rank out of range");
    ModuleSpec spec;
    if (rank >= 36) {
        spec.kind = ModuleKind::kresling;
        spec.chirality = rank == 37 ? Chirality::anticlockwise : Chirality::clockwise;
        spec.face = 1;
        return spec;
    }
    spec.kind = kind_from_delta(rank / 12 + 2);
    spec.chirality = (rank / 6) % 2 ? Chirality::anticlockwise : Chirality::clockwise;
    spec.face = rank % 6 + 1;
    return spec;
}

std::string ModuleSpec::to_string() const {
    std::string out;
    if (kind == ModuleKind::kresling) {
        out += 'K';
        out += chirality_token(chirality);
    } else {
        out += static_cast<char>('0' + delta_mm(kind));
        out += chirality_token(chirality);
        out += static_cast<char>('0' + face);
    }
    return out;
}

bool ActuatorDesign::operator<(const ActuatorDesign& other) const {
    return std::lexicographical_compare(
        units.begin(), units.end(), other.units.begin(), other.units.end());
}

std::vector<int> ActuatorDesign::unique_deltas() const {
    std::vector<int> deltas;
    for (const ModuleSpec& unit : units) {
        if (!is_bistable(unit.kind)) continue;
        int d = delta_mm(unit.kind);
        if (std::find(deltas.begin(), deltas.end(), d) == deltas.end()) deltas.push_back(d);
    }
    std::sort(deltas.begin(), deltas.end());
    return deltas;
}

void ActuatorDesign::validate(std::size_t max_units) const {
    if (units.empty()) throw DesignParseError("design must contain at least one unit", 0);
    if (units.size() > max_units)
        throw DesignParseError("design has " + std::to_string(units.size()) +
                                   " units, exceeding the maximum of " +
                                   std::to_string(max_units),
                               0);
    for (const ModuleSpec& unit : units) {
        if (is_bistable(unit.kind) && (unit.face < 1 || unit.face > 6))
            throw DesignParseError("face index must be in 1..6", 0);
    }
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ActuatorDesign run(std::size_t max_units) {
        skip_space();
        expect('[');
        ActuatorDesign design;
        design.units.push_back(unit());
        while (peek() == ';') {
            ++pos_;
            design.units.push_back(unit());
        }
        expect(']');
        skip_space();
        if (pos_ != text_.size())
            throw DesignParseError("trailing characters after design", pos_);
        design.validate(max_units);
        return design;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    void expect(char c) {
        if (peek() != c)
            throw DesignParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    ModuleSpec unit() {
        ModuleSpec spec;
        std::size_t unit_start = pos_;
        char k = peek();
        if (k == 'K') {
            spec.kind = ModuleKind::kresling;
            ++pos_;
        } else if (k >= '0' && k <= '9') {
            spec.kind = kind_from_delta(k - '0', pos_);
            ++pos_;
        } else {
            throw DesignParseError("expected unit kind ('K' or depth digit)", pos_);
        }
        spec.chirality = chirality();
        char f = peek();
        if (f >= '0' && f <= '9') {
            if (spec.kind == ModuleKind::kresling)
                throw DesignParseError("face index not allowed on a Kresling unit", pos_);
            if (f < '1' || f > '6')
                throw DesignParseError("face index must be in 1..6", pos_);
            spec.face = f - '0';
            ++pos_;
        } else if (is_bistable(spec.kind)) {
            throw DesignParseError("bistable unit is missing its face index", pos_);
        }
        (void)unit_start;
        return spec;
    }

    Chirality chirality() {
        char a = peek();
        if (a != '/' && a != '\\')
            throw DesignParseError("expected chirality '//' or '\\\\'", pos_);
        ++pos_;
        if (peek() != a)
            throw DesignParseError("chirality must repeat its character", pos_);
        ++pos_;
        return a == '/' ? Chirality::clockwise : Chirality::anticlockwise;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ActuatorDesign parse_design(std::string_view text, std::size_t max_units) {
    return Parser(text).run(max_units);
}

std::string format_design(const ActuatorDesign& design) {
    std::string out = "[";
    for (std::size_t i = 0; i < design.units.size(); ++i) {
        if (i) out += ';';
        out += design.units[i].to_string();
    }
    out += ']';
    return out;
}

std::uint64_t design_space_size(std::size_t n) {
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (size > UINT64_MAX / ModuleSpec::kTokenCount)
            throw std::overflow_error("design space size exceeds 64 bits");
        size *= ModuleSpec::kTokenCount;
    }
    return size;
}

ActuatorDesign design_at(std::size_t n, std::uint64_t index) {
    if (index >= design_space_size(n)) throw std::out_of_range("design index out of range");
    ActuatorDesign design;
    design.units.resize(n);
    for (std::size_t i = n; i-- > 0;) {
        design.units[i] = ModuleSpec::from_token_rank(static_cast<int>(index % 38));
        index /= 38;
    }
    return design;
}

std::uint64_t design_index(const ActuatorDesign& design) {
    std::uint64_t index = 0;
    for (const ModuleSpec& unit : design.units)
        index = index * 38 + static_cast<std::uint64_t>(unit.token_rank());
    return index;
}

DesignEnumerator::DesignEnumerator(std::size_t n, bool force)
    : DesignEnumerator(n, 0, design_space_size(n)) {
    if (n == 0) throw std::invalid_argument("enumeration requires n >= 1");
    if (n > kEnumerationGuardMax && !force)
        throw std::invalid_argument(
            "enumeration of n=" + std::to_string(n) +
            " exceeds the guard (n <= " + std::to_string(kEnumerationGuardMax) +
            "); pass force to override");
}

DesignEnumerator::DesignEnumerator(std::size_t n, std::uint64_t begin, std::uint64_t end)
    : n_(n), next_(begin), end_(std::min(end, design_space_size(n))) {}

bool DesignEnumerator::next(ActuatorDesign& out) {
    if (next_ >= end_) return false;
    if (first_) {
        current_ = design_at(n_, next_);
        first_ = false;
    } else {
        // Mixed-radix increment; cheaper than re-decoding every index.
        for (std::size_t i = n_; i-- > 0;) {
            int rank = current_.units[i].token_rank() + 1;
            if (rank < ModuleSpec::kTokenCount) {
                current_.units[i] = ModuleSpec::from_token_rank(rank);
                break;
            }
            current_.units[i] = ModuleSpec::from_token_rank(0);
        }
    }
    out = current_;
    ++next_;
    return true;
}

void for_each_design(std::size_t n, const std::function<void(const ActuatorDesign&)>& fn,
                     bool force) {
    DesignEnumerator it(n, force);
    ActuatorDesign design;
    while (it.next(design)) fn(design);
}

ActuatorDesign rotate_faces(const ActuatorDesign& design, int increment) {
    ActuatorDesign out = design;
    for (ModuleSpec& unit : out.units) {
        if (!is_bistable(unit.kind)) continue;
        int shifted = (unit.face - 1 + increment) % 6;
        if (shifted < 0) shifted += 6;
        unit.face = shifted + 1;
    }
    return out;
}

ActuatorDesign mirror_design(const ActuatorDesign& design) {
    ActuatorDesign out = design;
    for (ModuleSpec& unit : out.units) {
        unit.chirality = unit.chirality == Chirality::clockwise ? Chirality::anticlockwise
                                                                : Chirality::clockwise;
        if (is_bistable(unit.kind)) unit.face = (7 - unit.face) % 6 + 1;
    }
    return out;
}

ActuatorDesign canonicalize_face_rotation(const ActuatorDesign& design) {
    ActuatorDesign best = design;
    for (int increment = 1; increment < 6; ++increment) {
        ActuatorDesign candidate = rotate_faces(design, increment);
        if (candidate < best) best = candidate;
    }
    return best;
}

}  // namespace kresling
