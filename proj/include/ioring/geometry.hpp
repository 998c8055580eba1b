#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace ioring {

/// Lengths are integer nanometres throughout.
using Length = std::int64_t;

enum class Side { S, E, N, W };

inline constexpr std::array<Side, 4> kRingSides{Side::S, Side::E, Side::N, Side::W};

inline constexpr int side_rank(Side s) { return static_cast<int>(s); }

/// Next side in counter-clockwise traversal (S -> E -> N -> W -> S).
inline constexpr Side next_side(Side s) { return kRingSides[(side_rank(s) + 1) % 4]; }

inline std::string_view to_string(Side s) {
    switch (s) {
    case Side::S: return "S";
    case Side::E: return "E";
    case Side::N: return "N";
    case Side::W: return "W";
    }
    return "?";
}

inline std::optional<Side> parse_side(std::string_view text) {
    if (text == "S" || text == "s") return Side::S;
    if (text == "E" || text == "e") return Side::E;
    if (text == "N" || text == "n") return Side::N;
    if (text == "W" || text == "w") return Side::W;
    return std::nullopt;
}

enum class Orient { R0, R90, R180, R270 };

inline std::string_view to_string(Orient o) {
    switch (o) {
    case Orient::R0: return "R0";
    case Orient::R90: return "R90";
    case Orient::R180: return "R180";
    case Orient::R270: return "R270";
    }
    return "?";
}

inline std::optional<Orient> parse_orient(std::string_view text) {
    if (text == "R0") return Orient::R0;
    if (text == "R90") return Orient::R90;
    if (text == "R180") return Orient::R180;
    if (text == "R270") return Orient::R270;
    return std::nullopt;
}

/// Rotation composition: apply `a`, then `b`.
inline constexpr Orient compose(Orient a, Orient b) {
    return static_cast<Orient>((static_cast<int>(a) + static_cast<int>(b)) % 4);
}

/// Pads and corners on each side face the die edge with this orientation.
inline constexpr Orient side_orient(Side s) { return static_cast<Orient>(side_rank(s)); }

enum class Row { outer, inner };

inline std::string_view to_string(Row r) { return r == Row::outer ? "outer" : "inner"; }

inline std::optional<Row> parse_row(std::string_view text) {
    if (text == "outer") return Row::outer;
    if (text == "inner") return Row::inner;
    return std::nullopt;
}

enum class RingStyle { single_row, staggered };

inline std::string_view to_string(RingStyle r) { return r == RingStyle::single_row ? "single_row" : "staggered"; }

inline std::optional<RingStyle> parse_ring_style(std::string_view text) {
    if (text == "single_row") return RingStyle::single_row;
    if (text == "staggered") return RingStyle::staggered;
    return std::nullopt;
}

struct Point {
    Length x = 0;
    Length y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Half-open axis-aligned rectangle [x0,x1) x [y0,y1).
struct Rect {
    Length x0 = 0;
    Length y0 = 0;
    Length x1 = 0;
    Length y1 = 0;

    Length width() const { return x1 - x0; }
    Length height() const { return y1 - y0; }
    bool empty() const { return x1 <= x0 || y1 <= y0; }

    bool contains(const Rect& r) const {
        return r.x0 >= x0 && r.y0 >= y0 && r.x1 <= x1 && r.y1 <= y1;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
    friend auto operator<=>(const Rect&, const Rect&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Rect& r) {
    return os << '[' << r.x0 << ',' << r.y0 << ',' << r.x1 << ',' << r.y1 << ']';
}

inline Rect intersection(const Rect& a, const Rect& b) {
    return {std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
}

/// Positive-area overlap.
inline bool overlaps(const Rect& a, const Rect& b) { return !intersection(a, b).empty(); }

/// Length of boundary shared by two non-overlapping rectangles whose facing
/// edges are at most `tol` apart; 0 when they only meet at a point or not at all.
inline Length shared_edge(const Rect& a, const Rect& b, Length tol = 0) {
    auto span = [](Length lo0, Length hi0, Length lo1, Length hi1) {
        return std::min(hi0, hi1) - std::max(lo0, lo1);
    };
    auto near = [tol](Length p, Length q) { return (p > q ? p - q : q - p) <= tol; };
    if (near(a.x1, b.x0) || near(b.x1, a.x0)) {
        Length s = span(a.y0, a.y1, b.y0, b.y1);
        if (s > 0) return s;
    }
    if (near(a.y1, b.y0) || near(b.y1, a.y0)) {
        Length s = span(a.x0, a.x1, b.x0, b.x1);
        if (s > 0) return s;
    }
    return 0;
}

/// Rotates a cell-local rectangle about the cell origin (counter-clockwise).
inline Rect rotate_about_origin(const Rect& r, Orient o) {
    switch (o) {
    case Orient::R0: return r;
    case Orient::R90: return {-r.y1, r.x0, -r.y0, r.x1};
    case Orient::R180: return {-r.x1, -r.y1, -r.x0, -r.y0};
    case Orient::R270: return {r.y0, -r.x1, r.y1, -r.x0};
    }
    return r;
}

/// Bounding box of a width x height cell placed at `origin` with orientation
/// `o`. The rotated box is translated so its min corner sits on `origin`.
inline Rect placed_bbox(Length width, Length height, Point origin, Orient o) {
    Rect local = rotate_about_origin(Rect{0, 0, width, height}, o);
    return {origin.x, origin.y, origin.x + local.width(), origin.y + local.height()};
}

/// Formats nanometres as micrometres with exactly three decimals.
inline std::string format_um(Length nm) {
    std::string sign = nm < 0 ? "-" : "";
    Length a = nm < 0 ? -nm : nm;
    std::string frac = std::to_string(a % 1000);
    frac.insert(0, 3 - frac.size(), '0');
    return sign + std::to_string(a / 1000) + "." + frac;
}

/// Parses a decimal micrometre string into nanometres. Returns nullopt when the
/// text is not a decimal number or carries sub-nanometre precision.
inline std::optional<Length> parse_um(std::string_view text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }
    Length whole = 0;
    bool digits = false;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
        whole = whole * 10 + (text[i] - '0');
        digits = true;
        if (whole > 1'000'000'000'000LL) return std::nullopt;
    }
    Length frac = 0;
    int frac_digits = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
            digits = true;
            if (frac_digits < 3) {
                frac = frac * 10 + (text[i] - '0');
                ++frac_digits;
            } else if (text[i] != '0') {
                return std::nullopt;
            }
        }
    }
    if (!digits || i != text.size()) return std::nullopt;
    for (; frac_digits < 3; ++frac_digits) frac *= 10;
    Length v = whole * 1000 + frac;
    return neg ? -v : v;
}

} // namespace ioring
