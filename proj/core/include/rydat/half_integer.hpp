#pragma once

#include <compare>
#include <cstdlib>
#include <string>

namespace rydat {

/// Angular momentum value stored as twice its value, so half-integers stay
/// exact. j = 3/2 is HalfInteger::from_twice(3); j = 2 is HalfInteger(2).
class HalfInteger {
public:
    constexpr HalfInteger() = default;
    constexpr explicit HalfInteger(int whole) : twice_(2 * whole) {}

    static constexpr HalfInteger from_twice(int twice) {
        HalfInteger h;
        h.twice_ = twice;
        return h;
    }

    constexpr int twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    constexpr double value() const { return 0.5 * twice_; }

    constexpr HalfInteger operator-() const { return from_twice(-twice_); }
    constexpr HalfInteger operator+(HalfInteger o) const { return from_twice(twice_ + o.twice_); }
    constexpr HalfInteger operator-(HalfInteger o) const { return from_twice(twice_ - o.twice_); }

    constexpr auto operator<=>(const HalfInteger&) const = default;

    std::string str() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

private:
    int twice_ = 0;
};

inline HalfInteger abs(HalfInteger h) { return HalfInteger::from_twice(std::abs(h.twice())); }

} // namespace rydat
