#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace ocm {

/// Extended real number: finite, +inf or -inf. Never NaN.
///
/// Only order operations and negation are provided; the Baire operators are
/// lattice formulas, so no arithmetic between infinities is ever needed.
class ExtReal {
public:
    constexpr ExtReal() = default;
    explicit ExtReal(double v) : v_(v) {
        if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN is not an extended real");
    }

    static constexpr ExtReal pos_inf() { return ExtReal(Raw{}, std::numeric_limits<double>::infinity()); }
    static constexpr ExtReal neg_inf() { return ExtReal(Raw{}, -std::numeric_limits<double>::infinity()); }

    constexpr double value() const { return v_; }
    bool is_finite() const { return std::isfinite(v_); }
    constexpr bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
    constexpr bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }

    constexpr ExtReal operator-() const { return ExtReal(Raw{}, -v_); }

    // Total order: NaN is excluded by construction.
    friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend constexpr std::strong_ordering operator<=>(ExtReal a, ExtReal b) {
        return a.v_ < b.v_ ? std::strong_ordering::less
             : a.v_ > b.v_ ? std::strong_ordering::greater
                           : std::strong_ordering::equal;
    }

    friend constexpr ExtReal min(ExtReal a, ExtReal b) { return b.v_ < a.v_ ? b : a; }
    friend constexpr ExtReal max(ExtReal a, ExtReal b) { return b.v_ > a.v_ ? b : a; }

private:
    struct Raw {};
    constexpr ExtReal(Raw, double v) : v_(v) {}
    double v_ = 0.0;
};

/// "inf" / "-inf" tokens, otherwise shortest round-trip decimal.
std::string to_string(ExtReal x);
/// Inverse of to_string; throws std::invalid_argument on garbage.
ExtReal parse_ext_real(const std::string& token);

} // namespace ocm
