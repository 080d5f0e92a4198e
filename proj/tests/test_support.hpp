#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lse/precision.hpp"
#include "lse/rng.hpp"

namespace lse::test {

inline bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

/// `v` correctly rounded to `digits` significant decimal digits.
inline double round_sig(double v, int digits) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::fabs(v)))));
    return std::round(v * scale) / scale;
}

/// `v` truncated toward zero to `digits` significant decimal digits.
inline double trunc_sig(double v, int digits) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::fabs(v)))));
    return std::trunc(v * scale) / scale;
}

/// Random value spread over the whole exponent range of `fmt`, including
/// values beyond r_max and below the subnormal range.
inline double random_wide(CounterRng& rng, const FloatFormat& fmt) {
    const int span = fmt.emax - fmt.emin + fmt.precision_bits + 4;
    const int e = fmt.emin - fmt.precision_bits - 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(span)));
    return std::ldexp(rng.uniform(-2.0, 2.0), e);
}

/// Random value exactly representable in `fmt`, finite.
inline double random_representable(CounterRng& rng, const FloatFormat& fmt) {
    while (true) {
        const double r = round_to_format(random_wide(rng, fmt), fmt);
        if (std::isfinite(r)) return r;
    }
}

/// Uniformly random finite binary16 encoding, decoded to binary64.
inline double random_fp16_encoding(CounterRng& rng) {
    while (true) {
        const auto bits = static_cast<std::uint16_t>(rng.below(1u << 16));
        const int exponent = (bits >> 10) & 0x1f;
        const int mantissa = bits & 0x3ff;
        if (exponent == 0x1f) continue;  // inf, nan
        const double mag = exponent == 0 ? std::ldexp(mantissa, -24) : std::ldexp(1024 + mantissa, exponent - 25);
        return (bits & 0x8000) ? -mag : mag;
    }
}

}  // namespace lse::test
