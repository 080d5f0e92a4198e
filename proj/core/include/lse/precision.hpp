#pragma once

/// \file
/// Simulated binary floating-point formats.
///
/// Every value is carried in a binary64 `double`. In a simulated context the
/// result of each elementary operation and math function is computed in
/// binary64 and then rounded (nearest, ties to even) into the target format.

#include <string>
#include <string_view>
#include <variant>

#include "lse/error.hpp"

namespace lse {

/// Parameters of a binary floating-point format.
struct FloatFormat {
    std::string name;
    int precision_bits = 53;  ///< significand bits including the implicit bit
    int emin = -1022;         ///< minimum normalized exponent
    int emax = 1023;
    bool subnormals_enabled = true;

    double unit_roundoff = 0.0;    ///< 2^-precision_bits
    double r_min_subnormal = 0.0;  ///< smallest positive value the format produces
    double r_min = 0.0;            ///< 2^emin
    double r_max = 0.0;            ///< 2^emax * (2 - 2^(1-precision_bits))

    /// Smallest subnormal of the encoding, 2^(emin - precision_bits + 1),
    /// whether or not the format is configured to produce subnormals.
    [[nodiscard]] double denorm_min_encoding() const;

    /// Bit-compatible with native binary64, so rounding is the identity.
    [[nodiscard]] bool is_binary64() const;

    bool operator==(const FloatFormat&) const = default;
};

/// Builds a fully populated format. Throws FormatError when `t < 2`,
/// `emin >= emax`, or the parameters do not fit inside binary64.
FloatFormat make_format(std::string name, int precision_bits, int emin, int emax,
                        bool subnormals_enabled);

/// Accepts "fp16", "bfloat16", "fp32", "fp64" and
/// "custom:t=<bits>,emin=<e>,emax=<e>,subnormals=<0|1>".
/// Custom formats are limited to precision_bits <= 26 so that
/// operate-then-round in binary64 is correctly rounded.
FloatFormat format_params(std::string_view name);

FloatFormat fp16();
FloatFormat bfloat16(bool subnormals_enabled = false);
FloatFormat fp32();
FloatFormat fp64();

/// Rounds `x` to the nearest value of `fmt` (ties to even). Overflow gives
/// +-inf, values the format cannot represent below its smallest magnitude
/// give +-0, NaN stays NaN.
[[nodiscard]] double round_to_format(double x, const FloatFormat& fmt);

[[nodiscard]] inline bool is_representable(double x, const FloatFormat& fmt) {
    const double r = round_to_format(x, fmt);
    return r == x || (r != r && x != x);
}

struct NativeBinary64 {};

/// Either hardware binary64 or a simulated format. Rounding is always
/// round-to-nearest-even.
class ArithmeticContext {
public:
    ArithmeticContext() = default;
    explicit ArithmeticContext(FloatFormat fmt) : mode_(std::move(fmt)) {}

    static ArithmeticContext native() { return {}; }
    static ArithmeticContext simulated(FloatFormat fmt) { return ArithmeticContext{std::move(fmt)}; }

    [[nodiscard]] bool is_native() const { return std::holds_alternative<NativeBinary64>(mode_); }

    /// The format values are rounded to; fp64 for the native context.
    [[nodiscard]] const FloatFormat& format() const;

    [[nodiscard]] double round(double x) const {
        if (is_native()) return x;
        return round_to_format(x, std::get<FloatFormat>(mode_));
    }

private:
    std::variant<NativeBinary64, FloatFormat> mode_;
};

enum class BinOp { add, sub, mul, div };
enum class UnaryFn { exp, log, log1p };

[[nodiscard]] double sim_binop(BinOp op, double a, double b, const ArithmeticContext& ctx);
[[nodiscard]] double sim_unary(UnaryFn fn, double a, const ArithmeticContext& ctx);

}  // namespace lse
