#include "lse/precision.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace lse {

namespace {

constexpr int kMaxCustomPrecision = 26;

int parse_int(std::string_view text, std::string_view key) {
    int value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw FormatError("custom format: bad integer for '" + std::string(key) + "': '" +
                          std::string(text) + "'");
    }
    return value;
}

FloatFormat parse_custom(std::string_view spec, std::string_view full_name) {
    std::map<std::string, int, std::less<>> fields;
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        const auto item = spec.substr(0, comma);
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError("custom format: expected key=value, got '" + std::string(item) + "'");
        }
        const auto key = item.substr(0, eq);
        if (key != "t" && key != "emin" && key != "emax" && key != "subnormals") {
            throw FormatError("custom format: unknown key '" + std::string(key) + "'");
        }
        fields[std::string(key)] = parse_int(item.substr(eq + 1), key);
    }
    for (const char* required : {"t", "emin", "emax"}) {
        if (!fields.contains(required)) {
            throw FormatError(std::string("custom format: missing '") + required + "'");
        }
    }
    const int t = fields["t"];
    if (t > kMaxCustomPrecision) {
        throw FormatError("custom format: precision_bits must be <= " +
                          std::to_string(kMaxCustomPrecision));
    }
    const int subnormals = fields.contains("subnormals") ? fields["subnormals"] : 1;
    if (subnormals != 0 && subnormals != 1) {
        throw FormatError("custom format: subnormals must be 0 or 1");
    }
    return make_format(std::string(full_name), t, fields["emin"], fields["emax"], subnormals == 1);
}

}  // namespace

double FloatFormat::denorm_min_encoding() const {
    return std::ldexp(1.0, emin - precision_bits + 1);
}

bool FloatFormat::is_binary64() const {
    return precision_bits == 53 && emin == -1022 && emax == 1023 && subnormals_enabled;
}

FloatFormat make_format(std::string name, int precision_bits, int emin, int emax,
                        bool subnormals_enabled) {
    if (precision_bits < 2) throw FormatError("precision_bits must be >= 2");
    if (emin >= emax) throw FormatError("emin must be < emax");
    if (precision_bits > 53 || emax > 1023 || emin < -1022) {
        throw FormatError("format does not fit inside binary64");
    }
    FloatFormat f;
    f.name = std::move(name);
    f.precision_bits = precision_bits;
    f.emin = emin;
    f.emax = emax;
    f.subnormals_enabled = subnormals_enabled;
    f.unit_roundoff = std::ldexp(1.0, -precision_bits);
    f.r_min = std::ldexp(1.0, emin);
    f.r_max = std::ldexp(2.0 - std::ldexp(1.0, 1 - precision_bits), emax);
    f.r_min_subnormal = subnormals_enabled ? f.denorm_min_encoding() : f.r_min;
    return f;
}

FloatFormat fp16() { return make_format("fp16", 11, -14, 15, true); }
FloatFormat bfloat16(bool subnormals_enabled) {
    return make_format("bfloat16", 8, -126, 127, subnormals_enabled);
}
FloatFormat fp32() { return make_format("fp32", 24, -126, 127, true); }
FloatFormat fp64() { return make_format("fp64", 53, -1022, 1023, true); }

FloatFormat format_params(std::string_view name) {
    if (name == "fp16") return fp16();
    if (name == "bfloat16") return bfloat16();
    if (name == "fp32") return fp32();
    if (name == "fp64") return fp64();
    constexpr std::string_view prefix = "custom:";
    if (name.starts_with(prefix)) return parse_custom(name.substr(prefix.size()), name);
    throw FormatError("unknown format '" + std::string(name) + "'");
}

double round_to_format(double x, const FloatFormat& fmt) {
    if (!std::isfinite(x) || x == 0.0 || fmt.is_binary64()) return x;

    const double ax = std::fabs(x);
    // Spacing of the format around |x|; below 2^emin the grid stays at the
    // subnormal spacing.
    const int exponent = std::max(std::ilogb(ax), fmt.emin);
    const int quantum = exponent - fmt.precision_bits + 1;
    // Scaling by a power of two is exact here and nearbyint rounds ties to even
    // under the default floating-point environment.
    double r = std::ldexp(std::nearbyint(std::ldexp(ax, -quantum)), quantum);

    if (r > fmt.r_max) r = std::numeric_limits<double>::infinity();
    else if (!fmt.subnormals_enabled && r < fmt.r_min) r = 0.0;
    return std::copysign(r, x);
}

const FloatFormat& ArithmeticContext::format() const {
    static const FloatFormat native_format = fp64();
    if (const auto* f = std::get_if<FloatFormat>(&mode_)) return *f;
    return native_format;
}

double sim_binop(BinOp op, double a, double b, const ArithmeticContext& ctx) {
    double r = 0.0;
    switch (op) {
        case BinOp::add: r = a + b; break;
        case BinOp::sub: r = a - b; break;
        case BinOp::mul: r = a * b; break;
        case BinOp::div: r = a / b; break;
    }
    return ctx.round(r);
}

double sim_unary(UnaryFn fn, double a, const ArithmeticContext& ctx) {
    double r = 0.0;
    switch (fn) {
        case UnaryFn::exp: r = std::exp(a); break;
        case UnaryFn::log: r = std::log(a); break;
        case UnaryFn::log1p: r = std::log1p(a); break;
    }
    return ctx.round(r);
}

}  // namespace lse
