#include "lse/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace lse {

namespace {

constexpr std::array<std::pair<EvalFlag, std::string_view>, 4> kFlagNames{{
    {EvalFlag::overflowed, "overflowed"},
    {EvalFlag::produced_inf, "produced_inf"},
    {EvalFlag::produced_nan, "produced_nan"},
    {EvalFlag::sum_underflowed_to_zero, "sum_underflowed_to_zero"},
}};

constexpr std::array<std::pair<Algorithm, std::string_view>, 4> kAlgorithmNames{{
    {Algorithm::basic, "basic"},
    {Algorithm::shifted, "shifted"},
    {Algorithm::alt_basic, "alt_basic"},
    {Algorithm::alt_shifted, "alt_shifted"},
}};

void note_value(EvalFlags& flags, double v) {
    if (std::isinf(v)) flags.set(EvalFlag::produced_inf);
    if (std::isnan(v)) flags.set(EvalFlag::produced_nan);
}

void note_outputs(EvalResult& r) {
    note_value(r.flags, r.y);
    for (double gj : r.g) note_value(r.flags, gj);
}

// An infinite result from finite operands is an overflow in that operation.
void note_overflow(EvalFlags& flags, double result, double operand) {
    if (std::isinf(result) && std::isfinite(operand)) flags.set(EvalFlag::overflowed);
}

}  // namespace

InputVector::InputVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error("input vector must have at least one entry");
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error("input vector entries must be finite");
    }
    argmax_ = static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) - values_.begin());
    x_min_ = *std::min_element(values_.begin(), values_.end());
}

InputVector InputVector::rounded(std::span<const double> values, const FloatFormat& fmt) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [&](double v) { return round_to_format(v, fmt); });
    return InputVector(std::move(out));
}

double InputVector::norm_inf() const noexcept {
    return std::max(std::fabs(x_max()), std::fabs(x_min_));
}

std::string EvalFlags::to_string() const {
    std::string out;
    for (const auto& [flag, name] : kFlagNames) {
        if (!test(flag)) continue;
        if (!out.empty()) out += '+';
        out += name;
    }
    return out;
}

EvalFlags EvalFlags::parse(std::string_view text) {
    EvalFlags flags;
    while (!text.empty()) {
        const auto plus = text.find('+');
        const auto name = text.substr(0, plus);
        text = plus == std::string_view::npos ? std::string_view{} : text.substr(plus + 1);
        const auto it = std::find_if(kFlagNames.begin(), kFlagNames.end(),
                                     [&](const auto& entry) { return entry.second == name; });
        if (it == kFlagNames.end()) throw Error("unknown flag '" + std::string(name) + "'");
        flags.set(it->first);
    }
    return flags;
}

std::string_view to_string(Algorithm alg) {
    for (const auto& [a, name] : kAlgorithmNames) {
        if (a == alg) return name;
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (const auto& [a, n] : kAlgorithmNames) {
        if (n == name) return a;
    }
    throw Error("unknown algorithm '" + std::string(name) + "'");
}

EvalResult lse_softmax_basic(const InputVector& x, const ArithmeticContext& ctx) {
    const std::size_t n = x.size();
    EvalResult r;
    r.algorithm = Algorithm::basic;
    r.g.resize(n);

    std::vector<double> w(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = sim_unary(UnaryFn::exp, x[i], ctx);
        note_overflow(r.flags, w[i], x[i]);
        const double prev = s;
        s = sim_binop(BinOp::add, s, w[i], ctx);
        if (std::isfinite(w[i])) note_overflow(r.flags, s, prev);
    }
    if (s == 0.0) r.flags.set(EvalFlag::sum_underflowed_to_zero);

    r.y = sim_unary(UnaryFn::log, s, ctx);
    for (std::size_t i = 0; i < n; ++i) r.g[i] = sim_binop(BinOp::div, w[i], s, ctx);

    note_outputs(r);
    return r;
}

EvalResult lse_softmax_shifted(const InputVector& x, const ArithmeticContext& ctx) {
    const std::size_t n = x.size();
    const std::size_t k = x.argmax();
    const double a = x.x_max();
    EvalResult r;
    r.algorithm = Algorithm::shifted;
    r.g.resize(n);

    std::vector<double> w(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = sim_unary(UnaryFn::exp, sim_binop(BinOp::sub, x[i], a, ctx), ctx);
        if (i != k) s = sim_binop(BinOp::add, s, w[i], ctx);
    }
    // Sum of terms in [0, 1]; overflow needs n beyond r_max, noted for completeness.
    note_overflow(r.flags, s, 0.0);

    r.y = sim_binop(BinOp::add, a, sim_unary(UnaryFn::log1p, s, ctx), ctx);
    const double denom = sim_binop(BinOp::add, 1.0, s, ctx);
    for (std::size_t i = 0; i < n; ++i) r.g[i] = sim_binop(BinOp::div, w[i], denom, ctx);

    note_outputs(r);
    return r;
}

EvalResult softmax_alt(const InputVector& x, double y, const ArithmeticContext& ctx, Algorithm source,
                       EvalFlags upstream) {
    if (source != Algorithm::basic && source != Algorithm::shifted) {
        throw Error("softmax_alt: source must be basic or shifted");
    }
    const std::size_t n = x.size();
    EvalResult r;
    r.algorithm = source == Algorithm::basic ? Algorithm::alt_basic : Algorithm::alt_shifted;
    r.y = y;
    r.flags = upstream;
    r.g.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double arg = sim_binop(BinOp::sub, x[j], y, ctx);
        r.g[j] = sim_unary(UnaryFn::exp, arg, ctx);
        note_overflow(r.flags, r.g[j], arg);
    }
    note_outputs(r);
    return r;
}

EvalResult evaluate(Algorithm alg, const InputVector& x, const ArithmeticContext& ctx) {
    switch (alg) {
        case Algorithm::basic: return lse_softmax_basic(x, ctx);
        case Algorithm::shifted: return lse_softmax_shifted(x, ctx);
        case Algorithm::alt_basic: {
            const auto base = lse_softmax_basic(x, ctx);
            return softmax_alt(x, base.y, ctx, Algorithm::basic, base.flags);
        }
        case Algorithm::alt_shifted: {
            const auto base = lse_softmax_shifted(x, ctx);
            return softmax_alt(x, base.y, ctx, Algorithm::shifted, base.flags);
        }
    }
    throw Error("unknown algorithm");
}

}  // namespace lse
