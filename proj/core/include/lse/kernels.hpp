#pragma once

/// \file
/// The four evaluation algorithms for log-sum-exp f(x) = log sum_i e^{x_i}
/// and softmax g(x) = e^{x_j} / sum_i e^{x_i}.
///
/// Kernels mirror the analyzed algorithms operation for operation: strict
/// left-to-right summation, no compensation, no sorting. Numeric pathologies
/// never throw; they propagate with IEEE semantics and are reported in
/// EvalResult::flags.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lse/precision.hpp"

namespace lse {

/// A nonempty vector of finite reals.
class InputVector {
public:
    /// Throws Error when `values` is empty or contains inf/NaN.
    explicit InputVector(std::vector<double> values);

    /// Rounds every entry into `fmt` first. Throws if any entry rounds to inf.
    static InputVector rounded(std::span<const double> values, const FloatFormat& fmt);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    [[nodiscard]] double x_max() const noexcept { return values_[argmax_]; }
    [[nodiscard]] double x_min() const noexcept { return x_min_; }
    /// First index attaining x_max.
    [[nodiscard]] std::size_t argmax() const noexcept { return argmax_; }
    [[nodiscard]] double norm_inf() const noexcept;

    bool operator==(const InputVector& other) const { return values_ == other.values_; }

private:
    std::vector<double> values_;
    std::size_t argmax_ = 0;
    double x_min_ = 0.0;
};

enum class EvalFlag : std::uint8_t {
    overflowed = 1U << 0,              ///< an operation on finite operands produced +-inf
    produced_inf = 1U << 1,            ///< y or some g_j is infinite
    produced_nan = 1U << 2,            ///< y or some g_j is NaN
    sum_underflowed_to_zero = 1U << 3, ///< the exponential sum is zero
};

class EvalFlags {
public:
    constexpr EvalFlags() = default;

    constexpr void set(EvalFlag f) noexcept { bits_ |= static_cast<std::uint8_t>(f); }
    [[nodiscard]] constexpr bool test(EvalFlag f) const noexcept {
        return (bits_ & static_cast<std::uint8_t>(f)) != 0;
    }
    [[nodiscard]] constexpr bool empty() const noexcept { return bits_ == 0; }
    [[nodiscard]] constexpr std::uint8_t bits() const noexcept { return bits_; }
    constexpr EvalFlags& operator|=(EvalFlags other) noexcept {
        bits_ |= other.bits_;
        return *this;
    }

    /// '+'-joined flag names, empty when no flag is set.
    [[nodiscard]] std::string to_string() const;
    /// Inverse of to_string. Throws Error on an unknown name.
    static EvalFlags parse(std::string_view text);

    constexpr bool operator==(const EvalFlags&) const = default;

private:
    std::uint8_t bits_ = 0;
};

enum class Algorithm { basic, shifted, alt_basic, alt_shifted };

[[nodiscard]] std::string_view to_string(Algorithm alg);
/// Throws Error for an unknown name.
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);

struct EvalResult {
    double y = 0.0;
    std::vector<double> g;
    EvalFlags flags;
    Algorithm algorithm = Algorithm::basic;
};

/// Unshifted evaluation: w_i = exp(x_i), s = sum w_i, y = log s, g_i = w_i / s.
[[nodiscard]] EvalResult lse_softmax_basic(const InputVector& x, const ArithmeticContext& ctx);

/// Evaluation shifted by a = x_max at pivot k (first maximal index):
/// w_i = exp(x_i - a), s = sum_{i != k} w_i, y = a + log1p(s), g_i = w_i / (1 + s).
/// Never overflows for finite input.
[[nodiscard]] EvalResult lse_softmax_shifted(const InputVector& x, const ArithmeticContext& ctx);

/// Division-free softmax g_j = exp(x_j - y) from a previously computed
/// log-sum-exp. `source` names the algorithm that produced `y` and must be
/// basic or shifted; the result is tagged alt_basic or alt_shifted.
[[nodiscard]] EvalResult softmax_alt(const InputVector& x, double y, const ArithmeticContext& ctx,
                                     Algorithm source = Algorithm::shifted,
                                     EvalFlags upstream = {});

/// Runs any of the four algorithms; the alternative forms compute their
/// log-sum-exp with the matching kernel first and report that y.
[[nodiscard]] EvalResult evaluate(Algorithm alg, const InputVector& x, const ArithmeticContext& ctx);

}  // namespace lse
