#pragma once

/// \file
/// Condition numbers, the softmax Jacobian, and the leading (first-order)
/// coefficients of u in the rounding error bounds of the six evaluation
/// schemes. All quantities are evaluated in binary64 from oracle values.

#include <cstddef>
#include <string_view>
#include <vector>

#include "lse/kernels.hpp"

namespace lse {

/// Dense row-major square matrix.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    /// Maximum absolute row sum.
    [[nodiscard]] double norm_inf() const;

private:
    std::size_t n_;
    std::vector<double> data_;
};

/// cond_inf(f, x) = ||x||_inf / |f(x)|; +inf when f(x) = 0.
[[nodiscard]] double cond_lse(const InputVector& x);

/// G_ij = dg_i/dx_j = -g_i g_j (i != j), g_i - g_i^2 (i == j), built from the
/// oracle softmax.
[[nodiscard]] SquareMatrix softmax_jacobian(const InputVector& x);

struct SoftmaxCondition {
    double exact = 0.0;  ///< ||G||_inf ||x||_inf / ||g||_inf
    double upper = 0.0;  ///< n ||x||_inf
};

[[nodiscard]] SoftmaxCondition cond_softmax(const InputVector& x);

struct ConditionReport {
    double cond_f = 0.0;
    double cond_g_exact = 0.0;
    double cond_g_upper = 0.0;
    SquareMatrix jacobian{0};
};

[[nodiscard]] ConditionReport condition_report(const InputVector& x);

struct YRange {
    double lo = 0.0;  ///< x_max
    double hi = 0.0;  ///< x_max + log n
};

[[nodiscard]] YRange y_range(const InputVector& x);

enum class BoundId {
    basic_lse,
    basic_softmax,
    alt_softmax,
    shifted_lse,
    shifted_softmax,
    alt_shifted_softmax,
};

inline constexpr BoundId kAllBounds[] = {
    BoundId::basic_lse,       BoundId::basic_softmax,      BoundId::alt_softmax,
    BoundId::shifted_lse,     BoundId::shifted_softmax,    BoundId::alt_shifted_softmax,
};

[[nodiscard]] std::string_view to_string(BoundId id);
/// Throws Error for an unknown name.
[[nodiscard]] BoundId parse_bound_id(std::string_view name);

struct BoundIngredients {
    std::size_t n = 0;
    double y = 0.0;  ///< oracle log-sum-exp
    double x_max = 0.0;
    double x_min = 0.0;
    double max_abs_x_minus_y = 0.0;
};

struct BoundReport {
    BoundId id = BoundId::basic_lse;
    double leading_factor = 0.0;  ///< coefficient of u in the first-order bound
    BoundIngredients ingredients;
};

/// Gathers n, oracle y, x_max, x_min and max_j |x_j - y| for `x`.
[[nodiscard]] BoundIngredients bound_ingredients(const InputVector& x);
/// Same, with an already computed oracle value.
[[nodiscard]] BoundIngredients bound_ingredients(const InputVector& x, double y_ref);

/// Leading factor from precomputed ingredients:
///   basic_lse            1 + (n+1)/|y|
///   basic_softmax        n + 3
///   alt_softmax          |y| + max_j|x_j - y| + n + 2
///   shifted_lse          |y + n - x_min| / |y|
///   shifted_softmax      n + 2 + 2(x_max - x_min)
///   alt_shifted_softmax  1 + max_j|x_j - y| + |y + n - x_min|
/// The log-sum-exp factors are +inf when y = 0.
[[nodiscard]] double leading_factor(BoundId id, const BoundIngredients& in);

[[nodiscard]] BoundReport bound_leading_term(BoundId id, const InputVector& x);

}  // namespace lse
