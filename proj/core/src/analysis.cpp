#include "lse/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "lse/oracle.hpp"

namespace lse {

namespace {

constexpr std::array<std::pair<BoundId, std::string_view>, 6> kBoundNames{{
    {BoundId::basic_lse, "basic_lse"},
    {BoundId::basic_softmax, "basic_softmax"},
    {BoundId::alt_softmax, "alt_softmax"},
    {BoundId::shifted_lse, "shifted_lse"},
    {BoundId::shifted_softmax, "shifted_softmax"},
    {BoundId::alt_shifted_softmax, "alt_shifted_softmax"},
}};

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm_inf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

double SquareMatrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n_; ++j) row += std::fabs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

double cond_lse(const InputVector& x) {
    const double y = lse_softmax_reference(x).y_ref;
    if (y == 0.0) return kInf;
    return x.norm_inf() / std::fabs(y);
}

SquareMatrix softmax_jacobian(const InputVector& x) {
    const auto g = lse_softmax_reference(x).g_ref;
    const std::size_t n = g.size();
    SquareMatrix jac(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            jac(i, j) = i == j ? g[i] - g[i] * g[i] : -g[i] * g[j];
        }
    }
    return jac;
}

SoftmaxCondition cond_softmax(const InputVector& x) {
    const double xnorm = x.norm_inf();
    const auto g = lse_softmax_reference(x).g_ref;
    SoftmaxCondition c;
    c.upper = static_cast<double>(x.size()) * xnorm;
    c.exact = xnorm == 0.0 ? 0.0 : softmax_jacobian(x).norm_inf() * xnorm / norm_inf(g);
    return c;
}

ConditionReport condition_report(const InputVector& x) {
    ConditionReport r;
    r.cond_f = cond_lse(x);
    const auto cg = cond_softmax(x);
    r.cond_g_exact = cg.exact;
    r.cond_g_upper = cg.upper;
    r.jacobian = softmax_jacobian(x);
    return r;
}

YRange y_range(const InputVector& x) {
    return {x.x_max(), x.x_max() + std::log(static_cast<double>(x.size()))};
}

std::string_view to_string(BoundId id) {
    for (const auto& [b, name] : kBoundNames) {
        if (b == id) return name;
    }
    return "unknown";
}

BoundId parse_bound_id(std::string_view name) {
    for (const auto& [b, n] : kBoundNames) {
        if (n == name) return b;
    }
    throw Error("unknown bound id '" + std::string(name) + "'");
}

BoundIngredients bound_ingredients(const InputVector& x) {
    return bound_ingredients(x, lse_softmax_reference(x).y_ref);
}

BoundIngredients bound_ingredients(const InputVector& x, double y_ref) {
    BoundIngredients in;
    in.n = x.size();
    in.y = y_ref;
    in.x_max = x.x_max();
    in.x_min = x.x_min();
    for (double v : x.values()) in.max_abs_x_minus_y = std::max(in.max_abs_x_minus_y, std::fabs(v - in.y));
    return in;
}

double leading_factor(BoundId id, const BoundIngredients& in) {
    const double n = static_cast<double>(in.n);
    const double y = in.y;
    switch (id) {
        case BoundId::basic_lse:
            return y == 0.0 ? kInf : 1.0 + (n + 1.0) / std::fabs(y);
        case BoundId::basic_softmax:
            return n + 3.0;
        case BoundId::alt_softmax:
            return std::fabs(y) + in.max_abs_x_minus_y + n + 2.0;
        case BoundId::shifted_lse:
            return y == 0.0 ? kInf : std::fabs(y + n - in.x_min) / std::fabs(y);
        case BoundId::shifted_softmax:
            return n + 2.0 + 2.0 * (in.x_max - in.x_min);
        case BoundId::alt_shifted_softmax:
            return 1.0 + in.max_abs_x_minus_y + std::fabs(y + n - in.x_min);
    }
    throw Error("unknown bound id");
}

BoundReport bound_leading_term(BoundId id, const InputVector& x) {
    BoundReport r;
    r.id = id;
    r.ingredients = bound_ingredients(x);
    r.leading_factor = leading_factor(id, r.ingredients);
    return r;
}

}  // namespace lse
