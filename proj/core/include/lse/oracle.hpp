#pragma once

/// \file
/// High-accuracy reference values of log-sum-exp and softmax, and the scaled
/// error measure |computed - reference| / (u |reference|).

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "lse/compensated.hpp"
#include "lse/kernels.hpp"
#include "lse/precision.hpp"

namespace lse {

template <typename Real>
struct ReferenceT {
    Real y_ref{};
    std::vector<Real> g_ref;
};

/// The shifted evaluation carried out in `Real` with compensated summation of
/// the exponentials. Instantiated with double for production use; wider types
/// work through ADL on exp/log1p.
template <typename Real>
ReferenceT<Real> reference_lse_softmax(std::span<const Real> x) {
    using std::exp;
    using std::log1p;
    const auto k = static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
    const Real a = x[k];

    std::vector<Real> w(x.size());
    CompensatedSum<Real> s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        w[i] = exp(Real(x[i] - a));
        if (i != k) s += w[i];
    }
    const Real sum = s.value();

    ReferenceT<Real> ref;
    ref.y_ref = a + log1p(sum);
    const Real denom = Real(1) + sum;
    ref.g_ref.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ref.g_ref[i] = w[i] / denom;
    return ref;
}

struct Reference {
    double y_ref = 0.0;
    std::vector<double> g_ref;
    std::string_view method = "compensated-shifted";
};

[[nodiscard]] Reference lse_softmax_reference(const InputVector& x);

/// |computed - reference| / (u |reference|), +inf for a non-finite computed
/// value. Throws Error when reference is zero.
[[nodiscard]] double scaled_error(double computed, double reference, const FloatFormat& fmt);

/// ||computed - reference||_inf / (u ||reference||_inf). Throws Error on a
/// length mismatch or a zero reference.
[[nodiscard]] double scaled_error_vec(std::span<const double> computed, std::span<const double> reference,
                                      const FloatFormat& fmt);

/// The binary64 reference leaves enough headroom (at least 2^20) only for
/// formats with u >= 2^-33.
[[nodiscard]] bool is_measurable(const FloatFormat& fmt);

}  // namespace lse
