#include "lse/oracle.hpp"

#include <limits>

namespace lse {

Reference lse_softmax_reference(const InputVector& x) {
    auto ref = reference_lse_softmax<double>(x.values());
    return Reference{ref.y_ref, std::move(ref.g_ref)};
}

double scaled_error(double computed, double reference, const FloatFormat& fmt) {
    if (reference == 0.0) throw Error("scaled_error: reference value is zero");
    if (!std::isfinite(computed)) return std::numeric_limits<double>::infinity();
    return std::fabs(computed - reference) / (fmt.unit_roundoff * std::fabs(reference));
}

double scaled_error_vec(std::span<const double> computed, std::span<const double> reference,
                        const FloatFormat& fmt) {
    if (computed.size() != reference.size()) throw Error("scaled_error_vec: length mismatch");
    double diff = 0.0;
    double ref_norm = 0.0;
    for (std::size_t i = 0; i < computed.size(); ++i) {
        if (!std::isfinite(computed[i])) return std::numeric_limits<double>::infinity();
        diff = std::max(diff, std::fabs(computed[i] - reference[i]));
        ref_norm = std::max(ref_norm, std::fabs(reference[i]));
    }
    if (ref_norm == 0.0) throw Error("scaled_error_vec: reference vector is zero");
    return diff / (fmt.unit_roundoff * ref_norm);
}

bool is_measurable(const FloatFormat& fmt) {
    return fmt.unit_roundoff >= std::ldexp(1.0, 20 - 53);
}

}  // namespace lse
