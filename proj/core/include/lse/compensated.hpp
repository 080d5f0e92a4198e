#pragma once

namespace lse {

/// Running sum with Neumaier's compensation: each addition's rounding error
/// is recovered exactly by an error-free transformation and accumulated in a
/// separate term.
template <typename Real>
class CompensatedSum {
public:
    CompensatedSum& operator+=(const Real& value) {
        const Real t = sum_ + value;
        if (abs_(sum_) >= abs_(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    [[nodiscard]] Real value() const { return sum_ + compensation_; }

private:
    static Real abs_(const Real& v) { return v < Real(0) ? Real(-v) : v; }

    Real sum_{0};
    Real compensation_{0};
};

}  // namespace lse
