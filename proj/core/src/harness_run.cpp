#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "lse/compensated.hpp"
#include "lse/harness.hpp"
#include "lse/oracle.hpp"

namespace lse {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

template <std::size_t N>
bool same_bits(const std::array<double, N>& a, const std::array<double, N>& b) {
    for (std::size_t i = 0; i < N; ++i) {
        if (!same_bits(a[i], b[i])) return false;
    }
    return true;
}

double sum_deviation(std::span<const double> g, double u) {
    CompensatedSum<double> s;
    for (double v : g) {
        if (!std::isfinite(v)) return kInf;
        s += v;
    }
    return std::fabs(s.value() - 1.0) / u;
}

double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::lse_basic: return "lse_basic";
        case Channel::lse_shift: return "lse_shift";
        case Channel::sm_basic: return "sm_basic";
        case Channel::sm_shift: return "sm_shift";
        case Channel::sm_alt: return "sm_alt";
        case Channel::sm_altshift: return "sm_altshift";
    }
    return "unknown";
}

BoundId bound_for(Channel c) {
    switch (c) {
        case Channel::lse_basic: return BoundId::basic_lse;
        case Channel::lse_shift: return BoundId::shifted_lse;
        case Channel::sm_basic: return BoundId::basic_softmax;
        case Channel::sm_shift: return BoundId::shifted_softmax;
        case Channel::sm_alt: return BoundId::alt_softmax;
        case Channel::sm_altshift: return BoundId::alt_shifted_softmax;
    }
    throw Error("unknown channel");
}

Algorithm algorithm_for(Channel c) {
    switch (c) {
        case Channel::lse_basic:
        case Channel::sm_basic: return Algorithm::basic;
        case Channel::lse_shift:
        case Channel::sm_shift: return Algorithm::shifted;
        case Channel::sm_alt: return Algorithm::alt_basic;
        case Channel::sm_altshift: return Algorithm::alt_shifted;
    }
    throw Error("unknown channel");
}

bool TrialRecord::counts_toward_bound(Channel c) const {
    return flags_of(algorithm_for(c)).empty() && !std::isnan(err(c));
}

bool TrialRecord::violates_bound(Channel c) const {
    return counts_toward_bound(c) && !(err(c) <= bnd(c));
}

bool TrialRecord::operator==(const TrialRecord& o) const {
    return trial_id == o.trial_id && n == o.n && same_bits(x_max, o.x_max) && same_bits(x_min, o.x_min) &&
           same_bits(y_ref, o.y_ref) && same_bits(error, o.error) && same_bits(bound, o.bound) &&
           same_bits(sum_dev, o.sum_dev) && flags == o.flags;
}

TrialRecord run_trial(std::size_t trial_id, const InputVector& x, const FloatFormat& fmt) {
    const auto ref = lse_softmax_reference(x);
    const auto ctx = ArithmeticContext::simulated(fmt);

    const auto basic = lse_softmax_basic(x, ctx);
    const auto shifted = lse_softmax_shifted(x, ctx);
    const auto alt_basic = softmax_alt(x, basic.y, ctx, Algorithm::basic, basic.flags);
    const auto alt_shifted = softmax_alt(x, shifted.y, ctx, Algorithm::shifted, shifted.flags);

    TrialRecord r;
    r.trial_id = trial_id;
    r.n = x.size();
    r.x_max = x.x_max();
    r.x_min = x.x_min();
    r.y_ref = ref.y_ref;

    auto lse_err = [&](double y) { return ref.y_ref == 0.0 ? kNaN : scaled_error(y, ref.y_ref, fmt); };
    auto sm_err = [&](const EvalResult& e) { return scaled_error_vec(e.g, ref.g_ref, fmt); };
    r.error = {lse_err(basic.y),  lse_err(shifted.y),  sm_err(basic),
               sm_err(shifted),   sm_err(alt_basic),   sm_err(alt_shifted)};

    const auto ingredients = bound_ingredients(x, ref.y_ref);
    for (auto c : kChannels) r.bound[static_cast<std::size_t>(c)] = leading_factor(bound_for(c), ingredients);

    const EvalResult* results[] = {&basic, &shifted, &alt_basic, &alt_shifted};
    for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
        r.sum_dev[a] = sum_deviation(results[a]->g, fmt.unit_roundoff);
        r.flags[a] = results[a]->flags;
    }
    return r;
}

std::vector<TrialRecord> run_experiment(const std::vector<InputVector>& data, const FloatFormat& fmt,
                                        ExperimentOptions options) {
    if (data.empty()) throw Error("run_experiment: no input vectors");
    if (!is_measurable(fmt)) {
        throw Error("run_experiment: format '" + fmt.name + "' is too precise for the binary64 reference");
    }
    const auto rounded = round_all(data, fmt);
    std::vector<TrialRecord> records(rounded.size());

    unsigned threads = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, rounded.size()));

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) records[i] = run_trial(i, rounded[i], fmt);
    };
    if (threads <= 1) {
        work(0, rounded.size());
        return records;
    }
    const std::size_t chunk = (rounded.size() + threads - 1) / threads;
    {
        std::vector<std::jthread> pool;
        for (std::size_t begin = 0; begin < rounded.size(); begin += chunk) {
            pool.emplace_back(work, begin, std::min(begin + chunk, rounded.size()));
        }
    }
    return records;
}

std::size_t Summary::total_violations() const {
    std::size_t total = 0;
    for (const auto& c : channels) total += c.violations;
    return total;
}

Summary summarize(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw Error("summarize: no records");
    Summary s;
    s.trials = records.size();

    for (auto c : kChannels) {
        auto& st = s.channels[static_cast<std::size_t>(c)];
        std::vector<double> errs;
        for (const auto& r : records) {
            if (!r.counts_toward_bound(c)) {
                ++st.excluded;
                continue;
            }
            errs.push_back(r.err(c));
            if (r.violates_bound(c)) ++st.violations;
        }
        st.measured = errs.size();
        if (!errs.empty()) {
            st.max = *std::max_element(errs.begin(), errs.end());
            st.mean = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
            st.median = median(errs);
        }
    }

    for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
        std::vector<double> devs;
        for (const auto& r : records) {
            if (r.flags[a].test(EvalFlag::overflowed)) ++s.overflow_count[a];
            if (r.flags[a].empty()) devs.push_back(r.sum_dev[a]);
        }
        auto& sd = s.sum_dev[a];
        sd.measured = devs.size();
        if (!devs.empty()) {
            sd.max = *std::max_element(devs.begin(), devs.end());
            sd.mean = std::accumulate(devs.begin(), devs.end(), 0.0) / static_cast<double>(devs.size());
            sd.median = median(devs);
        }
    }

    std::size_t both = 0;
    std::size_t identical = 0;
    for (const auto& r : records) {
        if (r.counts_toward_bound(Channel::lse_basic) && r.counts_toward_bound(Channel::lse_shift)) {
            ++both;
            if (r.err(Channel::lse_basic) == r.err(Channel::lse_shift)) ++identical;
        }
    }
    if (both > 0) s.identical_lse_fraction = static_cast<double>(identical) / static_cast<double>(both);

    for (std::size_t p = 0; p < kRatioPairs.size(); ++p) {
        const auto [num, den] = kRatioPairs[p];
        std::vector<double> ratios;
        for (const auto& r : records) {
            if (!r.counts_toward_bound(num) || !r.counts_toward_bound(den)) continue;
            const double a = r.err(num);
            const double b = r.err(den);
            if (!std::isfinite(a) || !std::isfinite(b) || a == 0.0 || b == 0.0) continue;
            ratios.push_back(a / b);
        }
        if (ratios.empty()) continue;
        RatioStats st;
        st.count = ratios.size();
        const double k = static_cast<double>(st.count);
        st.mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / k;
        st.min = *std::min_element(ratios.begin(), ratios.end());
        st.max = *std::max_element(ratios.begin(), ratios.end());
        double log_sum = 0.0;
        double sq = 0.0;
        for (double q : ratios) {
            log_sum += std::log(q);
            sq += (q - st.mean) * (q - st.mean);
        }
        st.geometric_mean = std::exp(log_sum / k);
        st.standard_error = st.count > 1 ? std::sqrt(sq / (k - 1.0)) / std::sqrt(k) : 0.0;
        s.ratios[p] = st;
    }
    return s;
}

}  // namespace lse
