#pragma once

/// \file
/// Experiment engine: generate or ingest input vectors, run the four
/// algorithms in a simulated format, and record scaled errors against the
/// oracle alongside the leading error-bound factors.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lse/analysis.hpp"
#include "lse/kernels.hpp"
#include "lse/precision.hpp"

namespace lse {

// -- data sources ------------------------------------------------------------

struct UniformGen {
    double lo = -20.0;
    double hi = 20.0;
};
/// Entries -log n + U(-eps, eps): log-sum-exp close to zero.
struct NearSingularGen {
    double eps = 0.01;
};
/// One entry at a random top value in [-5, 10], one at top - delta, the rest
/// uniform in between.
struct WideSpreadGen {
    double delta = 30.0;
};
struct ConstantGen {
    double c = 0.0;
};

using GeneratorKind = std::variant<UniformGen, NearSingularGen, WideSpreadGen, ConstantGen>;

/// Parses "uniform:<lo>,<hi>", "near-singular:<eps>", "wide-spread:<delta>",
/// "constant:<c>". Throws Error on malformed text.
[[nodiscard]] GeneratorKind parse_generator(std::string_view text);
[[nodiscard]] std::string describe(const GeneratorKind& kind);

struct DataSpec {
    GeneratorKind kind = UniformGen{};
    std::size_t n = 10;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    /// When set, entries are rounded into this format.
    std::optional<FloatFormat> format;
};

/// Deterministic: equal specs give bit-identical vectors. Vector i draws from
/// its own counter-based stream (seed, i). Throws Error on an invalid spec.
[[nodiscard]] std::vector<InputVector> generate(const DataSpec& spec);

/// One vector per line, comma-separated decimals, whitespace tolerated,
/// blank lines skipped, ragged lengths allowed. Throws ParseError naming the
/// 1-based line and field of the first bad token.
[[nodiscard]] std::vector<InputVector> parse_vectors_csv(std::istream& in);
[[nodiscard]] std::vector<InputVector> ingest_csv(const std::filesystem::path& path);

/// Writes vectors in the format ingest_csv reads, 17 significant digits.
void emit_vectors_csv(const std::vector<InputVector>& data, const std::filesystem::path& path);

/// Rounds every entry into `fmt`.
[[nodiscard]] std::vector<InputVector> round_all(const std::vector<InputVector>& data, const FloatFormat& fmt);

// -- trial records -----------------------------------------------------------

/// Error channels: one per (algorithm, output) pair that has a bound.
enum class Channel : std::size_t { lse_basic, lse_shift, sm_basic, sm_shift, sm_alt, sm_altshift };
inline constexpr std::size_t kChannelCount = 6;
inline constexpr std::array<Channel, kChannelCount> kChannels = {
    Channel::lse_basic, Channel::lse_shift, Channel::sm_basic,
    Channel::sm_shift,  Channel::sm_alt,    Channel::sm_altshift,
};

[[nodiscard]] std::string_view to_string(Channel c);
[[nodiscard]] BoundId bound_for(Channel c);
/// The algorithm whose flags govern the channel.
[[nodiscard]] Algorithm algorithm_for(Channel c);

/// Softmax variants, indexed like Algorithm.
inline constexpr std::size_t kAlgorithmCount = 4;
inline constexpr std::array<Algorithm, kAlgorithmCount> kAlgorithms = {
    Algorithm::basic, Algorithm::shifted, Algorithm::alt_basic, Algorithm::alt_shifted};

struct TrialRecord {
    std::size_t trial_id = 0;
    std::size_t n = 0;
    double x_max = 0.0;
    double x_min = 0.0;
    double y_ref = 0.0;
    std::array<double, kChannelCount> error{};  ///< scaled errors, NaN when y_ref = 0
    std::array<double, kChannelCount> bound{};  ///< leading bound factors
    std::array<double, kAlgorithmCount> sum_dev{};  ///< |sum(g) - 1| / u
    std::array<EvalFlags, kAlgorithmCount> flags{};

    [[nodiscard]] double err(Channel c) const { return error[static_cast<std::size_t>(c)]; }
    [[nodiscard]] double bnd(Channel c) const { return bound[static_cast<std::size_t>(c)]; }
    [[nodiscard]] EvalFlags flags_of(Algorithm a) const { return flags[static_cast<std::size_t>(a)]; }

    /// Whether the channel takes part in bound-conformance tallies: the
    /// governing algorithm raised no flag and the error is a number.
    [[nodiscard]] bool counts_toward_bound(Channel c) const;
    [[nodiscard]] bool violates_bound(Channel c) const;

    bool operator==(const TrialRecord& other) const;
};

struct ExperimentOptions {
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 1;
};

/// Runs every algorithm on every vector under `fmt`. Vectors are rounded into
/// `fmt` first. Throws Error when `data` is empty or the oracle cannot measure
/// `fmt` (see is_measurable). Records are ordered by trial_id regardless of
/// the thread count.
[[nodiscard]] std::vector<TrialRecord> run_experiment(const std::vector<InputVector>& data, const FloatFormat& fmt,
                                                      ExperimentOptions options = {});

/// Single-trial worker used by run_experiment.
[[nodiscard]] TrialRecord run_trial(std::size_t trial_id, const InputVector& x, const FloatFormat& fmt);

/// Record fields by CSV column name (every column except flags). Throws
/// Error for an unknown name.
[[nodiscard]] double record_field(const TrialRecord& r, std::string_view name);

inline constexpr std::string_view kRecordsHeader =
    "trial_id,n,xmax,xmin,y_ref,err_lse_basic,bnd_lse_basic,err_lse_shift,bnd_lse_shift,"
    "err_sm_basic,bnd_sm_basic,err_sm_shift,bnd_sm_shift,err_sm_alt,bnd_sm_alt,"
    "err_sm_altshift,bnd_sm_altshift,sum_dev_basic,sum_dev_shift,sum_dev_alt,sum_dev_altshift,flags";

void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& out);
void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path);
[[nodiscard]] std::vector<TrialRecord> read_records_csv(std::istream& in);
[[nodiscard]] std::vector<TrialRecord> read_records_csv(const std::filesystem::path& path);

// -- summary -----------------------------------------------------------------

struct ChannelStats {
    std::size_t measured = 0;  ///< trials counted toward the bound
    std::size_t excluded = 0;
    double max = 0.0;
    double mean = 0.0;
    double median = 0.0;
    std::size_t violations = 0;
};

struct RatioStats {
    std::size_t count = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double geometric_mean = 0.0;
    double standard_error = 0.0;
};

struct RatioPair {
    Channel numerator;
    Channel denominator;
};

inline constexpr std::array<RatioPair, 4> kRatioPairs = {{
    {Channel::lse_basic, Channel::lse_shift},
    {Channel::sm_basic, Channel::sm_shift},
    {Channel::sm_alt, Channel::sm_shift},
    {Channel::sm_altshift, Channel::sm_shift},
}};

struct SumDevStats {
    std::size_t measured = 0;
    double max = 0.0;
    double mean = 0.0;
    double median = 0.0;
};

struct Summary {
    std::size_t trials = 0;
    std::array<ChannelStats, kChannelCount> channels{};
    std::array<std::size_t, kAlgorithmCount> overflow_count{};
    std::array<SumDevStats, kAlgorithmCount> sum_dev{};
    /// Fraction of trials with both log-sum-exp errors measured where they are equal.
    std::optional<double> identical_lse_fraction;
    /// Ratio statistics per kRatioPairs entry over trials where both errors are
    /// finite and nonzero; empty when there are none.
    std::array<std::optional<RatioStats>, kRatioPairs.size()> ratios{};

    [[nodiscard]] const ChannelStats& channel(Channel c) const { return channels[static_cast<std::size_t>(c)]; }
    [[nodiscard]] std::size_t total_violations() const;
};

/// Throws Error on an empty record list.
[[nodiscard]] Summary summarize(const std::vector<TrialRecord>& records);

void write_summary_csv(const Summary& summary, std::ostream& out);
void emit_csv(const Summary& summary, const std::filesystem::path& path);
/// Human-readable report.
void print_summary(const Summary& summary, std::ostream& out);

// -- plots -------------------------------------------------------------------

struct ScatterOptions {
    bool log_axes = false;
    bool reference_line = false;  ///< draw y = x
    std::string title;
};

/// One marker per record with finite coordinates (positive ones on log axes).
/// Returns the number of markers drawn. Throws Error for unknown fields or an
/// unwritable path.
std::size_t write_svg_scatter(const std::vector<TrialRecord>& records, std::string_view x_field,
                              std::string_view y_field, std::ostream& out, const ScatterOptions& options = {});
std::size_t emit_svg_scatter(const std::vector<TrialRecord>& records, std::string_view x_field,
                             std::string_view y_field, const std::filesystem::path& path,
                             const ScatterOptions& options = {});

}  // namespace lse
