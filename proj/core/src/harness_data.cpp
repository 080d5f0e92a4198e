#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lse/harness.hpp"
#include "lse/rng.hpp"
#include "lse/number_format.hpp"

namespace lse {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_param(std::string_view text, std::string_view what) {
    const auto t = trim(text);
    const auto v = detail::parse_double(t);
    if (!v || !std::isfinite(*v)) {
        throw Error("generator: bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return *v;
}

std::vector<double> draw(const GeneratorKind& kind, std::size_t n, CounterRng& rng) {
    std::vector<double> x(n);
    std::visit(
        [&](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, UniformGen>) {
                for (auto& v : x) v = rng.uniform(g.lo, g.hi);
            } else if constexpr (std::is_same_v<G, NearSingularGen>) {
                const double centre = -std::log(static_cast<double>(n));
                for (auto& v : x) v = centre + rng.uniform(-g.eps, g.eps);
            } else if constexpr (std::is_same_v<G, WideSpreadGen>) {
                const double top = rng.uniform(-5.0, 10.0);
                for (auto& v : x) v = top - g.delta * rng.uniform();
                const auto hi = static_cast<std::size_t>(rng.below(n));
                x[hi] = top;
                if (n > 1) {
                    const auto lo = (hi + 1 + static_cast<std::size_t>(rng.below(n - 1))) % n;
                    x[lo] = top - g.delta;
                }
            } else {
                std::fill(x.begin(), x.end(), g.c);
            }
        },
        kind);
    return x;
}

void validate(const GeneratorKind& kind) {
    std::visit(
        [](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, UniformGen>) {
                if (!(g.lo < g.hi)) throw Error("generator: uniform requires lo < hi");
            } else if constexpr (std::is_same_v<G, NearSingularGen>) {
                if (!(g.eps >= 0.0)) throw Error("generator: near-singular requires eps >= 0");
            } else if constexpr (std::is_same_v<G, WideSpreadGen>) {
                if (!(g.delta >= 0.0)) throw Error("generator: wide-spread requires delta >= 0");
            }
        },
        kind);
}

void validate(const DataSpec& spec) {
    if (spec.n < 1) throw Error("data spec: n must be >= 1");
    if (spec.count < 1) throw Error("data spec: count must be >= 1");
    validate(spec.kind);
}

GeneratorKind checked(GeneratorKind kind) {
    validate(kind);
    return kind;
}

}  // namespace

GeneratorKind parse_generator(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw Error("generator: expected <kind>:<params>, got '" + std::string(text) + "'");
    }
    const auto kind = trim(text.substr(0, colon));
    const auto params = text.substr(colon + 1);
    if (kind == "uniform") {
        const auto comma = params.find(',');
        if (comma == std::string_view::npos) throw Error("generator: uniform needs <lo>,<hi>");
        return checked(
            UniformGen{parse_param(params.substr(0, comma), "lo"), parse_param(params.substr(comma + 1), "hi")});
    }
    if (kind == "near-singular") return checked(NearSingularGen{parse_param(params, "eps")});
    if (kind == "wide-spread") return checked(WideSpreadGen{parse_param(params, "delta")});
    if (kind == "constant") return ConstantGen{parse_param(params, "c")};
    throw Error("generator: unknown kind '" + std::string(kind) + "'");
}

std::string describe(const GeneratorKind& kind) {
    return std::visit(
        [](const auto& g) -> std::string {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, UniformGen>) {
                return "uniform:" + detail::format_double(g.lo) + "," + detail::format_double(g.hi);
            } else if constexpr (std::is_same_v<G, NearSingularGen>) {
                return "near-singular:" + detail::format_double(g.eps);
            } else if constexpr (std::is_same_v<G, WideSpreadGen>) {
                return "wide-spread:" + detail::format_double(g.delta);
            } else {
                return "constant:" + detail::format_double(g.c);
            }
        },
        kind);
}

std::vector<InputVector> generate(const DataSpec& spec) {
    validate(spec);
    std::vector<InputVector> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        CounterRng rng(spec.seed, i);
        auto x = draw(spec.kind, spec.n, rng);
        out.push_back(spec.format ? InputVector::rounded(x, *spec.format) : InputVector(std::move(x)));
    }
    return out;
}

std::vector<InputVector> parse_vectors_csv(std::istream& in) {
    std::vector<InputVector> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest = line;
        if (trim(rest).empty()) continue;
        std::vector<double> values;
        std::size_t field = 0;
        while (true) {
            ++field;
            const auto comma = rest.find(',');
            const auto token = trim(rest.substr(0, comma));
            const auto v = detail::parse_double(token);
            if (!v) throw ParseError(line_no, field, "cannot parse '" + std::string(token) + "' as a number");
            if (!std::isfinite(*v)) throw ParseError(line_no, field, "non-finite value '" + std::string(token) + "'");
            values.push_back(*v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        out.emplace_back(std::move(values));
    }
    return out;
}

std::vector<InputVector> ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return parse_vectors_csv(in);
}

void emit_vectors_csv(const std::vector<InputVector>& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    for (const auto& x : data) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out << ',';
            out << detail::format_double(x[i]);
        }
        out << '\n';
    }
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::vector<InputVector> round_all(const std::vector<InputVector>& data, const FloatFormat& fmt) {
    std::vector<InputVector> out;
    out.reserve(data.size());
    for (const auto& x : data) out.push_back(InputVector::rounded(x.values(), fmt));
    return out;
}

}  // namespace lse
