#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lse/harness.hpp"
#include "lse/number_format.hpp"

namespace lse {

namespace {

using detail::format_double;

constexpr std::size_t kRecordColumns = 22;

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = line.find(sep);
        out.push_back(line.substr(0, pos));
        if (pos == std::string_view::npos) break;
        line.remove_prefix(pos + 1);
    }
    return out;
}

std::string flags_field(const TrialRecord& r) {
    std::string out;
    for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
        if (r.flags[a].empty()) continue;
        if (!out.empty()) out += ';';
        out += to_string(kAlgorithms[a]);
        out += '=';
        out += r.flags[a].to_string();
    }
    return out;
}

void parse_flags_field(std::string_view text, TrialRecord& r) {
    if (text.empty()) return;
    for (auto item : split(text, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw Error("bad flags entry '" + std::string(item) + "'");
        const auto alg = parse_algorithm(item.substr(0, eq));
        r.flags[static_cast<std::size_t>(alg)] = EvalFlags::parse(item.substr(eq + 1));
    }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

double record_field(const TrialRecord& r, std::string_view name) {
    if (name == "trial_id") return static_cast<double>(r.trial_id);
    if (name == "n") return static_cast<double>(r.n);
    if (name == "xmax") return r.x_max;
    if (name == "xmin") return r.x_min;
    if (name == "y_ref") return r.y_ref;
    for (auto c : kChannels) {
        const auto suffix = to_string(c).substr(to_string(c).find('_'));  // "_basic", "_shift", ...
        const auto group = to_string(c).substr(0, to_string(c).find('_'));
        const std::string err = "err_" + std::string(group) + std::string(suffix);
        const std::string bnd = "bnd_" + std::string(group) + std::string(suffix);
        if (name == err) return r.err(c);
        if (name == bnd) return r.bnd(c);
    }
    static constexpr std::string_view kSumDev[] = {"sum_dev_basic", "sum_dev_shift", "sum_dev_alt",
                                                   "sum_dev_altshift"};
    for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
        if (name == kSumDev[a]) return r.sum_dev[a];
    }
    throw Error("unknown record field '" + std::string(name) + "'");
}

void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
    out << kRecordsHeader << '\n';
    for (const auto& r : records) {
        out << r.trial_id << ',' << r.n << ',' << format_double(r.x_max) << ',' << format_double(r.x_min) << ','
            << format_double(r.y_ref);
        for (auto c : kChannels) out << ',' << format_double(r.err(c)) << ',' << format_double(r.bnd(c));
        for (double d : r.sum_dev) out << ',' << format_double(d);
        out << ',' << flags_field(r) << '\n';
    }
}

void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_records_csv(records, out);
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRecordsHeader) throw ParseError(1, 1, "missing records header");
    std::vector<TrialRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != kRecordColumns) {
            throw ParseError(line_no, fields.size(), "expected " + std::to_string(kRecordColumns) + " fields");
        }
        auto num = [&](std::size_t i) {
            const auto v = detail::parse_double(fields[i]);
            if (!v) throw ParseError(line_no, i + 1, "bad number '" + std::string(fields[i]) + "'");
            return *v;
        };
        TrialRecord r;
        r.trial_id = static_cast<std::size_t>(num(0));
        r.n = static_cast<std::size_t>(num(1));
        r.x_max = num(2);
        r.x_min = num(3);
        r.y_ref = num(4);
        for (std::size_t c = 0; c < kChannelCount; ++c) {
            r.error[c] = num(5 + 2 * c);
            r.bound[c] = num(6 + 2 * c);
        }
        for (std::size_t a = 0; a < kAlgorithmCount; ++a) r.sum_dev[a] = num(17 + a);
        try {
            parse_flags_field(fields[21], r);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(line_no, 22, e.what());
        }
        out.push_back(r);
    }
    return out;
}

std::vector<TrialRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return read_records_csv(in);
}

void write_summary_csv(const Summary& s, std::ostream& out) {
    out << "statistic,value\n";
    out << "trials," << s.trials << '\n';
    for (auto c : kChannels) {
        const auto& st = s.channel(c);
        const std::string p(to_string(c));
        out << p << ".measured," << st.measured << '\n';
        out << p << ".excluded," << st.excluded << '\n';
        out << p << ".max," << format_double(st.max) << '\n';
        out << p << ".mean," << format_double(st.mean) << '\n';
        out << p << ".median," << format_double(st.median) << '\n';
        out << p << ".violations," << st.violations << '\n';
    }
    for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
        const std::string p(to_string(kAlgorithms[a]));
        out << p << ".overflows," << s.overflow_count[a] << '\n';
        out << p << ".sum_dev.max," << format_double(s.sum_dev[a].max) << '\n';
        out << p << ".sum_dev.mean," << format_double(s.sum_dev[a].mean) << '\n';
        out << p << ".sum_dev.median," << format_double(s.sum_dev[a].median) << '\n';
    }
    out << "identical_lse_fraction,"
        << (s.identical_lse_fraction ? format_double(*s.identical_lse_fraction) : std::string("n/a")) << '\n';
    for (std::size_t p = 0; p < kRatioPairs.size(); ++p) {
        const std::string name =
            "ratio." + std::string(to_string(kRatioPairs[p].numerator)) + "/" +
            std::string(to_string(kRatioPairs[p].denominator));
        if (!s.ratios[p]) {
            out << name << ",n/a\n";
            continue;
        }
        const auto& r = *s.ratios[p];
        out << name << ".count," << r.count << '\n';
        out << name << ".mean," << format_double(r.mean) << '\n';
        out << name << ".min," << format_double(r.min) << '\n';
        out << name << ".max," << format_double(r.max) << '\n';
        out << name << ".geomean," << format_double(r.geometric_mean) << '\n';
        out << name << ".stderr," << format_double(r.standard_error) << '\n';
    }
    out << "total_violations," << s.total_violations() << '\n';
}

void emit_csv(const Summary& summary, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_summary_csv(summary, out);
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

void print_summary(const Summary& s, std::ostream& out) {
    const auto sig = [](double v) { return detail::format_sig(v, 4); };
    out << "trials: " << s.trials << '\n';
    out << std::left << std::setw(13) << "channel" << std::setw(10) << "measured" << std::setw(12) << "max"
        << std::setw(12) << "mean" << std::setw(12) << "median" << "violations\n";
    for (auto c : kChannels) {
        const auto& st = s.channel(c);
        out << std::setw(13) << to_string(c) << std::setw(10) << st.measured << std::setw(12) << sig(st.max)
            << std::setw(12) << sig(st.mean) << std::setw(12) << sig(st.median) << st.violations << '\n';
    }
    out << "overflows:";
    for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
        out << ' ' << to_string(kAlgorithms[a]) << '=' << s.overflow_count[a];
    }
    out << '\n';
    out << "softmax sum deviation |sum(g)-1|/u (median, max):";
    for (std::size_t a = 0; a < kAlgorithmCount; ++a) {
        out << ' ' << to_string(kAlgorithms[a]) << '=' << sig(s.sum_dev[a].median) << '/' << sig(s.sum_dev[a].max);
    }
    out << '\n';
    out << "identical basic/shifted lse errors: "
        << (s.identical_lse_fraction ? sig(*s.identical_lse_fraction) : std::string("n/a")) << '\n';
    for (std::size_t p = 0; p < kRatioPairs.size(); ++p) {
        out << "ratio " << to_string(kRatioPairs[p].numerator) << '/' << to_string(kRatioPairs[p].denominator)
            << ": ";
        if (!s.ratios[p]) {
            out << "n/a\n";
            continue;
        }
        const auto& r = *s.ratios[p];
        out << "count=" << r.count << " mean=" << sig(r.mean) << " min=" << sig(r.min) << " max=" << sig(r.max)
            << " geomean=" << sig(r.geometric_mean) << " stderr=" << sig(r.standard_error) << '\n';
    }
    out << "bound violations: " << s.total_violations() << '\n';
}

std::size_t write_svg_scatter(const std::vector<TrialRecord>& records, std::string_view x_field,
                              std::string_view y_field, std::ostream& out, const ScatterOptions& options) {
    constexpr double width = 640.0;
    constexpr double height = 480.0;
    constexpr double left = 70.0;
    constexpr double right = 20.0;
    constexpr double top = 40.0;
    constexpr double bottom = 55.0;

    // Reject unknown fields even when there is nothing to draw.
    (void)record_field(TrialRecord{}, x_field);
    (void)record_field(TrialRecord{}, y_field);
    auto axis = [&](double v) { return options.log_axes ? std::log10(v) : v; };

    std::vector<std::pair<double, double>> points;
    for (const auto& r : records) {
        const double x = record_field(r, x_field);
        const double y = record_field(r, y_field);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        if (options.log_axes && (x <= 0.0 || y <= 0.0)) continue;
        points.emplace_back(axis(x), axis(y));
    }

    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (!points.empty()) {
        x0 = x1 = points.front().first;
        y0 = y1 = points.front().second;
        for (const auto& [px, py] : points) {
            x0 = std::min(x0, px);
            x1 = std::max(x1, px);
            y0 = std::min(y0, py);
            y1 = std::max(y1, py);
        }
    }
    if (!options.log_axes) {
        x0 = std::min(x0, 0.0);
        y0 = std::min(y0, 0.0);
    }
    if (options.reference_line) {
        x0 = y0 = std::min(x0, y0);
        x1 = y1 = std::max(x1, y1);
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) y1 = y0 + 1.0;

    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto sx = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
    auto sy = [&](double v) { return top + ph - (v - y0) / (y1 - y0) * ph; };
    auto label = [&](double v) { return detail::format_sig(options.log_axes ? std::pow(10.0, v) : v, 3); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"15\">" << xml_escape(options.title) << "</text>\n";
    }
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0;
        const double fy = y0 + (y1 - y0) * i / 4.0;
        out << "<text x=\"" << sx(fx) << "\" y=\"" << top + ph + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << label(fx) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << sy(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label(fy) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(x_field)
        << (options.log_axes ? " (log10)" : "") << "</text>\n";
    out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\" transform=\"rotate(-90 16 " << top + ph / 2 << ")\">" << xml_escape(y_field)
        << (options.log_axes ? " (log10)" : "") << "</text>\n";
    if (options.reference_line) {
        out << "<line class=\"reference\" x1=\"" << sx(x0) << "\" y1=\"" << sy(x0) << "\" x2=\"" << sx(x1)
            << "\" y2=\"" << sy(x1) << "\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
    }
    out << "<g class=\"markers\" fill=\"none\" stroke=\"#1f4e9c\">\n";
    for (const auto& [px, py] : points) {
        out << "<circle cx=\"" << sx(px) << "\" cy=\"" << sy(py) << "\" r=\"2.5\"/>\n";
    }
    out << "</g>\n</svg>\n";
    return points.size();
}

std::size_t emit_svg_scatter(const std::vector<TrialRecord>& records, std::string_view x_field,
                             std::string_view y_field, const std::filesystem::path& path,
                             const ScatterOptions& options) {
    (void)record_field(TrialRecord{}, x_field);
    (void)record_field(TrialRecord{}, y_field);
    auto out = open_for_write(path);
    const auto drawn = write_svg_scatter(records, x_field, y_field, out, options);
    if (!out) throw Error("write failed for '" + path.string() + "'");
    return drawn;
}

}  // namespace lse
