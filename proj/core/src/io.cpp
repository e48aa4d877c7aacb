#include "lvr/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lvr/errors.hpp"

namespace lvr {

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& file) {
    std::ofstream os(file);
    if (!os) throw Error("cannot open for writing: " + file);
    return os;
}

double parse_double(std::string_view sv, std::size_t line_no) {
    double v = 0.0;
    const auto* end = sv.data() + sv.size();
    const auto [ptr, ec] = std::from_chars(sv.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("price CSV line " + std::to_string(line_no) +
                         ": not a number: '" + std::string(sv) + "'");
    return v;
}

}  // namespace

void write_price_path_csv(std::ostream& os, const PricePath& path) {
    os << "t,price\n";
    for (std::size_t k = 0; k < path.times.size(); ++k)
        os << g17(path.times[k]) << ',' << g17(path.prices[k]) << '\n';
}

void write_price_path_csv(const std::string& file, const PricePath& path) {
    auto os = open_out(file);
    write_price_path_csv(os, path);
}

PricePath read_price_path_csv(std::istream& is) {
    PricePath path;
    path.scheme = "external";
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != "t,price")
                throw ParseError("price CSV line 1: expected header 't,price'");
            continue;
        }
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("price CSV line " + std::to_string(line_no) +
                             ": expected two comma-separated fields");
        const double t = parse_double(std::string_view(line).substr(0, comma), line_no);
        const double p = parse_double(std::string_view(line).substr(comma + 1), line_no);
        if (!path.times.empty() && t <= path.times.back())
            throw ValidationError("price CSV line " + std::to_string(line_no) +
                                  ": times must be strictly increasing");
        if (!(p > 0.0))
            throw ValidationError("price CSV line " + std::to_string(line_no) +
                                  ": prices must be positive");
        path.times.push_back(t);
        path.prices.push_back(p);
    }
    if (path.times.size() < 2)
        throw ValidationError("price CSV: need at least two rows");
    return path;
}

PricePath read_price_path_csv(const std::string& file) {
    std::ifstream is(file);
    if (!is) throw Error("cannot open for reading: " + file);
    return read_price_path_csv(is);
}

void write_decomposition_csv(std::ostream& os, const DecompositionReport& report) {
    os << "t,V,R,LVR,ARB";
    for (const auto& b : report.benchmarks) {
        std::string label = b.label;
        for (char& c : label) c = static_cast<char>(std::tolower(c));
        os << ",LVB_" << label;
    }
    os << '\n';
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        os << g17(report.times[k]) << ',' << g17(report.V[k]) << ','
           << g17(report.R[k]) << ',' << g17(report.LVR[k]) << ','
           << g17(report.ARB[k]);
        for (const auto& b : report.benchmarks) os << ',' << g17(b.LVB[k]);
        os << '\n';
    }
}

void write_decomposition_csv(const std::string& file,
                             const DecompositionReport& report) {
    auto os = open_out(file);
    write_decomposition_csv(os, report);
}

void write_decomposition_md_csv(std::ostream& os, const MultiPricePath& path,
                                const DecompositionReportMd& report) {
    const std::size_t n = path.assets();
    os << 't';
    for (std::size_t i = 1; i <= n; ++i) os << ",price_" << i;
    os << ",V,R,LVR,ARB\n";
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        os << g17(report.times[k]);
        for (std::size_t i = 0; i < n; ++i) os << ',' << g17(path.prices[k][i]);
        os << ',' << g17(report.V[k]) << ',' << g17(report.R[k]) << ','
           << g17(report.LVR[k]) << ',' << g17(report.ARB[k]) << '\n';
    }
}

void write_decomposition_md_csv(const std::string& file, const MultiPricePath& path,
                                const DecompositionReportMd& report) {
    auto os = open_out(file);
    write_decomposition_md_csv(os, path, report);
}

}  // namespace lvr
