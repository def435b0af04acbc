#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <vector>

#include "qctx/cli/report.hpp"

namespace qctx::cli {

namespace {

std::string format_raw(double x) {
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s = buf;
    // Keep it a float token so a re-parse preserves the type.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

enum class Precision { reported, raw };

void write(std::ostringstream& os, const Json& v, int depth, Precision precision) {
    const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
    const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                const bool raw = precision == Precision::raw || it.key() == "raw" || it.key() == "spec";
                os << pad << Json(it.key()).dump() << ": ";
                write(os, it.value(), depth + 1, raw ? Precision::raw : Precision::reported);
            }
            os << "\n" << close_pad << "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            // Complex pairs and rows of them stay on one line.
            bool scalars = true;
            for (const auto& e : v) {
                const bool pair = e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number();
                scalars = scalars && (e.is_primitive() || pair);
            }
            if (scalars) {
                os << "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) os << ", ";
                    write(os, v[i], depth + 1, precision);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write(os, v[i], depth + 1, precision);
            }
            os << "\n" << close_pad << "]";
            return;
        }
        case Json::value_t::number_float: {
            const double x = v.get<double>();
            os << (precision == Precision::raw ? format_raw(x) : format_number(x));
            return;
        }
        default:
            os << v.dump();
            return;
    }
}

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (v.is_array() && !(v.size() == 2 && v[0].is_number() && v[1].is_number())) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", rows);
    } else if (v.is_array()) {
        rows.emplace_back(prefix, format_number(v[0].get<double>()) + (v[1].get<double>() < 0 ? " - " : " + ") +
                                      format_number(std::abs(v[1].get<double>())) + "i");
    } else if (v.is_number_float()) {
        rows.emplace_back(prefix, format_number(v.get<double>()));
    } else if (v.is_string()) {
        rows.emplace_back(prefix, v.get<std::string>());
    } else {
        rows.emplace_back(prefix, v.dump());
    }
}

}  // namespace

std::string format_number(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? "0" : "null";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    const char* e = std::strchr(buf, 'e');
    const int exponent = e ? std::atoi(e + 1) : 0;
    if (exponent >= -5 && exponent < 12) {
        std::snprintf(buf, sizeof buf, "%.*f", 11 - exponent, x);
    }
    return buf;
}

std::string emit_structured(const Json& doc) {
    std::ostringstream os;
    write(os, doc, 0, Precision::reported);
    os << "\n";
    return os.str();
}

std::string emit(const Report& report, Format format) {
    const Json doc = report.to_json();
    if (format == Format::structured) return emit_structured(doc);

    std::ostringstream os;
    os << "experiment: " << report.kind << "\n\n";
    auto section = [&](const char* title, const Json& v) {
        std::vector<std::pair<std::string, std::string>> rows;
        flatten(v, "", rows);
        if (rows.empty()) return;
        std::size_t width = 0;
        for (const auto& r : rows) width = std::max(width, r.first.size());
        os << title << "\n";
        for (const auto& [k, val] : rows) os << "  " << k << std::string(width - k.size() + 2, ' ') << val << "\n";
        os << "\n";
    };
    section("inputs", report.inputs);
    section("results", report.results);

    os << "checks\n";
    for (const auto& c : report.checks) {
        os << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name << "  residual " << format_number(c.residual)
           << "  threshold " << format_number(c.threshold) << "\n";
    }
    if (!report.formula_source.empty()) {
        os << "\nformula_source\n";
        for (auto it = report.formula_source.begin(); it != report.formula_source.end(); ++it)
            os << "  " << it.key() << ": " << it.value().get<std::string>() << "\n";
    }
    if (!report.warnings.empty()) {
        os << "\nwarnings\n";
        for (const auto& w : report.warnings) os << "  " << w << "\n";
    }
    return os.str();
}

}  // namespace qctx::cli
