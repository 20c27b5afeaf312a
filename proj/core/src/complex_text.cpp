#include "mandeldecor/complex_text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mandeldecor {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

[[noreturn]] void bad(std::string_view text) {
    throw std::invalid_argument("cannot parse complex number '" + std::string(text) + "'");
}

// strtod wrapper that requires the whole string to be consumed.
bool full_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

double parse_double(std::string_view text) {
    const std::string s = trim(text);
    double v = 0.0;
    if (!full_double(s, v) || !std::isfinite(v))
        throw std::invalid_argument("cannot parse number '" + std::string(text) + "'");
    return v;
}

Complex parse_complex(std::string_view text) {
    std::string s = trim(text);
    if (s.empty()) bad(text);
    if (s.front() == '(' && s.back() == ')') {
        const auto comma = s.find(',');
        if (comma == std::string::npos) bad(text);
        double re = 0, im = 0;
        if (!full_double(trim(s.substr(1, comma - 1)), re) ||
            !full_double(trim(s.substr(comma + 1, s.size() - comma - 2)), im))
            bad(text);
        return {re, im};
    }
    std::string compact;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
    s = compact;
    if (s.back() != 'i' && s.back() != 'j') {
        double re = 0;
        if (!full_double(s, re)) bad(text);
        return {re, 0.0};
    }
    s.pop_back();
    // split at the last sign that is not part of an exponent
    std::size_t split_at = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split_at = k;
            break;
        }
    }
    auto imag_part = [&](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        double v = 0;
        if (!full_double(t, v)) bad(text);
        return v;
    };
    if (split_at == std::string::npos) return {0.0, imag_part(s)};
    double re = 0;
    if (!full_double(s.substr(0, split_at), re)) bad(text);
    return {re, imag_part(s.substr(split_at))};
}

std::string format_double(double x) {
    // shortest text that parses back to the same double
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string format_complex(Complex z) {
    std::string out = format_double(z.real());
    const double im = z.imag();
    if (std::signbit(im)) {
        out += '-';
        out += format_double(-im);
    } else {
        out += '+';
        out += format_double(im);
    }
    out += 'i';
    return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace mandeldecor
