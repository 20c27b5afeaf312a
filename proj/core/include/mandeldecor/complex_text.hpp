#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mandeldecor/dynamics.hpp"

namespace mandeldecor {

// Accepts "a", "bi", "a+bi", "a-bi", "-i", "(a,b)". Throws std::invalid_argument.
Complex parse_complex(std::string_view text);

// Round-trippable form such as "-0.77+0.18i".
std::string format_complex(Complex z);

std::string format_double(double x);

double parse_double(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace mandeldecor
