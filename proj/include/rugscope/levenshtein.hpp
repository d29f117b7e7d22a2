#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace rugscope {

/// Decodes UTF-8 into Unicode scalar values. Invalid sequences decode to U+FFFD per byte.
std::u32string decode_utf8(std::string_view text);

/// Unit-cost insert/delete/substitute distance, two-row dynamic programming.
std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b);

/// ((|a| + |b|) - lev(a, b)) / (|a| + |b|) over scalar values; 1.0 when both are empty.
double levenshtein_ratio(std::string_view a, std::string_view b);

}  // namespace rugscope
