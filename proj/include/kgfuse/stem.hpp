#pragma once

#include <string>
#include <string_view>

namespace kgfuse {

// Light suffix stripper shared by directive keywords and pattern literals.
std::string stem(std::string_view word);

// Keyword test used wherever the keyword files allow stems: "differ*" is a
// prefix match, literals of four or more letters compare by stem, shorter
// ones must match exactly. Case-insensitive.
bool keyword_matches(std::string_view keyword, std::string_view word);

}  // namespace kgfuse
