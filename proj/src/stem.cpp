#include "kgfuse/stem.hpp"

#include <array>

#include "kgfuse/util.hpp"

namespace kgfuse {

std::string stem(std::string_view word) {
  static constexpr std::array<std::string_view, 12> kSuffixes = {"ences", "ence", "ents", "ent", "ers", "er",
                                                                "est",   "ing",  "ed",   "es",  "s",   "ly"};
  std::string w = to_lower(word);
  for (auto suf : kSuffixes) {
    if (w.size() >= suf.size() + 3 && w.compare(w.size() - suf.size(), suf.size(), suf) == 0) {
      w.resize(w.size() - suf.size());
      break;
    }
  }
  return w;
}

bool keyword_matches(std::string_view keyword, std::string_view word) {
  std::string k = to_lower(keyword);
  std::string w = to_lower(word);
  if (!k.empty() && k.back() == '*') {
    k.pop_back();
    return w.size() >= k.size() && w.compare(0, k.size(), k) == 0;
  }
  if (k == w) return true;
  if (k.size() < 4) return false;
  return stem(k) == stem(w);
}

}  // namespace kgfuse
