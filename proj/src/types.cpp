#include "asmote/types.hpp"

#include <algorithm>

namespace asmote {

std::vector<Span> normalize_span_set(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end());
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
  return spans;
}

void check_non_overlapping(const std::vector<Span>& spans,
                           const std::string& what) {
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i - 1].overlaps(spans[i])) {
      throw DataError(what + " spans overlap: " + to_string(spans[i - 1]) +
                      " and " + to_string(spans[i]));
    }
  }
}

}  // namespace asmote
