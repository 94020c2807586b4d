#include "asmote/tagging.hpp"

#include <algorithm>

namespace asmote {

TagSequence encode_bio(const std::vector<Span>& spans, int length) {
  TagSequence tags(static_cast<std::size_t>(length), Tag::O);
  auto sorted = normalize_span_set(spans);
  check_non_overlapping(sorted, "BIO");
  for (const Span& s : sorted) {
    if (s.end > length)
      throw DataError("BIO span " + to_string(s) + " exceeds length " +
                      std::to_string(length));
    tags[static_cast<std::size_t>(s.start)] = Tag::B;
    for (int i = s.start + 1; i < s.end; ++i)
      tags[static_cast<std::size_t>(i)] = Tag::I;
  }
  return tags;
}

std::vector<Span> decode_bio(const TagSequence& tags) {
  std::vector<Span> spans;
  int start = -1;
  for (int i = 0; i < static_cast<int>(tags.size()); ++i) {
    const Tag t = tags[static_cast<std::size_t>(i)];
    if (t == Tag::B) {
      if (start >= 0) spans.emplace_back(start, i);
      start = i;
    } else if (t == Tag::I) {
      if (start < 0) start = i;  // leading I repaired as B
    } else {
      if (start >= 0) spans.emplace_back(start, i);
      start = -1;
    }
  }
  if (start >= 0) spans.emplace_back(start, static_cast<int>(tags.size()));
  return spans;
}

MarkedSentence mark_aspect(const std::vector<std::string>& tokens,
                           const Span& aspect) {
  const int n = static_cast<int>(tokens.size());
  if (aspect.end > n)
    throw DataError("aspect " + to_string(aspect) + " out of bounds for " +
                    std::to_string(n) + " tokens");
  MarkedSentence out;
  out.tokens.reserve(tokens.size() + 2);
  for (int i = 0; i < aspect.start; ++i)
    out.tokens.push_back(tokens[static_cast<std::size_t>(i)]);
  out.tokens.push_back("#");
  for (int i = aspect.start; i < aspect.end; ++i)
    out.tokens.push_back(tokens[static_cast<std::size_t>(i)]);
  out.tokens.push_back("$");
  for (int i = aspect.end; i < n; ++i)
    out.tokens.push_back(tokens[static_cast<std::size_t>(i)]);
  out.aspect_span = Span(aspect.start + 1, aspect.end + 1);
  out.original_aspect = aspect;
  return out;
}

Span span_to_marked(const MarkedSentence& marked, const Span& original) {
  const Span& a = marked.original_aspect;
  auto shift = [&](int pos) {
    if (pos < a.start) return pos;
    if (pos < a.end) return pos + 1;
    return pos + 2;
  };
  const int first = shift(original.start);
  const int last = shift(original.end - 1);
  if (last - first != original.end - 1 - original.start) {
    throw DataError("span " + to_string(original) +
                    " straddles a marker boundary of aspect " + to_string(a));
  }
  return Span(first, last + 1);
}

bool span_to_original(const MarkedSentence& marked, const Span& in_marked,
                      Span* out) {
  const int open = marked.open_marker_pos();
  const int close = marked.close_marker_pos();
  int first = -1, last = -1;
  for (int p = in_marked.start; p < in_marked.end; ++p) {
    if (p == open || p == close) continue;
    int orig = p;
    if (p > open) --orig;
    if (p > close) --orig;
    if (first < 0) first = orig;
    last = orig;
  }
  if (first < 0) return false;
  *out = Span(first, last + 1);
  return true;
}

TagSequence marked_gold_tags(const MarkedSentence& marked,
                             const std::vector<Span>& opinions_in_original) {
  std::vector<Span> shifted;
  shifted.reserve(opinions_in_original.size());
  for (const Span& o : opinions_in_original)
    shifted.push_back(span_to_marked(marked, o));
  return encode_bio(shifted, marked.size());
}

}  // namespace asmote
