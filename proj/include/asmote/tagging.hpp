#pragma once

#include "asmote/types.hpp"

#include <string>
#include <vector>

namespace asmote {

// Per-token labels; the integer values are the classifier label ids.
enum class Tag : int { B = 0, I = 1, O = 2 };

using TagSequence = std::vector<Tag>;

inline char to_char(Tag t) {
  switch (t) {
    case Tag::B: return 'B';
    case Tag::I: return 'I';
    case Tag::O: return 'O';
  }
  throw DataError("invalid tag value");
}

// Spans -> BIO tags. Spans must be in bounds and non-overlapping.
TagSequence encode_bio(const std::vector<Span>& spans, int length);

// BIO tags -> spans. Total on ill-formed input: an I with no preceding B or
// I starts a new span, as if it were B.
std::vector<Span> decode_bio(const TagSequence& tags);

// A sentence with `#` inserted before the aspect and `$` after it.
// aspect_span is in the marked coordinate system and covers the aspect
// words only, never the markers.
struct MarkedSentence {
  std::vector<std::string> tokens;
  Span aspect_span;
  Span original_aspect;

  int size() const { return static_cast<int>(tokens.size()); }
  int open_marker_pos() const { return aspect_span.start - 1; }
  int close_marker_pos() const { return aspect_span.end; }
};

MarkedSentence mark_aspect(const std::vector<std::string>& tokens,
                           const Span& aspect);

// Original -> marked coordinates. Errors if the span would straddle a
// marker position (it would not be representable with contiguous tags).
Span span_to_marked(const MarkedSentence& marked, const Span& original);

// Marked -> original coordinates; marker positions are clipped away.
// Returns false when the span covered only marker tokens.
bool span_to_original(const MarkedSentence& marked, const Span& in_marked,
                      Span* out);

// Gold TOWE tags over the marked sentence. Marker positions are always O.
TagSequence marked_gold_tags(const MarkedSentence& marked,
                             const std::vector<Span>& opinions_in_original);

}  // namespace asmote
