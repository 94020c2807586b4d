#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asmote {

// Thrown for malformed or inconsistent input data (files, schemas, spans).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a training run cannot continue (e.g. the loss diverged).
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Half-open token interval [start, end) into a sentence.
struct Span {
  int start = 0;
  int end = 0;

  Span() = default;
  Span(int s, int e) : start(s), end(e) {
    if (s < 0 || e <= s) {
      throw DataError("invalid span [" + std::to_string(s) + ", " +
                      std::to_string(e) + ")");
    }
  }

  int length() const { return end - start; }
  bool contains(int pos) const { return pos >= start && pos < end; }
  bool overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }

  auto operator<=>(const Span&) const = default;
};

inline std::string to_string(const Span& s) {
  return "[" + std::to_string(s.start) + ", " + std::to_string(s.end) + ")";
}

// Three-way sentiment; the integer values are the classifier label ids.
enum class Sentiment : int { positive = 0, neutral = 1, negative = 2 };

inline const char* to_string(Sentiment s) {
  switch (s) {
    case Sentiment::positive: return "positive";
    case Sentiment::neutral: return "neutral";
    case Sentiment::negative: return "negative";
  }
  throw DataError("invalid sentiment value");
}

inline Sentiment sentiment_from_string(const std::string& s) {
  if (s == "positive") return Sentiment::positive;
  if (s == "neutral") return Sentiment::neutral;
  if (s == "negative") return Sentiment::negative;
  throw DataError("unknown sentiment label: " + s);
}

// Sorted, duplicate-free representation of a span set. Equality of two
// normalized vectors is set equality.
std::vector<Span> normalize_span_set(std::vector<Span> spans);

// Gold annotation sets must also be pairwise non-overlapping.
void check_non_overlapping(const std::vector<Span>& spans,
                           const std::string& what);

}  // namespace asmote
