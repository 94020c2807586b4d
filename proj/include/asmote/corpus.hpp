#pragma once

#include "asmote/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace asmote {

// One aspect of a sentence. A missing sentiment is the `conflict` marker
// from the source annotation; conflict aspects are dropped before training.
struct AspectAnnotation {
  Span aspect;
  std::optional<Sentiment> sentiment;
  std::vector<Span> opinions;  // normalized set; may be empty

  bool is_conflict() const { return !sentiment.has_value(); }
  bool has_opinions() const { return !opinions.empty(); }

  bool operator==(const AspectAnnotation&) const = default;
};

struct Sentence {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<AspectAnnotation> aspects;

  int size() const { return static_cast<int>(tokens.size()); }
  bool operator==(const Sentence&) const = default;
};

// Aspect + sentiment + the full set of its opinions in the sentence.
struct AsmoteTriplet {
  Span aspect;
  Sentiment sentiment = Sentiment::positive;
  std::vector<Span> opinions;  // normalized set

  bool operator==(const AsmoteTriplet&) const = default;
};

struct DatasetSplit {
  std::string name;  // train, dev, or test
  std::vector<Sentence> sentences;

  bool operator==(const DatasetSplit&) const = default;
};

struct SplitStats {
  long sentences = 0;
  long aspects = 0;
  long triplets = 0;   // aspects with opinions and a non-conflict sentiment
  long conflicts = 0;  // aspects with opinions and conflict sentiment (#tc)

  bool operator==(const SplitStats&) const = default;
};

// Checks token bounds, aspect overlap, opinion overlap, unique ids.
// Throws DataError naming the offending sentence.
void validate_split(const DatasetSplit& split);

// Drops every conflict-sentiment aspect; sentences are retained.
DatasetSplit remove_conflict(const DatasetSplit& split);

// One triplet per aspect with a non-empty opinion set. Requires conflict
// removal to have been applied.
std::vector<std::pair<std::string, AsmoteTriplet>> gold_triplets(
    const DatasetSplit& split);

SplitStats split_stats(const DatasetSplit& split);

// Single-opinion triplets as emitted by ASTE-style models, scoped to one
// sentence.
struct AsteTriplet {
  Span aspect;
  Sentiment sentiment = Sentiment::positive;
  Span opinion;
};

// Groups by aspect span, unions opinions, resolves sentiment by majority
// vote with ties broken toward the more negative label.
std::vector<AsmoteTriplet> merge_aste(const std::vector<AsteTriplet>& triplets);

// Canonical line-delimited dataset format. One JSON object per line:
//   {"id": "...", "tokens": [...],
//    "aspects": [{"span": [s, e], "polarity": "positive|neutral|negative|conflict",
//                 "opinions": [[s, e], ...]}, ...]}
void write_split(const DatasetSplit& split, std::ostream& out);
void write_split_file(const DatasetSplit& split, const std::string& path);
DatasetSplit read_split(std::istream& in, const std::string& name);
DatasetSplit read_split_file(const std::string& path, const std::string& name);

// Builds a split by aligning a SemEval ABSA XML file with a TOWE release
// file. When `id_filter` is non-empty, only sentences whose ids are listed
// are kept (used to carve train/dev out of one source file).
DatasetSplit build_dataset(const std::string& semeval_path,
                           const std::string& towe_path,
                           const std::string& split_name = "train",
                           const std::vector<std::string>& id_filter = {});

std::string render_stats_table(
    const std::vector<std::pair<std::string, SplitStats>>& rows);

}  // namespace asmote
