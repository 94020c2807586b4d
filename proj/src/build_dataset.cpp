#include "asmote/corpus.hpp"
#include "asmote/ingest.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace asmote {

namespace {

std::vector<std::string> split_whitespace(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Maps character positions of the raw text onto token indices by walking
// both non-whitespace character streams in lockstep. Token boundaries come
// from the TOWE release for covered sentences, so the streams agree except
// for spacing; if they do not, the caller falls back to term matching.
struct CharAlignment {
  std::vector<int> token_at;  // raw char position -> token index, -1 on space
  bool ok = false;

  static CharAlignment build(const std::string& raw,
                             const std::vector<std::string>& tokens) {
    CharAlignment a;
    a.token_at.assign(raw.size(), -1);
    std::size_t tok = 0, off = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (is_space(raw[i])) continue;
      while (tok < tokens.size() && off >= tokens[tok].size()) {
        ++tok;
        off = 0;
      }
      if (tok >= tokens.size() || tokens[tok][off] != raw[i]) return a;
      a.token_at[i] = static_cast<int>(tok);
      ++off;
    }
    while (tok < tokens.size() && off >= tokens[tok].size()) {
      ++tok;
      off = 0;
    }
    a.ok = tok >= tokens.size();
    return a;
  }

  // Token span covering the character range [from, to); partially covered
  // tokens are included whole.
  bool project(int from, int to, Span* out) const {
    int first = -1, last = -1;
    for (int i = from; i < to && i < static_cast<int>(token_at.size()); ++i) {
      if (token_at[static_cast<std::size_t>(i)] < 0) continue;
      if (first < 0) first = token_at[static_cast<std::size_t>(i)];
      last = token_at[static_cast<std::size_t>(i)];
    }
    if (first < 0) return false;
    *out = Span(first, last + 1);
    return true;
  }
};

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!is_space(c)) out.push_back(c);
  return out;
}

// Locates the n-th occurrence of the term's character stream within the
// token stream and returns the covering token span. Used when character
// offsets cannot be aligned (e.g. the release normalized some characters).
bool find_term_occurrence(const std::vector<std::string>& tokens,
                          const std::string& term, int occurrence,
                          Span* out) {
  std::string stream;
  std::vector<int> owner;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    for (char c : tokens[t]) {
      stream.push_back(c);
      owner.push_back(static_cast<int>(t));
    }
  }
  const std::string needle = strip_spaces(term);
  if (needle.empty()) return false;
  std::size_t pos = 0;
  for (int seen = 0;; ++seen) {
    pos = stream.find(needle, pos);
    if (pos == std::string::npos) return false;
    if (seen == occurrence) {
      *out = Span(owner[pos], owner[pos + needle.size() - 1] + 1);
      return true;
    }
    ++pos;
  }
}

Span locate_aspect(const std::string& sentence_id, const std::string& raw,
                   const std::vector<std::string>& tokens,
                   const CharAlignment& align, const SemevalAspect& aspect,
                   int occurrence_of_term) {
  Span span(0, 1);
  if (align.ok && aspect.to > aspect.from &&
      aspect.to <= static_cast<int>(raw.size()) &&
      align.project(aspect.from, aspect.to, &span)) {
    return span;
  }
  if (find_term_occurrence(tokens, aspect.term, occurrence_of_term, &span))
    return span;
  throw DataError("sentence " + sentence_id + ": cannot locate aspect '" +
                  aspect.term + "' in the tokenized sentence");
}

std::optional<Sentiment> polarity_to_sentiment(const std::string& polarity,
                                               const std::string& id) {
  if (polarity == "conflict") return std::nullopt;
  try {
    return sentiment_from_string(polarity);
  } catch (const DataError&) {
    throw DataError("sentence " + id + ": unknown polarity '" + polarity +
                    "'");
  }
}

}  // namespace

DatasetSplit build_dataset(const std::string& semeval_path,
                           const std::string& towe_path,
                           const std::string& split_name,
                           const std::vector<std::string>& id_filter) {
  const auto semeval = parse_semeval_xml(semeval_path);
  const auto towe = parse_towe_file(towe_path);

  std::set<std::string> keep(id_filter.begin(), id_filter.end());
  std::set<std::string> semeval_ids;
  for (const auto& s : semeval) semeval_ids.insert(s.id);
  for (const auto& rec : towe) {
    if (!semeval_ids.count(rec.sentence_id))
      throw DataError("TOWE record references sentence " + rec.sentence_id +
                      " which is not in the SemEval file");
  }

  std::map<std::string, std::vector<const ToweRecord*>> towe_by_id;
  for (const auto& rec : towe) towe_by_id[rec.sentence_id].push_back(&rec);

  DatasetSplit split;
  split.name = split_name;
  for (const auto& sem : semeval) {
    if (sem.aspects.empty()) continue;
    if (!keep.empty() && !keep.count(sem.id)) continue;

    auto towe_it = towe_by_id.find(sem.id);
    Sentence sentence;
    sentence.id = sem.id;
    if (towe_it != towe_by_id.end())
      sentence.tokens = towe_it->second.front()->tokens;
    else
      sentence.tokens = split_whitespace(sem.text);
    if (sentence.tokens.empty())
      throw DataError("sentence " + sem.id + " has no tokens");

    const CharAlignment align =
        CharAlignment::build(sem.text, sentence.tokens);

    // Repeated annotations of one character span (the 2015/16 files list
    // the same target once per category) collapse into one aspect;
    // disagreeing polarities over one span become the conflict marker.
    std::map<std::pair<int, int>, SemevalAspect> by_offsets;
    for (const SemevalAspect& a : sem.aspects) {
      auto [it, inserted] = by_offsets.try_emplace({a.from, a.to}, a);
      if (!inserted && it->second.polarity != a.polarity)
        it->second.polarity = "conflict";
    }

    std::map<std::string, int> term_occurrences;
    std::map<Span, AspectAnnotation> by_span;
    std::vector<Span> order;
    for (const auto& [offsets, a] : by_offsets) {
      const int occurrence = term_occurrences[strip_spaces(a.term)]++;
      const Span span = locate_aspect(sem.id, sem.text, sentence.tokens,
                                      align, a, occurrence);
      auto [it, inserted] = by_span.try_emplace(span);
      if (inserted) {
        it->second.aspect = span;
        it->second.sentiment = polarity_to_sentiment(a.polarity, sem.id);
        order.push_back(span);
      } else {
        auto s = polarity_to_sentiment(a.polarity, sem.id);
        if (s != it->second.sentiment) it->second.sentiment = std::nullopt;
      }
    }

    if (towe_it != towe_by_id.end()) {
      for (const ToweRecord* rec : towe_it->second) {
        if (rec->tokens != sentence.tokens)
          throw DataError("sentence " + sem.id +
                          ": TOWE records disagree on tokenization");
        auto it = by_span.find(rec->target);
        if (it == by_span.end())
          throw DataError("sentence " + sem.id + ": TOWE target " +
                          to_string(rec->target) +
                          " matches no SemEval aspect");
        auto& opinions = it->second.opinions;
        opinions.insert(opinions.end(), rec->opinions.begin(),
                        rec->opinions.end());
      }
    }

    for (const Span& span : order) {
      AspectAnnotation a = by_span.at(span);
      a.opinions = normalize_span_set(a.opinions);
      sentence.aspects.push_back(std::move(a));
    }
    split.sentences.push_back(std::move(sentence));
  }

  validate_split(split);
  return split;
}

}  // namespace asmote
