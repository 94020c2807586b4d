#include "asmote/corpus.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace asmote {

using nlohmann::json;

void validate_split(const DatasetSplit& split) {
  std::set<std::string> ids;
  for (const Sentence& s : split.sentences) {
    if (s.tokens.empty())
      throw DataError("sentence " + s.id + " has no tokens");
    if (!ids.insert(s.id).second)
      throw DataError("duplicate sentence id in split: " + s.id);
    const int n = s.size();
    std::vector<Span> aspect_spans;
    for (const AspectAnnotation& a : s.aspects) {
      if (a.aspect.end > n)
        throw DataError("sentence " + s.id + ": aspect " +
                        to_string(a.aspect) + " out of bounds (" +
                        std::to_string(n) + " tokens)");
      aspect_spans.push_back(a.aspect);
      for (const Span& o : a.opinions) {
        if (o.end > n)
          throw DataError("sentence " + s.id + ": opinion " + to_string(o) +
                          " out of bounds (" + std::to_string(n) +
                          " tokens)");
      }
      check_non_overlapping(normalize_span_set(a.opinions),
                            "sentence " + s.id + " opinion");
    }
    check_non_overlapping(normalize_span_set(aspect_spans),
                          "sentence " + s.id + " aspect");
  }
}

DatasetSplit remove_conflict(const DatasetSplit& split) {
  DatasetSplit out;
  out.name = split.name;
  out.sentences.reserve(split.sentences.size());
  for (const Sentence& s : split.sentences) {
    Sentence copy = s;
    std::erase_if(copy.aspects,
                  [](const AspectAnnotation& a) { return a.is_conflict(); });
    out.sentences.push_back(std::move(copy));
  }
  return out;
}

std::vector<std::pair<std::string, AsmoteTriplet>> gold_triplets(
    const DatasetSplit& split) {
  std::vector<std::pair<std::string, AsmoteTriplet>> out;
  for (const Sentence& s : split.sentences) {
    for (const AspectAnnotation& a : s.aspects) {
      if (a.is_conflict())
        throw DataError("gold_triplets called before conflict removal "
                        "(sentence " + s.id + ")");
      if (!a.has_opinions()) continue;
      AsmoteTriplet t;
      t.aspect = a.aspect;
      t.sentiment = *a.sentiment;
      t.opinions = normalize_span_set(a.opinions);
      out.emplace_back(s.id, std::move(t));
    }
  }
  return out;
}

SplitStats split_stats(const DatasetSplit& split) {
  SplitStats st;
  st.sentences = static_cast<long>(split.sentences.size());
  for (const Sentence& s : split.sentences) {
    st.aspects += static_cast<long>(s.aspects.size());
    for (const AspectAnnotation& a : s.aspects) {
      if (!a.has_opinions()) continue;
      if (a.is_conflict())
        ++st.conflicts;
      else
        ++st.triplets;
    }
  }
  return st;
}

namespace {

// Majority sentiment; ties go to the more negative label.
Sentiment resolve_sentiment(const std::vector<Sentiment>& votes) {
  int counts[3] = {0, 0, 0};
  for (Sentiment s : votes) ++counts[static_cast<int>(s)];
  Sentiment best = Sentiment::negative;
  int best_count = counts[static_cast<int>(Sentiment::negative)];
  for (Sentiment s : {Sentiment::neutral, Sentiment::positive}) {
    if (counts[static_cast<int>(s)] > best_count) {
      best = s;
      best_count = counts[static_cast<int>(s)];
    }
  }
  return best;
}

}  // namespace

std::vector<AsmoteTriplet> merge_aste(
    const std::vector<AsteTriplet>& triplets) {
  std::map<Span, std::pair<std::vector<Sentiment>, std::vector<Span>>> groups;
  std::vector<Span> order;
  for (const AsteTriplet& t : triplets) {
    auto [it, inserted] = groups.try_emplace(t.aspect);
    if (inserted) order.push_back(t.aspect);
    it->second.first.push_back(t.sentiment);
    it->second.second.push_back(t.opinion);
  }
  std::vector<AsmoteTriplet> out;
  out.reserve(order.size());
  for (const Span& aspect : order) {
    auto& [votes, opinions] = groups.at(aspect);
    AsmoteTriplet merged;
    merged.aspect = aspect;
    merged.sentiment = resolve_sentiment(votes);
    merged.opinions = normalize_span_set(opinions);
    out.push_back(std::move(merged));
  }
  return out;
}

namespace {

json span_to_json(const Span& s) { return json::array({s.start, s.end}); }

Span span_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw DataError(where + ": span must be a [start, end] pair");
  return Span(j[0].get<int>(), j[1].get<int>());
}

json sentence_to_json(const Sentence& s) {
  json aspects = json::array();
  for (const AspectAnnotation& a : s.aspects) {
    json opinions = json::array();
    for (const Span& o : a.opinions) opinions.push_back(span_to_json(o));
    aspects.push_back(
        {{"span", span_to_json(a.aspect)},
         {"polarity",
          a.is_conflict() ? "conflict" : to_string(*a.sentiment)},
         {"opinions", opinions}});
  }
  return {{"id", s.id}, {"tokens", s.tokens}, {"aspects", aspects}};
}

Sentence sentence_from_json(const json& j) {
  Sentence s;
  s.id = j.at("id").get<std::string>();
  s.tokens = j.at("tokens").get<std::vector<std::string>>();
  for (const json& ja : j.at("aspects")) {
    AspectAnnotation a;
    a.aspect = span_from_json(ja.at("span"), "sentence " + s.id);
    const std::string polarity = ja.at("polarity").get<std::string>();
    if (polarity != "conflict") a.sentiment = sentiment_from_string(polarity);
    for (const json& jo : ja.at("opinions"))
      a.opinions.push_back(span_from_json(jo, "sentence " + s.id));
    a.opinions = normalize_span_set(a.opinions);
    s.aspects.push_back(std::move(a));
  }
  return s;
}

}  // namespace

void write_split(const DatasetSplit& split, std::ostream& out) {
  for (const Sentence& s : split.sentences)
    out << sentence_to_json(s).dump() << '\n';
}

void write_split_file(const DatasetSplit& split, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file: " + path);
  write_split(split, out);
  if (!out) throw DataError("failed writing dataset file: " + path);
}

DatasetSplit read_split(std::istream& in, const std::string& name) {
  DatasetSplit split;
  split.name = name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError("dataset line " + std::to_string(line_no) +
                      " is not valid json: " + e.what());
    }
    try {
      split.sentences.push_back(sentence_from_json(j));
    } catch (const json::exception& e) {
      throw DataError("dataset line " + std::to_string(line_no) +
                      " violates the schema: " + e.what());
    }
  }
  validate_split(split);
  return split;
}

DatasetSplit read_split_file(const std::string& path,
                             const std::string& name) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);
  return read_split(in, name);
}

std::string render_stats_table(
    const std::vector<std::pair<std::string, SplitStats>>& rows) {
  std::ostringstream out;
  out << "split        #sentence  #aspect  #triplet  #tc\n";
  for (const auto& [name, st] : rows) {
    out << name;
    for (std::size_t i = name.size(); i < 13; ++i) out << ' ';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%9ld %8ld %9ld %4ld", st.sentences,
                  st.aspects, st.triplets, st.conflicts);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace asmote
