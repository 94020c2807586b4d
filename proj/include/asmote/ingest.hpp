#pragma once

#include "asmote/types.hpp"

#include <string>
#include <vector>

namespace asmote {

// Raw SemEval ABSA annotations, before token alignment. Both the 2014
// aspectTerm schema and the 2015/16 Opinion-target schema parse into this.
struct SemevalAspect {
  std::string term;
  std::string polarity;  // positive, neutral, negative, conflict
  int from = 0;          // character offsets into the raw sentence text
  int to = 0;
};

struct SemevalSentence {
  std::string id;
  std::string text;
  std::vector<SemevalAspect> aspects;
};

std::vector<SemevalSentence> parse_semeval_xml(const std::string& path);

// One line of a TOWE release file: a (sentence, aspect) instance with the
// aspect and its opinion words marked by B/I tags.
struct ToweRecord {
  std::string sentence_id;
  std::vector<std::string> tokens;
  Span target;
  std::vector<Span> opinions;
};

std::vector<ToweRecord> parse_towe_file(const std::string& path);

}  // namespace asmote
