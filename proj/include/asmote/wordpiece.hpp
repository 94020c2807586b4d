#pragma once

#include "asmote/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace asmote {

// Greedy longest-match-first subword tokenizer over a vocab.txt file
// (one token per line, id = line number). Continuation pieces carry the
// "##" prefix. Words are lowercased before matching (uncased models).
class WordPiece {
 public:
  static WordPiece load(const std::string& vocab_path);

  // Subword ids for one whitespace token; falls back to [UNK] when no
  // segmentation exists.
  std::vector<int> encode_word(const std::string& word) const;

  int id_of(const std::string& piece) const;  // -1 when absent
  int required_id(const std::string& piece) const;

  int cls_id() const { return cls_id_; }
  int sep_id() const { return sep_id_; }
  int unk_id() const { return unk_id_; }
  int size() const { return static_cast<int>(pieces_.size()); }

 private:
  std::vector<std::string> pieces_;
  std::map<std::string, int> index_;
  int cls_id_ = -1, sep_id_ = -1, unk_id_ = -1;
  std::size_t max_word_chars_ = 100;
};

}  // namespace asmote
