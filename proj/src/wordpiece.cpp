#include "asmote/wordpiece.hpp"

#include "asmote/embeddings.hpp"

#include <fstream>

namespace asmote {

WordPiece WordPiece::load(const std::string& vocab_path) {
  std::ifstream in(vocab_path);
  if (!in) throw DataError("cannot open wordpiece vocab: " + vocab_path);
  WordPiece wp;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    wp.index_.emplace(line, static_cast<int>(wp.pieces_.size()));
    wp.pieces_.push_back(line);
  }
  wp.cls_id_ = wp.id_of("[CLS]");
  wp.sep_id_ = wp.id_of("[SEP]");
  wp.unk_id_ = wp.id_of("[UNK]");
  if (wp.cls_id_ < 0 || wp.sep_id_ < 0 || wp.unk_id_ < 0)
    throw DataError("wordpiece vocab lacks [CLS]/[SEP]/[UNK]: " + vocab_path);
  return wp;
}

int WordPiece::id_of(const std::string& piece) const {
  auto it = index_.find(piece);
  return it == index_.end() ? -1 : it->second;
}

int WordPiece::required_id(const std::string& piece) const {
  const int id = id_of(piece);
  if (id < 0) throw DataError("wordpiece vocab has no entry for: " + piece);
  return id;
}

std::vector<int> WordPiece::encode_word(const std::string& word) const {
  const std::string lower = lowercased(word);
  if (lower.empty() || lower.size() > max_word_chars_) return {unk_id_};
  std::vector<int> ids;
  std::size_t start = 0;
  while (start < lower.size()) {
    std::size_t end = lower.size();
    int match = -1;
    while (end > start) {
      std::string piece = lower.substr(start, end - start);
      if (start > 0) piece = "##" + piece;
      match = id_of(piece);
      if (match >= 0) break;
      --end;
    }
    if (match < 0) return {unk_id_};
    ids.push_back(match);
    start = end;
  }
  return ids;
}

}  // namespace asmote
