#pragma once

#include "asmote/nn/graph.hpp"
#include "asmote/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace asmote {

// Word-vector text format: one token followed by its values per line.
// A leading "count dim" header line (word2vec convention) is skipped.
struct WordVectors {
  int dim = 0;
  std::map<std::string, std::vector<nn::Scalar>> vectors;

  static WordVectors load(const std::string& path);
};

// Token-to-row mapping for the trainable embedding table. Row 0 is the
// shared unknown-word vector; the marker tokens always have dedicated rows.
class Vocabulary {
 public:
  static constexpr int kUnknown = 0;

  Vocabulary() { add("<unk>"); }

  int add(const std::string& token);
  int lookup(const std::string& token) const;  // kUnknown when absent
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Lowercased corpus tokens plus the marker tokens, in first-seen order.
  static Vocabulary from_tokens(
      const std::vector<std::vector<std::string>>& sentences,
      const std::vector<std::string>& extra_tokens);

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int> index_;
};

std::string lowercased(const std::string& s);

// Embedding table initialized from pretrained vectors where available and
// small uniform noise elsewhere (including <unk> and the marker tokens).
nn::Matrix build_embedding_matrix(const Vocabulary& vocab,
                                  const WordVectors& vectors,
                                  std::mt19937_64& rng);

}  // namespace asmote
