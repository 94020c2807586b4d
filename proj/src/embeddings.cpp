#include "asmote/embeddings.hpp"

#include "asmote/nn/optim.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace asmote {

WordVectors WordVectors::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);
  WordVectors wv;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    std::vector<nn::Scalar> values;
    nn::Scalar v;
    while (fields >> v) values.push_back(v);
    if (first) {
      first = false;
      // word2vec text files start with a "count dim" line
      if (values.size() == 1 &&
          token.find_first_not_of("0123456789") == std::string::npos)
        continue;
    }
    if (values.empty())
      throw DataError("embedding line " + std::to_string(line_no) +
                      " has no values: " + path);
    if (wv.dim == 0) wv.dim = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != wv.dim)
      throw DataError("embedding line " + std::to_string(line_no) +
                      " has dimension " + std::to_string(values.size()) +
                      ", expected " + std::to_string(wv.dim));
    wv.vectors.emplace(std::move(token), std::move(values));
  }
  if (wv.dim == 0) throw DataError("embedding file is empty: " + path);
  return wv;
}

int Vocabulary::add(const std::string& token) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  tokens_.push_back(token);
  index_.emplace(token, id);
  return id;
}

int Vocabulary::lookup(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnknown : it->second;
}

std::string lowercased(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Vocabulary Vocabulary::from_tokens(
    const std::vector<std::vector<std::string>>& sentences,
    const std::vector<std::string>& extra_tokens) {
  Vocabulary vocab;
  for (const std::string& tok : extra_tokens) vocab.add(tok);
  for (const auto& sentence : sentences)
    for (const std::string& tok : sentence) vocab.add(lowercased(tok));
  return vocab;
}

nn::Matrix build_embedding_matrix(const Vocabulary& vocab,
                                  const WordVectors& vectors,
                                  std::mt19937_64& rng) {
  nn::Matrix table =
      nn::uniform_init(vocab.size(), vectors.dim, 0.25, rng);
  const auto& tokens = vocab.tokens();
  for (int i = 0; i < vocab.size(); ++i) {
    auto it = vectors.vectors.find(tokens[static_cast<std::size_t>(i)]);
    if (it == vectors.vectors.end()) continue;
    for (int d = 0; d < vectors.dim; ++d)
      table(i, d) = it->second[static_cast<std::size_t>(d)];
  }
  return table;
}

}  // namespace asmote
