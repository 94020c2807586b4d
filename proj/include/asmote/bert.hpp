#pragma once

#include "asmote/nn/graph.hpp"
#include "asmote/wordpiece.hpp"

#include <memory>
#include <string>
#include <vector>

namespace asmote {

// Mirrors the config.json of a BERT-style checkpoint directory.
struct TransformerConfig {
  int hidden_size = 768;
  int num_layers = 12;
  int num_heads = 12;
  int intermediate_size = 3072;
  int vocab_size = 30522;
  int max_positions = 512;
  int type_vocab_size = 2;
  nn::Scalar layer_norm_eps = 1e-12;
  nn::Scalar hidden_dropout = 0.1;
  nn::Scalar attention_dropout = 0.1;

  static TransformerConfig from_file(const std::string& path);
};

// Pretrained bidirectional transformer encoder loaded from a directory
// holding config.json, vocab.txt, and model.safetensors (weights stored
// under the usual bert.* tensor names). Produces one vector per input word
// via first-subword pooling over [CLS] w1... wn [SEP].
class Transformer {
 public:
  struct Layer {
    nn::Parameter query_w, query_b, key_w, key_b, value_w, value_b;
    nn::Parameter attn_out_w, attn_out_b, attn_ln_g, attn_ln_b;
    nn::Parameter ffn_in_w, ffn_in_b, ffn_out_w, ffn_out_b;
    nn::Parameter out_ln_g, out_ln_b;
  };

  static std::shared_ptr<Transformer> load(const std::string& dir);

  // (num_words x hidden). When `trainable` is false the pass contributes no
  // gradients and the weights stay fixed.
  nn::Var encode_words(nn::Graph& g, const std::vector<std::string>& words,
                       bool trainable, const std::string& sentence_id) const;

  const WordPiece& wordpiece() const { return wordpiece_; }
  const TransformerConfig& config() const { return config_; }
  int hidden_size() const { return config_.hidden_size; }

  void collect(std::vector<nn::Parameter*>& out);
  // Concatenated view of all weights, for frozen-parameter checks.
  std::vector<const nn::Matrix*> weight_views() const;

 private:
  Transformer(TransformerConfig cfg, WordPiece wp)
      : config_(cfg), wordpiece_(std::move(wp)) {}

  TransformerConfig config_;
  WordPiece wordpiece_;
  nn::Parameter word_embeddings_, position_embeddings_, type_embeddings_;
  nn::Parameter embedding_ln_g_, embedding_ln_b_;
  std::vector<Layer> layers_;
};

}  // namespace asmote
