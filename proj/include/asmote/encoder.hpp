#pragma once

#include "asmote/bert.hpp"
#include "asmote/embeddings.hpp"
#include "asmote/nn/graph.hpp"
#include "asmote/nn/lstm.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace asmote {

enum class EncoderKind { bilstm_emb, bert, bilstm_bert };

const char* to_string(EncoderKind k);
EncoderKind encoder_kind_from_string(const std::string& s);

struct EncoderConfig {
  EncoderKind kind = EncoderKind::bilstm_emb;
  int hidden_size = 256;  // per direction for the BiLSTM kinds
  bool finetune_pretrained = false;
  std::string embedding_source;  // word-vector file (bilstm_emb)
  std::string pretrained_dir;    // transformer directory (bert kinds)
  int max_tokens = 128;
  // The marker tokens inserted around aspects; for transformer kinds they
  // resolve through the wordpiece vocabulary.
  std::string marker_open = "#";
  std::string marker_close = "$";

  void validate() const;
};

// Per-token sentence representation: one row per input token.
struct HiddenStates {
  nn::Matrix values;

  int length() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
};

class Encoder {
 public:
  virtual ~Encoder() = default;

  // Builds the forward pass into g; (n x output_dim()).
  virtual nn::Var encode(nn::Graph& g, const std::vector<std::string>& tokens,
                         const std::string& sentence_id = "") = 0;
  virtual int output_dim() const = 0;
  // Parameters updated by the optimizer (excludes frozen pretrained ones).
  virtual void collect_trainable(std::vector<nn::Parameter*>& out) = 0;
  // Parameters persisted in checkpoints.
  virtual void collect_state(std::vector<nn::Parameter*>& out) {
    collect_trainable(out);
  }

  const EncoderConfig& config() const { return config_; }

 protected:
  explicit Encoder(EncoderConfig cfg) : config_(std::move(cfg)) {}
  void check_length(std::size_t n, const std::string& sentence_id) const;

  EncoderConfig config_;
};

// Eval-mode convenience used by the prediction paths and tests.
HiddenStates run_encoder(Encoder& encoder,
                         const std::vector<std::string>& tokens,
                         const std::string& sentence_id = "");

class BiLstmEmbEncoder : public Encoder {
 public:
  BiLstmEmbEncoder(EncoderConfig cfg, Vocabulary vocab,
                   const WordVectors& vectors, std::mt19937_64& rng);

  nn::Var encode(nn::Graph& g, const std::vector<std::string>& tokens,
                 const std::string& sentence_id) override;
  int output_dim() const override { return lstm_.output_dim(); }
  void collect_trainable(std::vector<nn::Parameter*>& out) override;

  const Vocabulary& vocab() const { return vocab_; }

 private:
  Vocabulary vocab_;
  nn::Parameter embeddings_;
  nn::BiLstm lstm_;
};

class BertEncoder : public Encoder {
 public:
  BertEncoder(EncoderConfig cfg, std::shared_ptr<Transformer> model);

  nn::Var encode(nn::Graph& g, const std::vector<std::string>& tokens,
                 const std::string& sentence_id) override;
  int output_dim() const override { return model_->hidden_size(); }
  void collect_trainable(std::vector<nn::Parameter*>& out) override;
  void collect_state(std::vector<nn::Parameter*>& out) override;

  const Transformer& transformer() const { return *model_; }

 protected:
  // Frozen weights make features deterministic per token sequence.
  nn::Var features(nn::Graph& g, const std::vector<std::string>& tokens,
                   const std::string& sentence_id);

  std::shared_ptr<Transformer> model_;
  std::map<std::string, nn::Matrix> feature_cache_;
};

class BiLstmBertEncoder : public BertEncoder {
 public:
  BiLstmBertEncoder(EncoderConfig cfg, std::shared_ptr<Transformer> model,
                    std::mt19937_64& rng);

  nn::Var encode(nn::Graph& g, const std::vector<std::string>& tokens,
                 const std::string& sentence_id) override;
  int output_dim() const override { return lstm_.output_dim(); }
  void collect_trainable(std::vector<nn::Parameter*>& out) override;
  void collect_state(std::vector<nn::Parameter*>& out) override;

 private:
  nn::BiLstm lstm_;
};

}  // namespace asmote
