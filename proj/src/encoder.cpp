#include "asmote/encoder.hpp"

#include "asmote/nn/optim.hpp"

namespace asmote {

using namespace nn;

const char* to_string(EncoderKind k) {
  switch (k) {
    case EncoderKind::bilstm_emb: return "bilstm_emb";
    case EncoderKind::bert: return "bert";
    case EncoderKind::bilstm_bert: return "bilstm_bert";
  }
  throw DataError("invalid encoder kind");
}

EncoderKind encoder_kind_from_string(const std::string& s) {
  if (s == "bilstm_emb") return EncoderKind::bilstm_emb;
  if (s == "bert") return EncoderKind::bert;
  if (s == "bilstm_bert") return EncoderKind::bilstm_bert;
  throw DataError("unknown encoder kind: " + s);
}

void EncoderConfig::validate() const {
  if (kind == EncoderKind::bilstm_emb && embedding_source.empty())
    throw DataError("encoder kind bilstm_emb requires an embedding source");
  if (kind != EncoderKind::bilstm_emb && pretrained_dir.empty())
    throw DataError(std::string("encoder kind ") + to_string(kind) +
                    " requires a pretrained transformer directory");
  if (hidden_size <= 0) throw DataError("encoder hidden size must be positive");
  if (max_tokens <= 0) throw DataError("encoder max length must be positive");
}

void Encoder::check_length(std::size_t n, const std::string& sentence_id) const {
  if (n == 0)
    throw DataError("cannot encode an empty sentence" +
                    (sentence_id.empty() ? "" : " (id " + sentence_id + ")"));
  if (n > static_cast<std::size_t>(config_.max_tokens))
    throw DataError("sentence " + (sentence_id.empty() ? "?" : sentence_id) +
                    " has " + std::to_string(n) +
                    " tokens, above the configured maximum " +
                    std::to_string(config_.max_tokens));
}

HiddenStates run_encoder(Encoder& encoder,
                         const std::vector<std::string>& tokens,
                         const std::string& sentence_id) {
  Graph g;
  Var h = encoder.encode(g, tokens, sentence_id);
  return HiddenStates{h->value};
}

BiLstmEmbEncoder::BiLstmEmbEncoder(EncoderConfig cfg, Vocabulary vocab,
                                   const WordVectors& vectors,
                                   std::mt19937_64& rng)
    : Encoder(std::move(cfg)),
      vocab_(std::move(vocab)),
      embeddings_("embeddings.table",
                  build_embedding_matrix(vocab_, vectors, rng)),
      lstm_("encoder.lstm", vectors.dim, config_.hidden_size, rng) {
  config_.validate();
  // The marker tokens must resolve to their own rows, never to <unk>.
  for (const std::string& marker :
       {config_.marker_open, config_.marker_close}) {
    if (vocab_.lookup(marker) == Vocabulary::kUnknown)
      throw DataError("vocabulary lacks a dedicated row for marker token " +
                      marker);
  }
}

Var BiLstmEmbEncoder::encode(Graph& g, const std::vector<std::string>& tokens,
                             const std::string& sentence_id) {
  check_length(tokens.size(), sentence_id);
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string& tok : tokens)
    ids.push_back(vocab_.lookup(lowercased(tok)));
  Var x = embedding_rows(g, embeddings_, ids);
  return lstm_.run(g, x);
}

void BiLstmEmbEncoder::collect_trainable(std::vector<Parameter*>& out) {
  out.push_back(&embeddings_);
  lstm_.collect(out);
}

BertEncoder::BertEncoder(EncoderConfig cfg, std::shared_ptr<Transformer> model)
    : Encoder(std::move(cfg)), model_(std::move(model)) {
  config_.validate();
}

Var BertEncoder::features(Graph& g, const std::vector<std::string>& tokens,
                          const std::string& sentence_id) {
  check_length(tokens.size(), sentence_id);
  if (config_.finetune_pretrained)
    return model_->encode_words(g, tokens, /*trainable=*/true, sentence_id);
  std::string key;
  for (const std::string& t : tokens) {
    key += t;
    key += '\x1f';
  }
  auto it = feature_cache_.find(key);
  if (it == feature_cache_.end()) {
    Graph scratch;
    Var h = model_->encode_words(scratch, tokens, /*trainable=*/false,
                                 sentence_id);
    it = feature_cache_.emplace(std::move(key), h->value).first;
  }
  return constant(g, it->second);
}

Var BertEncoder::encode(Graph& g, const std::vector<std::string>& tokens,
                        const std::string& sentence_id) {
  return features(g, tokens, sentence_id);
}

void BertEncoder::collect_trainable(std::vector<Parameter*>& out) {
  if (config_.finetune_pretrained) model_->collect(out);
}

void BertEncoder::collect_state(std::vector<Parameter*>& out) {
  // Frozen transformer weights reload from the pretrained directory; only
  // finetuned ones belong in a checkpoint.
  if (config_.finetune_pretrained) model_->collect(out);
}

BiLstmBertEncoder::BiLstmBertEncoder(EncoderConfig cfg,
                                     std::shared_ptr<Transformer> model,
                                     std::mt19937_64& rng)
    : BertEncoder(std::move(cfg), std::move(model)),
      lstm_("encoder.lstm", model_->hidden_size(), config_.hidden_size, rng) {}

Var BiLstmBertEncoder::encode(Graph& g, const std::vector<std::string>& tokens,
                              const std::string& sentence_id) {
  Var x = features(g, tokens, sentence_id);
  return lstm_.run(g, x);
}

void BiLstmBertEncoder::collect_trainable(std::vector<Parameter*>& out) {
  BertEncoder::collect_trainable(out);
  lstm_.collect(out);
}

void BiLstmBertEncoder::collect_state(std::vector<Parameter*>& out) {
  BertEncoder::collect_state(out);
  lstm_.collect(out);
}

}  // namespace asmote
