#include "asmote/bert.hpp"

#include "asmote/nn/tensor_file.hpp"
#include "asmote/types.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numeric>

namespace asmote {

using nlohmann::json;
using namespace nn;

TransformerConfig TransformerConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open transformer config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("bad transformer config json: " + std::string(e.what()));
  }
  TransformerConfig cfg;
  cfg.hidden_size = j.at("hidden_size").get<int>();
  cfg.num_layers = j.at("num_hidden_layers").get<int>();
  cfg.num_heads = j.at("num_attention_heads").get<int>();
  cfg.intermediate_size = j.at("intermediate_size").get<int>();
  cfg.vocab_size = j.at("vocab_size").get<int>();
  cfg.max_positions = j.at("max_position_embeddings").get<int>();
  cfg.type_vocab_size = j.value("type_vocab_size", 2);
  cfg.layer_norm_eps = j.value("layer_norm_eps", 1e-12);
  cfg.hidden_dropout = j.value("hidden_dropout_prob", 0.1);
  cfg.attention_dropout = j.value("attention_probs_dropout_prob", 0.1);
  if (cfg.hidden_size % cfg.num_heads != 0)
    throw DataError("hidden_size must be divisible by num_attention_heads");
  return cfg;
}

namespace {

// Accepts both the transformers naming (LayerNorm.weight/.bias) and the
// original tf-export naming (LayerNorm.gamma/.beta), with or without the
// leading "bert." prefix.
const Matrix& find_tensor(const TensorFile& tf, const std::string& name,
                          const std::string& alt = "") {
  for (const std::string& prefix : {std::string(""), std::string("bert.")}) {
    if (tf.has(prefix + name)) return tf.tensors.at(prefix + name);
    if (!alt.empty() && tf.has(prefix + alt)) return tf.tensors.at(prefix + alt);
  }
  throw DataError("transformer weights are missing tensor: " + name);
}

Parameter linear_weight(const TensorFile& tf, const std::string& name) {
  // torch linear weights are (out, in); stored transposed for row-vector use
  return Parameter(name, find_tensor(tf, name).transpose());
}

Parameter row_param(const TensorFile& tf, const std::string& name,
                    const std::string& alt = "") {
  const Matrix& m = find_tensor(tf, name, alt);
  if (m.rows() == 1) return Parameter(name, m);
  return Parameter(name, m.transpose());
}

Parameter table_param(const TensorFile& tf, const std::string& name) {
  return Parameter(name, find_tensor(tf, name));
}

}  // namespace

std::shared_ptr<Transformer> Transformer::load(const std::string& dir) {
  TransformerConfig cfg = TransformerConfig::from_file(dir + "/config.json");
  WordPiece wp = WordPiece::load(dir + "/vocab.txt");
  auto model = std::shared_ptr<Transformer>(
      new Transformer(cfg, std::move(wp)));
  TensorFile tf = TensorFile::read(dir + "/model.safetensors");

  model->word_embeddings_ =
      table_param(tf, "embeddings.word_embeddings.weight");
  model->position_embeddings_ =
      table_param(tf, "embeddings.position_embeddings.weight");
  model->type_embeddings_ =
      table_param(tf, "embeddings.token_type_embeddings.weight");
  model->embedding_ln_g_ = row_param(tf, "embeddings.LayerNorm.weight",
                                     "embeddings.LayerNorm.gamma");
  model->embedding_ln_b_ = row_param(tf, "embeddings.LayerNorm.bias",
                                     "embeddings.LayerNorm.beta");
  if (model->word_embeddings_.value.rows() < cfg.vocab_size)
    throw DataError("word embedding table smaller than configured vocab");

  for (int l = 0; l < cfg.num_layers; ++l) {
    const std::string base = "encoder.layer." + std::to_string(l) + ".";
    Layer layer;
    layer.query_w = linear_weight(tf, base + "attention.self.query.weight");
    layer.query_b = row_param(tf, base + "attention.self.query.bias");
    layer.key_w = linear_weight(tf, base + "attention.self.key.weight");
    layer.key_b = row_param(tf, base + "attention.self.key.bias");
    layer.value_w = linear_weight(tf, base + "attention.self.value.weight");
    layer.value_b = row_param(tf, base + "attention.self.value.bias");
    layer.attn_out_w =
        linear_weight(tf, base + "attention.output.dense.weight");
    layer.attn_out_b = row_param(tf, base + "attention.output.dense.bias");
    layer.attn_ln_g = row_param(tf, base + "attention.output.LayerNorm.weight",
                                base + "attention.output.LayerNorm.gamma");
    layer.attn_ln_b = row_param(tf, base + "attention.output.LayerNorm.bias",
                                base + "attention.output.LayerNorm.beta");
    layer.ffn_in_w = linear_weight(tf, base + "intermediate.dense.weight");
    layer.ffn_in_b = row_param(tf, base + "intermediate.dense.bias");
    layer.ffn_out_w = linear_weight(tf, base + "output.dense.weight");
    layer.ffn_out_b = row_param(tf, base + "output.dense.bias");
    layer.out_ln_g = row_param(tf, base + "output.LayerNorm.weight",
                               base + "output.LayerNorm.gamma");
    layer.out_ln_b = row_param(tf, base + "output.LayerNorm.bias",
                               base + "output.LayerNorm.beta");
    model->layers_.push_back(std::move(layer));
  }
  return model;
}

Var Transformer::encode_words(Graph& g, const std::vector<std::string>& words,
                              bool trainable,
                              const std::string& sentence_id) const {
  std::vector<int> ids{wordpiece_.cls_id()};
  std::vector<int> first_subword;
  first_subword.reserve(words.size());
  for (const std::string& w : words) {
    first_subword.push_back(static_cast<int>(ids.size()));
    for (int id : wordpiece_.encode_word(w)) ids.push_back(id);
  }
  ids.push_back(wordpiece_.sep_id());
  const int m = static_cast<int>(ids.size());
  if (m > config_.max_positions)
    throw DataError("sentence " + (sentence_id.empty() ? "?" : sentence_id) +
                    " expands to " + std::to_string(m) +
                    " subwords, above the position limit " +
                    std::to_string(config_.max_positions));

  auto* self = const_cast<Transformer*>(this);
  std::vector<int> positions(static_cast<std::size_t>(m));
  std::iota(positions.begin(), positions.end(), 0);
  std::vector<int> zeros(static_cast<std::size_t>(m), 0);

  Var x = embedding_rows(g, self->word_embeddings_, ids, trainable);
  x = add(x, embedding_rows(g, self->position_embeddings_, positions,
                            trainable));
  x = add(x, embedding_rows(g, self->type_embeddings_, zeros, trainable));
  x = layer_norm_rows(x, leaf(g, self->embedding_ln_g_, trainable),
                      leaf(g, self->embedding_ln_b_, trainable),
                      config_.layer_norm_eps);
  const bool drop = trainable && g.training();
  if (drop) x = dropout(x, config_.hidden_dropout);

  const int head_dim = config_.hidden_size / config_.num_heads;
  const Scalar scale_factor = 1.0 / std::sqrt(static_cast<Scalar>(head_dim));
  for (auto& layer : self->layers_) {
    Var q = add_rowvec(matmul(x, leaf(g, layer.query_w, trainable)),
                       leaf(g, layer.query_b, trainable));
    Var k = add_rowvec(matmul(x, leaf(g, layer.key_w, trainable)),
                       leaf(g, layer.key_b, trainable));
    Var v = add_rowvec(matmul(x, leaf(g, layer.value_w, trainable)),
                       leaf(g, layer.value_b, trainable));
    std::vector<Var> heads;
    heads.reserve(static_cast<std::size_t>(config_.num_heads));
    for (int h = 0; h < config_.num_heads; ++h) {
      Var qh = cols(q, h * head_dim, head_dim);
      Var kh = cols(k, h * head_dim, head_dim);
      Var vh = cols(v, h * head_dim, head_dim);
      Var scores = scale(matmul(qh, transpose(kh)), scale_factor);
      Var attn = softmax_rows(scores);
      if (drop) attn = dropout(attn, config_.attention_dropout);
      heads.push_back(matmul(attn, vh));
    }
    Var context = hconcat(heads);
    Var attn_out =
        add_rowvec(matmul(context, leaf(g, layer.attn_out_w, trainable)),
                   leaf(g, layer.attn_out_b, trainable));
    if (drop) attn_out = dropout(attn_out, config_.hidden_dropout);
    x = layer_norm_rows(add(x, attn_out),
                        leaf(g, layer.attn_ln_g, trainable),
                        leaf(g, layer.attn_ln_b, trainable),
                        config_.layer_norm_eps);
    Var ffn = gelu(add_rowvec(matmul(x, leaf(g, layer.ffn_in_w, trainable)),
                              leaf(g, layer.ffn_in_b, trainable)));
    Var ffn_out = add_rowvec(matmul(ffn, leaf(g, layer.ffn_out_w, trainable)),
                             leaf(g, layer.ffn_out_b, trainable));
    if (drop) ffn_out = dropout(ffn_out, config_.hidden_dropout);
    x = layer_norm_rows(add(x, ffn_out), leaf(g, layer.out_ln_g, trainable),
                        leaf(g, layer.out_ln_b, trainable),
                        config_.layer_norm_eps);
  }
  return reorder_rows(x, first_subword);
}

void Transformer::collect(std::vector<Parameter*>& out) {
  out.push_back(&word_embeddings_);
  out.push_back(&position_embeddings_);
  out.push_back(&type_embeddings_);
  out.push_back(&embedding_ln_g_);
  out.push_back(&embedding_ln_b_);
  for (Layer& l : layers_) {
    for (Parameter* p :
         {&l.query_w, &l.query_b, &l.key_w, &l.key_b, &l.value_w, &l.value_b,
          &l.attn_out_w, &l.attn_out_b, &l.attn_ln_g, &l.attn_ln_b,
          &l.ffn_in_w, &l.ffn_in_b, &l.ffn_out_w, &l.ffn_out_b, &l.out_ln_g,
          &l.out_ln_b})
      out.push_back(p);
  }
}

std::vector<const Matrix*> Transformer::weight_views() const {
  std::vector<Parameter*> params;
  const_cast<Transformer*>(this)->collect(params);
  std::vector<const Matrix*> views;
  views.reserve(params.size());
  for (Parameter* p : params) views.push_back(&p->value);
  return views;
}

}  // namespace asmote
