#pragma once

#include "asmote/ate.hpp"
#include "asmote/encoder.hpp"
#include "asmote/tagging.hpp"

#include <random>
#include <vector>

namespace asmote {

// Linear tagger over marked-sentence hidden states; exposes both logits
// and probabilities because the attention can consume either.
struct ToweHead {
  nn::Parameter weight;  // d x 3
  nn::Parameter bias;    // 1 x 3

  ToweHead() = default;
  ToweHead(int input_dim, std::mt19937_64& rng);

  nn::Var logits(nn::Graph& g, nn::Var hidden) const;  // n x 3
  void collect(std::vector<nn::Parameter*>& out);
};

// Which TOWE output feeds the attention (the AGF vs AGF_S variants).
enum class SlaMode { logits, probabilities };

const char* to_string(SlaMode m);
SlaMode sla_mode_from_string(const std::string& s);

// Attention over all marked-sentence positions, markers included.
struct AttentionVector {
  std::vector<nn::Scalar> weights;  // non-negative, sums to 1
  std::vector<nn::Scalar> scores;   // B + I channel per position
};

struct TowePrediction {
  nn::Matrix logits;
  nn::Matrix probabilities;
  TagSequence tags;
  std::vector<Span> opinions;  // original sentence coordinates
};

TowePrediction towe_predict(const HiddenStates& marked_hidden,
                            const ToweHead& head,
                            const MarkedSentence& marked);

// Summed negative log-likelihood over marked positions (markers gold O).
nn::Scalar towe_loss(const nn::Matrix& probabilities, const TagSequence& gold);

// scores_i = input_i[B] + input_i[I]; weights = softmax(scores). Input is
// the logit rows or the probability rows, depending on the mode.
AttentionVector sla_attention(const nn::Matrix& per_position, SlaMode mode);

// Graph form: (n x 3) TOWE logits -> (n x 1) attention weights.
nn::Var sla_alpha_node(nn::Var towe_logits, SlaMode mode);

}  // namespace asmote
