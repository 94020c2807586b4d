#pragma once

#include "asmote/encoder.hpp"
#include "asmote/nn/graph.hpp"
#include "asmote/tagging.hpp"

#include <random>
#include <vector>

namespace asmote {

// Linear + softmax tagger over per-token hidden states (stage one).
struct AteHead {
  nn::Parameter weight;  // d x 3
  nn::Parameter bias;    // 1 x 3

  AteHead() = default;
  AteHead(int input_dim, std::mt19937_64& rng);

  nn::Var probabilities(nn::Graph& g, nn::Var hidden) const;  // n x 3
  void collect(std::vector<nn::Parameter*>& out);
};

struct AtePrediction {
  nn::Matrix probabilities;  // each row sums to 1
  TagSequence tags;          // argmax per position
  std::vector<Span> spans;   // decoded aspect spans
};

AtePrediction ate_predict(const HiddenStates& hidden, const AteHead& head);

// Summed negative log-likelihood over positions.
nn::Scalar ate_loss(const nn::Matrix& probabilities, const TagSequence& gold);
nn::Var tagging_loss_node(nn::Var probabilities, const TagSequence& gold);

// Shared argmax with the deterministic lowest-index tie-break.
int argmax_row(const nn::Matrix& m, Eigen::Index row);

}  // namespace asmote
