#include "asmote/ate.hpp"

#include "asmote/nn/optim.hpp"

namespace asmote {

using namespace nn;

AteHead::AteHead(int input_dim, std::mt19937_64& rng)
    : weight("ate.weight", glorot(input_dim, 3, rng)),
      bias("ate.bias", Matrix::Zero(1, 3)) {}

Var AteHead::probabilities(Graph& g, Var hidden) const {
  auto* self = const_cast<AteHead*>(this);
  Var logits = add_rowvec(matmul(hidden, leaf(g, self->weight)),
                          leaf(g, self->bias));
  return softmax_rows(logits);
}

void AteHead::collect(std::vector<Parameter*>& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

int argmax_row(const Matrix& m, Eigen::Index row) {
  int best = 0;
  for (Eigen::Index c = 1; c < m.cols(); ++c)
    if (m(row, c) > m(row, best)) best = static_cast<int>(c);
  return best;
}

AtePrediction ate_predict(const HiddenStates& hidden, const AteHead& head) {
  Graph g;
  Var probs = head.probabilities(g, constant(g, hidden.values));
  AtePrediction out;
  out.probabilities = probs->value;
  out.tags.reserve(static_cast<std::size_t>(hidden.length()));
  for (Eigen::Index r = 0; r < out.probabilities.rows(); ++r)
    out.tags.push_back(static_cast<Tag>(argmax_row(out.probabilities, r)));
  out.spans = decode_bio(out.tags);
  return out;
}

Var tagging_loss_node(Var probabilities, const TagSequence& gold) {
  if (static_cast<std::size_t>(probabilities->value.rows()) != gold.size())
    throw DataError("tagging loss: " +
                    std::to_string(probabilities->value.rows()) +
                    " probability rows vs " + std::to_string(gold.size()) +
                    " gold tags");
  std::vector<int> labels;
  labels.reserve(gold.size());
  for (Tag t : gold) labels.push_back(static_cast<int>(t));
  return pick_nll(probabilities, labels);
}

Scalar ate_loss(const Matrix& probabilities, const TagSequence& gold) {
  Graph g;
  return scalar_value(tagging_loss_node(constant(g, probabilities), gold));
}

}  // namespace asmote
