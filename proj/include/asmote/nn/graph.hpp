#pragma once

#include <Eigen/Core>

#include <deque>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace asmote::nn {

using Scalar = double;
using Matrix = Eigen::MatrixXd;

// A named, persistent tensor owned by a model. Gradients accumulate into
// `grad` during Graph::backward and are consumed by the optimizer.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v)
      : name(std::move(n)), value(std::move(v)),
        grad(Matrix::Zero(value.rows(), value.cols())) {}

  void zero_grad() { grad.setZero(); }
};

class Graph;

// One node of a dynamically built computation graph. Nodes are created per
// forward pass and discarded with the graph; parameters persist outside.
struct Node {
  Graph* owner = nullptr;
  Matrix value;
  Matrix grad;  // allocated lazily on the backward pass
  bool requires_grad = false;
  std::function<void(Node&)> backprop;

  void add_grad(const Matrix& g);
};

using Var = Node*;

// Dynamic computation graph: records nodes in creation order and runs the
// reverse pass over that order. One graph per example; not thread-safe.
class Graph {
 public:
  explicit Graph(bool training = false, std::mt19937_64* rng = nullptr)
      : training_(training), rng_(rng) {}

  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var make(Matrix value, bool requires_grad);
  void backward(Var loss);

  bool training() const { return training_; }
  std::mt19937_64* rng() const { return rng_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::deque<Node> nodes_;
  bool training_ = false;
  std::mt19937_64* rng_ = nullptr;
};

// Leaves.
Var constant(Graph& g, Matrix value);
Var leaf(Graph& g, Parameter& p, bool trainable = true);
// Row-gather from an embedding table without materializing the table in the
// graph; backward scatters into the gathered rows only.
Var embedding_rows(Graph& g, Parameter& table, const std::vector<int>& ids,
                   bool trainable = true);

// Structure.
Var transpose(Var a);
Var rows(Var a, Eigen::Index start, Eigen::Index count);
Var cols(Var a, Eigen::Index start, Eigen::Index count);
Var vconcat(const std::vector<Var>& parts);  // stack along rows
Var hconcat(const std::vector<Var>& parts);  // stack along columns
Var reorder_rows(Var a, const std::vector<int>& order);

// Arithmetic.
Var add(Var a, Var b);                  // same shape
Var add_rowvec(Var a, Var row);         // broadcast a 1 x d row over all rows
Var sub(Var a, Var b);
Var cmul(Var a, Var b);                 // elementwise
Var scale(Var a, Scalar s);
Var matmul(Var a, Var b);
Var mean_rows(Var a, Eigen::Index start, Eigen::Index count);  // 1 x d
Var sum_all(Var a);                     // 1 x 1

// Nonlinearities.
Var sigmoid(Var a);
Var tanh_act(Var a);
Var relu(Var a);
Var gelu(Var a);

// Normalization and probability.
Var softmax_rows(Var a);
Var log_of(Var a);
Var layer_norm_rows(Var a, Var gamma, Var beta, Scalar eps);
// Negative log-likelihood of per-row probability distributions, summed over
// rows: -sum_i log a(i, labels[i]).
Var pick_nll(Var probs, const std::vector<int>& labels);

// Training-time utilities.
Var dropout(Var a, Scalar rate);  // identity when the graph is in eval mode
Var detach(Var a);                // stops gradient flow

inline Scalar scalar_value(Var v) { return v->value(0, 0); }

}  // namespace asmote::nn
