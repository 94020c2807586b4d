#pragma once

#include "asmote/nn/graph.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace asmote::nn {

// Adam with the default moment coefficients.
class Adam {
 public:
  explicit Adam(Scalar lr, Scalar beta1 = 0.9, Scalar beta2 = 0.999,
                Scalar eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<Parameter*>& params);
  static void zero_grad(const std::vector<Parameter*>& params);

  Scalar learning_rate() const { return lr_; }

 private:
  struct Moments {
    Matrix m, v;
  };
  Scalar lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::unordered_map<Parameter*, Moments> state_;
};

// Uniform Glorot initialization for weight matrices.
Matrix glorot(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
// Small uniform initialization used for word vectors without a pretrained row.
Matrix uniform_init(Eigen::Index rows, Eigen::Index cols, Scalar radius,
                    std::mt19937_64& rng);

// Copies of parameter values, used to keep the best epoch during training.
std::vector<Matrix> snapshot(const std::vector<Parameter*>& params);
void restore(const std::vector<Parameter*>& params,
             const std::vector<Matrix>& values);

}  // namespace asmote::nn
