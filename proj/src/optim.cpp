#include "asmote/nn/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace asmote::nn {

void Adam::step(const std::vector<Parameter*>& params) {
  ++t_;
  const Scalar bc1 = 1.0 - std::pow(beta1_, static_cast<Scalar>(t_));
  const Scalar bc2 = 1.0 - std::pow(beta2_, static_cast<Scalar>(t_));
  for (Parameter* p : params) {
    Moments& s = state_[p];
    if (s.m.size() == 0) {
      s.m = Matrix::Zero(p->value.rows(), p->value.cols());
      s.v = Matrix::Zero(p->value.rows(), p->value.cols());
    }
    s.m = beta1_ * s.m + (1.0 - beta1_) * p->grad;
    s.v = beta2_ * s.v.array().matrix() +
          (1.0 - beta2_) * p->grad.array().square().matrix();
    Matrix mhat = s.m / bc1;
    Matrix vhat = s.v / bc2;
    p->value.array() -= lr_ * mhat.array() / (vhat.array().sqrt() + eps_);
  }
}

void Adam::zero_grad(const std::vector<Parameter*>& params) {
  for (Parameter* p : params) p->zero_grad();
}

Matrix glorot(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  const Scalar radius =
      std::sqrt(6.0 / static_cast<Scalar>(rows + cols));
  return uniform_init(rows, cols, radius, rng);
}

Matrix uniform_init(Eigen::Index rows, Eigen::Index cols, Scalar radius,
                    std::mt19937_64& rng) {
  std::uniform_real_distribution<Scalar> dist(-radius, radius);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
  return m;
}

std::vector<Matrix> snapshot(const std::vector<Parameter*>& params) {
  std::vector<Matrix> out;
  out.reserve(params.size());
  for (Parameter* p : params) out.push_back(p->value);
  return out;
}

void restore(const std::vector<Parameter*>& params,
             const std::vector<Matrix>& values) {
  if (params.size() != values.size())
    throw std::logic_error("restore: parameter count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i)
    params[i]->value = values[i];
}

}  // namespace asmote::nn
