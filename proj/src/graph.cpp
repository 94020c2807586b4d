#include "asmote/nn/graph.hpp"

#include <cmath>
#include <stdexcept>

namespace asmote::nn {

namespace {

constexpr Scalar kInvSqrt2 = 0.70710678118654752440;
constexpr Scalar kInvSqrt2Pi = 0.39894228040143267794;

void require(bool cond, const char* msg) {
  if (!cond) throw std::logic_error(std::string("graph: ") + msg);
}

}  // namespace

void Node::add_grad(const Matrix& g) {
  if (!requires_grad) return;
  if (grad.size() == 0) grad = Matrix::Zero(value.rows(), value.cols());
  grad += g;
}

Var Graph::make(Matrix value, bool requires_grad) {
  nodes_.emplace_back();
  Node& n = nodes_.back();
  n.owner = this;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  return &n;
}

void Graph::backward(Var loss) {
  require(loss->owner == this, "loss node belongs to another graph");
  require(loss->value.rows() == 1 && loss->value.cols() == 1,
          "backward expects a scalar loss");
  loss->grad = Matrix::Ones(1, 1);
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    Node& n = *it;
    if (n.requires_grad && n.grad.size() != 0 && n.backprop) n.backprop(n);
  }
}

Var constant(Graph& g, Matrix value) { return g.make(std::move(value), false); }

Var leaf(Graph& g, Parameter& p, bool trainable) {
  Var out = g.make(p.value, trainable);
  if (trainable) {
    Parameter* pp = &p;
    out->backprop = [pp](Node& n) { pp->grad += n.grad; };
  }
  return out;
}

Var embedding_rows(Graph& g, Parameter& table, const std::vector<int>& ids,
                   bool trainable) {
  Matrix out(static_cast<Eigen::Index>(ids.size()), table.value.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    require(ids[i] >= 0 && ids[i] < table.value.rows(),
            "embedding id out of range");
    out.row(static_cast<Eigen::Index>(i)) = table.value.row(ids[i]);
  }
  Var node = g.make(std::move(out), trainable);
  if (trainable) {
    Parameter* pp = &table;
    std::vector<int> captured = ids;
    node->backprop = [pp, captured](Node& n) {
      for (std::size_t i = 0; i < captured.size(); ++i) {
        pp->grad.row(captured[i]) += n.grad.row(static_cast<Eigen::Index>(i));
      }
    };
  }
  return node;
}

Var transpose(Var a) {
  Var out = a->owner->make(a->value.transpose(), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a](Node& n) { a->add_grad(n.grad.transpose()); };
  }
  return out;
}

Var rows(Var a, Eigen::Index start, Eigen::Index count) {
  require(start >= 0 && start + count <= a->value.rows(), "row slice bounds");
  Var out = a->owner->make(a->value.middleRows(start, count), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, start, count](Node& n) {
      if (!a->requires_grad) return;
      if (a->grad.size() == 0)
        a->grad = Matrix::Zero(a->value.rows(), a->value.cols());
      a->grad.middleRows(start, count) += n.grad;
    };
  }
  return out;
}

Var cols(Var a, Eigen::Index start, Eigen::Index count) {
  require(start >= 0 && start + count <= a->value.cols(), "col slice bounds");
  Var out = a->owner->make(a->value.middleCols(start, count), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, start, count](Node& n) {
      if (!a->requires_grad) return;
      if (a->grad.size() == 0)
        a->grad = Matrix::Zero(a->value.rows(), a->value.cols());
      a->grad.middleCols(start, count) += n.grad;
    };
  }
  return out;
}

Var vconcat(const std::vector<Var>& parts) {
  require(!parts.empty(), "vconcat of nothing");
  Eigen::Index total = 0;
  bool rg = false;
  for (Var p : parts) {
    require(p->value.cols() == parts[0]->value.cols(), "vconcat width mismatch");
    total += p->value.rows();
    rg = rg || p->requires_grad;
  }
  Matrix out(total, parts[0]->value.cols());
  Eigen::Index at = 0;
  for (Var p : parts) {
    out.middleRows(at, p->value.rows()) = p->value;
    at += p->value.rows();
  }
  Var node = parts[0]->owner->make(std::move(out), rg);
  if (rg) {
    std::vector<Var> captured = parts;
    node->backprop = [captured](Node& n) {
      Eigen::Index at = 0;
      for (Var p : captured) {
        p->add_grad(n.grad.middleRows(at, p->value.rows()));
        at += p->value.rows();
      }
    };
  }
  return node;
}

Var hconcat(const std::vector<Var>& parts) {
  require(!parts.empty(), "hconcat of nothing");
  Eigen::Index total = 0;
  bool rg = false;
  for (Var p : parts) {
    require(p->value.rows() == parts[0]->value.rows(), "hconcat height mismatch");
    total += p->value.cols();
    rg = rg || p->requires_grad;
  }
  Matrix out(parts[0]->value.rows(), total);
  Eigen::Index at = 0;
  for (Var p : parts) {
    out.middleCols(at, p->value.cols()) = p->value;
    at += p->value.cols();
  }
  Var node = parts[0]->owner->make(std::move(out), rg);
  if (rg) {
    std::vector<Var> captured = parts;
    node->backprop = [captured](Node& n) {
      Eigen::Index at = 0;
      for (Var p : captured) {
        p->add_grad(n.grad.middleCols(at, p->value.cols()));
        at += p->value.cols();
      }
    };
  }
  return node;
}

Var reorder_rows(Var a, const std::vector<int>& order) {
  Matrix out(static_cast<Eigen::Index>(order.size()), a->value.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    require(order[i] >= 0 && order[i] < a->value.rows(), "reorder bounds");
    out.row(static_cast<Eigen::Index>(i)) = a->value.row(order[i]);
  }
  Var node = a->owner->make(std::move(out), a->requires_grad);
  if (node->requires_grad) {
    std::vector<int> captured = order;
    node->backprop = [a, captured](Node& n) {
      if (!a->requires_grad) return;
      if (a->grad.size() == 0)
        a->grad = Matrix::Zero(a->value.rows(), a->value.cols());
      for (std::size_t i = 0; i < captured.size(); ++i) {
        a->grad.row(captured[i]) += n.grad.row(static_cast<Eigen::Index>(i));
      }
    };
  }
  return node;
}

Var add(Var a, Var b) {
  require(a->value.rows() == b->value.rows() &&
              a->value.cols() == b->value.cols(),
          "add shape mismatch");
  Var out = a->owner->make(a->value + b->value,
                           a->requires_grad || b->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, b](Node& n) {
      a->add_grad(n.grad);
      b->add_grad(n.grad);
    };
  }
  return out;
}

Var add_rowvec(Var a, Var row) {
  require(row->value.rows() == 1 && row->value.cols() == a->value.cols(),
          "add_rowvec shape mismatch");
  Var out = a->owner->make(a->value.rowwise() + row->value.row(0),
                           a->requires_grad || row->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, row](Node& n) {
      a->add_grad(n.grad);
      row->add_grad(n.grad.colwise().sum());
    };
  }
  return out;
}

Var sub(Var a, Var b) { return add(a, scale(b, -1.0)); }

Var cmul(Var a, Var b) {
  require(a->value.rows() == b->value.rows() &&
              a->value.cols() == b->value.cols(),
          "cmul shape mismatch");
  Var out = a->owner->make(a->value.cwiseProduct(b->value),
                           a->requires_grad || b->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, b](Node& n) {
      a->add_grad(n.grad.cwiseProduct(b->value));
      b->add_grad(n.grad.cwiseProduct(a->value));
    };
  }
  return out;
}

Var scale(Var a, Scalar s) {
  Var out = a->owner->make(a->value * s, a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, s](Node& n) { a->add_grad(n.grad * s); };
  }
  return out;
}

Var matmul(Var a, Var b) {
  require(a->value.cols() == b->value.rows(), "matmul shape mismatch");
  Var out = a->owner->make(a->value * b->value,
                           a->requires_grad || b->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, b](Node& n) {
      a->add_grad(n.grad * b->value.transpose());
      b->add_grad(a->value.transpose() * n.grad);
    };
  }
  return out;
}

Var mean_rows(Var a, Eigen::Index start, Eigen::Index count) {
  require(count > 0 && start >= 0 && start + count <= a->value.rows(),
          "mean_rows bounds");
  Matrix m = a->value.middleRows(start, count).colwise().mean();
  Var out = a->owner->make(std::move(m), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, start, count](Node& n) {
      if (!a->requires_grad) return;
      if (a->grad.size() == 0)
        a->grad = Matrix::Zero(a->value.rows(), a->value.cols());
      Matrix share = n.grad / static_cast<Scalar>(count);
      for (Eigen::Index r = 0; r < count; ++r)
        a->grad.row(start + r) += share.row(0);
    };
  }
  return out;
}

Var sum_all(Var a) {
  Matrix s(1, 1);
  s(0, 0) = a->value.sum();
  Var out = a->owner->make(std::move(s), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a](Node& n) {
      a->add_grad(Matrix::Constant(a->value.rows(), a->value.cols(),
                                   n.grad(0, 0)));
    };
  }
  return out;
}

Var sigmoid(Var a) {
  Matrix v = (1.0 / (1.0 + (-a->value.array()).exp())).matrix();
  Var out = a->owner->make(std::move(v), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a](Node& n) {
      Matrix d = n.grad.array() * n.value.array() * (1.0 - n.value.array());
      a->add_grad(d);
    };
  }
  return out;
}

Var tanh_act(Var a) {
  Matrix v = a->value.array().tanh().matrix();
  Var out = a->owner->make(std::move(v), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a](Node& n) {
      Matrix d = n.grad.array() * (1.0 - n.value.array().square());
      a->add_grad(d);
    };
  }
  return out;
}

Var relu(Var a) {
  Matrix v = a->value.cwiseMax(0.0);
  Var out = a->owner->make(std::move(v), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a](Node& n) {
      Matrix d = (a->value.array() > 0.0).cast<Scalar>() * n.grad.array();
      a->add_grad(d);
    };
  }
  return out;
}

Var gelu(Var a) {
  // Exact erf form, matching the pretrained-transformer convention.
  Matrix v = (0.5 * a->value.array() *
              (1.0 + (a->value.array() * kInvSqrt2).erf()))
                 .matrix();
  Var out = a->owner->make(std::move(v), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a](Node& n) {
      auto x = a->value.array();
      auto cdf = 0.5 * (1.0 + (x * kInvSqrt2).erf());
      auto pdf = kInvSqrt2Pi * (-0.5 * x.square()).exp();
      Matrix d = (n.grad.array() * (cdf + x * pdf)).matrix();
      a->add_grad(d);
    };
  }
  return out;
}

Var softmax_rows(Var a) {
  Matrix v = a->value;
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    Scalar mx = v.row(r).maxCoeff();
    v.row(r) = (v.row(r).array() - mx).exp();
    v.row(r) /= v.row(r).sum();
  }
  Var out = a->owner->make(std::move(v), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a](Node& n) {
      Matrix d(n.value.rows(), n.value.cols());
      for (Eigen::Index r = 0; r < n.value.rows(); ++r) {
        Scalar dot = n.grad.row(r).dot(n.value.row(r));
        d.row(r) = (n.grad.row(r).array() - dot) * n.value.row(r).array();
      }
      a->add_grad(d);
    };
  }
  return out;
}

Var log_of(Var a) {
  Matrix v = a->value.array().log().matrix();
  Var out = a->owner->make(std::move(v), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a](Node& n) {
      Matrix d = n.grad.cwiseQuotient(a->value);
      a->add_grad(d);
    };
  }
  return out;
}

Var layer_norm_rows(Var a, Var gamma, Var beta, Scalar eps) {
  const Eigen::Index d = a->value.cols();
  require(gamma->value.rows() == 1 && gamma->value.cols() == d &&
              beta->value.rows() == 1 && beta->value.cols() == d,
          "layer_norm parameter shape");
  Matrix xhat(a->value.rows(), d);
  Matrix inv_sigma(a->value.rows(), 1);
  for (Eigen::Index r = 0; r < a->value.rows(); ++r) {
    Scalar mu = a->value.row(r).mean();
    Scalar var = (a->value.row(r).array() - mu).square().mean();
    Scalar inv = 1.0 / std::sqrt(var + eps);
    inv_sigma(r, 0) = inv;
    xhat.row(r) = (a->value.row(r).array() - mu) * inv;
  }
  Matrix v =
      (xhat.array().rowwise() * gamma->value.row(0).array()).matrix();
  v.rowwise() += beta->value.row(0);
  Var out = a->owner->make(std::move(v),
                           a->requires_grad || gamma->requires_grad ||
                               beta->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, gamma, beta, xhat, inv_sigma](Node& n) {
      const Eigen::Index d = a->value.cols();
      beta->add_grad(n.grad.colwise().sum());
      gamma->add_grad((n.grad.array() * xhat.array()).colwise().sum().matrix());
      if (!a->requires_grad) return;
      Matrix dx(a->value.rows(), d);
      using RowArray = Eigen::Array<Scalar, 1, Eigen::Dynamic>;
      for (Eigen::Index r = 0; r < a->value.rows(); ++r) {
        RowArray dxhat = n.grad.row(r).array() * gamma->value.row(0).array();
        Scalar m1 = dxhat.mean();
        Scalar m2 = (dxhat * xhat.row(r).array()).mean();
        dx.row(r) =
            (inv_sigma(r, 0) * (dxhat - m1 - xhat.row(r).array() * m2))
                .matrix();
      }
      a->add_grad(dx);
    };
  }
  return out;
}

Var pick_nll(Var probs, const std::vector<int>& labels) {
  require(static_cast<Eigen::Index>(labels.size()) == probs->value.rows(),
          "pick_nll label count mismatch");
  Scalar total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] >= 0 && labels[i] < probs->value.cols(),
            "pick_nll label out of range");
    total -= std::log(probs->value(static_cast<Eigen::Index>(i), labels[i]));
  }
  Matrix v(1, 1);
  v(0, 0) = total;
  Var out = probs->owner->make(std::move(v), probs->requires_grad);
  if (out->requires_grad) {
    std::vector<int> captured = labels;
    out->backprop = [probs, captured](Node& n) {
      if (!probs->requires_grad) return;
      if (probs->grad.size() == 0)
        probs->grad = Matrix::Zero(probs->value.rows(), probs->value.cols());
      Scalar upstream = n.grad(0, 0);
      for (std::size_t i = 0; i < captured.size(); ++i) {
        Eigen::Index r = static_cast<Eigen::Index>(i);
        probs->grad(r, captured[i]) -=
            upstream / probs->value(r, captured[i]);
      }
    };
  }
  return out;
}

Var dropout(Var a, Scalar rate) {
  Graph& g = *a->owner;
  if (!g.training() || rate <= 0.0) return a;
  require(g.rng() != nullptr, "dropout needs a graph RNG in training mode");
  std::bernoulli_distribution keep(1.0 - rate);
  Matrix mask(a->value.rows(), a->value.cols());
  const Scalar inv_keep = 1.0 / (1.0 - rate);
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      mask(r, c) = keep(*g.rng()) ? inv_keep : 0.0;
  Var out = g.make(a->value.cwiseProduct(mask), a->requires_grad);
  if (out->requires_grad) {
    out->backprop = [a, mask](Node& n) {
      a->add_grad(n.grad.cwiseProduct(mask));
    };
  }
  return out;
}

Var detach(Var a) { return a->owner->make(a->value, false); }

}  // namespace asmote::nn
