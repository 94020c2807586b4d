#include "asmote/nn/lstm.hpp"

#include "asmote/nn/optim.hpp"

namespace asmote::nn {

LstmCell::LstmCell(const std::string& name, int input_dim, int hidden_dim,
                   std::mt19937_64& rng)
    : w_input(name + ".w_input", glorot(input_dim, 4 * hidden_dim, rng)),
      w_hidden(name + ".w_hidden", glorot(hidden_dim, 4 * hidden_dim, rng)),
      bias(name + ".bias", Matrix::Zero(1, 4 * hidden_dim)),
      hidden(hidden_dim) {
  bias.value.middleCols(hidden_dim, hidden_dim).setOnes();  // forget gate
}

Var LstmCell::run(Graph& g, Var x, bool backwards) const {
  const Eigen::Index n = x->value.rows();
  Var wi = leaf(g, const_cast<Parameter&>(w_input));
  Var wh = leaf(g, const_cast<Parameter&>(w_hidden));
  Var b = leaf(g, const_cast<Parameter&>(bias));
  // One big matmul over the whole sequence for the input contribution.
  Var input_part = add_rowvec(matmul(x, wi), b);

  Var h = constant(g, Matrix::Zero(1, hidden));
  Var c = constant(g, Matrix::Zero(1, hidden));
  std::vector<Var> states(static_cast<std::size_t>(n), nullptr);
  for (Eigen::Index step = 0; step < n; ++step) {
    const Eigen::Index t = backwards ? n - 1 - step : step;
    Var gates = add(rows(input_part, t, 1), matmul(h, wh));
    Var in_gate = sigmoid(cols(gates, 0, hidden));
    Var forget_gate = sigmoid(cols(gates, hidden, hidden));
    Var cell_cand = tanh_act(cols(gates, 2 * hidden, hidden));
    Var out_gate = sigmoid(cols(gates, 3 * hidden, hidden));
    c = add(cmul(forget_gate, c), cmul(in_gate, cell_cand));
    h = cmul(out_gate, tanh_act(c));
    states[static_cast<std::size_t>(t)] = h;
  }
  return vconcat(states);
}

void LstmCell::collect(std::vector<Parameter*>& out) {
  out.push_back(&w_input);
  out.push_back(&w_hidden);
  out.push_back(&bias);
}

BiLstm::BiLstm(const std::string& name, int input_dim,
               int hidden_per_direction, std::mt19937_64& rng)
    : forward_cell(name + ".fw", input_dim, hidden_per_direction, rng),
      backward_cell(name + ".bw", input_dim, hidden_per_direction, rng) {}

Var BiLstm::run(Graph& g, Var x) const {
  Var fw = forward_cell.run(g, x, /*backwards=*/false);
  Var bw = backward_cell.run(g, x, /*backwards=*/true);
  return hconcat({fw, bw});
}

void BiLstm::collect(std::vector<Parameter*>& out) {
  forward_cell.collect(out);
  backward_cell.collect(out);
}

}  // namespace asmote::nn
