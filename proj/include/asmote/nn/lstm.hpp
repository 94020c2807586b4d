#pragma once

#include "asmote/nn/graph.hpp"

#include <vector>

namespace asmote::nn {

// Single-direction LSTM. Gate order in the stacked weight matrices is
// input, forget, cell, output.
struct LstmCell {
  Parameter w_input;   // input_dim x 4*hidden
  Parameter w_hidden;  // hidden x 4*hidden
  Parameter bias;      // 1 x 4*hidden, forget gate initialized to 1
  int hidden = 0;

  LstmCell() = default;
  LstmCell(const std::string& name, int input_dim, int hidden_dim,
           std::mt19937_64& rng);

  // x is (n x input_dim); returns (n x hidden) with row t the state after
  // reading token t in the given direction.
  Var run(Graph& g, Var x, bool backwards) const;

  void collect(std::vector<Parameter*>& out);
};

struct BiLstm {
  LstmCell forward_cell;
  LstmCell backward_cell;

  BiLstm() = default;
  BiLstm(const std::string& name, int input_dim, int hidden_per_direction,
         std::mt19937_64& rng);

  // (n x input_dim) -> (n x 2*hidden_per_direction)
  Var run(Graph& g, Var x) const;

  int output_dim() const { return 2 * forward_cell.hidden; }
  void collect(std::vector<Parameter*>& out);
};

}  // namespace asmote::nn
