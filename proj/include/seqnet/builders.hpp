// SPDX-License-Identifier: Apache-2.0
//
// Constructors for the standard topologies exercised throughout the library.

#pragma once

#include <vector>

#include "seqnet/rng.hpp"
#include "seqnet/topology.hpp"

namespace seqnet {

// Loop-free layered net: layers[0] inputs, layers.back() outputs, dense
// connections between consecutive layers, all delay 0; logistic units.
NetworkSpec make_layered_ffnn(const std::vector<int>& layers);

// Fully recurrent net: every non-input unit is fed by every non-input unit
// (self included, delay 1) and by every input unit (delay 0).
NetworkSpec make_fully_recurrent(int inputs, int units,
                                 ActKind kind = ActKind::Logistic);

struct LstmTopologyOptions {
  int inputs = 1;
  int blocks = 1;
  int cells_per_block = 1;
  int outputs = 1;
  int hidden_units = 0;        // readout layer between cells and outputs
  bool forget_gates = true;
  bool inputs_to_gates = true;  // false gives the section-8.4 counting topology
  bool cell_recurrence = true;  // cells+gates fed by every cell (delay 1)
  bool output_bias = false;
  double forget_bias = 1.0;
};

NetworkSpec make_lstm(const LstmTopologyOptions& opt);

// Uniform weights in [-scale, scale]; input/output gate biases drawn from
// [-2, -1]; forget-gate biases left at the spec's fixed value.
void init_weights_uniform(const NetworkSpec& spec, WeightStore& store, Rng& rng,
                          double scale = 0.1);

}  // namespace seqnet
