// SPDX-License-Identifier: Apache-2.0

#include "seqnet/builders.hpp"

namespace seqnet {

NetworkSpec make_layered_ffnn(const std::vector<int>& layers) {
  NetworkSpec spec;
  std::vector<std::vector<UnitId>> ids(layers.size());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (int i = 0; i < layers[l]; ++i) {
      Unit u;
      u.role = l == 0                  ? UnitRole::Input
               : l + 1 == layers.size() ? UnitRole::Output
                                        : UnitRole::Hidden;
      u.act.kind = ActKind::Logistic;
      ids[l].push_back(spec.units.size());
      spec.units.push_back(u);
    }
  }
  for (std::size_t l = 0; l + 1 < layers.size(); ++l)
    for (UnitId s : ids[l])
      for (UnitId d : ids[l + 1]) spec.connections.push_back({s, d, 0.0, 0});
  return spec;
}

NetworkSpec make_fully_recurrent(int inputs, int units, ActKind kind) {
  NetworkSpec spec;
  for (int i = 0; i < inputs; ++i)
    spec.units.push_back({UnitRole::Input, {ActKind::Identity, 1.0}, 0.0, -1});
  std::vector<UnitId> hidden;
  for (int i = 0; i < units; ++i) {
    hidden.push_back(spec.units.size());
    spec.units.push_back({UnitRole::Hidden, {kind, 1.0}, 0.0, -1});
  }
  for (UnitId d : hidden) {
    for (UnitId s : hidden) spec.connections.push_back({s, d, 0.0, 1});
    for (int i = 0; i < inputs; ++i)
      spec.connections.push_back({static_cast<UnitId>(i), d, 0.0, 0});
  }
  return spec;
}

NetworkSpec make_lstm(const LstmTopologyOptions& opt) {
  NetworkSpec spec;
  std::vector<UnitId> inputs, cells, hidden, outputs;

  for (int i = 0; i < opt.inputs; ++i) {
    inputs.push_back(spec.units.size());
    spec.units.push_back({UnitRole::Input, {ActKind::Identity, 1.0}, 0.0, -1});
  }

  struct BlockUnits {
    std::vector<UnitId> cells;
    UnitId in_gate, out_gate;
    UnitId forget_gate = 0;
  };
  std::vector<BlockUnits> blocks(opt.blocks);

  for (int b = 0; b < opt.blocks; ++b) {
    for (int c = 0; c < opt.cells_per_block; ++c) {
      blocks[b].cells.push_back(spec.units.size());
      cells.push_back(spec.units.size());
      spec.units.push_back({UnitRole::Cell, {ActKind::CellInput, 1.0}, 0.0, b});
    }
    blocks[b].in_gate = spec.units.size();
    spec.units.push_back({UnitRole::InputGate, {ActKind::Logistic, 1.0}, 0.0, b});
    blocks[b].out_gate = spec.units.size();
    spec.units.push_back({UnitRole::OutputGate, {ActKind::Logistic, 1.0}, 0.0, b});
    if (opt.forget_gates) {
      blocks[b].forget_gate = spec.units.size();
      spec.units.push_back(
          {UnitRole::ForgetGate, {ActKind::Logistic, 1.0}, opt.forget_bias, b});
    }
  }

  for (int h = 0; h < opt.hidden_units; ++h) {
    hidden.push_back(spec.units.size());
    spec.units.push_back({UnitRole::Hidden, {ActKind::Logistic, 1.0}, 0.0, -1});
  }
  for (int o = 0; o < opt.outputs; ++o) {
    outputs.push_back(spec.units.size());
    spec.units.push_back({UnitRole::Output, {ActKind::Logistic, 1.0}, 0.0, -1});
  }

  auto feed = [&](UnitId dst, bool gate_dst) {
    if (opt.cell_recurrence)
      for (UnitId c : cells) spec.connections.push_back({c, dst, 0.0, 1});
    if (opt.inputs_to_gates || !gate_dst)
      for (UnitId i : inputs) spec.connections.push_back({i, dst, 0.0, 0});
  };

  for (int b = 0; b < opt.blocks; ++b) {
    for (UnitId c : blocks[b].cells) feed(c, false);
    feed(blocks[b].in_gate, true);
    feed(blocks[b].out_gate, true);
    if (opt.forget_gates) feed(blocks[b].forget_gate, true);
  }

  // Readout: cells -> hidden -> outputs (or cells -> outputs), within-step.
  for (UnitId c : cells) {
    if (opt.hidden_units > 0)
      for (UnitId h : hidden) spec.connections.push_back({c, h, 0.0, 0});
    for (UnitId o : outputs) spec.connections.push_back({c, o, 0.0, 0});
  }
  for (UnitId h : hidden)
    for (UnitId o : outputs) spec.connections.push_back({h, o, 0.0, 0});

  for (int b = 0; b < opt.blocks; ++b) {
    MemoryBlock mb;
    mb.id = b;
    mb.cells = blocks[b].cells;
    mb.input_gate = blocks[b].in_gate;
    mb.output_gate = blocks[b].out_gate;
    if (opt.forget_gates) mb.forget_gate = blocks[b].forget_gate;
    spec.blocks.push_back(mb);
  }
  return spec;
}

void init_weights_uniform(const NetworkSpec& spec, WeightStore& store, Rng& rng,
                          double scale) {
  for (double& w : store.weights) w = rng.uniform(-scale, scale);
  for (UnitId u = 0; u < spec.size(); ++u) {
    if (spec.units[u].role == UnitRole::InputGate ||
        spec.units[u].role == UnitRole::OutputGate)
      store.biases[u] = rng.uniform(-2.0, -1.0);
  }
}

}  // namespace seqnet
