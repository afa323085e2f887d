// SPDX-License-Identifier: Apache-2.0
//
// Network structure: units with roles, weighted connections with explicit
// one-step delays, memory-block grouping, per-unit biases.
//
// Delay semantics: a connection with delay 1 feeds the destination with the
// source's activation from the previous step; delay 0 feeds the activation
// of the current step. Environmental input always arrives with delay 0.
// Recurrent connections between stepped units (cells, gates, plain recurrent
// units) carry delay 1. Readout connections into Output/Hidden units may
// carry delay 0; the delay-0 subgraph must be acyclic so a step is always
// executable in one sweep.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "seqnet/activation.hpp"

namespace seqnet {

using UnitId = std::size_t;

enum class UnitRole {
  Input,
  Hidden,
  Output,
  Cell,
  InputGate,
  OutputGate,
  ForgetGate,
  GruUnit,
};

bool is_gate(UnitRole r);

struct Unit {
  UnitRole role = UnitRole::Hidden;
  Activation act;
  double bias = 0.0;
  int block = -1;  // memory block id for Cell/*Gate roles, else -1
};

struct Connection {
  UnitId src = 0;
  UnitId dst = 0;
  double weight = 0.0;
  int delay = 1;  // 0 or 1 time steps
};

struct MemoryBlock {
  int id = 0;
  std::vector<UnitId> cells;
  UnitId input_gate = 0;
  UnitId output_gate = 0;
  std::optional<UnitId> forget_gate;
};

// Immutable after construction; weights live in a separate WeightStore owned
// by one trainer at a time. Connection::weight and Unit::bias hold the
// initial values.
struct NetworkSpec {
  std::vector<Unit> units;
  std::vector<Connection> connections;
  std::vector<MemoryBlock> blocks;

  std::size_t size() const { return units.size(); }
  bool is_input(UnitId u) const { return units[u].role == UnitRole::Input; }
  std::vector<UnitId> units_with_role(UnitRole r) const;
  std::size_t count_role(UnitRole r) const;
};

// Mutable weight/bias table, parallel to spec.connections / spec.units.
struct WeightStore {
  std::vector<double> weights;
  std::vector<double> biases;

  static WeightStore from_spec(const NetworkSpec& spec);
};

// Per-weight and per-bias delta sums over an epoch, comparable across
// algorithms.
struct GradientAccumulator {
  std::vector<double> weights;
  std::vector<double> biases;

  explicit GradientAccumulator(const NetworkSpec& spec)
      : weights(spec.connections.size(), 0.0), biases(spec.units.size(), 0.0) {}
  GradientAccumulator() = default;

  void apply_to(WeightStore& store, double scale = 1.0) const;
  double max_abs_difference(const GradientAccumulator& other) const;
  bool all_finite() const;
};

struct Violation {
  std::string rule;
  std::string detail;
};

// Empty result iff the spec satisfies every structural invariant. Violations
// are data, not failures.
std::vector<Violation> validate(const NetworkSpec& spec);

struct Adjacency {
  std::vector<std::vector<UnitId>> predecessors;  // per unit: sources feeding it
  std::vector<std::vector<UnitId>> successors;    // per unit: destinations it feeds
};

Adjacency adjacency(const NetworkSpec& spec);

// Compiled per-unit connection-index lists; trainers iterate these.
struct Wiring {
  std::vector<std::vector<int>> in;   // per dst unit: indices into spec.connections
  std::vector<std::vector<int>> out;  // per src unit: indices into spec.connections

  explicit Wiring(const NetworkSpec& spec);
};

// Topological order of `units` under delay-0 connections only. Throws
// UnsupportedTopology if the delay-0 subgraph has a cycle.
std::vector<UnitId> delay0_order(const NetworkSpec& spec);

struct UnsupportedTopology : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-step update-work counts for a standard LSTM topology (uniform blocks,
// inputs feeding cells, output units fed by cells): block-internal slots
// B*(C*(3*B*C) + B*C), input side In*B*C, output side Out*B*C. Throws
// UnsupportedTopology when blocks are non-uniform.
struct ConnectionCounts {
  long long block_internal = 0;
  long long input_side = 0;
  long long output_side = 0;
  bool operator==(const ConnectionCounts&) const = default;
};

ConnectionCounts count_connections(const NetworkSpec& spec);

// Self-describing text serialization; bit-exact round-trip (doubles use
// shortest round-trip formatting). `store` overrides the spec's initial
// weights/biases when given.
std::string serialize_spec(const NetworkSpec& spec,
                           const WeightStore* store = nullptr);
NetworkSpec parse_spec(const std::string& text);

const char* role_name(UnitRole r);
const char* act_name(ActKind k);

}  // namespace seqnet
