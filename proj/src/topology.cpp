// SPDX-License-Identifier: Apache-2.0

#include "seqnet/topology.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "seqnet/textio.hpp"

namespace seqnet {

bool is_gate(UnitRole r) {
  return r == UnitRole::InputGate || r == UnitRole::OutputGate ||
         r == UnitRole::ForgetGate;
}

std::vector<UnitId> NetworkSpec::units_with_role(UnitRole r) const {
  std::vector<UnitId> out;
  for (UnitId u = 0; u < units.size(); ++u)
    if (units[u].role == r) out.push_back(u);
  return out;
}

std::size_t NetworkSpec::count_role(UnitRole r) const {
  std::size_t n = 0;
  for (const Unit& u : units) n += (u.role == r);
  return n;
}

WeightStore WeightStore::from_spec(const NetworkSpec& spec) {
  WeightStore s;
  s.weights.reserve(spec.connections.size());
  for (const Connection& c : spec.connections) s.weights.push_back(c.weight);
  s.biases.reserve(spec.units.size());
  for (const Unit& u : spec.units) s.biases.push_back(u.bias);
  return s;
}

void GradientAccumulator::apply_to(WeightStore& store, double scale) const {
  for (std::size_t i = 0; i < weights.size(); ++i)
    store.weights[i] += scale * weights[i];
  for (std::size_t i = 0; i < biases.size(); ++i)
    store.biases[i] += scale * biases[i];
}

double GradientAccumulator::max_abs_difference(
    const GradientAccumulator& other) const {
  double m = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    m = std::max(m, std::abs(weights[i] - other.weights[i]));
  for (std::size_t i = 0; i < biases.size(); ++i)
    m = std::max(m, std::abs(biases[i] - other.biases[i]));
  return m;
}

bool GradientAccumulator::all_finite() const {
  for (double v : weights)
    if (!std::isfinite(v)) return false;
  for (double v : biases)
    if (!std::isfinite(v)) return false;
  return true;
}

Adjacency adjacency(const NetworkSpec& spec) {
  Adjacency a;
  a.predecessors.resize(spec.size());
  a.successors.resize(spec.size());
  for (const Connection& c : spec.connections) {
    a.predecessors[c.dst].push_back(c.src);
    a.successors[c.src].push_back(c.dst);
  }
  return a;
}

Wiring::Wiring(const NetworkSpec& spec) {
  in.resize(spec.size());
  out.resize(spec.size());
  for (int i = 0; i < static_cast<int>(spec.connections.size()); ++i) {
    in[spec.connections[i].dst].push_back(i);
    out[spec.connections[i].src].push_back(i);
  }
}

std::vector<UnitId> delay0_order(const NetworkSpec& spec) {
  const std::size_t n = spec.size();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<UnitId>> succ0(n);
  for (const Connection& c : spec.connections) {
    if (c.delay == 0) {
      ++indegree[c.dst];
      succ0[c.src].push_back(c.dst);
    }
  }
  std::vector<UnitId> order;
  order.reserve(n);
  std::vector<UnitId> ready;
  for (UnitId u = 0; u < n; ++u)
    if (indegree[u] == 0) ready.push_back(u);
  while (!ready.empty()) {
    UnitId u = ready.back();
    ready.pop_back();
    order.push_back(u);
    for (UnitId v : succ0[u])
      if (--indegree[v] == 0) ready.push_back(v);
  }
  if (order.size() != n)
    throw UnsupportedTopology("delay-0 subgraph contains a cycle");
  return order;
}

namespace {

bool readout_role(UnitRole r) {
  return r == UnitRole::Output || r == UnitRole::Hidden;
}

}  // namespace

std::vector<Violation> validate(const NetworkSpec& spec) {
  std::vector<Violation> v;
  const std::size_t n = spec.size();

  auto unit_str = [](UnitId u) { return std::to_string(u); };

  std::unordered_map<int, const MemoryBlock*> block_by_id;
  for (const MemoryBlock& b : spec.blocks) {
    if (block_by_id.count(b.id))
      v.push_back({"duplicate block id", "block " + std::to_string(b.id)});
    block_by_id[b.id] = &b;
  }

  for (UnitId u = 0; u < n; ++u) {
    const Unit& unit = spec.units[u];
    const bool blocked = unit.role == UnitRole::Cell || is_gate(unit.role);
    if (blocked && !block_by_id.count(unit.block))
      v.push_back({"unit names missing block",
                   "unit " + unit_str(u) + " block " + std::to_string(unit.block)});
  }

  for (const MemoryBlock& b : spec.blocks) {
    const std::string tag = "block " + std::to_string(b.id);
    if (b.cells.empty()) v.push_back({"block has no cells", tag});
    auto role_ok = [&](UnitId u, UnitRole r) {
      return u < n && spec.units[u].role == r && spec.units[u].block == b.id;
    };
    for (UnitId c : b.cells)
      if (!role_ok(c, UnitRole::Cell))
        v.push_back({"block cell record mismatch", tag + " cell " + unit_str(c)});
    if (!role_ok(b.input_gate, UnitRole::InputGate))
      v.push_back({"block input gate mismatch", tag});
    if (!role_ok(b.output_gate, UnitRole::OutputGate))
      v.push_back({"block output gate mismatch", tag});
    if (b.forget_gate && !role_ok(*b.forget_gate, UnitRole::ForgetGate))
      v.push_back({"block forget gate mismatch", tag});
  }

  for (std::size_t i = 0; i < spec.connections.size(); ++i) {
    const Connection& c = spec.connections[i];
    const std::string tag = "connection " + std::to_string(i) + " (" +
                            unit_str(c.src) + "->" + unit_str(c.dst) + ")";
    if (c.src >= n || c.dst >= n) {
      v.push_back({"connection references unknown unit", tag});
      continue;
    }
    if (spec.units[c.dst].role == UnitRole::Input)
      v.push_back({"input unit has incoming connection", tag});
    if (c.delay != 0 && c.delay != 1)
      v.push_back({"connection delay outside {0,1}", tag});
    if (spec.units[c.src].role == UnitRole::Input && c.delay != 0)
      v.push_back({"environmental input must arrive undelayed", tag});
    if (spec.units[c.src].role != UnitRole::Input && c.delay == 0 &&
        !readout_role(spec.units[c.dst].role))
      v.push_back({"recurrent connection must carry one-step delay", tag});
    if (is_gate(spec.units[c.src].role) &&
        spec.units[c.dst].role == UnitRole::Output)
      v.push_back({"output unit fed by gate", tag});
  }

  // Executability of one sweep: delay-0 edges must be orderable.
  {
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<UnitId>> succ0(n);
    for (const Connection& c : spec.connections) {
      if (c.delay == 0 && c.src < n && c.dst < n) {
        ++indegree[c.dst];
        succ0[c.src].push_back(c.dst);
      }
    }
    std::vector<UnitId> ready;
    std::size_t seen = 0;
    for (UnitId u = 0; u < n; ++u)
      if (indegree[u] == 0) ready.push_back(u);
    while (!ready.empty()) {
      UnitId u = ready.back();
      ready.pop_back();
      ++seen;
      for (UnitId w : succ0[u])
        if (--indegree[w] == 0) ready.push_back(w);
    }
    if (seen != n) v.push_back({"delay-0 subgraph contains a cycle", ""});
  }

  return v;
}

ConnectionCounts count_connections(const NetworkSpec& spec) {
  ConnectionCounts out;
  const long long num_blocks = static_cast<long long>(spec.blocks.size());
  if (num_blocks == 0) return out;

  const long long cells_per_block = static_cast<long long>(spec.blocks[0].cells.size());
  for (const MemoryBlock& b : spec.blocks)
    if (static_cast<long long>(b.cells.size()) != cells_per_block)
      throw UnsupportedTopology("count_connections: non-uniform memory blocks");

  const long long inputs = static_cast<long long>(spec.count_role(UnitRole::Input));
  const long long outputs = static_cast<long long>(spec.count_role(UnitRole::Output));
  const long long bc = num_blocks * cells_per_block;

  out.block_internal = num_blocks * (cells_per_block * (3 * bc) + bc);
  out.input_side = inputs * bc;
  out.output_side = outputs * bc;
  return out;
}

const char* role_name(UnitRole r) {
  switch (r) {
    case UnitRole::Input:      return "input";
    case UnitRole::Hidden:     return "hidden";
    case UnitRole::Output:     return "output";
    case UnitRole::Cell:       return "cell";
    case UnitRole::InputGate:  return "in-gate";
    case UnitRole::OutputGate: return "out-gate";
    case UnitRole::ForgetGate: return "forget-gate";
    case UnitRole::GruUnit:    return "gru";
  }
  return "?";
}

const char* act_name(ActKind k) {
  switch (k) {
    case ActKind::Logistic:   return "logistic";
    case ActKind::CellInput:  return "cell-input";
    case ActKind::CellOutput: return "cell-output";
    case ActKind::Identity:   return "identity";
    case ActKind::Tanh:       return "tanh";
  }
  return "?";
}

namespace {

UnitRole role_from_name(const std::string& s) {
  static const std::map<std::string, UnitRole> m = {
      {"input", UnitRole::Input},         {"hidden", UnitRole::Hidden},
      {"output", UnitRole::Output},       {"cell", UnitRole::Cell},
      {"in-gate", UnitRole::InputGate},   {"out-gate", UnitRole::OutputGate},
      {"forget-gate", UnitRole::ForgetGate}, {"gru", UnitRole::GruUnit},
  };
  auto it = m.find(s);
  if (it == m.end()) throw std::runtime_error("unknown role '" + s + "'");
  return it->second;
}

ActKind act_from_name(const std::string& s) {
  static const std::map<std::string, ActKind> m = {
      {"logistic", ActKind::Logistic},
      {"cell-input", ActKind::CellInput},
      {"cell-output", ActKind::CellOutput},
      {"identity", ActKind::Identity},
      {"tanh", ActKind::Tanh},
  };
  auto it = m.find(s);
  if (it == m.end()) throw std::runtime_error("unknown activation '" + s + "'");
  return it->second;
}

}  // namespace

std::string serialize_spec(const NetworkSpec& spec, const WeightStore* store) {
  std::ostringstream os;
  os << "seqnet-spec v1\n";
  for (UnitId u = 0; u < spec.size(); ++u) {
    const Unit& unit = spec.units[u];
    const double bias = store ? store->biases[u] : unit.bias;
    os << "unit " << u << ' ' << role_name(unit.role) << " act "
       << act_name(unit.act.kind) << " slope " << format_double(unit.act.slope)
       << " bias " << format_double(bias) << " block " << unit.block << '\n';
  }
  for (std::size_t i = 0; i < spec.connections.size(); ++i) {
    const Connection& c = spec.connections[i];
    const double w = store ? store->weights[i] : c.weight;
    os << "conn " << c.src << ' ' << c.dst << ' ' << format_double(w) << ' '
       << c.delay << '\n';
  }
  for (const MemoryBlock& b : spec.blocks) {
    os << "block " << b.id << " in " << b.input_gate << " out " << b.output_gate
       << " forget ";
    if (b.forget_gate)
      os << *b.forget_gate;
    else
      os << '-';
    os << " cells";
    for (UnitId c : b.cells) os << ' ' << c;
    os << '\n';
  }
  os << "end\n";
  return os.str();
}

NetworkSpec parse_spec(const std::string& text) {
  NetworkSpec spec;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "seqnet-spec v1")
    throw std::runtime_error("parse_spec: missing header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "end") break;
    if (kw == "unit") {
      std::size_t id;
      std::string role, tok, act, slope, bias;
      int block;
      ls >> id >> role >> tok >> act >> tok >> slope >> tok >> bias >> tok >> block;
      if (!ls) throw std::runtime_error("parse_spec: bad unit record: " + line);
      if (id != spec.units.size())
        throw std::runtime_error("parse_spec: unit records must be dense");
      Unit u;
      u.role = role_from_name(role);
      u.act.kind = act_from_name(act);
      u.act.slope = parse_double(slope);
      u.bias = parse_double(bias);
      u.block = block;
      spec.units.push_back(u);
    } else if (kw == "conn") {
      std::size_t src, dst;
      std::string w;
      int delay;
      ls >> src >> dst >> w >> delay;
      if (!ls) throw std::runtime_error("parse_spec: bad conn record: " + line);
      spec.connections.push_back({src, dst, parse_double(w), delay});
    } else if (kw == "block") {
      MemoryBlock b;
      std::string tok, forget;
      ls >> b.id >> tok >> b.input_gate >> tok >> b.output_gate >> tok >> forget >>
          tok;
      if (!ls) throw std::runtime_error("parse_spec: bad block record: " + line);
      if (forget != "-") b.forget_gate = parse_u64(forget);
      std::size_t c;
      while (ls >> c) b.cells.push_back(c);
      spec.blocks.push_back(b);
    } else {
      throw std::runtime_error("parse_spec: unknown record '" + kw + "'");
    }
  }
  return spec;
}

}  // namespace seqnet
