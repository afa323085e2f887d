// SPDX-License-Identifier: Apache-2.0

#include "seqnet/rnn.hpp"

#include <cmath>
#include <stdexcept>

namespace seqnet {

void require_simple_recurrent(const NetworkSpec& spec) {
  for (const Connection& c : spec.connections) {
    const bool from_input = spec.units[c.src].role == UnitRole::Input;
    if (spec.units[c.dst].role == UnitRole::Input)
      throw UnsupportedTopology("connection into input unit");
    if (from_input && c.delay != 0)
      throw UnsupportedTopology("input connection must have delay 0");
    if (!from_input && c.delay != 1)
      throw UnsupportedTopology("recurrent connection must have delay 1");
  }
}

std::pair<std::vector<double>, std::vector<double>> rnn_step(
    const NetworkSpec& spec, const WeightStore& store,
    const std::vector<double>& prev_y, const std::vector<double>& input) {
  if (prev_y.size() != spec.size())
    throw std::invalid_argument("rnn_step: prev_y size mismatch");
  std::vector<double> y(spec.size(), 0.0), net(spec.size(), 0.0);

  std::size_t k = 0;
  for (UnitId u = 0; u < spec.size(); ++u)
    if (spec.is_input(u)) {
      if (k >= input.size())
        throw std::invalid_argument("rnn_step: input vector too short");
      y[u] = input[k++];
    }
  if (k != input.size())
    throw std::invalid_argument("rnn_step: input vector too long");

  for (const Connection& c : spec.connections)
    net[c.dst] += store.weights[&c - spec.connections.data()] *
                  (c.delay == 1 ? prev_y[c.src] : y[c.src]);

  for (UnitId u = 0; u < spec.size(); ++u) {
    if (spec.is_input(u)) continue;
    y[u] = act_eval(spec.units[u].act, net[u] + store.biases[u]);
  }
  return {std::move(y), std::move(net)};
}

EpochTrace rnn_run(const NetworkSpec& spec, const WeightStore& store,
                   const std::vector<std::vector<double>>& inputs,
                   const std::vector<std::vector<double>>& targets,
                   const std::vector<std::vector<std::uint8_t>>& masks) {
  require_simple_recurrent(spec);
  const int steps = static_cast<int>(inputs.size());
  if (static_cast<int>(targets.size()) != steps ||
      static_cast<int>(masks.size()) != steps)
    throw std::invalid_argument("rnn_run: inputs/targets/masks length mismatch");

  EpochTrace trace;
  trace.y.assign(1, std::vector<double>(spec.size(), 0.0));
  trace.input.assign(1, {});
  trace.net.assign(1, {});
  trace.target.assign(1, {});
  trace.mask.assign(1, {});

  for (int t = 0; t < steps; ++t) {
    auto [y, net] = rnn_step(spec, store, trace.y.back(), inputs[t]);
    trace.y.push_back(std::move(y));
    trace.net.push_back(std::move(net));
    trace.input.push_back(inputs[t]);
    trace.target.push_back(targets[t]);
    trace.mask.push_back(masks[t]);
  }
  return trace;
}

double epoch_total_error(const NetworkSpec& spec, const EpochTrace& trace) {
  double total = 0.0;
  for (int t = 1; t <= trace.steps(); ++t)
    for (UnitId u = 0; u < spec.size(); ++u)
      if (trace.mask[t][u]) {
        const double e = trace.target[t][u] - trace.y[t][u];
        total += 0.5 * e * e;
      }
  return total;
}

namespace {

// x_{v->u}(t): the value that multiplied w_{v->u} when net_u(t) was formed.
inline double forward_operand(const Connection& c, const EpochTrace& trace,
                              int t) {
  return c.delay == 1 ? trace.y[t - 1][c.src] : trace.y[t][c.src];
}

}  // namespace

GradientAccumulator bptt_epoch(const NetworkSpec& spec, const WeightStore& store,
                               const EpochTrace& trace,
                               const RnnTrainOptions& opt) {
  require_simple_recurrent(spec);
  const int T = trace.steps();
  const Wiring wiring(spec);

  GradientAccumulator grad(spec);
  std::vector<double> theta_next(spec.size(), 0.0);
  std::vector<double> theta(spec.size(), 0.0);

  for (int t = T; t >= 1; --t) {
    for (UnitId u = 0; u < spec.size(); ++u) {
      if (spec.is_input(u)) {
        theta[u] = 0.0;
        continue;
      }
      double err = trace.mask[t][u] ? trace.target[t][u] - trace.y[t][u] : 0.0;
      if (t < T)
        for (int ci : wiring.out[u]) {
          const Connection& c = spec.connections[ci];
          if (c.delay == 1) err += store.weights[ci] * theta_next[c.dst];
        }
      theta[u] =
          err * act_deriv(spec.units[u].act, trace.net[t][u] + store.biases[u]);
    }
    for (std::size_t ci = 0; ci < spec.connections.size(); ++ci) {
      const Connection& c = spec.connections[ci];
      grad.weights[ci] +=
          opt.learning_rate * theta[c.dst] * forward_operand(c, trace, t);
    }
    if (opt.train_bias)
      for (UnitId u = 0; u < spec.size(); ++u)
        if (!spec.is_input(u)) grad.biases[u] += opt.learning_rate * theta[u];
    std::swap(theta, theta_next);
  }
  return grad;
}

namespace {

struct RtrlContext {
  std::vector<UnitId> noninput;              // dense list
  std::vector<int> noninput_index;           // unit -> dense index or -1
  std::vector<std::vector<int>> rec_in;      // per non-input dense k: delay-1 in-edges
  std::size_t n_conn = 0;
  std::size_t n_bias = 0;                    // == noninput count when biases train
  std::size_t slots() const { return n_conn + n_bias; }
};

RtrlContext make_context(const NetworkSpec& spec, bool train_bias) {
  RtrlContext ctx;
  ctx.noninput_index.assign(spec.size(), -1);
  for (UnitId u = 0; u < spec.size(); ++u)
    if (!spec.is_input(u)) {
      ctx.noninput_index[u] = static_cast<int>(ctx.noninput.size());
      ctx.noninput.push_back(u);
    }
  ctx.rec_in.resize(ctx.noninput.size());
  for (int ci = 0; ci < static_cast<int>(spec.connections.size()); ++ci) {
    const Connection& c = spec.connections[ci];
    if (c.delay == 1) ctx.rec_in[ctx.noninput_index[c.dst]].push_back(ci);
  }
  ctx.n_conn = spec.connections.size();
  ctx.n_bias = train_bias ? ctx.noninput.size() : 0;
  return ctx;
}

// One sensitivity update for slot s. p layouts are [slot * n_k + k].
inline void update_slot(const NetworkSpec& spec, const WeightStore& store,
                        const RtrlContext& ctx, const std::vector<double>& prev_y,
                        const std::vector<double>& cur_y,
                        const std::vector<double>& cur_net,
                        const double* p_old, double* p_new, std::size_t s) {
  const std::size_t n_k = ctx.noninput.size();
  // Kronecker destination and forward operand of the slot.
  UnitId slot_dst;
  double x;
  if (s < ctx.n_conn) {
    const Connection& c = spec.connections[s];
    slot_dst = c.dst;
    x = c.delay == 1 ? prev_y[c.src] : cur_y[c.src];
  } else {
    slot_dst = ctx.noninput[s - ctx.n_conn];
    x = 1.0;  // bias acts as a weight from a constant-1 pseudo-input
  }
  for (std::size_t k = 0; k < n_k; ++k) {
    const UnitId ku = ctx.noninput[k];
    double acc = slot_dst == ku ? x : 0.0;
    for (int ci : ctx.rec_in[k]) {
      const Connection& c = spec.connections[ci];
      acc += store.weights[ci] *
             p_old[s * n_k + ctx.noninput_index[c.src]];
    }
    p_new[s * n_k + k] =
        act_deriv(spec.units[ku].act, cur_net[ku] + store.biases[ku]) * acc;
  }
}

}  // namespace

GradientAccumulator rtrl_epoch(const NetworkSpec& spec, WeightStore& store,
                               const std::vector<std::vector<double>>& inputs,
                               const std::vector<std::vector<double>>& targets,
                               const std::vector<std::vector<std::uint8_t>>& masks,
                               const RnnTrainOptions& opt) {
  require_simple_recurrent(spec);
  const int steps = static_cast<int>(inputs.size());
  if (static_cast<int>(targets.size()) != steps ||
      static_cast<int>(masks.size()) != steps)
    throw std::invalid_argument("rtrl_epoch: inputs/targets/masks length mismatch");
  for (int t = 0; t < steps; ++t)
    if (targets[t].size() != spec.size() || masks[t].size() != spec.size())
      throw std::invalid_argument("rtrl_epoch: missing target at step " +
                                  std::to_string(t));

  const RtrlContext ctx = make_context(spec, opt.train_bias);
  const std::size_t n_k = ctx.noninput.size();
  const std::size_t n_slots = ctx.slots();

  // Sensitivities start at zero: the initial state has no functional
  // dependency on the weights.
  std::vector<double> p_old(n_slots * n_k, 0.0), p_new(n_slots * n_k, 0.0);
  std::vector<double> prev_y(spec.size(), 0.0);

  GradientAccumulator grad(spec);

  for (int t = 0; t < steps; ++t) {
    auto [y, net] = rnn_step(spec, store, prev_y, inputs[t]);

    if (opt.parallel) {
#pragma omp parallel for schedule(static)
      for (long long s = 0; s < static_cast<long long>(n_slots); ++s)
        update_slot(spec, store, ctx, prev_y, y, net, p_old.data(),
                    p_new.data(), static_cast<std::size_t>(s));
    } else {
      for (std::size_t s = 0; s < n_slots; ++s)
        update_slot(spec, store, ctx, prev_y, y, net, p_old.data(),
                    p_new.data(), s);
    }

    GradientAccumulator step_grad;
    GradientAccumulator* sink = &grad;
    if (opt.online_updates) {
      step_grad = GradientAccumulator(spec);
      sink = &step_grad;
    }
    for (std::size_t s = 0; s < n_slots; ++s) {
      double dw = 0.0;
      for (std::size_t k = 0; k < n_k; ++k) {
        const UnitId ku = ctx.noninput[k];
        if (!masks[t][ku]) continue;
        dw += (targets[t][ku] - y[ku]) * p_new[s * n_k + k];
      }
      dw *= opt.learning_rate;
      if (s < ctx.n_conn)
        sink->weights[s] += dw;
      else
        sink->biases[ctx.noninput[s - ctx.n_conn]] += dw;
    }
    if (opt.online_updates) {
      step_grad.apply_to(store);
      for (std::size_t i = 0; i < grad.weights.size(); ++i)
        grad.weights[i] += step_grad.weights[i];
      for (std::size_t i = 0; i < grad.biases.size(); ++i)
        grad.biases[i] += step_grad.biases[i];
    }

    std::swap(p_old, p_new);
    prev_y = std::move(y);
  }
  return grad;
}

std::vector<double> gradient_from_deltas(const GradientAccumulator& acc,
                                         double eta, bool with_bias) {
  std::vector<double> g;
  g.reserve(acc.weights.size() + acc.biases.size());
  for (double v : acc.weights) g.push_back(-v / eta);
  if (with_bias)
    for (double v : acc.biases) g.push_back(-v / eta);
  return g;
}

}  // namespace seqnet
