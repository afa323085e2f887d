// SPDX-License-Identifier: Apache-2.0

#include "seqnet/ffnn.hpp"

#include <cmath>
#include <stdexcept>

namespace seqnet {

int perceptron_output(const std::vector<double>& weights, double bias,
                      const std::vector<double>& input) {
  if (weights.size() != input.size())
    throw std::invalid_argument("perceptron_output: length mismatch");
  double state = bias;
  for (std::size_t i = 0; i < weights.size(); ++i) state += weights[i] * input[i];
  return state > 0.0 ? 1 : -1;
}

PerceptronResult perceptron_train(const std::vector<Sample>& samples,
                                  const TrainConfig& config,
                                  std::vector<double> weights, double bias) {
  if (samples.empty())
    throw std::invalid_argument("perceptron_train: empty sample set");
  PerceptronResult r;
  r.weights = std::move(weights);
  r.bias = bias;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    int misclassified = 0;
    for (const Sample& s : samples) {
      const double d = s.label.at(0);
      const int y = perceptron_output(r.weights, r.bias, s.input);
      if (y != static_cast<int>(d)) {
        ++misclassified;
        const double step = config.learning_rate * (d - y);
        for (std::size_t i = 0; i < r.weights.size(); ++i)
          r.weights[i] += step * s.input[i];
        r.bias += step;  // bias trained as a weight on constant input 1
      }
    }
    ++r.epochs_run;
    if (misclassified == 0) {
      r.converged = true;
      break;
    }
  }
  return r;
}

FfnnState ffnn_forward(const NetworkSpec& spec, const WeightStore& store,
                       const std::vector<double>& input) {
  for (const Connection& c : spec.connections)
    if (c.delay != 0)
      throw UnsupportedTopology("ffnn_forward: delayed connection in a feed-forward net");
  const std::vector<UnitId> order = delay0_order(spec);  // throws on cycles
  const Wiring wiring(spec);

  FfnnState st;
  st.net.assign(spec.size(), 0.0);
  st.state.assign(spec.size(), 0.0);
  st.y.assign(spec.size(), 0.0);

  // Assign inputs first, then evaluate non-input units in topological order.
  std::size_t k = 0;
  for (UnitId u = 0; u < spec.size(); ++u) {
    if (spec.is_input(u)) {
      if (k >= input.size())
        throw std::invalid_argument("ffnn_forward: input vector too short");
      st.y[u] = input[k++];
    }
  }
  if (k != input.size())
    throw std::invalid_argument("ffnn_forward: input vector too long");
  for (UnitId u : order) {
    if (spec.is_input(u)) continue;
    double net = 0.0;
    for (int ci : wiring.in[u]) {
      const Connection& c = spec.connections[ci];
      net += store.weights[ci] * st.y[c.src];
    }
    st.net[u] = net;
    st.state[u] = net + store.biases[u];
    st.y[u] = act_eval(spec.units[u].act, st.state[u]);
  }
  return st;
}

double squared_error(const FfnnState& state, const NetworkSpec& spec,
                     const std::vector<double>& label) {
  double e = 0.0;
  std::size_t k = 0;
  for (UnitId u = 0; u < spec.size(); ++u) {
    if (spec.units[u].role != UnitRole::Output) continue;
    const double d = label.at(k++) - state.y[u];
    e += 0.5 * d * d;
  }
  return e;
}

GradientAccumulator ffnn_backprop_step(const NetworkSpec& spec,
                                       const WeightStore& store,
                                       const FfnnState& state,
                                       const Sample& sample,
                                       const TrainConfig& config) {
  if (state.y.size() != spec.size())
    throw std::invalid_argument("ffnn_backprop_step: state/spec mismatch");
  const Wiring wiring(spec);
  const std::vector<UnitId> order = delay0_order(spec);

  std::vector<double> theta(spec.size(), 0.0);
  std::size_t k = 0;
  std::vector<double> target(spec.size(), 0.0);
  for (UnitId u = 0; u < spec.size(); ++u)
    if (spec.units[u].role == UnitRole::Output) target[u] = sample.label.at(k++);

  // Reverse topological order: outputs first, then everything they feed from.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const UnitId u = *it;
    if (spec.is_input(u)) continue;
    double err;
    if (spec.units[u].role == UnitRole::Output) {
      err = target[u] - state.y[u];
    } else {
      err = 0.0;
      for (int ci : wiring.out[u])
        err += store.weights[ci] * theta[spec.connections[ci].dst];
    }
    theta[u] = err * act_deriv(spec.units[u].act, state.state[u]);
  }

  GradientAccumulator grad(spec);
  for (std::size_t ci = 0; ci < spec.connections.size(); ++ci) {
    const Connection& c = spec.connections[ci];
    grad.weights[ci] = config.learning_rate * theta[c.dst] * state.y[c.src];
  }
  if (config.train_bias)
    for (UnitId u = 0; u < spec.size(); ++u)
      if (!spec.is_input(u)) grad.biases[u] = config.learning_rate * theta[u];
  return grad;
}

FfnnTrainLog ffnn_train(const NetworkSpec& spec, WeightStore& store,
                        const std::vector<Sample>& samples,
                        const TrainConfig& config) {
  if (samples.empty()) throw std::invalid_argument("ffnn_train: empty sample set");
  FfnnTrainLog log;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    double err_sum = 0.0;
    GradientAccumulator batch(spec);
    for (const Sample& s : samples) {
      const FfnnState st = ffnn_forward(spec, store, s.input);
      err_sum += squared_error(st, spec, s.label);
      const GradientAccumulator g = ffnn_backprop_step(spec, store, st, s, config);
      if (config.batch) {
        for (std::size_t i = 0; i < g.weights.size(); ++i)
          batch.weights[i] += g.weights[i];
        for (std::size_t i = 0; i < g.biases.size(); ++i)
          batch.biases[i] += g.biases[i];
      } else {
        g.apply_to(store);
      }
    }
    if (config.batch) batch.apply_to(store);
    log.epoch_error.push_back(err_sum / static_cast<double>(samples.size()));
    if (log.epoch_error.back() < config.stop_tolerance) break;
  }
  return log;
}

}  // namespace seqnet
