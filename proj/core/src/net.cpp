#include "mbrd/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mbrd/rng.hpp"

namespace mbrd {

void NetSpec::validate() const {
  if (input_dim < 1 || output_dim < 1)
    throw std::invalid_argument("NetSpec: dims must be >= 1");
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("NetSpec: hidden width must be >= 1");
}

int NetSpec::param_count() const {
  int total = 0;
  int in = input_dim;
  for (int h : hidden) {
    total += in * h + h;
    in = h;
  }
  total += in * output_dim + output_dim;
  return total;
}

const ParamSlice& ParamVector::slice(const std::string& name) const {
  for (const auto& s : slices)
    if (s.name == name) return s;
  throw std::invalid_argument("ParamVector: no slice named " + name);
}

ParamVector init_params(const NetSpec& spec, std::uint64_t seed) {
  spec.validate();
  ParamVector p;
  p.values.assign(spec.param_count(), 0.0);
  Rng rng = make_rng(seed);

  int offset = 0;
  int in = spec.input_dim;
  std::vector<int> outs = spec.hidden;
  outs.push_back(spec.output_dim);
  for (size_t l = 0; l < outs.size(); ++l) {
    int out = outs[l];
    double scale = 1.0 / std::sqrt(static_cast<double>(in));
    p.slices.push_back({"W" + std::to_string(l), offset, in * out});
    for (int i = 0; i < in * out; ++i)
      p.values[offset + i] = (2.0 * uniform01(rng) - 1.0) * scale;
    offset += in * out;
    p.slices.push_back({"b" + std::to_string(l), offset, out});
    offset += out;  // biases stay zero
    in = out;
  }
  return p;
}

void net_forward(const NetSpec& spec, const ParamVector& params,
                 const double* obs, NetWorkspace& ws) {
  const int layers = spec.layer_count();
  ws.acts.resize(layers + 1);
  ws.pre.resize(layers);

  ws.acts[0].assign(obs, obs + spec.input_dim);
  const double* w = params.values.data();
  int offset = 0;
  int in = spec.input_dim;
  for (int l = 0; l < layers; ++l) {
    const bool last = (l == layers - 1);
    const int out = last ? spec.output_dim : spec.hidden[l];
    ws.pre[l].assign(out, 0.0);
    ws.acts[l + 1].resize(out);
    const double* x = ws.acts[l].data();
    for (int o = 0; o < out; ++o) {
      const double* row = w + offset + o * in;
      double z = 0.0;
      for (int i = 0; i < in; ++i) z += row[i] * x[i];
      z += w[offset + in * out + o];
      ws.pre[l][o] = z;
      ws.acts[l + 1][o] = last ? z : std::max(0.0, z);
    }
    offset += in * out + out;
    in = out;
  }
}

void net_backward(const NetSpec& spec, const ParamVector& params,
                  NetWorkspace& ws, const double* dout, double* grad) {
  const int layers = spec.layer_count();
  // layer offsets
  std::vector<int>& offsets = ws.offsets;
  offsets.resize(layers);
  {
    int off = 0, in = spec.input_dim;
    for (int l = 0; l < layers; ++l) {
      const int out = (l == layers - 1) ? spec.output_dim : spec.hidden[l];
      offsets[l] = off;
      off += in * out + out;
      in = out;
    }
  }

  const double* w = params.values.data();
  std::vector<double>& delta = ws.delta;
  delta.assign(dout, dout + spec.output_dim);
  for (int l = layers - 1; l >= 0; --l) {
    const int in = (l == 0) ? spec.input_dim : spec.hidden[l - 1];
    const int out = static_cast<int>(ws.pre[l].size());
    const double* x = ws.acts[l].data();
    const int off = offsets[l];
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      double* grow = grad + off + o * in;
      for (int i = 0; i < in; ++i) grow[i] += d * x[i];
      grad[off + in * out + o] += d;
    }
    if (l > 0) {
      std::vector<double>& prev = ws.delta_prev;
      prev.assign(static_cast<std::size_t>(in), 0.0);
      for (int o = 0; o < out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* row = w + off + o * in;
        for (int i = 0; i < in; ++i) prev[i] += d * row[i];
      }
      // ReLU gate of the layer below
      for (int i = 0; i < in; ++i)
        if (ws.pre[l - 1][i] <= 0.0) prev[i] = 0.0;
      std::swap(delta, prev);
    }
  }
}

static void check_obs_dim(const NetSpec& spec, const std::vector<double>& obs) {
  if (static_cast<int>(obs.size()) != spec.input_dim)
    throw std::invalid_argument("observation length " + std::to_string(obs.size()) +
                                " does not match input_dim " +
                                std::to_string(spec.input_dim));
}

std::vector<double> softmax(const std::vector<double>& logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> policy_forward(const NetSpec& spec, const ParamVector& params,
                                   const std::vector<double>& obs) {
  check_obs_dim(spec, obs);
  NetWorkspace ws;
  net_forward(spec, params, obs.data(), ws);
  return softmax(ws.acts.back());
}

LogProbGrad log_prob_grad(const NetSpec& spec, const ParamVector& params,
                          const std::vector<double>& obs, int action) {
  check_obs_dim(spec, obs);
  if (action < 0 || action >= spec.output_dim)
    throw std::invalid_argument("action index out of range");
  NetWorkspace ws;
  net_forward(spec, params, obs.data(), ws);
  std::vector<double> probs = softmax(ws.acts.back());

  LogProbGrad out;
  out.log_prob = std::log(probs[action]);
  out.grad.assign(params.size(), 0.0);
  // d log p(a) / d logits = e_a - p
  std::vector<double> dlogits(probs.size());
  for (size_t i = 0; i < probs.size(); ++i)
    dlogits[i] = (static_cast<int>(i) == action ? 1.0 : 0.0) - probs[i];
  net_backward(spec, params, ws, dlogits.data(), out.grad.data());
  return out;
}

double value_forward(const NetSpec& spec, const ParamVector& params,
                     const std::vector<double>& obs) {
  check_obs_dim(spec, obs);
  NetWorkspace ws;
  net_forward(spec, params, obs.data(), ws);
  return ws.acts.back()[0];
}

ValueGrad value_grad(const NetSpec& spec, const ParamVector& params,
                     const std::vector<double>& obs) {
  check_obs_dim(spec, obs);
  NetWorkspace ws;
  net_forward(spec, params, obs.data(), ws);
  ValueGrad out;
  out.value = ws.acts.back()[0];
  out.grad.assign(params.size(), 0.0);
  double done = 1.0;
  net_backward(spec, params, ws, &done, out.grad.data());
  return out;
}

OptimizerState OptimizerState::make(int dim, double alpha) {
  OptimizerState s;
  s.m.assign(dim, 0.0);
  s.v.assign(dim, 0.0);
  s.alpha = alpha;
  return s;
}

void adaptive_step(std::vector<double>& values, const std::vector<double>& grad,
                   OptimizerState& state) {
  if (grad.size() != values.size())
    throw std::invalid_argument("gradient length does not match parameter length");
  for (double g : grad)
    if (!std::isfinite(g)) throw NumericalError("non-finite gradient entry");

  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < values.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    values[i] -= state.alpha * mhat / (std::sqrt(vhat) + state.eps);
  }
}

void adaptive_step(ParamVector& params, const std::vector<double>& grad,
                   OptimizerState& state) {
  adaptive_step(params.values, grad, state);
}

}  // namespace mbrd
