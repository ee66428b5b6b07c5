#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbrd {

// Raised when an update would propagate non-finite values.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Shape of a fully-connected network: ReLU on hidden layers, linear output.
struct NetSpec {
  int input_dim = 0;
  std::vector<int> hidden;
  int output_dim = 0;

  int param_count() const;
  int layer_count() const { return static_cast<int>(hidden.size()) + 1; }
  void validate() const;
};

struct ParamSlice {
  std::string name;  // "W0", "b0", "W1", ...
  int offset = 0;
  int length = 0;
};

// All parameters of one network as a flat vector. Layout per layer l:
// weights W_l (out x in, row-major) followed by bias b_l. The slice map
// records where each block lives so callers can treat updates and
// policy-gradient vectors as plain vector algebra.
struct ParamVector {
  std::vector<double> values;
  std::vector<ParamSlice> slices;

  int size() const { return static_cast<int>(values.size()); }
  const ParamSlice& slice(const std::string& name) const;
};

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
ParamVector init_params(const NetSpec& spec, std::uint64_t seed);

// Scratch space for a forward/backward pass; reusable across calls.
struct NetWorkspace {
  std::vector<std::vector<double>> acts;  // acts[0] = input, acts[L] = output
  std::vector<std::vector<double>> pre;   // pre-activation per layer
  std::vector<double> delta;
  std::vector<double> delta_prev;  // scratch, avoids per-call allocation
  std::vector<int> offsets;        // layer offsets, rebuilt per backward
};

// Raw network output (logits / value); activations kept for backward.
void net_forward(const NetSpec& spec, const ParamVector& params,
                 const double* obs, NetWorkspace& ws);

// Accumulates d(loss)/d(params) into `grad` (length = param_count) given
// d(loss)/d(output) in `dout`. Requires the workspace of the matching forward.
void net_backward(const NetSpec& spec, const ParamVector& params,
                  NetWorkspace& ws, const double* dout, double* grad);

// Numerically stable softmax.
std::vector<double> softmax(const std::vector<double>& logits);

// Softmax policy head over the net's logits. Entries strictly positive, sum 1.
std::vector<double> policy_forward(const NetSpec& spec, const ParamVector& params,
                                   const std::vector<double>& obs);

// Log-probability of `action` and its gradient w.r.t. the policy parameters.
struct LogProbGrad {
  double log_prob = 0.0;
  std::vector<double> grad;
};
LogProbGrad log_prob_grad(const NetSpec& spec, const ParamVector& params,
                          const std::vector<double>& obs, int action);

// Scalar state value (output_dim must be 1).
double value_forward(const NetSpec& spec, const ParamVector& params,
                     const std::vector<double>& obs);

// Value and its gradient w.r.t. the value-net parameters.
struct ValueGrad {
  double value = 0.0;
  std::vector<double> grad;
};
ValueGrad value_grad(const NetSpec& spec, const ParamVector& params,
                     const std::vector<double>& obs);

// Adam state for one flat parameter vector.
struct OptimizerState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static OptimizerState make(int dim, double alpha);
};

// One bias-corrected Adam descent step, in place. Throws NumericalError on a
// non-finite gradient entry; params are left untouched in that case.
void adaptive_step(ParamVector& params, const std::vector<double>& grad,
                   OptimizerState& state);

// Flat-vector variant used for the intrinsic weights.
void adaptive_step(std::vector<double>& values, const std::vector<double>& grad,
                   OptimizerState& state);

}  // namespace mbrd
