#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "spaceris/rng.hpp"

namespace spaceris::learnkit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Fully connected network: tanh on hidden layers, identity output.
/// All parameters are 64-bit; forward/backward are deterministic.
struct Mlp {
  std::vector<int> dims;   // input, hidden..., output
  std::vector<Mat> w;      // w[l] is dims[l+1] x dims[l]
  std::vector<Vec> b;

  /// Seeded scaled-uniform fan-in initialization.
  static Mlp create(const std::vector<int>& dims, Rng& rng);

  Vec forward(const Vec& input) const;
  int num_layers() const { return static_cast<int>(w.size()); }
  long param_count() const;
};

struct ForwardTrace {
  std::vector<Vec> activations;  // activations[0] = input, back() = output
};

ForwardTrace forward_trace(const Mlp& net, const Vec& input);

struct Gradients {
  std::vector<Mat> w;
  std::vector<Vec> b;

  static Gradients zeros_like(const Mlp& net);
  void add(const Gradients& other);
  void scale(double s);
};

/// Exact reverse-mode gradients of sum(upstream . output) w.r.t. parameters;
/// optionally also w.r.t. the input.
Gradients backward(const Mlp& net, const ForwardTrace& trace, const Vec& upstream,
                   Vec* input_grad = nullptr);

struct AdamState {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<Mat> mw, vw;
  std::vector<Vec> mb, vb;

  static AdamState init(const Mlp& net, double lr = 3e-4);
};

/// Bias-corrected Adam update in place. Refuses the step (throws) on a
/// non-finite gradient.
void adam_step(AdamState& state, Mlp& net, const Gradients& grads);

/// Adam over a bare parameter vector (policy log-std and the like).
struct AdamVec {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  Vec m, v;

  static AdamVec init(int n, double lr = 3e-4);
};

void adam_vec_step(AdamVec& state, Vec& params, const Vec& grad);

// --- Policy heads -----------------------------------------------------------

Vec log_softmax(const Vec& logits);

/// Inverse-CDF categorical sample; writes log pi(a) when logprob != nullptr.
int sample_categorical(const Vec& logits, Rng& rng, double* logprob = nullptr);

double categorical_logprob(const Vec& logits, int action);
double categorical_entropy(const Vec& logits);

/// Diagonal Gaussian with state-independent log-std, sampled in the raw
/// (pre-squash) space; callers map raw actions into their box.
Vec sample_gaussian(const Vec& mean, const Vec& log_std, Rng& rng, double* logprob = nullptr);

double gaussian_logprob(const Vec& mean, const Vec& log_std, const Vec& raw_action);
double gaussian_entropy(const Vec& log_std);

// --- Checkpoints -------------------------------------------------------------
// Binary blocks: magic "SRIS", version u32, u32 rank, u32 dims[rank], then
// row-major little-endian f64 parameters (per layer: W then b). rank == 1
// blocks hold a bare vector.

void save_mlp(std::ostream& os, const Mlp& net);
Mlp load_mlp(std::istream& is);
void save_vec(std::ostream& os, const Vec& v);
Vec load_vec(std::istream& is);

}  // namespace spaceris::learnkit
