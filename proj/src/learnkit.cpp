#include "spaceris/learnkit.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace spaceris::learnkit {

Mlp Mlp::create(const std::vector<int>& dims, Rng& rng) {
  if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("Mlp: non-positive layer dim");
  Mlp net;
  net.dims = dims;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const double bound = std::sqrt(1.0 / dims[l]);
    Mat w(dims[l + 1], dims[l]);
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-bound, bound);
    net.w.push_back(std::move(w));
    net.b.push_back(Vec::Zero(dims[l + 1]));
  }
  return net;
}

long Mlp::param_count() const {
  long n = 0;
  for (std::size_t l = 0; l < w.size(); ++l) n += w[l].size() + b[l].size();
  return n;
}

Vec Mlp::forward(const Vec& input) const {
  if (input.size() != dims.front())
    throw std::invalid_argument("Mlp::forward: input dim mismatch");
  Vec a = input;
  for (int l = 0; l < num_layers(); ++l) {
    a = (w[l] * a + b[l]).eval();
    if (l + 1 < num_layers()) a = a.array().tanh().matrix();
  }
  return a;
}

ForwardTrace forward_trace(const Mlp& net, const Vec& input) {
  if (input.size() != net.dims.front())
    throw std::invalid_argument("forward_trace: input dim mismatch");
  ForwardTrace t;
  t.activations.reserve(net.num_layers() + 1);
  t.activations.push_back(input);
  for (int l = 0; l < net.num_layers(); ++l) {
    Vec a = net.w[l] * t.activations.back() + net.b[l];
    if (l + 1 < net.num_layers()) a = a.array().tanh().matrix();
    t.activations.push_back(std::move(a));
  }
  return t;
}

Gradients Gradients::zeros_like(const Mlp& net) {
  Gradients g;
  for (int l = 0; l < net.num_layers(); ++l) {
    g.w.push_back(Mat::Zero(net.w[l].rows(), net.w[l].cols()));
    g.b.push_back(Vec::Zero(net.b[l].size()));
  }
  return g;
}

void Gradients::add(const Gradients& other) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    w[l] += other.w[l];
    b[l] += other.b[l];
  }
}

void Gradients::scale(double s) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    w[l] *= s;
    b[l] *= s;
  }
}

Gradients backward(const Mlp& net, const ForwardTrace& trace, const Vec& upstream,
                   Vec* input_grad) {
  const int layers = net.num_layers();
  if (static_cast<int>(trace.activations.size()) != layers + 1)
    throw std::invalid_argument("backward: trace does not match network");
  Gradients g = Gradients::zeros_like(net);
  Vec delta = upstream;  // dL/d(pre-activation) once the tanh factor is applied
  for (int l = layers - 1; l >= 0; --l) {
    if (l + 1 < layers) {
      // activations[l+1] = tanh(z_l) for hidden layers.
      delta = delta.cwiseProduct(
          (1.0 - trace.activations[l + 1].array().square()).matrix());
    }
    g.w[l] = delta * trace.activations[l].transpose();
    g.b[l] = delta;
    delta = (net.w[l].transpose() * delta).eval();
  }
  if (input_grad) *input_grad = delta;
  return g;
}

AdamState AdamState::init(const Mlp& net, double lr) {
  AdamState s;
  s.lr = lr;
  for (int l = 0; l < net.num_layers(); ++l) {
    s.mw.push_back(Mat::Zero(net.w[l].rows(), net.w[l].cols()));
    s.vw.push_back(Mat::Zero(net.w[l].rows(), net.w[l].cols()));
    s.mb.push_back(Vec::Zero(net.b[l].size()));
    s.vb.push_back(Vec::Zero(net.b[l].size()));
  }
  return s;
}

void adam_step(AdamState& s, Mlp& net, const Gradients& g) {
  for (std::size_t l = 0; l < g.w.size(); ++l)
    if (!g.w[l].allFinite() || !g.b[l].allFinite())
      throw std::runtime_error("adam_step: non-finite gradient, step refused");
  s.step += 1;
  const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  for (int l = 0; l < net.num_layers(); ++l) {
    s.mw[l] = s.beta1 * s.mw[l] + (1.0 - s.beta1) * g.w[l];
    s.vw[l] = s.beta2 * s.vw[l] + (1.0 - s.beta2) * g.w[l].cwiseProduct(g.w[l]);
    s.mb[l] = s.beta1 * s.mb[l] + (1.0 - s.beta1) * g.b[l];
    s.vb[l] = s.beta2 * s.vb[l] + (1.0 - s.beta2) * g.b[l].cwiseProduct(g.b[l]);
    net.w[l] -= (s.lr * (s.mw[l] / bc1).array() / ((s.vw[l] / bc2).array().sqrt() + s.eps))
                    .matrix();
    net.b[l] -= (s.lr * (s.mb[l] / bc1).array() / ((s.vb[l] / bc2).array().sqrt() + s.eps))
                    .matrix();
  }
}

AdamVec AdamVec::init(int n, double lr) {
  AdamVec s;
  s.lr = lr;
  s.m = Vec::Zero(n);
  s.v = Vec::Zero(n);
  return s;
}

void adam_vec_step(AdamVec& s, Vec& params, const Vec& grad) {
  if (!grad.allFinite()) throw std::runtime_error("adam_vec_step: non-finite gradient");
  s.step += 1;
  const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  s.m = s.beta1 * s.m + (1.0 - s.beta1) * grad;
  s.v = s.beta2 * s.v + (1.0 - s.beta2) * grad.cwiseProduct(grad);
  params -= (s.lr * (s.m / bc1).array() / ((s.v / bc2).array().sqrt() + s.eps)).matrix();
}

Vec log_softmax(const Vec& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return (logits.array() - lse).matrix();
}

int sample_categorical(const Vec& logits, Rng& rng, double* logprob) {
  const Vec lp = log_softmax(logits);
  const double u = rng.uniform();
  double cum = 0.0;
  int action = static_cast<int>(logits.size()) - 1;
  for (int i = 0; i < logits.size(); ++i) {
    cum += std::exp(lp(i));
    if (u < cum) {
      action = i;
      break;
    }
  }
  if (logprob) *logprob = lp(action);
  return action;
}

double categorical_logprob(const Vec& logits, int action) {
  if (action < 0 || action >= logits.size())
    throw std::invalid_argument("categorical_logprob: action out of range");
  return log_softmax(logits)(action);
}

double categorical_entropy(const Vec& logits) {
  const Vec lp = log_softmax(logits);
  double h = 0.0;
  for (int i = 0; i < lp.size(); ++i) {
    const double p = std::exp(lp(i));
    if (p > 0.0) h -= p * lp(i);
  }
  return h;
}

Vec sample_gaussian(const Vec& mean, const Vec& log_std, Rng& rng, double* logprob) {
  if (mean.size() != log_std.size())
    throw std::invalid_argument("sample_gaussian: mean/log_std size mismatch");
  Vec raw(mean.size());
  for (int i = 0; i < mean.size(); ++i) raw(i) = mean(i) + std::exp(log_std(i)) * rng.normal();
  if (logprob) *logprob = gaussian_logprob(mean, log_std, raw);
  return raw;
}

double gaussian_logprob(const Vec& mean, const Vec& log_std, const Vec& raw) {
  double lp = 0.0;
  for (int i = 0; i < mean.size(); ++i) {
    const double s = std::exp(log_std(i));
    const double z = (raw(i) - mean(i)) / s;
    lp += -0.5 * z * z - log_std(i) - 0.5 * std::log(2.0 * M_PI);
  }
  return lp;
}

double gaussian_entropy(const Vec& log_std) {
  return log_std.sum() + 0.5 * log_std.size() * std::log(2.0 * M_PI * M_E);
}

// --- Checkpoints --------------------------------------------------------------

namespace {
constexpr char kMagic[4] = {'S', 'R', 'I', 'S'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char buf[4];
  is.read(reinterpret_cast<char*>(buf), 4);
  if (!is) throw std::runtime_error("checkpoint: truncated u32");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& os, double d) {
  std::uint64_t bits;
  static_assert(sizeof bits == sizeof d);
  std::memcpy(&bits, &d, sizeof bits);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

double read_f64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) throw std::runtime_error("checkpoint: truncated f64");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  double d;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

void write_header(std::ostream& os, const std::vector<int>& dims) {
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(dims.size()));
  for (int d : dims) write_u32(os, static_cast<std::uint32_t>(d));
}

std::vector<int> read_header(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  const std::uint32_t version = read_u32(is);
  if (version != kVersion) throw std::runtime_error("checkpoint: unsupported version");
  const std::uint32_t rank = read_u32(is);
  if (rank == 0 || rank > 64) throw std::runtime_error("checkpoint: bad rank");
  std::vector<int> dims(rank);
  for (auto& d : dims) d = static_cast<int>(read_u32(is));
  return dims;
}
}  // namespace

void save_mlp(std::ostream& os, const Mlp& net) {
  write_header(os, net.dims);
  for (int l = 0; l < net.num_layers(); ++l) {
    for (int i = 0; i < net.w[l].rows(); ++i)
      for (int j = 0; j < net.w[l].cols(); ++j) write_f64(os, net.w[l](i, j));
    for (int i = 0; i < net.b[l].size(); ++i) write_f64(os, net.b[l](i));
  }
}

Mlp load_mlp(std::istream& is) {
  const std::vector<int> dims = read_header(is);
  if (dims.size() < 2) throw std::runtime_error("checkpoint: vector block where MLP expected");
  Mlp net;
  net.dims = dims;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Mat w(dims[l + 1], dims[l]);
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j) w(i, j) = read_f64(is);
    Vec b(dims[l + 1]);
    for (int i = 0; i < b.size(); ++i) b(i) = read_f64(is);
    net.w.push_back(std::move(w));
    net.b.push_back(std::move(b));
  }
  return net;
}

void save_vec(std::ostream& os, const Vec& v) {
  write_header(os, {static_cast<int>(v.size())});
  for (int i = 0; i < v.size(); ++i) write_f64(os, v(i));
}

Vec load_vec(std::istream& is) {
  const std::vector<int> dims = read_header(is);
  if (dims.size() != 1) throw std::runtime_error("checkpoint: MLP block where vector expected");
  Vec v(dims[0]);
  for (int i = 0; i < v.size(); ++i) v(i) = read_f64(is);
  return v;
}

}  // namespace spaceris::learnkit
