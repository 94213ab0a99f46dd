#include "syncdgc/tigae.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "syncdgc/adam.hpp"
#include "syncdgc/errors.hpp"

namespace syncdgc {

namespace {

Matrix glorot(int rows, int cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / double(rows + cols));
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-limit, limit);
  return m;
}

}  // namespace

ModelParams init_params(int n, int d, int c, int d1, int dz, Rng& rng) {
  if (n < 1 || d < 1 || c < 1 || d1 < 1 || dz < 1)
    throw std::invalid_argument("init_params: all dimensions must be >= 1");
  ModelParams p;
  p.w_a = glorot(c, d, rng);
  p.w_1 = glorot(c, d1, rng);
  p.w_2 = glorot(d1, dz, rng);
  p.w_b = Matrix(n, c);
  return p;
}

GaeParams init_gae_params(int d, int d1, int dz, Rng& rng) {
  if (d < 1 || d1 < 1 || dz < 1)
    throw std::invalid_argument("init_gae_params: all dimensions must be >= 1");
  GaeParams p;
  p.w_1 = glorot(d, d1, rng);
  p.w_2 = glorot(d1, dz, rng);
  return p;
}

EncodeOutput encode(const ModelParams& params, const Matrix& l_norm, const Matrix& x,
                    bool record) {
  if (record) {
    Tape tape;
    TigaeNodes nodes = encode_on_tape(tape, params, l_norm, x);
    return {tape.value(nodes.x_t), tape.value(nodes.z), tape.value(nodes.a_hat)};
  }
  EncodeOutput out;
  out.x_t = add(matmul(x, transpose(params.w_a)), params.w_b);
  Matrix h = relu(matmul(matmul(l_norm, out.x_t), params.w_1));
  out.z = matmul(matmul(l_norm, h), params.w_2);
  out.a_hat = sigmoid(matmul(out.z, transpose(out.z)));
  return out;
}

TigaeNodes encode_on_tape(Tape& tape, const ModelParams& params, const Matrix& l_norm,
                          const Matrix& x) {
  TigaeNodes n;
  n.w_a = tape.param(params.w_a);
  n.w_b = tape.param(params.w_b);
  n.w_1 = tape.param(params.w_1);
  n.w_2 = tape.param(params.w_2);
  const Tape::NodeId xc = tape.constant(x);
  const Tape::NodeId lc = tape.constant(l_norm);
  n.x_t = tape.add(tape.matmul(xc, tape.transpose(n.w_a)), n.w_b);
  const Tape::NodeId h = tape.relu(tape.matmul(tape.matmul(lc, n.x_t), n.w_1));
  n.z = tape.matmul(tape.matmul(lc, h), n.w_2);
  n.a_hat = tape.sigmoid(tape.matmul(n.z, tape.transpose(n.z)));
  return n;
}

EncodeOutput gae_encode(const GaeParams& params, const Matrix& l_norm, const Matrix& x) {
  EncodeOutput out;
  out.x_t = x;
  Matrix h = relu(matmul(matmul(l_norm, x), params.w_1));
  out.z = matmul(matmul(l_norm, h), params.w_2);
  out.a_hat = sigmoid(matmul(out.z, transpose(out.z)));
  return out;
}

GaeNodes gae_encode_on_tape(Tape& tape, const GaeParams& params, const Matrix& l_norm,
                            const Matrix& x) {
  GaeNodes n;
  n.w_1 = tape.param(params.w_1);
  n.w_2 = tape.param(params.w_2);
  const Tape::NodeId xc = tape.constant(x);
  const Tape::NodeId lc = tape.constant(l_norm);
  const Tape::NodeId h = tape.relu(tape.matmul(tape.matmul(lc, xc), n.w_1));
  n.z = tape.matmul(tape.matmul(lc, h), n.w_2);
  n.a_hat = tape.sigmoid(tape.matmul(n.z, tape.transpose(n.z)));
  return n;
}

double pretrain_loss(const EncodeOutput& out, const Matrix& a_tilde, const Matrix& s_x,
                     double alpha) {
  if (!out.a_hat.same_shape(a_tilde))
    throw std::invalid_argument("pretrain_loss: a_hat is " + out.a_hat.shape_str() +
                                " but a_tilde is " + a_tilde.shape_str());
  double loss = frobenius_norm(sub(out.a_hat, a_tilde)) / double(a_tilde.rows());
  if (alpha != 0.0) {
    Matrix y = row_l2_normalize(out.x_t);
    Matrix s_p = matmul(y, transpose(y));
    loss += alpha * elementwise_bce(affine(s_p, 0.5, 0.5), affine(s_x, 0.5, 0.5));
  }
  return loss;
}

Tape::NodeId pretrain_loss_on_tape(Tape& tape, const TigaeNodes& nodes, const Matrix& a_tilde,
                                   const Matrix& s_x, double alpha) {
  const Tape::NodeId at = tape.constant(a_tilde);
  const Tape::NodeId recon =
      tape.scale(tape.frobenius(tape.sub(nodes.a_hat, at)), 1.0 / double(a_tilde.rows()));
  if (alpha == 0.0) return recon;
  const Tape::NodeId y = tape.row_l2_normalize(nodes.x_t);
  const Tape::NodeId s_p = tape.matmul(y, tape.transpose(y));
  const Tape::NodeId pred = tape.affine(s_p, 0.5, 0.5);
  const Tape::NodeId target = tape.constant(affine(s_x, 0.5, 0.5));
  return tape.add(recon, tape.scale(tape.mean_bce(pred, target), alpha));
}

ModelParams pretrain(const Graph& g, const Config& cfg, Rng& rng, std::vector<double>* losses) {
  const Matrix l_norm = normalize(g.adjacency);
  const Matrix a_tilde = with_self_loops(g.adjacency);
  const Matrix s_x = cosine_similarity(g.features);
  ModelParams params = init_params(g.n(), g.features.cols(), cfg.transform_dim,
                                   cfg.hidden_or_default(), cfg.embed_dim, rng);
  Adam opt(cfg.lr);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Tape tape;
    TigaeNodes nodes = encode_on_tape(tape, params, l_norm, g.features);
    const Tape::NodeId loss = pretrain_loss_on_tape(tape, nodes, a_tilde, s_x, cfg.alpha);
    const double lv = tape.value(loss)(0, 0);
    if (!std::isfinite(lv)) throw TrainingError("pretraining loss is not finite", epoch);
    tape.backward(loss);
    opt.step({&params.w_a, &params.w_b, &params.w_1, &params.w_2},
             {&tape.grad(nodes.w_a), &tape.grad(nodes.w_b), &tape.grad(nodes.w_1),
              &tape.grad(nodes.w_2)});
    if (losses) losses->push_back(lv);
  }
  return params;
}

namespace {

constexpr char kMagic[8] = {'S', 'Y', 'N', 'C', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is, const std::string& path) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw IoError("checkpoint truncated: " + path);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

void put_matrix(std::ostream& os, const Matrix& m) {
  put_u32(os, std::uint32_t(m.rows()));
  put_u32(os, std::uint32_t(m.cols()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(m.data()[i]);
    unsigned char b[8];
    for (int j = 0; j < 8; ++j) b[j] = (bits >> (8 * j)) & 0xff;
    os.write(reinterpret_cast<const char*>(b), 8);
  }
}

Matrix get_matrix(std::istream& is, const std::string& path) {
  const std::uint32_t rows = get_u32(is, path);
  const std::uint32_t cols = get_u32(is, path);
  if (rows == 0 || cols == 0 || std::uint64_t(rows) * cols > (1u << 28))
    throw IoError("checkpoint has an implausible matrix shape: " + path);
  Matrix m{int(rows), int(cols)};
  for (std::size_t i = 0; i < m.size(); ++i) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw IoError("checkpoint truncated: " + path);
    std::uint64_t bits = 0;
    for (int j = 0; j < 8; ++j) bits |= std::uint64_t(b[j]) << (8 * j);
    m.data()[i] = std::bit_cast<double>(bits);
  }
  return m;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out.write(kMagic, 8);
  put_u32(out, kVersion);
  put_u32(out, 4);
  put_matrix(out, params.w_a);
  put_matrix(out, params.w_b);
  put_matrix(out, params.w_1);
  put_matrix(out, params.w_2);
  out.flush();
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("not a checkpoint file: " + path);
  const std::uint32_t version = get_u32(in, path);
  if (version != kVersion)
    throw IoError("unsupported checkpoint version " + std::to_string(version) + ": " + path);
  const std::uint32_t count = get_u32(in, path);
  if (count != 4) throw IoError("checkpoint has wrong weight count: " + path);
  ModelParams p;
  p.w_a = get_matrix(in, path);
  p.w_b = get_matrix(in, path);
  p.w_1 = get_matrix(in, path);
  p.w_2 = get_matrix(in, path);
  if (p.w_b.cols() != p.w_a.rows() || p.w_1.rows() != p.w_a.rows() ||
      p.w_2.rows() != p.w_1.cols())
    throw IoError("checkpoint weight shapes are inconsistent: " + path);
  return p;
}

}  // namespace syncdgc
