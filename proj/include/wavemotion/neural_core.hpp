#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wavemotion/errors.hpp"
#include "wavemotion/matrix.hpp"
#include "wavemotion/rng.hpp"

namespace wavemotion {

enum class CellKind { vanilla, gru, lstm };

inline std::size_t gate_count(CellKind kind) {
  switch (kind) {
    case CellKind::vanilla: return 1;
    case CellKind::gru: return 3;  // update, reset, candidate
    case CellKind::lstm: return 4; // forget, input, output, candidate
  }
  throw ConfigError("unknown cell kind");
}

inline std::string cell_kind_name(CellKind kind) {
  switch (kind) {
    case CellKind::vanilla: return "vanilla";
    case CellKind::gru: return "gru";
    case CellKind::lstm: return "lstm";
  }
  throw ConfigError("unknown cell kind");
}

inline CellKind cell_kind_from_name(const std::string& name) {
  if (name == "vanilla") return CellKind::vanilla;
  if (name == "gru") return CellKind::gru;
  if (name == "lstm") return CellKind::lstm;
  throw ConfigError("unknown cell kind: " + name);
}

namespace detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// y += W x for a row-major (rows x cols) block.
inline void matvec_acc(const double* w, std::size_t rows, std::size_t cols,
                       const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

/// y += W^T g (g has `rows` entries, y has `cols`).
inline void matvec_t_acc(const double* w, std::size_t rows, std::size_t cols,
                         const double* g, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    const double gr = g[r];
    for (std::size_t c = 0; c < cols; ++c) y[c] += gr * wr[c];
  }
}

/// dW += g x^T.
inline void outer_acc(double* dw, std::size_t rows, std::size_t cols,
                      const double* g, const double* x) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* wr = dw + r * cols;
    const double gr = g[r];
    for (std::size_t c = 0; c < cols; ++c) wr[c] += gr * x[c];
  }
}

}  // namespace detail

/// Weight views for one gate of one layer: input kernel W (hidden x input),
/// recurrent kernel U (hidden x hidden), bias b (hidden).
struct GateView {
  const double* w;
  const double* u;
  const double* b;
};
struct GateViewMut {
  double* w;
  double* u;
  double* b;
};

/// One LSTM cell with explicit matrices; the standalone step entry point
/// used by the scalar-oracle tests. The stack stores the same layout inside
/// its flat parameter vector.
struct LstmCellParams {
  std::size_t input_dim = 0, hidden_dim = 0;
  RealMatrix w_forget, u_forget, w_input, u_input, w_output, u_output,
      w_cand, u_cand;
  std::vector<double> b_forget, b_input, b_output, b_cand;

  void validate() const {
    w_forget.require_shape(hidden_dim, input_dim, "lstm W^f");
    u_forget.require_shape(hidden_dim, hidden_dim, "lstm U^f");
    w_input.require_shape(hidden_dim, input_dim, "lstm W^i");
    u_input.require_shape(hidden_dim, hidden_dim, "lstm U^i");
    w_output.require_shape(hidden_dim, input_dim, "lstm W^o");
    u_output.require_shape(hidden_dim, hidden_dim, "lstm U^o");
    w_cand.require_shape(hidden_dim, input_dim, "lstm W^c");
    u_cand.require_shape(hidden_dim, hidden_dim, "lstm U^c");
    if (b_forget.size() != hidden_dim || b_input.size() != hidden_dim ||
        b_output.size() != hidden_dim || b_cand.size() != hidden_dim)
      throw ConfigError("lstm bias dimension mismatch");
  }
};

struct GruCellParams {
  std::size_t input_dim = 0, hidden_dim = 0;
  RealMatrix w_update, u_update, w_reset, u_reset, w_cand, u_cand;
  std::vector<double> b_update, b_reset, b_cand;
};

namespace detail {

/// Core LSTM step on gate views. Gate activations are written to `gates`
/// (f, i, o, candidate; 4*hidden) when a tape pointer is supplied.
inline void lstm_step_kernel(std::size_t in_dim, std::size_t hid,
                             const GateView& f, const GateView& i,
                             const GateView& o, const GateView& g,
                             const double* x, const double* h_prev,
                             const double* c_prev, double* h_out, double* c_out,
                             double* gates) {
  std::vector<double> pre(4 * hid);
  double* pf = pre.data();
  double* pi = pf + hid;
  double* po = pi + hid;
  double* pg = po + hid;
  for (std::size_t j = 0; j < hid; ++j) {
    pf[j] = f.b[j];
    pi[j] = i.b[j];
    po[j] = o.b[j];
    pg[j] = g.b[j];
  }
  matvec_acc(f.w, hid, in_dim, x, pf);
  matvec_acc(f.u, hid, hid, h_prev, pf);
  matvec_acc(i.w, hid, in_dim, x, pi);
  matvec_acc(i.u, hid, hid, h_prev, pi);
  matvec_acc(o.w, hid, in_dim, x, po);
  matvec_acc(o.u, hid, hid, h_prev, po);
  matvec_acc(g.w, hid, in_dim, x, pg);
  matvec_acc(g.u, hid, hid, h_prev, pg);
  for (std::size_t j = 0; j < hid; ++j) {
    const double fg = sigmoid(pf[j]);
    const double ig = sigmoid(pi[j]);
    const double og = sigmoid(po[j]);
    const double cand = std::tanh(pg[j]);
    const double c = fg * c_prev[j] + ig * cand;
    c_out[j] = c;
    h_out[j] = og * std::tanh(c);
    if (gates) {
      gates[j] = fg;
      gates[hid + j] = ig;
      gates[2 * hid + j] = og;
      gates[3 * hid + j] = cand;
    }
  }
}

/// Core GRU step (update z, reset r, candidate n):
///   z = sigma(Wz x + Uz h + bz), r = sigma(Wr x + Ur h + br)
///   n = tanh(Wn x + Un (r .* h) + bn), h' = (1 - z) .* h + z .* n
/// Gate storage layout when taped: z, r, n (3*hidden).
inline void gru_step_kernel(std::size_t in_dim, std::size_t hid,
                            const GateView& z, const GateView& r,
                            const GateView& n, const double* x,
                            const double* h_prev, double* h_out,
                            double* gates) {
  std::vector<double> pre(3 * hid);
  std::vector<double> rh(hid);
  double* pz = pre.data();
  double* pr = pz + hid;
  double* pn = pr + hid;
  for (std::size_t j = 0; j < hid; ++j) {
    pz[j] = z.b[j];
    pr[j] = r.b[j];
    pn[j] = n.b[j];
  }
  matvec_acc(z.w, hid, in_dim, x, pz);
  matvec_acc(z.u, hid, hid, h_prev, pz);
  matvec_acc(r.w, hid, in_dim, x, pr);
  matvec_acc(r.u, hid, hid, h_prev, pr);
  for (std::size_t j = 0; j < hid; ++j) {
    pz[j] = sigmoid(pz[j]);
    pr[j] = sigmoid(pr[j]);
    rh[j] = pr[j] * h_prev[j];
  }
  matvec_acc(n.w, hid, in_dim, x, pn);
  matvec_acc(n.u, hid, hid, rh.data(), pn);
  for (std::size_t j = 0; j < hid; ++j) {
    const double cand = std::tanh(pn[j]);
    h_out[j] = (1.0 - pz[j]) * h_prev[j] + pz[j] * cand;
    if (gates) {
      gates[j] = pz[j];
      gates[hid + j] = pr[j];
      gates[2 * hid + j] = cand;
    }
  }
}

inline void vanilla_step_kernel(std::size_t in_dim, std::size_t hid,
                                const GateView& g, const double* x,
                                const double* h_prev, double* h_out) {
  std::vector<double> pre(hid);
  for (std::size_t j = 0; j < hid; ++j) pre[j] = g.b[j];
  matvec_acc(g.w, hid, in_dim, x, pre.data());
  matvec_acc(g.u, hid, hid, h_prev, pre.data());
  for (std::size_t j = 0; j < hid; ++j) h_out[j] = std::tanh(pre[j]);
}

}  // namespace detail

/// Single LSTM step: returns (h_t, c_t).
inline std::pair<std::vector<double>, std::vector<double>> lstm_step(
    const LstmCellParams& p, const std::vector<double>& x,
    const std::vector<double>& h_prev, const std::vector<double>& c_prev) {
  p.validate();
  if (x.size() != p.input_dim || h_prev.size() != p.hidden_dim ||
      c_prev.size() != p.hidden_dim)
    throw ConfigError("lstm_step: vector dimension mismatch");
  std::vector<double> h(p.hidden_dim), c(p.hidden_dim);
  detail::lstm_step_kernel(
      p.input_dim, p.hidden_dim,
      {p.w_forget.data.data(), p.u_forget.data.data(), p.b_forget.data()},
      {p.w_input.data.data(), p.u_input.data.data(), p.b_input.data()},
      {p.w_output.data.data(), p.u_output.data.data(), p.b_output.data()},
      {p.w_cand.data.data(), p.u_cand.data.data(), p.b_cand.data()},
      x.data(), h_prev.data(), c_prev.data(), h.data(), c.data(), nullptr);
  return {h, c};
}

/// Single GRU step: returns h_t.
inline std::vector<double> gru_step(const GruCellParams& p,
                                    const std::vector<double>& x,
                                    const std::vector<double>& h_prev) {
  if (x.size() != p.input_dim || h_prev.size() != p.hidden_dim)
    throw ConfigError("gru_step: vector dimension mismatch");
  std::vector<double> h(p.hidden_dim);
  detail::gru_step_kernel(
      p.input_dim, p.hidden_dim,
      {p.w_update.data.data(), p.u_update.data.data(), p.b_update.data()},
      {p.w_reset.data.data(), p.u_reset.data.data(), p.b_reset.data()},
      {p.w_cand.data.data(), p.u_cand.data.data(), p.b_cand.data()},
      x.data(), h_prev.data(), h.data(), nullptr);
  return h;
}

/// Hidden (and, for LSTM, memory) vectors for every layer of a stack.
struct CellState {
  std::vector<std::vector<double>> h;
  std::vector<std::vector<double>> c;  // empty vectors for non-LSTM cells
};

/// Activation record of one forward pass, consumed by `backward_bptt`.
struct ForwardTape {
  std::size_t steps = 0;
  RealMatrix inputs;                    // T x input_dim
  std::vector<RealMatrix> hidden;       // per layer: T x hidden
  std::vector<RealMatrix> memory;       // per layer: T x hidden (LSTM)
  std::vector<RealMatrix> gates;        // per layer: T x (G*hidden)
  CellState initial;
  std::uint64_t stamp = 0;              // parameter revision that produced it
};

/// Layered recurrent network with a linear readout. All parameters live in
/// one flat vector laid out layer by layer (per gate: W, U, b) followed by
/// the readout kernel and bias; gradients share the layout, which keeps
/// Adam, clipping, and finite-difference checks trivial.
class RecurrentStack {
 public:
  RecurrentStack() = default;
  RecurrentStack(CellKind kind, std::size_t input_dim,
                 const std::vector<std::size_t>& hidden_dims,
                 std::size_t output_dim)
      : kind_(kind), input_dim_(input_dim), hidden_dims_(hidden_dims),
        output_dim_(output_dim) {
    if (hidden_dims.empty()) throw ConfigError("stack needs at least one layer");
    if (input_dim == 0 || output_dim == 0)
      throw ConfigError("stack dims must be positive");
    std::size_t total = 0;
    const std::size_t gates = gate_count(kind);
    layer_offsets_.reserve(hidden_dims.size());
    std::size_t in = input_dim;
    for (std::size_t h : hidden_dims) {
      layer_offsets_.push_back(total);
      total += gates * (h * in + h * h + h);
      in = h;
    }
    readout_offset_ = total;
    total += output_dim * hidden_dims.back() + output_dim;
    params_.assign(total, 0.0);
  }

  CellKind kind() const { return kind_; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  std::size_t num_layers() const { return hidden_dims_.size(); }
  const std::vector<std::size_t>& hidden_dims() const { return hidden_dims_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::uint64_t revision() const { return revision_; }
  void bump_revision() { ++revision_; }

  std::size_t layer_input_dim(std::size_t layer) const {
    return layer == 0 ? input_dim_ : hidden_dims_[layer - 1];
  }

  /// Glorot-uniform kernels, zero biases except the LSTM forget bias (+1).
  void initialize(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t gates = gate_count(kind_);
    for (std::size_t l = 0; l < num_layers(); ++l) {
      const std::size_t in = layer_input_dim(l);
      const std::size_t hid = hidden_dims_[l];
      for (std::size_t g = 0; g < gates; ++g) {
        auto gv = gate_mut(l, g);
        const double lim_w = std::sqrt(6.0 / static_cast<double>(in + hid));
        const double lim_u = std::sqrt(6.0 / static_cast<double>(hid + hid));
        for (std::size_t i = 0; i < hid * in; ++i) gv.w[i] = rng.uniform(-lim_w, lim_w);
        for (std::size_t i = 0; i < hid * hid; ++i) gv.u[i] = rng.uniform(-lim_u, lim_u);
        const double bias = (kind_ == CellKind::lstm && g == 0) ? 1.0 : 0.0;
        for (std::size_t i = 0; i < hid; ++i) gv.b[i] = bias;
      }
    }
    const std::size_t hid = hidden_dims_.back();
    const double lim = std::sqrt(6.0 / static_cast<double>(hid + output_dim_));
    double* r = params_.data() + readout_offset_;
    for (std::size_t i = 0; i < output_dim_ * hid; ++i) r[i] = rng.uniform(-lim, lim);
    for (std::size_t i = 0; i < output_dim_; ++i) r[output_dim_ * hid + i] = 0.0;
    bump_revision();
  }

  CellState zero_state() const {
    CellState s;
    s.h.resize(num_layers());
    s.c.resize(num_layers());
    for (std::size_t l = 0; l < num_layers(); ++l) {
      s.h[l].assign(hidden_dims_[l], 0.0);
      if (kind_ == CellKind::lstm) s.c[l].assign(hidden_dims_[l], 0.0);
    }
    return s;
  }

  GateView gate(std::size_t layer, std::size_t g) const {
    const std::size_t in = layer_input_dim(layer);
    const std::size_t hid = hidden_dims_[layer];
    const std::size_t block = hid * in + hid * hid + hid;
    const double* base = params_.data() + layer_offsets_[layer] + g * block;
    return {base, base + hid * in, base + hid * in + hid * hid};
  }
  GateViewMut gate_mut(std::size_t layer, std::size_t g) {
    auto v = gate(layer, g);
    return {const_cast<double*>(v.w), const_cast<double*>(v.u),
            const_cast<double*>(v.b)};
  }
  GateViewMut gate_in(std::vector<double>& buf, std::size_t layer,
                      std::size_t g) const {
    auto v = gate(layer, g);
    const double* base = params_.data();
    return {buf.data() + (v.w - base), buf.data() + (v.u - base),
            buf.data() + (v.b - base)};
  }
  const double* readout_kernel() const { return params_.data() + readout_offset_; }
  const double* readout_bias() const {
    return readout_kernel() + output_dim_ * hidden_dims_.back();
  }
  std::size_t readout_offset() const { return readout_offset_; }

  /// Runs the stack over a T x input_dim sequence. When `tape` is non-null
  /// the activations are retained for BPTT.
  RealMatrix forward_sequence(const RealMatrix& inputs, const CellState& initial,
                              CellState* final_state = nullptr,
                              ForwardTape* tape = nullptr) const {
    if (inputs.cols != input_dim_)
      throw ConfigError("forward_sequence: input width mismatch");
    if (inputs.rows == 0) throw ConfigError("forward_sequence: empty sequence");
    if (initial.h.size() != num_layers())
      throw ConfigError("forward_sequence: initial state layer mismatch");
    const std::size_t T = inputs.rows;
    const std::size_t L = num_layers();
    const std::size_t G = gate_count(kind_);

    if (tape) {
      tape->steps = T;
      tape->inputs = inputs;
      tape->hidden.assign(L, RealMatrix());
      tape->memory.assign(L, RealMatrix());
      tape->gates.assign(L, RealMatrix());
      for (std::size_t l = 0; l < L; ++l) {
        tape->hidden[l] = RealMatrix(T, hidden_dims_[l]);
        if (kind_ == CellKind::lstm) tape->memory[l] = RealMatrix(T, hidden_dims_[l]);
        if (kind_ != CellKind::vanilla)
          tape->gates[l] = RealMatrix(T, G * hidden_dims_[l]);
      }
      tape->initial = initial;
      tape->stamp = revision_;
    }

    CellState state = initial;
    RealMatrix outputs(T, output_dim_);
    std::vector<double> x_buf;
    for (std::size_t t = 0; t < T; ++t) {
      const double* x = inputs.row(t);
      std::size_t x_dim = input_dim_;
      for (std::size_t l = 0; l < L; ++l) {
        const std::size_t hid = hidden_dims_[l];
        std::vector<double> h_new(hid), c_new;
        double* gate_row =
            (tape && kind_ != CellKind::vanilla) ? tape->gates[l].row(t) : nullptr;
        switch (kind_) {
          case CellKind::lstm:
            c_new.resize(hid);
            detail::lstm_step_kernel(x_dim, hid, gate(l, 0), gate(l, 1),
                                     gate(l, 2), gate(l, 3), x,
                                     state.h[l].data(), state.c[l].data(),
                                     h_new.data(), c_new.data(), gate_row);
            state.c[l] = std::move(c_new);
            break;
          case CellKind::gru:
            detail::gru_step_kernel(x_dim, hid, gate(l, 0), gate(l, 1),
                                    gate(l, 2), x, state.h[l].data(),
                                    h_new.data(), gate_row);
            break;
          case CellKind::vanilla:
            detail::vanilla_step_kernel(x_dim, hid, gate(l, 0), x,
                                        state.h[l].data(), h_new.data());
            break;
        }
        state.h[l] = std::move(h_new);
        if (tape) {
          std::copy(state.h[l].begin(), state.h[l].end(), tape->hidden[l].row(t));
          if (kind_ == CellKind::lstm)
            std::copy(state.c[l].begin(), state.c[l].end(), tape->memory[l].row(t));
        }
        x_buf = state.h[l];
        x = x_buf.data();
        x_dim = hid;
      }
      const double* rk = readout_kernel();
      const double* rb = readout_bias();
      double* out = outputs.row(t);
      for (std::size_t o = 0; o < output_dim_; ++o) out[o] = rb[o];
      detail::matvec_acc(rk, output_dim_, hidden_dims_.back(),
                         state.h.back().data(), out);
    }
    if (final_state) *final_state = std::move(state);
    return outputs;
  }

  /// Exact reverse-mode gradients of a scalar loss whose per-step output
  /// gradient is `loss_grad` (T x output_dim). Also returns the gradient
  /// with respect to the initial state via `initial_grad` when requested.
  std::vector<double> backward_bptt(const ForwardTape& tape,
                                    const RealMatrix& loss_grad,
                                    CellState* initial_grad = nullptr) const {
    if (tape.stamp != revision_)
      throw ConfigError("backward_bptt: tape is stale (parameters changed)");
    if (loss_grad.rows != tape.steps || loss_grad.cols != output_dim_)
      throw ConfigError("backward_bptt: loss gradient shape mismatch");

    const std::size_t T = tape.steps;
    const std::size_t L = num_layers();
    std::vector<double> grads(params_.size(), 0.0);

    // Carried adjoints dh, dc per layer.
    std::vector<std::vector<double>> dh(L), dc(L);
    for (std::size_t l = 0; l < L; ++l) {
      dh[l].assign(hidden_dims_[l], 0.0);
      dc[l].assign(hidden_dims_[l], 0.0);
    }

    const std::size_t hid_top = hidden_dims_.back();
    double* d_readout = grads.data() + readout_offset_;
    double* d_readout_bias = d_readout + output_dim_ * hid_top;

    for (std::size_t t = T; t-- > 0;) {
      // Readout contribution.
      const double* dy = loss_grad.row(t);
      const double* h_top = tape.hidden.back().row(t);
      detail::outer_acc(d_readout, output_dim_, hid_top, dy, h_top);
      for (std::size_t o = 0; o < output_dim_; ++o) d_readout_bias[o] += dy[o];
      detail::matvec_t_acc(readout_kernel(), output_dim_, hid_top, dy,
                           dh.back().data());

      for (std::size_t l = L; l-- > 0;) {
        const std::size_t hid = hidden_dims_[l];
        const std::size_t in_dim = layer_input_dim(l);
        const double* x = (l == 0) ? tape.inputs.row(t) : tape.hidden[l - 1].row(t);
        const double* h_prev =
            (t == 0) ? tape.initial.h[l].data() : tape.hidden[l].row(t - 1);
        std::vector<double> dx(in_dim, 0.0);
        std::vector<double> dh_prev(hid, 0.0);

        switch (kind_) {
          case CellKind::lstm: {
            const double* c_prev =
                (t == 0) ? tape.initial.c[l].data() : tape.memory[l].row(t - 1);
            const double* gr = tape.gates[l].row(t);
            const double* fg = gr;
            const double* ig = gr + hid;
            const double* og = gr + 2 * hid;
            const double* cand = gr + 3 * hid;
            const double* c = tape.memory[l].row(t);
            std::vector<double> da(4 * hid);
            std::vector<double> dc_prev(hid);
            for (std::size_t j = 0; j < hid; ++j) {
              const double tc = std::tanh(c[j]);
              const double do_ = dh[l][j] * tc;
              const double dcj = dc[l][j] + dh[l][j] * og[j] * (1.0 - tc * tc);
              const double df = dcj * c_prev[j];
              const double di = dcj * cand[j];
              const double dg = dcj * ig[j];
              dc_prev[j] = dcj * fg[j];
              da[j] = df * fg[j] * (1.0 - fg[j]);
              da[hid + j] = di * ig[j] * (1.0 - ig[j]);
              da[2 * hid + j] = do_ * og[j] * (1.0 - og[j]);
              da[3 * hid + j] = dg * (1.0 - cand[j] * cand[j]);
            }
            for (std::size_t g = 0; g < 4; ++g) {
              auto gv = gate(l, g);
              auto gm = gate_in(grads, l, g);
              const double* dag = da.data() + g * hid;
              detail::outer_acc(gm.w, hid, in_dim, dag, x);
              detail::outer_acc(gm.u, hid, hid, dag, h_prev);
              for (std::size_t j = 0; j < hid; ++j) gm.b[j] += dag[j];
              detail::matvec_t_acc(gv.w, hid, in_dim, dag, dx.data());
              detail::matvec_t_acc(gv.u, hid, hid, dag, dh_prev.data());
            }
            dc[l] = std::move(dc_prev);
            break;
          }
          case CellKind::gru: {
            const double* gr = tape.gates[l].row(t);
            const double* zg = gr;
            const double* rg = gr + hid;
            const double* cand = gr + 2 * hid;
            std::vector<double> daz(hid), dar(hid), dan(hid), rh(hid), drh(hid, 0.0);
            for (std::size_t j = 0; j < hid; ++j) {
              const double dhj = dh[l][j];
              const double dz = dhj * (cand[j] - h_prev[j]);
              const double dn = dhj * zg[j];
              dh_prev[j] += dhj * (1.0 - zg[j]);
              daz[j] = dz * zg[j] * (1.0 - zg[j]);
              dan[j] = dn * (1.0 - cand[j] * cand[j]);
              rh[j] = rg[j] * h_prev[j];
            }
            // Candidate gate: pre-activation uses rh = r .* h_prev.
            {
              auto gv = gate(l, 2);
              auto gm = gate_in(grads, l, 2);
              detail::outer_acc(gm.w, hid, in_dim, dan.data(), x);
              detail::outer_acc(gm.u, hid, hid, dan.data(), rh.data());
              for (std::size_t j = 0; j < hid; ++j) gm.b[j] += dan[j];
              detail::matvec_t_acc(gv.w, hid, in_dim, dan.data(), dx.data());
              detail::matvec_t_acc(gv.u, hid, hid, dan.data(), drh.data());
            }
            for (std::size_t j = 0; j < hid; ++j) {
              const double dr = drh[j] * h_prev[j];
              dh_prev[j] += drh[j] * rg[j];
              dar[j] = dr * rg[j] * (1.0 - rg[j]);
            }
            const std::array<const std::vector<double>*, 2> das{&daz, &dar};
            for (std::size_t g = 0; g < 2; ++g) {
              auto gv = gate(l, g);
              auto gm = gate_in(grads, l, g);
              const double* dag = das[g]->data();
              detail::outer_acc(gm.w, hid, in_dim, dag, x);
              detail::outer_acc(gm.u, hid, hid, dag, h_prev);
              for (std::size_t j = 0; j < hid; ++j) gm.b[j] += dag[j];
              detail::matvec_t_acc(gv.w, hid, in_dim, dag, dx.data());
              detail::matvec_t_acc(gv.u, hid, hid, dag, dh_prev.data());
            }
            break;
          }
          case CellKind::vanilla: {
            const double* h = tape.hidden[l].row(t);
            std::vector<double> da(hid);
            for (std::size_t j = 0; j < hid; ++j)
              da[j] = dh[l][j] * (1.0 - h[j] * h[j]);
            auto gv = gate(l, 0);
            auto gm = gate_in(grads, l, 0);
            detail::outer_acc(gm.w, hid, in_dim, da.data(), x);
            detail::outer_acc(gm.u, hid, hid, da.data(), h_prev);
            for (std::size_t j = 0; j < hid; ++j) gm.b[j] += da[j];
            detail::matvec_t_acc(gv.w, hid, in_dim, da.data(), dx.data());
            detail::matvec_t_acc(gv.u, hid, hid, da.data(), dh_prev.data());
            break;
          }
        }

        dh[l] = std::move(dh_prev);
        if (l > 0)
          for (std::size_t j = 0; j < in_dim; ++j) dh[l - 1][j] += dx[j];
      }
    }
    if (initial_grad) {
      initial_grad->h = dh;
      initial_grad->c = dc;
    }
    return grads;
  }

 private:
  CellKind kind_ = CellKind::lstm;
  std::size_t input_dim_ = 0;
  std::vector<std::size_t> hidden_dims_;
  std::size_t output_dim_ = 0;
  std::vector<std::size_t> layer_offsets_;
  std::size_t readout_offset_ = 0;
  std::vector<double> params_;
  std::uint64_t revision_ = 0;
};

/// Bias-corrected Adam. Operates on flat vectors so it serves every model
/// in the project.
struct AdamState {
  std::vector<double> m, v;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

inline void adam_update(std::vector<double>& params,
                        const std::vector<double>& grads, AdamState& state,
                        std::size_t step, const AdamConfig& cfg = {}) {
  if (params.size() != grads.size() || state.m.size() != params.size())
    throw ConfigError("adam_update: size mismatch");
  if (step == 0) throw ConfigError("adam_update: step must be >= 1");
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double mh = state.m[i] / bc1;
    const double vh = state.v[i] / bc2;
    params[i] -= cfg.lr * mh / (std::sqrt(vh) + cfg.eps);
  }
}

/// Scales the whole gradient vector so its global L2 norm is at most
/// max_norm; direction is preserved.
inline void clip_gradients(std::vector<double>& grads, double max_norm) {
  if (!(max_norm > 0.0)) throw ConfigError("clip_gradients: max_norm must be positive");
  double norm2 = 0.0;
  for (double g : grads) norm2 += g * g;
  const double norm = std::sqrt(norm2);
  if (norm > max_norm) {
    const double s = max_norm / norm;
    for (double& g : grads) g *= s;
  }
}

}  // namespace wavemotion
