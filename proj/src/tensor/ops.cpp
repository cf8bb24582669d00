#include "narx/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "narx/core/error.hpp"

namespace narx {
namespace {

namespace k = kernels::active;

Tape& same_tape(Var a, Var b) {
  require(a.valid() && b.valid() && &a.tape() == &b.tape(), ErrorKind::Contract,
          "operands recorded on different tapes");
  return a.tape();
}

void add_into(Tensor& dst, std::span<const Real> src) {
  auto d = dst.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += src[i];
}

// Adds `src` into the gradient of `id` if that node needs one.
void accumulate(Tape& t, std::uint32_t id, std::span<const Real> src) {
  if (t.requires_grad(id)) add_into(t.grad(id), src);
}


// Shape of `small` stripped of leading 1s must equal the trailing dims of `big`.
bool broadcasts_into(const Shape& small, const Shape& big) {
  std::size_t lead = 0;
  while (lead < small.size() && small[lead] == 1 && small.size() - lead > 0) ++lead;
  const std::size_t tail = small.size() - lead;
  if (tail > big.size()) return false;
  for (std::size_t i = 0; i < tail; ++i)
    if (small[lead + i] != big[big.size() - tail + i]) return false;
  return true;
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require(av.rank() == 2 && bv.rank() == 2 && av.shape()[1] == bv.shape()[0],
          ErrorKind::Dimension,
          "matmul: incompatible shapes " + shape_str(av.shape()) + " x " +
              shape_str(bv.shape()));
  const std::size_t m = av.shape()[0], kk = av.shape()[1], n = bv.shape()[1];
  Tensor out({m, n});
  k::matmul(av.data().data(), bv.data().data(), out.data().data(), m, kk, n);
  const auto ia = a.id(), ib = b.id();
  return t.record("matmul", std::move(out), {ia, ib},
                  [ia, ib, m, kk, n](Tape& tp, std::uint32_t self) {
                    const Tensor& g = tp.grad(self);
                    if (tp.requires_grad(ia)) {
                      std::vector<Real> bt(n * kk), tmp(m * kk);
                      k::transpose(tp.value(ib).data().data(), bt.data(), kk, n);
                      k::matmul(g.data().data(), bt.data(), tmp.data(), m, n, kk);
                      add_into(tp.grad(ia), tmp);
                    }
                    if (tp.requires_grad(ib)) {
                      std::vector<Real> at(kk * m), tmp(kk * n);
                      k::transpose(tp.value(ia).data().data(), at.data(), m, kk);
                      k::matmul(at.data(), g.data().data(), tmp.data(), kk, m, n);
                      add_into(tp.grad(ib), tmp);
                    }
                  });
}

Var unary(UnaryOp op, Var x) {
  Tape& t = x.tape();
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  auto in = xv.data();
  auto o = out.data();
  const char* name = "unary";
  switch (op) {
    case UnaryOp::Relu:
      name = "relu";
      for (std::size_t i = 0; i < o.size(); ++i) o[i] = in[i] > Real(0) ? in[i] : Real(0);
      if (t.tracking_branches())
        for (std::size_t i = 0; i < o.size(); ++i) t.note_branch(in[i] > Real(0));
      break;
    case UnaryOp::Sigmoid:
      name = "sigmoid";
      for (std::size_t i = 0; i < o.size(); ++i) {
        const Real v = in[i];
        if (v >= Real(0)) {
          o[i] = Real(1) / (Real(1) + std::exp(-v));
        } else {
          const Real e = std::exp(v);
          o[i] = e / (Real(1) + e);
        }
      }
      break;
    case UnaryOp::Neg:
      name = "neg";
      for (std::size_t i = 0; i < o.size(); ++i) o[i] = -in[i];
      break;
    case UnaryOp::Exp:
      name = "exp";
      for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::exp(in[i]);
      break;
    case UnaryOp::Log:
      name = "log";
      for (std::size_t i = 0; i < o.size(); ++i) {
        if (!(in[i] > Real(0)))
          fail(ErrorKind::Domain, "log: argument " + std::to_string(in[i]) + " is not positive");
        o[i] = std::log(in[i]);
      }
      break;
  }
  const auto ix = x.id();
  return t.record(name, std::move(out), {ix}, [ix, op](Tape& tp, std::uint32_t self) {
    const auto g = tp.grad(self).data();
    const auto xin = tp.value(ix).data();
    const auto y = tp.value(self).data();
    auto dx = tp.grad(ix).data();
    for (std::size_t i = 0; i < g.size(); ++i) {
      switch (op) {
        case UnaryOp::Relu: dx[i] += xin[i] > Real(0) ? g[i] : Real(0); break;
        case UnaryOp::Sigmoid: dx[i] += g[i] * y[i] * (Real(1) - y[i]); break;
        case UnaryOp::Neg: dx[i] -= g[i]; break;
        case UnaryOp::Exp: dx[i] += g[i] * y[i]; break;
        case UnaryOp::Log: dx[i] += g[i] / xin[i]; break;
      }
    }
  });
}

namespace {

template <class F>
void with_binary_op(BinaryOp op, F&& body) {
  switch (op) {
    case BinaryOp::Add: body([](Real p, Real q) { return p + q; }); break;
    case BinaryOp::Sub: body([](Real p, Real q) { return p - q; }); break;
    case BinaryOp::Mul: body([](Real p, Real q) { return p * q; }); break;
    case BinaryOp::Max: body([](Real p, Real q) { return p >= q ? p : q; }); break;
  }
}

// out = f(x, y) where the smaller operand repeats along the leading axes.
template <class F>
void broadcast_apply(std::span<const Real> x, std::span<const Real> y, std::span<Real> out, F f) {
  const std::size_t inner = std::min(x.size(), y.size());
  if (inner == 0) return;
  for (std::size_t base = 0; base < out.size(); base += inner) {
    const Real* xp = x.data() + (x.size() == inner ? 0 : base);
    const Real* yp = y.data() + (y.size() == inner ? 0 : base);
    Real* op = out.data() + base;
    for (std::size_t j = 0; j < inner; ++j) op[j] = f(xp[j], yp[j]);
  }
}

}  // namespace

Var binary(BinaryOp op, Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Shape out_shape;
  if (av.shape() == bv.shape() || broadcasts_into(bv.shape(), av.shape())) {
    out_shape = av.shape();
  } else if (broadcasts_into(av.shape(), bv.shape())) {
    out_shape = bv.shape();
  } else {
    fail(ErrorKind::Dimension, "elementwise op: shapes " + shape_str(av.shape()) +
                                   " and " + shape_str(bv.shape()) +
                                   " are not broadcastable");
  }
  Tensor out(out_shape);
  const std::size_t na = av.size(), nb = bv.size();
  const char* name = "binary";
  switch (op) {
    case BinaryOp::Add: name = "add"; break;
    case BinaryOp::Sub: name = "sub"; break;
    case BinaryOp::Mul: name = "mul"; break;
    case BinaryOp::Max: name = "max"; break;
  }
  with_binary_op(op, [&](auto f) { broadcast_apply(av.data(), bv.data(), out.data(), f); });
  if (op == BinaryOp::Max && t.tracking_branches())
    broadcast_apply(av.data(), bv.data(), out.data(), [&t](Real p, Real q) {
      t.note_branch(p >= q);
      return p >= q ? p : q;
    });
  const auto ia = a.id(), ib = b.id();
  return t.record(name, std::move(out), {ia, ib}, [ia, ib, op, na, nb](Tape& tp, std::uint32_t self) {
    const auto g = tp.grad(self).data();
    const auto x = tp.value(ia).data();
    const auto y = tp.value(ib).data();
    const bool ga = tp.requires_grad(ia), gb = tp.requires_grad(ib);
    std::span<Real> da, db;
    if (ga) da = tp.grad(ia).data();
    if (gb) db = tp.grad(ib).data();
    // The output is laid out as repeats of the smaller operand.
    const std::size_t inner = std::min(na, nb);
    for (std::size_t base = 0; base < g.size(); base += inner) {
      const std::size_t oa = na == inner ? 0 : base, ob = nb == inner ? 0 : base;
      const Real* gi = g.data() + base;
      switch (op) {
        case BinaryOp::Add:
          if (ga) for (std::size_t j = 0; j < inner; ++j) da[oa + j] += gi[j];
          if (gb) for (std::size_t j = 0; j < inner; ++j) db[ob + j] += gi[j];
          break;
        case BinaryOp::Sub:
          if (ga) for (std::size_t j = 0; j < inner; ++j) da[oa + j] += gi[j];
          if (gb) for (std::size_t j = 0; j < inner; ++j) db[ob + j] += -gi[j];
          break;
        case BinaryOp::Mul:
          if (ga) for (std::size_t j = 0; j < inner; ++j) da[oa + j] += gi[j] * y[ob + j];
          if (gb) for (std::size_t j = 0; j < inner; ++j) db[ob + j] += gi[j] * x[oa + j];
          break;
        case BinaryOp::Max:
          for (std::size_t j = 0; j < inner; ++j) {
            if (x[oa + j] >= y[ob + j]) {
              if (ga) da[oa + j] += gi[j];
            } else if (gb) {
              db[ob + j] += gi[j];
            }
          }
          break;
      }
    }
  });
}

Var scale(Var x, Real factor) {
  Tape& t = x.tape();
  Tensor out = x.value();
  for (Real& v : out.storage()) v *= factor;
  const auto ix = x.id();
  return t.record("scale", std::move(out), {ix}, [ix, factor](Tape& tp, std::uint32_t self) {
    const auto g = tp.grad(self).data();
    auto dx = tp.grad(ix).data();
    for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * factor;
  });
}

Var sum(Var x) {
  Tape& t = x.tape();
  Real s = 0;
  for (Real v : x.value().data()) s += v;
  const auto ix = x.id();
  return t.record("sum", Tensor::scalar(s), {ix}, [ix](Tape& tp, std::uint32_t self) {
    const Real g = tp.grad(self)[0];
    for (Real& d : tp.grad(ix).storage()) d += g;
  });
}

Var mean(Var x) {
  const std::size_t n = x.value().size();
  require(n > 0, ErrorKind::Contract, "mean of empty tensor");
  return scale(sum(x), Real(1) / static_cast<Real>(n));
}

Var sum_cols(Var x) {
  Tape& t = x.tape();
  const Tensor& xv = x.value();
  require(xv.rank() == 2, ErrorKind::Dimension, "sum_cols expects a matrix");
  const std::size_t m = xv.shape()[0], d = xv.shape()[1];
  Tensor out({m, 1});
  for (std::size_t i = 0; i < m; ++i) {
    Real s = 0;
    for (std::size_t j = 0; j < d; ++j) s += xv[i * d + j];
    out[i] = s;
  }
  const auto ix = x.id();
  return t.record("sum_cols", std::move(out), {ix}, [ix, m, d](Tape& tp, std::uint32_t self) {
    const auto g = tp.grad(self).data();
    auto dx = tp.grad(ix).data();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < d; ++j) dx[i * d + j] += g[i];
  });
}

namespace {

void check_segments(const std::vector<Index>& seg, std::size_t rows, std::size_t n,
                    const char* op) {
  require(seg.size() == rows, ErrorKind::Dimension,
          std::string(op) + ": " + std::to_string(seg.size()) +
              " segment ids for " + std::to_string(rows) + " rows");
  for (std::size_t r = 0; r < seg.size(); ++r)
    if (seg[r] < 0 || static_cast<std::size_t>(seg[r]) >= n)
      fail(ErrorKind::Index, std::string(op) + ": segment id " + std::to_string(seg[r]) + " at row " +
                std::to_string(r) + " outside [0, " + std::to_string(n) + ")");
}

}  // namespace

Var segment_reduce(ReduceOp op, Var values, IndexList segments,
                   std::size_t num_segments) {
  Tape& t = values.tape();
  const Tensor& v = values.value();
  require(v.rank() == 2, ErrorKind::Dimension, "segment_reduce expects [E, d] values");
  const std::size_t rows = v.shape()[0], d = v.shape()[1];
  check_segments(*segments, rows, num_segments, "segment_reduce");
  Tensor out({num_segments, d});
  const auto iv = values.id();
  if (op == ReduceOp::Max) {
    auto argmax = std::make_shared<std::vector<Index>>(num_segments * d);
    k::segment_max(v.data().data(), *segments, num_segments, d, out.data().data(),
                   argmax->data());
    if (t.tracking_branches())
      for (Index r : *argmax) t.note_branch(static_cast<std::uint64_t>(r));
    return t.record("segment_max", std::move(out), {iv},
                    [iv, argmax, d](Tape& tp, std::uint32_t self) {
                      const auto g = tp.grad(self).data();
                      auto dv = tp.grad(iv).data();
                      for (std::size_t i = 0; i < argmax->size(); ++i) {
                        const Index r = (*argmax)[i];
                        if (r >= 0) dv[static_cast<std::size_t>(r) * d + i % d] += g[i];
                      }
                    });
  }
  k::segment_sum(v.data().data(), *segments, num_segments, d, out.data().data());
  std::vector<Real> inv_count(num_segments, Real(1));
  if (op == ReduceOp::Mean) {
    std::vector<std::size_t> count(num_segments, 0);
    for (Index s : *segments) ++count[static_cast<std::size_t>(s)];
    for (std::size_t s = 0; s < num_segments; ++s) {
      inv_count[s] = count[s] ? Real(1) / static_cast<Real>(count[s]) : Real(0);
      for (std::size_t j = 0; j < d; ++j) out[s * d + j] *= inv_count[s];
    }
  }
  return t.record(op == ReduceOp::Sum ? "segment_sum" : "segment_mean", std::move(out),
                  {iv},
                  [iv, segments, d, inv = std::move(inv_count)](Tape& tp, std::uint32_t self) {
                    const auto g = tp.grad(self).data();
                    auto dv = tp.grad(iv).data();
                    const auto& seg = *segments;
                    for (std::size_t r = 0; r < seg.size(); ++r) {
                      const auto s = static_cast<std::size_t>(seg[r]);
                      for (std::size_t j = 0; j < d; ++j) dv[r * d + j] += g[s * d + j] * inv[s];
                    }
                  });
}

Var segment_logsumexp(Var x, IndexList segments, std::size_t num_segments) {
  Tape& t = x.tape();
  const Tensor& xv = x.value();
  require(xv.rank() == 2 && xv.shape()[1] == 1, ErrorKind::Dimension,
          "segment_logsumexp expects [E, 1]");
  const auto& seg = *segments;
  check_segments(seg, xv.shape()[0], num_segments, "segment_logsumexp");
  std::vector<Real> mx(num_segments, -std::numeric_limits<Real>::infinity());
  for (std::size_t r = 0; r < seg.size(); ++r) {
    auto s = static_cast<std::size_t>(seg[r]);
    mx[s] = std::max(mx[s], xv[r]);
  }
  std::vector<Real> acc(num_segments, Real(0));
  for (std::size_t r = 0; r < seg.size(); ++r) {
    auto s = static_cast<std::size_t>(seg[r]);
    acc[s] += std::exp(xv[r] - mx[s]);
  }
  Tensor out({num_segments, 1});
  for (std::size_t s = 0; s < num_segments; ++s)
    out[s] = acc[s] > Real(0) ? mx[s] + std::log(acc[s]) : Real(0);
  const auto ix = x.id();
  return t.record("segment_logsumexp", std::move(out), {ix},
                  [ix, segments](Tape& tp, std::uint32_t self) {
                    const auto g = tp.grad(self).data();
                    const auto lse = tp.value(self).data();
                    const auto xin = tp.value(ix).data();
                    auto dx = tp.grad(ix).data();
                    const auto& sg = *segments;
                    for (std::size_t r = 0; r < sg.size(); ++r) {
                      auto s = static_cast<std::size_t>(sg[r]);
                      dx[r] += g[s] * std::exp(xin[r] - lse[s]);
                    }
                  });
}

Var gather_rows(Var x, IndexList idx) {
  Tape& t = x.tape();
  const Tensor& xv = x.value();
  require(xv.rank() == 2, ErrorKind::Dimension, "gather_rows expects a matrix");
  const std::size_t n = xv.shape()[0], d = xv.shape()[1];
  for (Index i : *idx)
    if (i < 0 || static_cast<std::size_t>(i) >= n)
      fail(ErrorKind::Index, "gather_rows: row " + std::to_string(i) + " outside [0, " +
                std::to_string(n) + ")");
  Tensor out({idx->size(), d});
  k::gather_rows(xv.data().data(), *idx, out.data().data(), d);
  const auto ix = x.id();
  return t.record("gather_rows", std::move(out), {ix},
                  [ix, idx, n, d](Tape& tp, std::uint32_t self) {
                    k::scatter_add_rows(tp.grad(self).data().data(), *idx,
                                        tp.grad(ix).data().data(), n, d);
                  });
}

Var concat_cols(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require(av.rank() == 2 && bv.rank() == 2 && av.shape()[0] == bv.shape()[0],
          ErrorKind::Dimension,
          "concat_cols: " + shape_str(av.shape()) + " vs " + shape_str(bv.shape()));
  const std::size_t m = av.shape()[0], p = av.shape()[1], q = bv.shape()[1];
  Tensor out({m, p + q});
  for (std::size_t i = 0; i < m; ++i) {
    std::copy_n(av.data().data() + i * p, p, out.data().data() + i * (p + q));
    std::copy_n(bv.data().data() + i * q, q, out.data().data() + i * (p + q) + p);
  }
  const auto ia = a.id(), ib = b.id();
  return t.record("concat_cols", std::move(out), {ia, ib},
                  [ia, ib, m, p, q](Tape& tp, std::uint32_t self) {
                    const auto g = tp.grad(self).data();
                    if (tp.requires_grad(ia)) {
                      auto da = tp.grad(ia).data();
                      for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < p; ++j) da[i * p + j] += g[i * (p + q) + j];
                    }
                    if (tp.requires_grad(ib)) {
                      auto db = tp.grad(ib).data();
                      for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < q; ++j)
                          db[i * q + j] += g[i * (p + q) + p + j];
                    }
                  });
}

Var reshape(Var x, Shape shape) {
  Tape& t = x.tape();
  Tensor out = x.value().reshaped(std::move(shape));
  const auto ix = x.id();
  return t.record("reshape", std::move(out), {ix}, [ix](Tape& tp, std::uint32_t self) {
    accumulate(tp, ix, tp.grad(self).data());
  });
}

Var detach(Var x) { return x.tape().constant(x.value()); }

Var bce_with_logits(Var logits, const Tensor& targets) {
  Tape& t = logits.tape();
  const Tensor& z = logits.value();
  require(z.size() == targets.size(), ErrorKind::Dimension,
          "bce_with_logits: " + std::to_string(z.size()) + " logits vs " +
              std::to_string(targets.size()) + " targets");
  require(z.size() > 0, ErrorKind::Contract, "bce_with_logits: empty input");
  Real s = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const Real x = z[i], y = targets[i];
    s += std::max(x, Real(0)) - x * y + std::log1p(std::exp(-std::abs(x)));
  }
  const Real n = static_cast<Real>(z.size());
  const auto iz = logits.id();
  return t.record("bce_with_logits", Tensor::scalar(s / n), {iz},
                  [iz, targets, n](Tape& tp, std::uint32_t self) {
                    const Real g = tp.grad(self)[0];
                    const auto x = tp.value(iz).data();
                    auto dx = tp.grad(iz).data();
                    for (std::size_t i = 0; i < x.size(); ++i) {
                      const Real sig = x[i] >= 0 ? Real(1) / (Real(1) + std::exp(-x[i]))
                                                 : std::exp(x[i]) / (Real(1) + std::exp(x[i]));
                      dx[i] += g * (sig - targets[i]) / n;
                    }
                  });
}

Var triplet_max(Var u, Var c, Var w, Var b, IndexList k_begin, IndexList k_end) {
  Tape& t = same_tape(u, c);
  const Tensor& uv = u.value();
  const Tensor& cv = c.value();
  const Tensor& wv = w.value();
  const Tensor& bv = b.value();
  require(uv.rank() == 2 && cv.rank() == 2 && wv.rank() == 2, ErrorKind::Dimension,
          "triplet_max: u, c, w must be matrices");
  const std::size_t num_edges = uv.shape()[0], hidden = uv.shape()[1];
  const std::size_t out_dim = wv.shape()[1];
  require(cv.shape()[1] == hidden && wv.shape()[0] == hidden && bv.size() == out_dim,
          ErrorKind::Dimension, "triplet_max: inconsistent hidden/output dims");
  require(k_begin->size() == num_edges && k_end->size() == num_edges,
          ErrorKind::Dimension, "triplet_max: one k-range per edge required");
  const std::size_t n_rows = cv.shape()[0];
  for (std::size_t e = 0; e < num_edges; ++e)
    if ((*k_begin)[e] < 0 || (*k_begin)[e] > (*k_end)[e] || static_cast<std::size_t>((*k_end)[e]) > n_rows)
      fail(ErrorKind::Index, "triplet_max: bad k-range for edge " + std::to_string(e));
  Tensor out({num_edges, out_dim});
  auto argmax = std::make_shared<std::vector<Index>>(num_edges * out_dim);
  k::triplet_max_forward(uv.data().data(), cv.data().data(), wv.data().data(),
                         bv.data().data(), *k_begin, *k_end, hidden, out_dim,
                         out.data().data(), argmax->data());
  if (t.tracking_branches()) {
    // Winner k of each output and the relu signs of its hidden layer.
    for (std::size_t e = 0; e < num_edges; ++e)
      for (std::size_t o = 0; o < out_dim; ++o) {
        const Index kk = (*argmax)[e * out_dim + o];
        t.note_branch(static_cast<std::uint64_t>(kk));
        if (kk < 0) continue;
        for (std::size_t j = 0; j < hidden; ++j)
          t.note_branch(uv[e * hidden + j] + cv[static_cast<std::size_t>(kk) * hidden + j] > Real(0));
      }
  }
  const auto iu = u.id(), ic = c.id(), iw = w.id(), ib = b.id();
  return t.record(
      "triplet_max", std::move(out), {iu, ic, iw, ib},
      [=](Tape& tp, std::uint32_t self) {
        auto buf = [&](std::uint32_t id, std::size_t n) -> std::pair<Real*, std::vector<Real>> {
          if (tp.requires_grad(id)) return {tp.grad(id).data().data(), {}};
          std::vector<Real> scratch(n);
          return {nullptr, std::move(scratch)};
        };
        auto [du, su] = buf(iu, num_edges * hidden);
        auto [dc, sc] = buf(ic, n_rows * hidden);
        auto [dw, sw] = buf(iw, hidden * out_dim);
        auto [db, sb] = buf(ib, out_dim);
        k::triplet_max_backward(tp.value(iu).data().data(), tp.value(ic).data().data(),
                                tp.value(iw).data().data(), n_rows, *argmax,
                                tp.grad(self).data().data(), hidden, out_dim,
                                du ? du : su.data(), dc ? dc : sc.data(),
                                dw ? dw : sw.data(), db ? db : sb.data());
      });
}

}  // namespace narx
