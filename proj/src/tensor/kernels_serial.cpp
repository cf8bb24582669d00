#include <algorithm>
#include <limits>
#include <vector>

#include "narx/tensor/kernels.hpp"

namespace narx::kernels::serial {

void matmul(const Real* a, const Real* b, Real* c, std::size_t m, std::size_t k,
            std::size_t n) {
  std::fill(c, c + m * n, Real(0));
  for (std::size_t i = 0; i < m; ++i) {
    Real* ci = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const Real aip = a[i * k + p];
      const Real* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

void transpose(const Real* a, Real* out, std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = a[i * n + j];
}

void gather_rows(const Real* x, std::span<const Index> idx, Real* out,
                 std::size_t cols) {
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy_n(x + static_cast<std::size_t>(idx[i]) * cols, cols,
                out + i * cols);
}

void scatter_add_rows(const Real* g, std::span<const Index> idx, Real* out,
                      std::size_t /*num_out*/, std::size_t cols) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Real* o = out + static_cast<std::size_t>(idx[i]) * cols;
    const Real* gi = g + i * cols;
    for (std::size_t j = 0; j < cols; ++j) o[j] += gi[j];
  }
}

void segment_max(const Real* values, std::span<const Index> seg,
                 std::size_t num_segments, std::size_t cols, Real* out,
                 Index* argmax) {
  std::fill(out, out + num_segments * cols, Real(0));
  std::fill(argmax, argmax + num_segments * cols, Index(-1));
  for (std::size_t r = 0; r < seg.size(); ++r) {
    const std::size_t s = static_cast<std::size_t>(seg[r]);
    for (std::size_t j = 0; j < cols; ++j) {
      const Real v = values[r * cols + j];
      Index& am = argmax[s * cols + j];
      if (am < 0 || v > out[s * cols + j]) {
        out[s * cols + j] = v;
        am = static_cast<Index>(r);
      }
    }
  }
}

void segment_sum(const Real* values, std::span<const Index> seg,
                 std::size_t num_segments, std::size_t cols, Real* out) {
  std::fill(out, out + num_segments * cols, Real(0));
  for (std::size_t r = 0; r < seg.size(); ++r) {
    Real* o = out + static_cast<std::size_t>(seg[r]) * cols;
    for (std::size_t j = 0; j < cols; ++j) o[j] += values[r * cols + j];
  }
}

void triplet_max_forward(const Real* u, const Real* c, const Real* w,
                         const Real* b, std::span<const Index> k_begin,
                         std::span<const Index> k_end, std::size_t hidden,
                         std::size_t out_dim, Real* out, Index* argmax) {
  std::vector<Real> z(hidden);
  std::vector<Real> t(out_dim);
  for (std::size_t e = 0; e < k_begin.size(); ++e) {
    Real* oe = out + e * out_dim;
    Index* ae = argmax + e * out_dim;
    std::fill(ae, ae + out_dim, Index(-1));
    std::fill(oe, oe + out_dim, Real(0));
    const Real* ue = u + e * hidden;
    for (Index k = k_begin[e]; k < k_end[e]; ++k) {
      const Real* ck = c + static_cast<std::size_t>(k) * hidden;
      for (std::size_t j = 0; j < hidden; ++j) {
        const Real s = ue[j] + ck[j];
        z[j] = s > Real(0) ? s : Real(0);
      }
      std::fill(t.begin(), t.end(), Real(0));
      for (std::size_t j = 0; j < hidden; ++j) {
        const Real zj = z[j];
        const Real* wj = w + j * out_dim;
        for (std::size_t d = 0; d < out_dim; ++d) t[d] += zj * wj[d];
      }
      for (std::size_t d = 0; d < out_dim; ++d) {
        const Real v = t[d] + b[d];
        if (ae[d] < 0 || v > oe[d]) {
          oe[d] = v;
          ae[d] = k;
        }
      }
    }
  }
}

void triplet_max_backward(const Real* u, const Real* c, const Real* w,
                          std::size_t /*num_c_rows*/,
                          std::span<const Index> argmax, const Real* grad_out,
                          std::size_t hidden, std::size_t out_dim, Real* du,
                          Real* dc, Real* dw, Real* db) {
  const std::size_t num_edges = argmax.size() / out_dim;
  for (std::size_t e = 0; e < num_edges; ++e) {
    const Real* ue = u + e * hidden;
    for (std::size_t d = 0; d < out_dim; ++d) {
      const Index k = argmax[e * out_dim + d];
      const Real g = grad_out[e * out_dim + d];
      if (k < 0) continue;
      const Real* ck = c + static_cast<std::size_t>(k) * hidden;
      Real* dck = dc + static_cast<std::size_t>(k) * hidden;
      db[d] += g;
      for (std::size_t j = 0; j < hidden; ++j) {
        const Real s = ue[j] + ck[j];
        const Real z = s > Real(0) ? s : Real(0);
        dw[j * out_dim + d] += z * g;
        if (s > Real(0)) {
          const Real dz = w[j * out_dim + d] * g;
          du[e * hidden + j] += dz;
          dck[j] += dz;
        }
      }
    }
  }
}

}  // namespace narx::kernels::serial
