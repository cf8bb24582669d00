#include <algorithm>
#include <cstdint>
#include <vector>

#include "narx/tensor/kernels.hpp"

#ifdef NARX_HAVE_OPENMP
#include <omp.h>
#endif

namespace narx::kernels {

int max_threads() {
#ifdef NARX_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

using SIndex = std::int64_t;

// The staged kernels below pay for bucketing and scratch buffers to stay
// deterministic; with one thread the serial loop gives the same bits cheaper.
bool single_thread() { return max_threads() == 1; }

// Rows grouped by target, each group in ascending source order.
struct Buckets {
  std::vector<std::size_t> offsets;
  std::vector<Index> rows;
};

Buckets bucket_by_target(std::span<const Index> target, std::size_t num_targets) {
  Buckets b;
  b.offsets.assign(num_targets + 1, 0);
  for (Index t : target) ++b.offsets[static_cast<std::size_t>(t) + 1];
  for (std::size_t i = 0; i < num_targets; ++i) b.offsets[i + 1] += b.offsets[i];
  b.rows.resize(target.size());
  std::vector<std::size_t> cursor(b.offsets.begin(), b.offsets.end() - 1);
  for (std::size_t r = 0; r < target.size(); ++r)
    b.rows[cursor[static_cast<std::size_t>(target[r])]++] = static_cast<Index>(r);
  return b;
}

}  // namespace

namespace parallel {

void matmul(const Real* a, const Real* b, Real* c, std::size_t m, std::size_t k,
            std::size_t n) {
#pragma omp parallel for schedule(static) if (m * k * n > 32768)
  for (SIndex ii = 0; ii < static_cast<SIndex>(m); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    Real* ci = c + i * n;
    std::fill(ci, ci + n, Real(0));
    for (std::size_t p = 0; p < k; ++p) {
      const Real aip = a[i * k + p];
      const Real* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

void transpose(const Real* a, Real* out, std::size_t m, std::size_t n) {
#pragma omp parallel for schedule(static) if (m * n > 65536)
  for (SIndex jj = 0; jj < static_cast<SIndex>(n); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    for (std::size_t i = 0; i < m; ++i) out[j * m + i] = a[i * n + j];
  }
}

void gather_rows(const Real* x, std::span<const Index> idx, Real* out,
                 std::size_t cols) {
#pragma omp parallel for schedule(static) if (idx.size() * cols > 65536)
  for (SIndex ii = 0; ii < static_cast<SIndex>(idx.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    std::copy_n(x + static_cast<std::size_t>(idx[i]) * cols, cols,
                out + i * cols);
  }
}

void scatter_add_rows(const Real* g, std::span<const Index> idx, Real* out,
                      std::size_t num_out, std::size_t cols) {
  if (single_thread()) return serial::scatter_add_rows(g, idx, out, num_out, cols);
  const Buckets b = bucket_by_target(idx, num_out);
#pragma omp parallel for schedule(static) if (idx.size() * cols > 65536)
  for (SIndex tt = 0; tt < static_cast<SIndex>(num_out); ++tt) {
    const auto t = static_cast<std::size_t>(tt);
    Real* o = out + t * cols;
    for (std::size_t q = b.offsets[t]; q < b.offsets[t + 1]; ++q) {
      const Real* gi = g + static_cast<std::size_t>(b.rows[q]) * cols;
      for (std::size_t j = 0; j < cols; ++j) o[j] += gi[j];
    }
  }
}

void segment_max(const Real* values, std::span<const Index> seg,
                 std::size_t num_segments, std::size_t cols, Real* out,
                 Index* argmax) {
  if (single_thread()) return serial::segment_max(values, seg, num_segments, cols, out, argmax);
  const Buckets b = bucket_by_target(seg, num_segments);
#pragma omp parallel for schedule(static) if (seg.size() * cols > 65536)
  for (SIndex ss = 0; ss < static_cast<SIndex>(num_segments); ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    Real* o = out + s * cols;
    Index* am = argmax + s * cols;
    std::fill(o, o + cols, Real(0));
    std::fill(am, am + cols, Index(-1));
    for (std::size_t q = b.offsets[s]; q < b.offsets[s + 1]; ++q) {
      const Index r = b.rows[q];
      const Real* v = values + static_cast<std::size_t>(r) * cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (am[j] < 0 || v[j] > o[j]) {
          o[j] = v[j];
          am[j] = r;
        }
      }
    }
  }
}

void segment_sum(const Real* values, std::span<const Index> seg,
                 std::size_t num_segments, std::size_t cols, Real* out) {
  if (single_thread()) return serial::segment_sum(values, seg, num_segments, cols, out);
  const Buckets b = bucket_by_target(seg, num_segments);
#pragma omp parallel for schedule(static) if (seg.size() * cols > 65536)
  for (SIndex ss = 0; ss < static_cast<SIndex>(num_segments); ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    Real* o = out + s * cols;
    std::fill(o, o + cols, Real(0));
    for (std::size_t q = b.offsets[s]; q < b.offsets[s + 1]; ++q) {
      const Real* v = values + static_cast<std::size_t>(b.rows[q]) * cols;
      for (std::size_t j = 0; j < cols; ++j) o[j] += v[j];
    }
  }
}

void triplet_max_forward(const Real* u, const Real* c, const Real* w,
                         const Real* b, std::span<const Index> k_begin,
                         std::span<const Index> k_end, std::size_t hidden,
                         std::size_t out_dim, Real* out, Index* argmax) {
  const std::size_t num_edges = k_begin.size();
#pragma omp parallel if (num_edges > 16)
  {
    std::vector<Real> z(hidden);
    std::vector<Real> t(out_dim);
#pragma omp for schedule(dynamic, 16)
    for (SIndex ee = 0; ee < static_cast<SIndex>(num_edges); ++ee) {
      const auto e = static_cast<std::size_t>(ee);
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
}

void triplet_max_backward(const Real* u, const Real* c, const Real* w,
                          std::size_t num_c_rows, std::span<const Index> argmax,
                          const Real* grad_out, std::size_t hidden,
                          std::size_t out_dim, Real* du, Real* dc, Real* dw,
                          Real* db) {
  if (single_thread())
    return serial::triplet_max_backward(u, c, w, num_c_rows, argmax, grad_out, hidden,
                                        out_dim, du, dc, dw, db);
  const std::size_t num_edges = argmax.size() / out_dim;
  const std::size_t slots = num_edges * out_dim;
  // Per (edge, out) slot: z*g for the weight gradient and the relu-masked
  // input gradient; the accumulations then run in serial order per target.
  std::vector<Real> zg(slots * hidden);
  std::vector<Real> dz(slots * hidden);
  std::vector<std::uint8_t> active(slots * hidden);

#pragma omp parallel for schedule(static) if (num_edges > 16)
  for (SIndex ee = 0; ee < static_cast<SIndex>(num_edges); ++ee) {
    const auto e = static_cast<std::size_t>(ee);
    const Real* ue = u + e * hidden;
    for (std::size_t d = 0; d < out_dim; ++d) {
      const std::size_t slot = e * out_dim + d;
      const Index k = argmax[slot];
      if (k < 0) continue;
      const Real g = grad_out[slot];
      const Real* ck = c + static_cast<std::size_t>(k) * hidden;
      for (std::size_t j = 0; j < hidden; ++j) {
        const Real s = ue[j] + ck[j];
        const Real z = s > Real(0) ? s : Real(0);
        zg[slot * hidden + j] = z * g;
        if (s > Real(0)) {
          const Real v = w[j * out_dim + d] * g;
          dz[slot * hidden + j] = v;
          active[slot * hidden + j] = 1;
          du[e * hidden + j] += v;
        }
      }
    }
  }

#pragma omp parallel for schedule(static) if (slots * hidden > 65536)
  for (SIndex jj = 0; jj < static_cast<SIndex>(hidden); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    for (std::size_t slot = 0; slot < slots; ++slot) {
      if (argmax[slot] < 0) continue;
      dw[j * out_dim + slot % out_dim] += zg[slot * hidden + j];
    }
  }
  for (std::size_t slot = 0; slot < slots; ++slot)
    if (argmax[slot] >= 0) db[slot % out_dim] += grad_out[slot];

  std::vector<Index> target(slots);
  std::vector<Index> valid;
  valid.reserve(slots);
  for (std::size_t slot = 0; slot < slots; ++slot)
    if (argmax[slot] >= 0) valid.push_back(static_cast<Index>(slot));
  target.resize(valid.size());
  for (std::size_t q = 0; q < valid.size(); ++q)
    target[q] = argmax[static_cast<std::size_t>(valid[q])];
  const Buckets b = bucket_by_target(target, num_c_rows);
#pragma omp parallel for schedule(static) if (slots * hidden > 65536)
  for (SIndex kk = 0; kk < static_cast<SIndex>(num_c_rows); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    Real* dck = dc + k * hidden;
    for (std::size_t q = b.offsets[k]; q < b.offsets[k + 1]; ++q) {
      const auto slot = static_cast<std::size_t>(valid[static_cast<std::size_t>(b.rows[q])]);
      for (std::size_t j = 0; j < hidden; ++j)
        if (active[slot * hidden + j]) dck[j] += dz[slot * hidden + j];
    }
  }
}

}  // namespace parallel
}  // namespace narx::kernels
