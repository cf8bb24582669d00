#pragma once

// Compute kernels behind the tensor ops. Every kernel exists twice:
// `serial` is the reference, `parallel` splits the outer loop across OpenMP
// threads. Both variants perform the same floating-point operations in the
// same order per output element, so their results are bitwise identical.

#include <cstddef>
#include <cstdint>
#include <span>

#include "narx/tensor/tensor.hpp"

namespace narx::kernels {

using Index = std::int32_t;

#define NARX_KERNEL_DECLS                                                     \
  /* c[m,n] = a[m,k] * b[k,n] */                                              \
  void matmul(const Real* a, const Real* b, Real* c, std::size_t m,           \
              std::size_t k, std::size_t n);                                  \
  /* out[n,m] = a[m,n]^T */                                                   \
  void transpose(const Real* a, Real* out, std::size_t m, std::size_t n);     \
  /* out[i,:] = x[idx[i],:] */                                                \
  void gather_rows(const Real* x, std::span<const Index> idx, Real* out,      \
                   std::size_t cols);                                         \
  /* out[idx[i],:] += g[i,:], accumulated in ascending i per target row */    \
  void scatter_add_rows(const Real* g, std::span<const Index> idx, Real* out, \
                        std::size_t num_out, std::size_t cols);               \
  /* per-segment column max; argmax = first row attaining it, -1 if empty */  \
  void segment_max(const Real* values, std::span<const Index> seg,            \
                   std::size_t num_segments, std::size_t cols, Real* out,     \
                   Index* argmax);                                            \
  void segment_sum(const Real* values, std::span<const Index> seg,            \
                   std::size_t num_segments, std::size_t cols, Real* out);    \
  /* out[e,d] = max_{k in [kb[e],ke[e])} relu(u[e,:] + c[k,:]) . w[:,d] + b[d] \
   */                                                                         \
  void triplet_max_forward(const Real* u, const Real* c, const Real* w,       \
                           const Real* b, std::span<const Index> k_begin,     \
                           std::span<const Index> k_end, std::size_t hidden,  \
                           std::size_t out_dim, Real* out, Index* argmax);    \
  /* Accumulates into du, dc, dw, db. */                                      \
  void triplet_max_backward(                                                  \
      const Real* u, const Real* c, const Real* w, std::size_t num_c_rows,    \
      std::span<const Index> argmax, const Real* grad_out, std::size_t hidden, \
      std::size_t out_dim, Real* du, Real* dc, Real* dw, Real* db);

namespace serial {
NARX_KERNEL_DECLS
}  // namespace serial

namespace parallel {
NARX_KERNEL_DECLS
}  // namespace parallel

#undef NARX_KERNEL_DECLS

/// Number of worker threads the parallel kernels will use (1 without OpenMP).
int max_threads();

#ifdef NARX_HAVE_OPENMP
namespace active = parallel;
#else
namespace active = serial;
#endif

}  // namespace narx::kernels
