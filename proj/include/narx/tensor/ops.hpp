#pragma once

#include <memory>
#include <vector>

#include "narx/tensor/kernels.hpp"
#include "narx/tensor/tape.hpp"

namespace narx {

using kernels::Index;
using IndexList = std::shared_ptr<const std::vector<Index>>;

inline IndexList make_index(std::vector<Index> idx) {
  return std::make_shared<const std::vector<Index>>(std::move(idx));
}

enum class UnaryOp { Relu, Sigmoid, Neg, Exp, Log };
enum class BinaryOp { Add, Sub, Mul, Max };
enum class ReduceOp { Max, Sum, Mean };

// Linear algebra
Var matmul(Var a, Var b);

// Elementwise. Binary ops accept equal shapes, or one operand whose shape
// equals the other's trailing dims (optionally padded with leading 1s); that
// operand repeats along the leading axes.
Var unary(UnaryOp op, Var x);
Var binary(BinaryOp op, Var a, Var b);
inline Var relu(Var x) { return unary(UnaryOp::Relu, x); }
inline Var sigmoid(Var x) { return unary(UnaryOp::Sigmoid, x); }
inline Var neg(Var x) { return unary(UnaryOp::Neg, x); }
inline Var exp(Var x) { return unary(UnaryOp::Exp, x); }
inline Var log(Var x) { return unary(UnaryOp::Log, x); }
inline Var add(Var a, Var b) { return binary(BinaryOp::Add, a, b); }
inline Var sub(Var a, Var b) { return binary(BinaryOp::Sub, a, b); }
inline Var mul(Var a, Var b) { return binary(BinaryOp::Mul, a, b); }
inline Var maximum(Var a, Var b) { return binary(BinaryOp::Max, a, b); }
Var scale(Var x, Real factor);

// Reductions
Var sum(Var x);
Var mean(Var x);
/// [m, d] -> [m, 1]
Var sum_cols(Var x);
/// Reduce rows of values[E, d] into num_segments rows. Empty segments are 0.
/// Max routes gradient to the first row attaining the maximum.
Var segment_reduce(ReduceOp op, Var values, IndexList segments,
                   std::size_t num_segments);
/// Numerically stable log-sum-exp of x[E, 1] within each segment -> [n, 1].
Var segment_logsumexp(Var x, IndexList segments, std::size_t num_segments);

// Structure
Var gather_rows(Var x, IndexList idx);
Var concat_cols(Var a, Var b);
Var reshape(Var x, Shape shape);
Var detach(Var x);

/// Mean binary cross-entropy of sigmoid(logits) against targets in {0,1}.
Var bce_with_logits(Var logits, const Tensor& targets);

/// Fused triplet reduction:
///   out[e, d] = max_{k in [k_begin[e], k_end[e])} relu(u[e] + c[k]) . w[:, d] + b[d]
/// u: [E, h], c: [N, h], w: [h, d], b: [d]. Only argmax indices are kept for
/// the backward pass.
Var triplet_max(Var u, Var c, Var w, Var b, IndexList k_begin, IndexList k_end);

}  // namespace narx
