#ifndef UNICORN_TENSOR_OPS_HPP
#define UNICORN_TENSOR_OPS_HPP

#include "unicorn/score_network.hpp"

namespace unicorn::tensor_ops {

// Primitive layers with matching reverse-mode passes. Convolutions use
// zero "same" padding, stride 1. Backward passes accumulate into the
// weight/bias gradient buffers.

Tensor conv2d(const Tensor& in, const double* weights, const double* bias, int out_c, int k);
void conv2d_backward(const Tensor& in, const double* weights, int out_c, int k,
                     const Tensor& grad_out, double* grad_weights, double* grad_bias,
                     Tensor* grad_in);

void silu_inplace(Tensor& t);
Tensor silu_backward(const Tensor& preact, const Tensor& grad_out);

Tensor avgpool2(const Tensor& in);
Tensor avgpool2_backward(const Tensor& grad_out);

Tensor upsample2(const Tensor& in);
Tensor upsample2_backward(const Tensor& grad_out);

Tensor concat_channels(const Tensor& a, const Tensor& b);
void split_channels(const Tensor& grad, int first_c, Tensor& ga, Tensor& gb);

Tensor reflect_pad_br(const Tensor& in, int target_h, int target_w);
Tensor reflect_pad_br_backward(const Tensor& grad_padded, int orig_h, int orig_w);

} // namespace unicorn::tensor_ops

#endif
