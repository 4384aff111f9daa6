#pragma once

#include <cmath>

namespace rgvlm::iql {

// Asymmetric squared loss: |q - 1(x < 0)| * x^2. With q > 0.5 positive
// residuals are penalized more, which is what pushes the value net toward an
// upper expectile of the target distribution.
template <typename Scalar>
inline Scalar expectile_loss(Scalar x, Scalar q) {
  const Scalar w = x < Scalar(0) ? Scalar(1) - q : q;
  return w * x * x;
}

// d/dx of expectile_loss.
template <typename Scalar>
inline Scalar expectile_loss_grad(Scalar x, Scalar q) {
  const Scalar w = x < Scalar(0) ? Scalar(1) - q : q;
  return Scalar(2) * w * x;
}

}  // namespace rgvlm::iql
