#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace rgvlm::iql {

// Plain Adam with bias correction, operating on a flat parameter vector.
template <typename Scalar>
class Adam {
 public:
  Adam(int dim, Scalar lr, Scalar beta1 = Scalar(0.9), Scalar beta2 = Scalar(0.999),
       Scalar eps = Scalar(1e-8))
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    m_.setZero(dim);
    v_.setZero(dim);
  }

  void step(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& params,
            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& grad) {
    ++t_;
    m_ = beta1_ * m_ + (Scalar(1) - beta1_) * grad;
    v_ = beta2_ * v_ + (Scalar(1) - beta2_) * grad.array().square().matrix();
    const Scalar c1 = Scalar(1) - std::pow(beta1_, Scalar(t_));
    const Scalar c2 = Scalar(1) - std::pow(beta2_, Scalar(t_));
    params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
  }

 private:
  Scalar lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> m_, v_;
};

}  // namespace rgvlm::iql
