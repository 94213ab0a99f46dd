#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "syncdgc/matrix.hpp"

namespace syncdgc {

// Adam with bias correction. Moment buffers are allocated on the first step
// and parameters must be passed in the same order on every call.
class Adam {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads) {
    if (params.size() != grads.size())
      throw std::invalid_argument("Adam::step: params/grads count mismatch");
    if (m_.empty()) {
      for (const Matrix* p : params) {
        m_.emplace_back(p->rows(), p->cols());
        v_.emplace_back(p->rows(), p->cols());
      }
    }
    if (params.size() != m_.size())
      throw std::invalid_argument("Adam::step: parameter count changed between steps");
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, double(t_));
    const double c2 = 1.0 - std::pow(beta2_, double(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
      Matrix& p = *params[k];
      const Matrix& g = *grads[k];
      if (!p.same_shape(g) || !p.same_shape(m_[k]))
        throw std::invalid_argument("Adam::step: shape mismatch at parameter " +
                                    std::to_string(k));
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double gv = g.data()[i];
        m_[k].data()[i] = beta1_ * m_[k].data()[i] + (1.0 - beta1_) * gv;
        v_[k].data()[i] = beta2_ * v_[k].data()[i] + (1.0 - beta2_) * gv * gv;
        const double mhat = m_[k].data()[i] / c1;
        const double vhat = v_[k].data()[i] / c2;
        p.data()[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

  double lr() const { return lr_; }
  long steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Matrix> m_, v_;
};

}  // namespace syncdgc
