#include "pfno/train/adam.hpp"

#include <cmath>

#include "pfno/error.hpp"

namespace pfno {

Adam::Adam(std::size_t size, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(size, 0.0), v_(size, 0.0) {}

void Adam::step(std::vector<double>& theta, const std::vector<double>& grad) {
  if (theta.size() != m_.size() || grad.size() != m_.size()) throw InvalidArgument("adam: size mismatch");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t j = 0; j < theta.size(); ++j) {
    m_[j] = beta1_ * m_[j] + (1.0 - beta1_) * grad[j];
    v_[j] = beta2_ * v_[j] + (1.0 - beta2_) * grad[j] * grad[j];
    theta[j] -= lr_ * (m_[j] / c1) / (std::sqrt(v_[j] / c2) + eps_);
  }
}

}  // namespace pfno
