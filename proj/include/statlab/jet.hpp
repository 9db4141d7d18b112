#pragma once

// Second-order jets: a value with its gradient and Hessian in chart
// coordinates. Products truncate at second order, which is exact for the
// value, gradient and Hessian of polynomial compositions of jets.

#include <cstddef>
#include <vector>

namespace statlab {

class Jet {
 public:
  Jet() = default;
  explicit Jet(std::size_t n) : n_(n), grad_(n, 0.0), hess_(n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }
  double& value() noexcept { return value_; }
  double value() const noexcept { return value_; }
  double& grad(std::size_t i) noexcept { return grad_[i]; }
  double grad(std::size_t i) const noexcept { return grad_[i]; }
  double& hess(std::size_t i, std::size_t j) noexcept { return hess_[i * n_ + j]; }
  double hess(std::size_t i, std::size_t j) const noexcept { return hess_[i * n_ + j]; }

  /// this += a * b
  void add_product(const Jet& a, const Jet& b) {
    value_ += a.value_ * b.value_;
    for (std::size_t i = 0; i < n_; ++i) grad_[i] += a.grad_[i] * b.value_ + a.value_ * b.grad_[i];
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        hess_[i * n_ + j] += a.hess_[i * n_ + j] * b.value_ + a.grad_[i] * b.grad_[j] +
                             a.grad_[j] * b.grad_[i] + a.value_ * b.hess_[i * n_ + j];
      }
    }
  }

  Jet& operator+=(const Jet& o) {
    value_ += o.value_;
    for (std::size_t i = 0; i < n_; ++i) grad_[i] += o.grad_[i];
    for (std::size_t i = 0; i < n_ * n_; ++i) hess_[i] += o.hess_[i];
    return *this;
  }

  Jet& operator*=(double s) {
    value_ *= s;
    for (auto& g : grad_) g *= s;
    for (auto& h : hess_) h *= s;
    return *this;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out(a.n_);
    out.add_product(a, b);
    return out;
  }

 private:
  std::size_t n_ = 0;
  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;
};

}  // namespace statlab
