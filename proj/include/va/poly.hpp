#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace va {

// Univariate polynomial, coefficients in ascending degree order.
class Poly {
 public:
  Poly() : c_{0.0} {}
  Poly(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }

  double operator()(double x) const {
    double r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly{};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Poly(std::move(d));
  }

  Poly operator+(const Poly& other) const {
    std::vector<double> s(std::max(c_.size(), other.c_.size()), 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) s[k] += c_[k];
    for (std::size_t k = 0; k < other.c_.size(); ++k) s[k] += other.c_[k];
    return Poly(std::move(s));
  }

  bool operator==(const Poly& other) const { return c_ == other.c_; }

 private:
  void trim() {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
    if (c_.empty()) c_.push_back(0.0);
  }
  std::vector<double> c_;
};

}  // namespace va
