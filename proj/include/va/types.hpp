#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <string>

namespace va {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Central tolerances. Matrices here are at most 8x8, so these are
// absolute-ish tolerances scaled by entry magnitude where noted.
namespace tol {
inline constexpr double pw_axiom = 1e-10;       // (P,W) axiom residuals
inline constexpr double orthonormal = 1e-12;    // basis orthonormality
inline constexpr double dedup = 1e-8;           // PWSet dedup in d_Z
inline constexpr double cluster = 1e-4;         // tangent clustering in d_Z
inline constexpr double numeric_match = 1e-6;   // numeric vs closed form, d_Z
inline constexpr double psd_rel = 1e-9;         // PSD verdicts, scaled by 1+|W|
inline constexpr double exact = 1e-12;          // equality of exactly-computed reals
inline constexpr double membership = 1e-9;      // subgradient membership checks
}  // namespace tol

class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class domain_error : public error {
 public:
  explicit domain_error(const std::string& msg) : error(msg) {}
};

class precondition_error : public error {
 public:
  explicit precondition_error(const std::string& msg) : error(msg) {}
};

// Subspace has no rge(P,W) representation, i.e. L != L*.
class not_self_adjoint_error : public error {
 public:
  explicit not_self_adjoint_error(const std::string& msg) : error(msg) {}
};

inline Vec vec1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

inline Vec vec2(double x, double y) {
  Vec v(2);
  v[0] = x;
  v[1] = y;
  return v;
}

}  // namespace va
