#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace specbound {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an iterative kernel stops without meeting its convergence test.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, int iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

/// Raised when a geometric classification cannot be certified.
class Indeterminate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace specbound
