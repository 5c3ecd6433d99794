#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gul {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// 2^{1/4}, the L2 normalisation of the Gaussian window.
inline constexpr double kFourthRootTwo = 1.189207115002721066717;

/// Raised for overflow, underdetermined probe setups and similar conditions
/// where the inputs are well formed but the computation cannot be certified.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed real interval used for certified L2 quantities.
struct Interval {
  double low = 0.0;
  double high = 0.0;

  [[nodiscard]] bool contains(double v) const { return low <= v && v <= high; }
  [[nodiscard]] double mid() const { return 0.5 * (low + high); }
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace detail
}  // namespace gul
