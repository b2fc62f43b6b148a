#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypint/numerics.hpp"

namespace hypint::detail {

// Stopping rule shared by all series: a run of small terms plus a
// geometric bound on what is left.
class SeriesTail {
 public:
  static constexpr int kRun = 20;

  // mag: magnitude of the latest term or wavefront; scale: |partial sum|.
  // The decay rate compares the maxima of the last two windows, so
  // terms that ripple on the way down still give a usable bound.
  bool push(double mag, double scale, double tol) {
    scale = std::max(scale, 1e-300);
    mags_[count_ % (2 * kWindow)] = mag;
    ++count_;
    run_ = (mag <= tol * scale) ? run_ + 1 : 0;
    if (run_ < kRun || count_ < 2 * kWindow) return false;
    double recent = 0.0, older = 0.0;
    for (int k = 0; k < kWindow; ++k) {
      recent = std::max(recent, mags_[(count_ - 1 - k) % (2 * kWindow)]);
      older = std::max(older, mags_[(count_ - 1 - kWindow - k) % (2 * kWindow)]);
    }
    if (recent == 0.0) {
      tail_ = 0.0;
      return true;
    }
    if (!(recent < older)) return false;
    double rho = std::pow(recent / older, 1.0 / kWindow);
    tail_ = recent * rho / (1.0 - rho);
    return tail_ <= tol * scale;
  }

  double bound() const { return tail_; }

 private:
  static constexpr int kWindow = 10;
  double mags_[2 * kWindow] = {};
  int count_ = 0;
  int run_ = 0;
  double tail_ = std::numeric_limits<double>::infinity();
};

inline double mag1(Complex z) { return std::fabs(z.real()) + std::fabs(z.imag()); }

// Mantissa plus binary exponent, for products whose magnitude leaves
// the double range before the series converges.
struct Scaled {
  Complex m{1.0, 0.0};
  int e = 0;

  void normalize() {
    double s = std::max(std::fabs(m.real()), std::fabs(m.imag()));
    if (s == 0.0) {
      e = 0;
      return;
    }
    int k = 0;
    std::frexp(s, &k);
    m = Complex(std::ldexp(m.real(), -k), std::ldexp(m.imag(), -k));
    e += k;
  }
  Scaled& operator*=(Complex f) {
    m *= f;
    normalize();
    return *this;
  }
  Complex value() const { return {std::ldexp(m.real(), e), std::ldexp(m.imag(), e)}; }
};

}  // namespace hypint::detail
