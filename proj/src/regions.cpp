#include <array>
#include <cmath>

#include "hypint/errors.hpp"
#include "hypint/series.hpp"

namespace hypint {

namespace {

constexpr std::array<std::pair<Region, std::string_view>, 9> kRegionNames{{
    {Region::Omega1, "Omega1"},
    {Region::Omega2Real, "Omega2-real"},
    {Region::FP41, "FP-41"},
    {Region::FP44, "FP-44"},
    {Region::Thm41Domain, "Thm41-domain"},
    {Region::Case1, "Case1"},
    {Region::Case2, "Case2"},
    {Region::Case3, "Case3"},
    {Region::Case4, "Case4"},
}};

bool on_ray_from_one(Complex w) { return w.imag() == 0.0 && w.real() >= 1.0; }

// True when v(u) = p + q u stays off (0, 1] for u in [0, 1].
bool linear_avoids_unit_interval(Complex p, Complex q) {
  if (q.imag() == 0.0) {
    if (p.imag() != 0.0) return true;
    // real segment from p to p + q
    double lo = std::min(p.real(), p.real() + q.real());
    double hi = std::max(p.real(), p.real() + q.real());
    return hi <= 0.0 || lo > 1.0;
  }
  double u = -p.imag() / q.imag();
  if (u < 0.0 || u > 1.0) return true;
  double v = p.real() + q.real() * u;
  return !(v > 0.0 && v <= 1.0);
}

}  // namespace

std::string_view region_name(Region r) {
  for (const auto& [id, name] : kRegionNames)
    if (id == r) return name;
  return "unknown";
}

std::optional<Region> parse_region(std::string_view name) {
  for (const auto& [id, n] : kRegionNames)
    if (n == name) return id;
  return std::nullopt;
}

bool region_contains(Region r, Complex x, Complex y) {
  switch (r) {
    case Region::Omega1:
      return std::abs(x) < 1.0 && std::abs(y) < 1.0 / (std::abs(x) + 1.0);
    case Region::FP41:
      return std::abs(x) < 1.0 && std::abs(1.0 - y) < 1.0;
    case Region::FP44:
      return y != 0.0 && std::abs(x / y) + std::abs(1.0 - 1.0 / y) < 1.0;
    case Region::Thm41Domain:
      return !on_ray_from_one(x) && !(y.imag() == 0.0 && y.real() <= 0.0);
    default:
      break;
  }
  if (x.imag() != 0.0 || y.imag() != 0.0)
    throw UnsupportedRegion(std::string(region_name(r)) + " is defined for real points only");
  const double xr = x.real(), yr = y.real();
  switch (r) {
    case Region::Omega2Real:
      if (!(xr < 1.0)) return false;
      return xr <= 0.0 ? (xr - 1.0) * yr < 1.0 : yr > -1.0;
    case Region::Case1: return xr <= 0.0 && xr + yr > 1.0;
    case Region::Case2: return xr >= 0.0 && xr < 1.0 && yr > 1.0;
    case Region::Case3: return xr <= 0.0 && yr < 0.0;
    case Region::Case4: return xr >= 0.0 && xr < 1.0 && yr < 0.0;
    default: return false;
  }
}

bool in_h2_single_region(Complex x, Complex y) {
  if (on_ray_from_one(x)) return false;
  // y(xu - 1) in [1, inf)  <=>  1 / (y(xu - 1)) in (0, 1]; handle via the
  // linear function w(u) = -y + xy u directly.
  Complex p = -y, q = x * y;
  if (q.imag() == 0.0) {
    if (p.imag() != 0.0) return true;
    return std::max(p.real(), p.real() + q.real()) < 1.0;
  }
  double u = -p.imag() / q.imag();
  if (u < 0.0 || u > 1.0) return true;
  return p.real() + q.real() * u < 1.0;
}

bool in_h2_transformed_region(Complex x, Complex y) {
  if (on_ray_from_one(x)) return false;
  Complex k = y * (x - 1.0);
  if (k == 0.0) return true;
  // y(x-1)/(1-xu) in [1, inf)  <=>  (1 - xu)/k in (0, 1]
  return linear_avoids_unit_interval(1.0 / k, -x / k);
}

}  // namespace hypint
