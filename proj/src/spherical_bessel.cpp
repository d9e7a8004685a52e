#include "gadi/spherical_bessel.hpp"

#include <cmath>
#include <vector>

#include "gadi/core.hpp"

namespace gadi {

namespace {

// j_0 .. j_{l+1} at x; out has l + 2 entries.
void bessel_sequence(int l, double x, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(l) + 2, 0.0);
  const double s = std::sin(x);
  const double c = std::cos(x);
  if (x > l + 1.0) {
    out[0] = s / x;
    out[1] = s / (x * x) - c / x;
    for (int n = 1; n <= l; ++n) out[n + 1] = (2.0 * n + 1.0) / x * out[n] - out[n - 1];
    return;
  }
  // Start well above the turning point and recur down, rescaling to avoid overflow.
  const int start = l + 20 + static_cast<int>(std::ceil(std::sqrt(40.0 * (l + 1)) + x));
  std::vector<double> all(static_cast<std::size_t>(start) + 2, 0.0);
  all[start] = 1e-300;
  for (int n = start; n >= 1; --n) {
    all[n - 1] = (2.0 * n + 1.0) / x * all[n] - all[n + 1];
    if (std::abs(all[n - 1]) > 1e250)
      for (int k = n - 1; k <= start; ++k) all[k] *= 1e-250;
  }
  for (int n = 0; n <= l + 1; ++n) out[n] = all[n];
  // normalize against whichever of j_0, j_1 is better conditioned
  const double j0 = s / x;
  const double j1 = s / (x * x) - c / x;
  const double scale = std::abs(j0) > std::abs(j1) ? j0 / out[0] : j1 / out[1];
  for (auto& v : out) v *= scale;
}

}  // namespace

BesselValue spherical_bessel_j(int l, double x) {
  if (l < 0) throw DomainError("spherical_bessel_j: l must be >= 0");
  if (x < 0.0) throw DomainError("spherical_bessel_j: x must be >= 0");
  if (x < 1e-3) {
    // two-term series: j_l = x^l / (2l+1)!! (1 - x^2 / (2 (2l + 3)))
    double dfact = 1.0;
    for (int k = 1; k <= l; ++k) dfact *= 2.0 * k + 1.0;
    const double xl = std::pow(x, l);
    const double corr = x * x / (2.0 * (2.0 * l + 3.0));
    BesselValue v;
    v.j = xl / dfact * (1.0 - corr);
    const double dxl = l == 0 ? 0.0 : l * std::pow(x, l - 1);
    v.dj = (dxl * (1.0 - corr) - xl * x / (2.0 * l + 3.0)) / dfact;
    return v;
  }
  std::vector<double> seq;
  bessel_sequence(l, x, seq);
  // j_l' = (l / x) j_l - j_{l+1}
  return {seq[l], l / x * seq[l] - seq[l + 1]};
}

}  // namespace gadi
