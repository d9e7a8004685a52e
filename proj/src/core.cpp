#include "gadi/core.hpp"

#include <cmath>

namespace gadi {

FrequencyGrid::FrequencyGrid(double omega_min, double d_omega, std::size_t count)
    : omega_min_(omega_min), d_omega_(d_omega), count_(count) {
  if (!(omega_min > 0.0)) throw ConfigError("frequency grid: omega_min must be > 0");
  if (!(d_omega > 0.0)) throw ConfigError("frequency grid: d_omega must be > 0");
}

FrequencyGrid FrequencyGrid::covering(double omega_min, double omega_max, double d_omega) {
  if (!(omega_max >= omega_min)) throw ConfigError("frequency grid: omega_max < omega_min");
  if (!(d_omega > 0.0)) throw ConfigError("frequency grid: d_omega must be > 0");
  // small slack so that an endpoint landing on the grid up to rounding is kept
  const double span = (omega_max - omega_min) / d_omega;
  const auto steps = static_cast<std::size_t>(std::floor(span + 1e-9));
  return FrequencyGrid(omega_min, d_omega, steps + 1);
}

Eigen::VectorXd FrequencyGrid::values() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(count_));
  for (std::size_t k = 0; k < count_; ++k) out[static_cast<Eigen::Index>(k)] = (*this)[k];
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("loglog_slope: need >= 2 matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw DomainError("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace gadi
