// Common scalar aliases, error types and frequency grids.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gadi {

using Complex = std::complex<double>;
inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inconsistent or under-resolved configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a precondition between two objects (mismatched endpoints,
// non-even pulse, mismatched spectra, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical routine could not reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double worst_error)
      : NumericalError(what), worst_error_(worst_error) {}
  double worst_error() const { return worst_error_; }

 private:
  double worst_error_;
};

// |1 - Gamma R| fell below the resonance guard.
class ResonanceError : public NumericalError {
 public:
  ResonanceError(const std::string& what, double omega)
      : NumericalError(what), omega_(omega) {}
  double omega() const { return omega_; }

 private:
  double omega_;
};

// Uniform grid of strictly positive scaled frequencies.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  FrequencyGrid(double omega_min, double d_omega, std::size_t count);

  // Grid covering [omega_min, omega_max] with spacing d_omega (last point
  // is the largest grid value not exceeding omega_max).
  static FrequencyGrid covering(double omega_min, double omega_max, double d_omega);

  double operator[](std::size_t k) const { return omega_min_ + static_cast<double>(k) * d_omega_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  double spacing() const { return d_omega_; }
  double front() const { return omega_min_; }
  double back() const { return (*this)[count_ - 1]; }
  Eigen::VectorXd values() const;

 private:
  double omega_min_ = 1.0;
  double d_omega_ = 1.0;
  std::size_t count_ = 0;
};

// Numerical knobs shared by the propagator, the source quadrature and the
// thin-annulus precondition.
struct Tolerances {
  double phase_fraction = 0.25;
  double wavelength_fraction = 0.1;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
};

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gadi
