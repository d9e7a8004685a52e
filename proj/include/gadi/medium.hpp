// Stratified-sphere configuration: smooth background speed c_o(r), rapid
// slowness fluctuation V^eps(r), surface dissipation kappa and scale eps.
//
// Radii and speeds are order one; eps carries the scale separation.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gadi/core.hpp"

namespace gadi {

struct Layer {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double value = 0.0;
};

class SmoothProfile {
 public:
  enum class Kind { piecewise_constant, sampled };

  static SmoothProfile constant(double speed, double outer_radius);
  // Layers must be contiguous, start at 0 and have positive speeds.
  static SmoothProfile piecewise_constant(std::vector<Layer> layers);
  // Cubic spline through (radii[i], speeds[i]) with zero slope at the first
  // knot; c_o is held constant at speeds[0] below radii[0].
  static SmoothProfile sampled(std::vector<double> radii, std::vector<double> speeds);

  Kind kind() const { return kind_; }
  double outer_radius() const { return outer_radius_; }
  double speed(double r) const;
  // int_0^r ds / c_o(s)
  double cumulative_slowness(double r) const;
  double max_slowness() const { return max_slowness_; }
  double min_slowness() const { return min_slowness_; }
  // Radii where c_o or one of its derivatives jumps (layer edges / knots).
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Layer>& layers() const { return layers_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& knot_speeds() const { return values_; }

 private:
  SmoothProfile() = default;
  void finish();
  std::size_t interval(double r) const;
  double partial_slowness(std::size_t i, double r) const;

  Kind kind_ = Kind::piecewise_constant;
  double outer_radius_ = 1.0;
  std::vector<Layer> layers_;
  // spline data
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> second_derivs_;
  // cumulative slowness at layer starts / knots
  std::vector<double> cumulative_;
  std::vector<double> breakpoints_;
  double max_slowness_ = 1.0;
  double min_slowness_ = 1.0;
};

enum class FluctuationKind { none, layered, random };

std::string to_string(FluctuationKind kind);

struct FluctuationModel {
  FluctuationKind kind = FluctuationKind::none;
  // layered kind: value is the slowness-squared perturbation on each layer
  std::vector<Layer> layers;
  // random kind: V^eps(r) = amplitude * nu(r / eps), nu piecewise constant on
  // cells of length correlation_length (fast variable) with unit variance.
  double amplitude = 0.0;
  double correlation_length = 1.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::uint64_t seed = 0;

  static FluctuationModel none() { return {}; }
  static FluctuationModel layered(std::vector<Layer> layers);
  static FluctuationModel random(double amplitude, double correlation_length, double r_lo,
                                 double r_hi, std::uint64_t seed);
};

class Medium {
 public:
  Medium(double outer_radius, double epsilon, double kappa, double core_radius,
         SmoothProfile profile, FluctuationModel fluctuation);

  double outer_radius() const { return outer_radius_; }
  double epsilon() const { return epsilon_; }
  double kappa() const { return kappa_; }
  double core_radius() const { return core_radius_; }
  const SmoothProfile& profile() const { return profile_; }
  const FluctuationModel& fluctuation() const { return fluctuation_; }

  double speed(double r) const { return profile_.speed(r); }
  double surface_speed() const { return surface_speed_; }
  // tau(r, R_o)
  double travel_time_to_surface(double r) const {
    return surface_cumulative_ - profile_.cumulative_slowness(r);
  }
  double perturbation(double r) const;

  // Piecewise-constant realization of V^eps: value i holds on
  // [edges[i], edges[i+1]).
  std::span<const double> fluctuation_edges() const { return edges_; }
  std::span<const double> fluctuation_values() const { return values_; }

 private:
  void validate() const;

  double outer_radius_;
  double epsilon_;
  double kappa_;
  double core_radius_;
  SmoothProfile profile_;
  FluctuationModel fluctuation_;
  std::vector<double> edges_;
  std::vector<double> values_;
  double surface_speed_ = 1.0;
  double surface_cumulative_ = 0.0;
};

// int_r^{r_ref} dr' / c_o(r'); requires 0 <= r <= r_ref <= R_o.
double travel_time(const Medium& medium, double r, double r_ref);

// (1 - kappa c_o(R_o)) / (1 + kappa c_o(R_o))
double gamma_surface(const Medium& medium);

// V^eps(r); zero outside the fluctuation support and inside the core.
double slowness_perturbation(const Medium& medium, double r);

}  // namespace gadi
