#include "gadi/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gadi/quadrature.hpp"
#include "gadi/random.hpp"

namespace gadi {

namespace {

const QuadratureRule& unit_rule() {
  static const QuadratureRule rule = gauss_legendre(20);
  return rule;
}

std::string fmt_radius(double r) {
  std::ostringstream os;
  os.precision(10);
  os << r;
  return os.str();
}

}  // namespace

std::string to_string(FluctuationKind kind) {
  switch (kind) {
    case FluctuationKind::none: return "none";
    case FluctuationKind::layered: return "layered";
    case FluctuationKind::random: return "random";
  }
  return "unknown";
}

// ---------------------------------------------------------------- profile

SmoothProfile SmoothProfile::constant(double speed, double outer_radius) {
  return piecewise_constant({Layer{0.0, outer_radius, speed}});
}

SmoothProfile SmoothProfile::piecewise_constant(std::vector<Layer> layers) {
  if (layers.empty()) throw DomainError("profile: no layers given");
  std::sort(layers.begin(), layers.end(),
            [](const Layer& a, const Layer& b) { return a.r_lo < b.r_lo; });
  if (layers.front().r_lo != 0.0) throw DomainError("profile: layers must start at r = 0");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!(layers[i].r_hi > layers[i].r_lo))
      throw DomainError("profile: layer boundaries must be strictly increasing");
    if (!(layers[i].value > 0.0)) throw DomainError("profile: speed must be positive");
    if (i > 0 && std::abs(layers[i].r_lo - layers[i - 1].r_hi) > 1e-14)
      throw DomainError("profile: layers must be contiguous (gap or overlap at r = " +
                        fmt_radius(layers[i].r_lo) + ")");
  }
  SmoothProfile p;
  p.kind_ = Kind::piecewise_constant;
  p.layers_ = std::move(layers);
  p.outer_radius_ = p.layers_.back().r_hi;
  p.finish();
  return p;
}

SmoothProfile SmoothProfile::sampled(std::vector<double> radii, std::vector<double> speeds) {
  if (radii.size() != speeds.size() || radii.size() < 2)
    throw DomainError("profile: sampled profile needs >= 2 matching (r, c) samples");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw DomainError("profile: sample radii must be strictly increasing");
    if (!(speeds[i] > 0.0)) throw DomainError("profile: speed must be positive");
  }
  if (radii.front() < 0.0) throw DomainError("profile: negative radius");

  SmoothProfile p;
  p.kind_ = Kind::sampled;
  p.knots_ = std::move(radii);
  p.values_ = std::move(speeds);
  p.outer_radius_ = p.knots_.back();

  // Clamped (zero slope) at the first knot, natural at the last one.
  const auto n = static_cast<Eigen::Index>(p.knots_.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const auto& x = p.knots_;
  const auto& y = p.values_;
  const double h0 = x[1] - x[0];
  a(0, 0) = 2.0 * h0;
  a(0, 1) = h0;
  rhs[0] = 6.0 * (y[1] - y[0]) / h0;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double hl = x[i] - x[i - 1];
    const double hr = x[i + 1] - x[i];
    a(i, i - 1) = hl;
    a(i, i) = 2.0 * (hl + hr);
    a(i, i + 1) = hr;
    rhs[i] = 6.0 * ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl);
  }
  a(n - 1, n - 1) = 1.0;
  const Eigen::VectorXd m = a.partialPivLu().solve(rhs);
  p.second_derivs_.assign(m.data(), m.data() + n);
  p.finish();
  return p;
}

std::size_t SmoothProfile::interval(double r) const {
  if (kind_ == Kind::piecewise_constant) {
    auto it = std::upper_bound(layers_.begin(), layers_.end(), r,
                               [](double v, const Layer& l) { return v < l.r_lo; });
    const auto idx = static_cast<std::size_t>(std::distance(layers_.begin(), it));
    return idx == 0 ? 0 : std::min(idx - 1, layers_.size() - 1);
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
  const auto idx = static_cast<std::size_t>(std::distance(knots_.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, knots_.size() - 2);
}

double SmoothProfile::speed(double r) const {
  if (kind_ == Kind::piecewise_constant) return layers_[interval(r)].value;
  if (r <= knots_.front()) return values_.front();
  if (r >= knots_.back()) return values_.back();
  const std::size_t i = interval(r);
  const double h = knots_[i + 1] - knots_[i];
  const double left = knots_[i + 1] - r;
  const double right = r - knots_[i];
  const double mi = second_derivs_[i];
  const double mj = second_derivs_[i + 1];
  return mi * left * left * left / (6.0 * h) + mj * right * right * right / (6.0 * h) +
         (values_[i] / h - mi * h / 6.0) * left + (values_[i + 1] / h - mj * h / 6.0) * right;
}

double SmoothProfile::partial_slowness(std::size_t i, double r) const {
  if (kind_ == Kind::piecewise_constant) return (r - layers_[i].r_lo) / layers_[i].value;
  const double lo = knots_[i];
  if (r <= lo) return 0.0;
  const auto& rule = unit_rule();
  const double half = 0.5 * (r - lo);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < rule.size(); ++k)
    acc += rule.weights[k] / speed(lo + half * (rule.nodes[k] + 1.0));
  return half * acc;
}

double SmoothProfile::cumulative_slowness(double r) const {
  if (kind_ == Kind::sampled && r <= knots_.front()) return r / values_.front();
  const std::size_t i = interval(r);
  return cumulative_[i] + partial_slowness(i, r);
}

void SmoothProfile::finish() {
  breakpoints_.clear();
  cumulative_.clear();
  if (kind_ == Kind::piecewise_constant) {
    double acc = 0.0;
    max_slowness_ = 0.0;
    min_slowness_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      cumulative_.push_back(acc);
      acc += (layers_[i].r_hi - layers_[i].r_lo) / layers_[i].value;
      max_slowness_ = std::max(max_slowness_, 1.0 / layers_[i].value);
      min_slowness_ = std::min(min_slowness_, 1.0 / layers_[i].value);
      if (i > 0) breakpoints_.push_back(layers_[i].r_lo);
    }
    return;
  }
  // Composite 2-panel Gauss on each knot interval.
  const auto& rule = unit_rule();
  double acc = knots_.front() / values_.front();
  max_slowness_ = 1.0 / values_.front();
  min_slowness_ = max_slowness_;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    cumulative_.push_back(acc);
    const double lo = knots_[i];
    const double hi = knots_[i + 1];
    const double quarter = 0.25 * (hi - lo);
    for (int panel = 0; panel < 2; ++panel) {
      const double mid = lo + quarter * (2 * panel + 1);
      for (Eigen::Index k = 0; k < rule.size(); ++k) {
        const double c = speed(mid + quarter * rule.nodes[k]);
        if (!(c > 0.0))
          throw DomainError("profile: spline interpolant is not positive near r = " +
                            fmt_radius(mid));
        acc += quarter * rule.weights[k] / c;
        max_slowness_ = std::max(max_slowness_, 1.0 / c);
        min_slowness_ = std::min(min_slowness_, 1.0 / c);
      }
    }
    if (i > 0) breakpoints_.push_back(knots_[i]);
  }
  breakpoints_.insert(breakpoints_.begin(), knots_.front());
}

// ------------------------------------------------------------ fluctuation

FluctuationModel FluctuationModel::layered(std::vector<Layer> layers) {
  FluctuationModel f;
  f.kind = FluctuationKind::layered;
  std::sort(layers.begin(), layers.end(),
            [](const Layer& a, const Layer& b) { return a.r_lo < b.r_lo; });
  f.layers = std::move(layers);
  if (!f.layers.empty()) {
    f.r_lo = f.layers.front().r_lo;
    f.r_hi = f.layers.back().r_hi;
  }
  return f;
}

FluctuationModel FluctuationModel::random(double amplitude, double correlation_length,
                                          double r_lo, double r_hi, std::uint64_t seed) {
  FluctuationModel f;
  f.kind = FluctuationKind::random;
  f.amplitude = amplitude;
  f.correlation_length = correlation_length;
  f.r_lo = r_lo;
  f.r_hi = r_hi;
  f.seed = seed;
  return f;
}

// ----------------------------------------------------------------- medium

Medium::Medium(double outer_radius, double epsilon, double kappa, double core_radius,
               SmoothProfile profile, FluctuationModel fluctuation)
    : outer_radius_(outer_radius),
      epsilon_(epsilon),
      kappa_(kappa),
      core_radius_(core_radius),
      profile_(std::move(profile)),
      fluctuation_(std::move(fluctuation)) {
  if (!(outer_radius_ > 0.0)) throw DomainError("medium: R_o must be positive");
  if (!(epsilon_ > 0.0 && epsilon_ < 1.0)) throw DomainError("medium: epsilon must lie in (0, 1)");
  if (!(kappa_ >= 0.0)) throw DomainError("medium: kappa must be >= 0");
  if (!(core_radius_ > 0.0 && core_radius_ < outer_radius_))
    throw DomainError("medium: r_core must lie in (0, R_o)");
  if (std::abs(profile_.outer_radius() - outer_radius_) > 1e-12 * outer_radius_)
    throw DomainError("medium: profile must cover exactly [0, R_o]");

  switch (fluctuation_.kind) {
    case FluctuationKind::none: break;
    case FluctuationKind::layered: {
      double prev = -1.0;
      for (const Layer& l : fluctuation_.layers) {
        if (!(l.r_hi > l.r_lo)) throw DomainError("fluctuation: empty or inverted layer");
        if (l.r_lo < prev - 1e-14) throw DomainError("fluctuation: overlapping layers");
        if (!edges_.empty() && std::abs(edges_.back() - l.r_lo) <= 1e-14) {
          edges_.back() = l.r_lo;
        } else {
          if (!edges_.empty()) values_.push_back(0.0);
          edges_.push_back(l.r_lo);
        }
        values_.push_back(l.value);
        edges_.push_back(l.r_hi);
        prev = l.r_hi;
      }
      break;
    }
    case FluctuationKind::random: {
      if (!(fluctuation_.correlation_length > 0.0))
        throw DomainError("fluctuation: correlation length must be positive");
      if (!(fluctuation_.r_hi > fluctuation_.r_lo))
        throw DomainError("fluctuation: empty random support");
      const double cell = epsilon_ * fluctuation_.correlation_length;
      const auto cells = static_cast<std::size_t>(
          std::ceil((fluctuation_.r_hi - fluctuation_.r_lo) / cell - 1e-9));
      edges_.reserve(cells + 1);
      values_.reserve(cells);
      for (std::size_t i = 0; i < cells; ++i) {
        edges_.push_back(fluctuation_.r_lo + static_cast<double>(i) * cell);
        CounterStream stream(stream_key(fluctuation_.seed, {i}));
        // uniform on [-sqrt(3), sqrt(3)]: unit variance, bounded
        values_.push_back(fluctuation_.amplitude * std::sqrt(3.0) * (2.0 * stream.uniform() - 1.0));
      }
      edges_.push_back(fluctuation_.r_hi);
      break;
    }
  }
  surface_speed_ = profile_.speed(outer_radius_);
  surface_cumulative_ = profile_.cumulative_slowness(outer_radius_);
  validate();
}

void Medium::validate() const {
  const auto& bps = profile_.breakpoints();
  for (double b : bps) {
    if (b < core_radius_ - 1e-14 && b > 0.0)
      throw DomainError("medium: c_o must be constant on the core [0, r_core] (breakpoint at r = " +
                        fmt_radius(b) + ")");
  }
  if (!edges_.empty()) {
    if (edges_.front() < core_radius_ - 1e-14)
      throw DomainError("medium: fluctuation support must exclude the core (starts at r = " +
                        fmt_radius(edges_.front()) + " < r_core)");
    if (edges_.back() > outer_radius_ + 1e-14)
      throw DomainError("medium: fluctuation support extends beyond R_o");
  }
  // 1/c_o^2 + V > 0 on every fluctuation cell.
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] >= 0.0) continue;
    const double lo = edges_[i];
    const double hi = edges_[i + 1];
    for (int k = 0; k <= 8; ++k) {
      const double r = lo + (hi - lo) * k / 8.0;
      const double c = profile_.speed(std::min(r, outer_radius_));
      if (!(1.0 / (c * c) + values_[i] > 0.0))
        throw DomainError("medium: total slowness squared 1/c_o^2 + V is not positive near r = " +
                          fmt_radius(r));
    }
  }
}

double Medium::perturbation(double r) const {
  if (edges_.empty() || r < edges_.front() || r >= edges_.back()) return 0.0;
  auto it = std::upper_bound(edges_.begin(), edges_.end(), r);
  const auto idx = static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
  return values_[idx];
}

double travel_time(const Medium& medium, double r, double r_ref) {
  if (!(r >= 0.0 && r <= r_ref && r_ref <= medium.outer_radius() * (1.0 + 1e-14)))
    throw DomainError("travel_time: need 0 <= r <= r_ref <= R_o (got r = " + fmt_radius(r) +
                      ", r_ref = " + fmt_radius(r_ref) + ")");
  if (r == r_ref) return 0.0;
  return medium.profile().cumulative_slowness(r_ref) - medium.profile().cumulative_slowness(r);
}

double gamma_surface(const Medium& medium) {
  const double kc = medium.kappa() * medium.surface_speed();
  return (1.0 - kc) / (1.0 + kc);
}

double slowness_perturbation(const Medium& medium, double r) {
  if (r < medium.core_radius()) return 0.0;
  return medium.perturbation(r);
}

}  // namespace gadi
