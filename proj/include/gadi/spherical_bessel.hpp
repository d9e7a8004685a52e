// Spherical Bessel functions of the first kind for real arguments.
#pragma once

namespace gadi {

struct BesselValue {
  double j = 0.0;
  double dj = 0.0;  // d j_l / dx
};

// j_l(x) and j_l'(x), x >= 0: upward recurrence where it is stable (x > l),
// normalized downward (Miller) recurrence otherwise.
BesselValue spherical_bessel_j(int l, double x);

}  // namespace gadi
