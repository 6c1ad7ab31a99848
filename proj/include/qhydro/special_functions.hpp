#pragma once

namespace qhydro {

// Order of a Bessel function of the first kind: 0 <= nu < 50.
class BesselOrder {
 public:
  static constexpr double kMax = 50.0;
  explicit BesselOrder(double nu);
  double value() const { return nu_; }

 private:
  double nu_;
};

// Gamma(x) for x > 0, Lanczos approximation. Relative error below 1e-12 on
// [0.5, 50]. Throws InvalidArgument for x <= 0.
double gamma(double x);

// J_nu(x) for 0 <= x <= 200. Ascending series for x <= 12, normalised
// Miller backward recurrence above. Absolute error below 1e-10 for x <= 50.
double bessel_j(BesselOrder order, double x);
inline double bessel_j(double nu, double x) { return bessel_j(BesselOrder(nu), x); }

// The index-th positive zero of J_nu (index >= 1), bracketed by a scan and
// bisected to an interval width below 1e-12.
double bessel_j_zero(BesselOrder order, int index);
inline double bessel_j_zero(double nu, int index) { return bessel_j_zero(BesselOrder(nu), index); }

}  // namespace qhydro
