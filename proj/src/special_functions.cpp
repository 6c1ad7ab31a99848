#include "qhydro/special_functions.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <vector>
#include <algorithm>

#include "qhydro/constants.hpp"
#include "qhydro/error.hpp"

namespace qhydro {

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu >= 0.0) || !(nu < kMax)) {
    std::ostringstream os;
    os << "BesselOrder: order " << nu << " outside [0, " << kMax << ")";
    throw InvalidArgument(os.str());
  }
}

double gamma(double x) {
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << "gamma: argument " << x << " must be > 0";
    throw InvalidArgument(os.str());
  }
  if (x < 0.5) return gamma(x + 1.0) / x;
  // Lanczos, g = 7, n = 9.
  static constexpr std::array<double, 9> kCoeff = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double a = kCoeff[0];
  for (int i = 1; i < 9; ++i) a += kCoeff[i] / (z + i);
  const double t = z + 7.5;
  // t^(z+1/2) e^-t split in two halves to postpone overflow near x = 171.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(kTwoPi) * half * (half * std::exp(-t)) * a;
}

namespace {

constexpr double kSeriesLimit = 12.0;

double series(double nu, double x) {
  const double q = 0.25 * x * x;
  double term = std::pow(0.5 * x, nu) / gamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (k * (k + nu));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) || std::abs(term) < 1e-300) break;
  }
  return sum;
}

// Backward recurrence J_{mu-1} = (2 mu / x) J_mu - J_{mu+1} from a start
// index far above both nu and x, normalised with
//   (x/2)^a = sum_k (a + 2k) Gamma(a + k) / k! J_{a+2k}(x),  a = frac(nu).
double miller(double nu, double x) {
  const double alpha = nu - std::floor(nu);
  const auto m = static_cast<int>(std::floor(nu));
  const double top = std::max(static_cast<double>(m), x);
  int start = static_cast<int>(top + 20.0 + std::sqrt(40.0 * top));
  if (start % 2 != 0) ++start;

  // weight_k = (a + 2k) Gamma(a + k) / k!, with the k = 0 term Gamma(a + 1).
  std::vector<double> weights(start / 2 + 1);
  weights[0] = gamma(alpha + 1.0);
  double c = gamma(alpha + 1.0);  // Gamma(a + k) / k! at k = 1
  for (int k = 1; k <= start / 2; ++k) {
    weights[k] = (alpha + 2.0 * k) * c;
    c *= (alpha + k) / (k + 1.0);
  }

  double f_next = 0.0, f = 1e-300, target = 0.0, norm = 0.0;
  for (int j = start; j >= 0; --j) {
    if (j == m) target = f;
    if (j % 2 == 0) norm += weights[j / 2] * f;
    if (j == 0) break;
    const double f_prev = (2.0 * (alpha + j) / x) * f - f_next;
    f_next = f;
    f = f_prev;
    if (std::abs(f) > 1e250) {
      f *= 1e-250;
      f_next *= 1e-250;
      norm *= 1e-250;
      target *= 1e-250;
    }
  }
  return target * std::pow(0.5 * x, alpha) / norm;
}

}  // namespace

double bessel_j(BesselOrder order, double x) {
  if (!(x >= 0.0) || !(x <= 200.0)) {
    std::ostringstream os;
    os << "bessel_j: argument " << x << " outside [0, 200]";
    throw InvalidArgument(os.str());
  }
  const double nu = order.value();
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= kSeriesLimit) return series(nu, x);
  return miller(nu, x);
}

double bessel_j_zero(BesselOrder order, int index) {
  if (index < 1) throw InvalidArgument("bessel_j_zero: index must be >= 1");
  // J_nu > 0 on (0, j_{nu,1}) and j_{nu,1} > nu.
  double a = std::max(0.5 * order.value(), 0.1);
  double fa = bessel_j(order, a);
  constexpr double kStep = 0.1;
  int found = 0;
  while (true) {
    const double b = a + kStep;
    if (b > 200.0) throw InvalidArgument("bessel_j_zero: zero lies beyond x = 200");
    const double fb = bessel_j(order, b);
    if ((fa < 0.0) != (fb < 0.0) && ++found == index) {
      double lo = a, hi = b, flo = fa;
      while (hi - lo > 1e-13 * std::max(1.0, lo)) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_j(order, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    fa = fb;
  }
}

}  // namespace qhydro
