#include "ordsep/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ordsep {

namespace {

// Evaluates the lower and upper tails of the standard normal distribution
// in one pass.  This is the ANORM scheme of Cody's SPECFUN package
// ("Rational Chebyshev approximations for the error function",
// Math. Comp. 23, 1969), which splits the axis into three ranges and uses
// near-minimax rational functions on each.  The exp(-z*z/2) factor is
// computed as exp(-u*u/2)*exp(-del/2) with u a 1/16th-grid truncation of
// |z| so that the argument reduction does not lose tail accuracy.
void normal_cdf_both(double z, double& lower, double& upper) {
  static const double kA[5] = {
      2.2352520354606839287e00, 1.6102823106855587881e02,
      1.0676894854603709582e03, 1.8154981253343561249e04,
      6.5682337918207449113e-2};
  static const double kB[4] = {
      4.7202581904688241870e01, 9.7609855173777669322e02,
      1.0260932208618978205e04, 4.5507789335026729956e04};
  static const double kC[9] = {
      3.9894151208813466764e-1, 8.8831497943883759412e00,
      9.3506656132177855979e01, 5.9727027639480026226e02,
      2.4945375852903726711e03, 6.8481904505362823326e03,
      1.1602651437647350124e04, 9.8427148383839780218e03,
      1.0765576773720192317e-8};
  static const double kD[8] = {
      2.2266688044328115691e01, 2.3538790178262499861e02,
      1.5193775994075548050e03, 6.4855582982667607550e03,
      1.8615571640885098091e04, 3.4900952721145977266e04,
      3.8912003286093271411e04, 1.9685429676859990727e04};
  static const double kP[6] = {
      2.1589853405795699e-1, 1.274011611602473639e-1,
      2.2235277870649807e-2, 1.421619193227893466e-3,
      2.9112874951168792e-5, 2.307344176494017303e-2};
  static const double kQ[5] = {
      1.28426009614491121e00, 4.68238212480865118e-1,
      6.59881378689285515e-2, 3.78239633202758244e-3,
      7.29751555083966205e-5};
  static const double kInvSqrt2Pi = 3.9894228040143267794e-1;
  static const double kThreshold = 0.66291;
  static const double kRoot32 = 5.656854249492380195e0;

  const double eps = std::numeric_limits<double>::epsilon() * 0.5;
  const double tiny = std::numeric_limits<double>::min();
  const double y = std::fabs(z);

  if (y <= kThreshold) {
    double xsq = y > eps ? z * z : 0.0;
    double xnum = kA[4] * xsq;
    double xden = xsq;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + kA[i]) * xsq;
      xden = (xden + kB[i]) * xsq;
    }
    const double temp = z * (xnum + kA[3]) / (xden + kB[3]);
    lower = 0.5 + temp;
    upper = 0.5 - temp;
    return;
  }

  double result;
  if (y <= kRoot32) {
    double xnum = kC[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + kC[i]) * y;
      xden = (xden + kD[i]) * y;
    }
    result = (xnum + kC[7]) / (xden + kD[7]);
  } else {
    const double xsq = 1.0 / (z * z);
    double xnum = kP[5] * xsq;
    double xden = xsq;
    for (int i = 0; i < 4; ++i) {
      xnum = (xnum + kP[i]) * xsq;
      xden = (xden + kQ[i]) * xsq;
    }
    result = xsq * (xnum + kP[4]) / (xden + kQ[4]);
    result = (kInvSqrt2Pi - result) / y;
  }
  const double u = std::trunc(y * 16.0) / 16.0;
  const double del = (y - u) * (y + u);
  result *= std::exp(-u * u * 0.5) * std::exp(-del * 0.5);
  if (result < tiny) result = 0.0;

  if (z < 0.0) {
    lower = result;
    upper = 1.0 - result;
  } else {
    lower = 1.0 - result;
    upper = result;
  }
}

}  // namespace

double std_normal_cdf(double z) {
  double lower, upper;
  normal_cdf_both(z, lower, upper);
  return lower;
}

double std_normal_upper_tail(double z) {
  double lower, upper;
  normal_cdf_both(z, lower, upper);
  return upper;
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");

  // Work on the lower half and mirror, so the tail branch of the initial
  // guess and the refinement both see a small probability.
  const bool mirrored = p > 0.5;
  const double pl = mirrored ? 1.0 - p : p;

  // Acklam's rational approximation (relative error ~1.15e-9).
  static const double kA[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
  static const double kB[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
  static const double kC[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
  static const double kD[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
  static const double kPLow = 0.02425;

  double x;
  if (pl < kPLow) {
    const double q = std::sqrt(-2.0 * std::log(pl));
    x = (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q +
         kC[5]) /
        ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  } else {
    const double q = pl - 0.5;
    const double r = q * q;
    x = (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r +
         kA[5]) *
        q /
        (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r +
         1.0);
  }

  // One Halley step against the forward function.  The residual is formed
  // from the lower tail, which is relatively accurate for x < 0.
  const double err = std_normal_cdf(x) - pl;
  const double u =
      err * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(x * x * 0.5);
  x = x - u / (1.0 + x * u * 0.5);

  return mirrored ? -x : x;
}

}  // namespace ordsep
