#pragma once

#include <string>
#include <vector>

#include "ordsep/rng.hpp"

namespace ordsep {

enum class CdfKind { kUniform, kTwoSidedZTest, kPiecewiseLinear };

struct CurvePoint {
  double x;  // abscissa in [0, 1], strictly increasing across points
  double p;  // distribution value in [0, 1], nondecreasing
};

// A continuous distribution function on [0, 1].  Three variants:
//
//   uniform           F(x) = x
//   two-sided z-test  law of the two-sided p-value of a z test with known
//                     variance when the true mean is mu_alt; parameters
//                     (mu0, mu_alt, sigma, samples_per_test)
//   piecewise linear  user-supplied curve through (0,0)...(1,1)
//
// Models are immutable after construction and cheap to copy.
class CdfModel {
 public:
  static CdfModel uniform();
  static CdfModel two_sided_ztest(double mu0, double mu_alt, double sigma,
                                  int samples_per_test);
  static CdfModel piecewise_linear(std::vector<CurvePoint> points);

  // Distribution function.  Throws std::domain_error outside [0, 1];
  // returns exactly 0 at 0 and exactly 1 at 1, and is clamped to [0, 1]
  // so downstream products of differences stay probabilities.
  double cdf(double x) const;

  // One draw with law cdf().
  double sample(SplitMix64& rng) const;

  CdfKind kind() const { return kind_; }
  const std::string& literal() const { return literal_; }

 private:
  CdfModel() = default;

  CdfKind kind_ = CdfKind::kUniform;
  // z-test parameters; shift_ = (mu0 - mu_alt) * sqrt(N) / sigma.
  double mu0_ = 0.0, mu_alt_ = 0.0, sigma_ = 1.0;
  int samples_per_test_ = 1;
  double shift_ = 0.0;
  std::vector<CurvePoint> points_;
  std::string literal_;
};

// Parses the CLI/config syntax:
//   uniform
//   ztest:mu0=<f>,muA=<f>,sigma=<f>,N=<int>
//   pwl:@<csv path>            (CSV with header "x,p")
//   pwl:<x>/<p>,<x>/<p>,...    (inline points)
// Throws std::invalid_argument with the offending field on bad input.
CdfModel parse_model_literal(const std::string& text);

}  // namespace ordsep
