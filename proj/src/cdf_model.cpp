#include "ordsep/cdf_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ordsep/normal.hpp"

namespace ordsep {

namespace {

std::string format_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CdfModel CdfModel::uniform() {
  CdfModel m;
  m.kind_ = CdfKind::kUniform;
  m.literal_ = "uniform";
  return m;
}

CdfModel CdfModel::two_sided_ztest(double mu0, double mu_alt, double sigma,
                                   int samples_per_test) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("ztest model: sigma must be positive");
  if (samples_per_test < 1)
    throw std::invalid_argument("ztest model: N must be a positive integer");
  CdfModel m;
  m.kind_ = CdfKind::kTwoSidedZTest;
  m.mu0_ = mu0;
  m.mu_alt_ = mu_alt;
  m.sigma_ = sigma;
  m.samples_per_test_ = samples_per_test;
  m.shift_ = (mu0 - mu_alt) * std::sqrt(static_cast<double>(samples_per_test)) /
             sigma;
  if (!std::isfinite(m.shift_))
    throw std::invalid_argument("ztest model: shift is not finite");
  m.literal_ = "ztest:mu0=" + format_param(mu0) + ",muA=" + format_param(mu_alt) +
               ",sigma=" + format_param(sigma) +
               ",N=" + std::to_string(samples_per_test);
  return m;
}

CdfModel CdfModel::piecewise_linear(std::vector<CurvePoint> points) {
  if (points.size() < 2)
    throw std::invalid_argument("pwl model: need at least the two endpoints");
  if (points.front().x != 0.0 || points.front().p != 0.0)
    throw std::invalid_argument("pwl model: first point must be (0, 0)");
  if (points.back().x != 1.0 || points.back().p != 1.0)
    throw std::invalid_argument("pwl model: last point must be (1, 1)");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].x > points[i - 1].x))
      throw std::invalid_argument("pwl model: x values must strictly increase");
    if (points[i].p < points[i - 1].p)
      throw std::invalid_argument("pwl model: p values must not decrease");
  }
  for (const CurvePoint& pt : points)
    if (!(pt.x >= 0.0 && pt.x <= 1.0 && pt.p >= 0.0 && pt.p <= 1.0))
      throw std::invalid_argument("pwl model: points must lie in [0,1]^2");

  CdfModel m;
  m.kind_ = CdfKind::kPiecewiseLinear;
  std::string lit = "pwl:";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) lit += ',';
    lit += format_param(points[i].x) + "/" + format_param(points[i].p);
  }
  m.points_ = std::move(points);
  m.literal_ = std::move(lit);
  return m;
}

double CdfModel::cdf(double x) const {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("cdf: argument outside [0, 1]");
  // Exact endpoints for every variant; the z-test formula would otherwise
  // hit the quantile singularity at x = 0.
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  switch (kind_) {
    case CdfKind::kUniform:
      return x;
    case CdfKind::kTwoSidedZTest: {
      // Pr(two-sided p-value <= x) when the test statistic is shifted:
      //   Phi(Phi^-1(x/2) + shift) + 1 - Phi(Phi^-1(1 - x/2) + shift).
      // Phi^-1(1 - x/2) = -Phi^-1(x/2) by symmetry, which avoids forming
      // 1 - x/2, and the second term uses the upper tail directly.
      const double q = std_normal_quantile(0.5 * x);  // <= 0
      const double v =
          std_normal_cdf(q + shift_) + std_normal_upper_tail(-q + shift_);
      return std::clamp(v, 0.0, 1.0);
    }
    case CdfKind::kPiecewiseLinear: {
      auto it = std::upper_bound(
          points_.begin(), points_.end(), x,
          [](double v, const CurvePoint& pt) { return v < pt.x; });
      const CurvePoint& hi = *it;
      const CurvePoint& lo = *(it - 1);
      const double t = (x - lo.x) / (hi.x - lo.x);
      return std::clamp(lo.p + t * (hi.p - lo.p), 0.0, 1.0);
    }
  }
  return x;  // unreachable
}

double CdfModel::sample(SplitMix64& rng) const {
  const double u = rng.next_unit_open();
  switch (kind_) {
    case CdfKind::kUniform:
      return u;
    case CdfKind::kTwoSidedZTest: {
      // Test statistic under the true mean: normal with mean -shift.
      const double z = std_normal_quantile(u) - shift_;
      const double p = z <= 0.0 ? 2.0 * std_normal_cdf(z)
                                : 2.0 * std_normal_upper_tail(z);
      return std::clamp(p, 0.0, 1.0);
    }
    case CdfKind::kPiecewiseLinear: {
      // Inverse distribution function.  A draw landing exactly on a flat
      // stretch has probability zero; map it to the left edge.
      auto it = std::lower_bound(
          points_.begin(), points_.end(), u,
          [](const CurvePoint& pt, double v) { return pt.p < v; });
      const CurvePoint& hi = *it;
      const CurvePoint& lo = *(it - 1);
      if (hi.p == lo.p) return lo.x;
      const double t = (u - lo.p) / (hi.p - lo.p);
      return lo.x + t * (hi.x - lo.x);
    }
  }
  return u;  // unreachable
}

namespace {

double parse_double_field(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("model literal: bad value for ") +
                                what + ": '" + text + "'");
  }
}

CdfModel parse_ztest_literal(const std::string& body) {
  double mu0 = 0.0, mu_alt = 0.0, sigma = 0.0;
  int n = 0;
  bool have_mu0 = false, have_mua = false, have_sigma = false, have_n = false;
  std::stringstream ss(body);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("model literal: expected key=value, got '" +
                                  field + "'");
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "mu0") {
      mu0 = parse_double_field(val, "mu0");
      have_mu0 = true;
    } else if (key == "muA") {
      mu_alt = parse_double_field(val, "muA");
      have_mua = true;
    } else if (key == "sigma") {
      sigma = parse_double_field(val, "sigma");
      have_sigma = true;
    } else if (key == "N") {
      n = static_cast<int>(parse_double_field(val, "N"));
      have_n = true;
    } else {
      throw std::invalid_argument("model literal: unknown ztest field '" +
                                  key + "'");
    }
  }
  if (!(have_mu0 && have_mua && have_sigma && have_n))
    throw std::invalid_argument(
        "model literal: ztest needs mu0, muA, sigma and N");
  return CdfModel::two_sided_ztest(mu0, mu_alt, sigma, n);
}

std::vector<CurvePoint> parse_pwl_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("pwl model: cannot open file '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("pwl model: empty file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,p")
    throw std::invalid_argument("pwl model: expected header 'x,p' in '" +
                                path + "'");
  std::vector<CurvePoint> pts;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("pwl model: " + path + ":" +
                                  std::to_string(lineno) +
                                  ": expected 'x,p' row");
    pts.push_back({parse_double_field(line.substr(0, comma), "x"),
                   parse_double_field(line.substr(comma + 1), "p")});
  }
  return pts;
}

std::vector<CurvePoint> parse_pwl_inline(const std::string& body) {
  std::vector<CurvePoint> pts;
  std::stringstream ss(body);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto slash = field.find('/');
    if (slash == std::string::npos)
      throw std::invalid_argument(
          "pwl model: inline points must look like x/p, got '" + field + "'");
    pts.push_back({parse_double_field(field.substr(0, slash), "x"),
                   parse_double_field(field.substr(slash + 1), "p")});
  }
  return pts;
}

}  // namespace

CdfModel parse_model_literal(const std::string& text) {
  if (text == "uniform") return CdfModel::uniform();
  if (text.rfind("ztest:", 0) == 0) return parse_ztest_literal(text.substr(6));
  if (text.rfind("pwl:@", 0) == 0)
    return CdfModel::piecewise_linear(parse_pwl_csv(text.substr(5)));
  if (text.rfind("pwl:", 0) == 0)
    return CdfModel::piecewise_linear(parse_pwl_inline(text.substr(4)));
  throw std::invalid_argument("model literal: unrecognized model '" + text +
                              "'");
}

}  // namespace ordsep
