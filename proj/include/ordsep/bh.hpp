#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordsep/cdf_model.hpp"
#include "ordsep/engine.hpp"

namespace ordsep {

// A multiple-testing problem run through the Benjamini-Hochberg step-up
// procedure: num_tests hypotheses at level alpha, of which num_nulls are
// true nulls with uniform p-values; the rest draw p-values from alt_law.
struct BhSpec {
  int num_tests = 1;   // m
  int num_nulls = 0;   // n, true nulls (p-values uniform)
  double alpha = 0.05;
  CdfModel alt_law = CdfModel::uniform();

  std::vector<double> thresholds() const;
  void validate() const;
};

// Exact joint law of (R, V): R = number of rejections, V = number of true
// nulls among them.  table[k][j] = Pr(R = k, V = j), dimensions
// (num_tests+1) x (num_nulls+1).
struct JointPmf {
  int num_tests = 0;
  int num_nulls = 0;
  double alpha = 0.0;
  std::string alt_literal;
  std::string algorithm;
  std::vector<std::vector<double>> table;

  double at(int k, int j) const { return table[k][j]; }
  double total_mass() const;
};

// Step-up thresholds (alpha/m, 2 alpha/m, ..., alpha).
std::vector<double> bh_thresholds(int num_tests, double alpha);

// Number of rejections: sorts a copy of the p-values ascending and returns
// the largest k with p_(k) <= thresholds[k-1], or 0.  Ties count as
// rejections.
int bh_reject_count(std::span<const double> pvalues,
                    std::span<const double> thresholds);

// Exact joint pmf by direct enumeration of per-cell counts over the cells
// cut by the thresholds.  The reference algorithm; guarded at
// num_tests <= 12.
JointPmf bh_joint_pmf_occupancy(const BhSpec& spec);

// The separation events that partition {R = reject_count}: an anchored
// first interval holding the rejected statistics, then every admissible
// placement of the remainder strictly above the running thresholds.
std::vector<SeparationEvent> bh_rejection_events(const BhSpec& spec,
                                                 int reject_count);

// Exact joint pmf assembled from separation probabilities of the events
// above.  Agrees with the occupancy path entrywise; guarded at
// num_tests <= 8.
JointPmf bh_joint_pmf_separation(const BhSpec& spec);

struct PmfSummaries {
  double expected_rejections = 0.0;
  double expected_false_rejections = 0.0;
  double expected_true_rejections = 0.0;
  double false_discovery_rate = 0.0;  // E[V / max(R, 1)]
  double prob_any_rejection = 0.0;
  double average_power = 0.0;  // E[R - V] / (m - n), 0 when m == n
};

PmfSummaries derived_summaries(const JointPmf& pmf);

// Largest |difference| over corresponding entries; tables must have equal
// dimensions.
double max_discrepancy(const JointPmf& a, const JointPmf& b);

// "k,j,prob" rows, row-major with zero rows included.  Probabilities carry
// `digits` significant digits.
std::string joint_pmf_to_csv(const JointPmf& pmf, int digits = 6);

nlohmann::json joint_pmf_to_json(const JointPmf& pmf);
JointPmf joint_pmf_from_json(const nlohmann::json& j);

// Probability formatted with the given significant digits ("%.*g").
std::string format_probability(double value, int digits);

}  // namespace ordsep
