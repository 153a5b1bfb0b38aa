#include "ordsep/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ordsep {

void SimConfig::validate() const {
  if (samples < 1)
    throw std::invalid_argument("simulation: samples must be >= 1");
}

namespace {

double binomial_se(long long hits, long long samples) {
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

}  // namespace

EventEstimate simulate_event(const TwoPopulationModel& model,
                             const SeparationEvent& event,
                             FirstIntervalCondition condition,
                             const SimConfig& config) {
  model.validate();
  event.validate(model.total_count);
  config.validate();
  if (condition &&
      (*condition < 0 ||
       *condition > std::min(model.first_count, event.counts[0])))
    throw std::invalid_argument(
        "condition: count must lie in [0, min(first_count, first interval "
        "count)]");

  const int m = model.total_count;
  const int n = model.first_count;
  const std::size_t s = event.intervals.size();
  const double first_upper = event.intervals[0].upper;

  long long hits = 0;
  std::vector<double> draws(m);
  std::vector<int> in_interval(s);
  for (long long r = 0; r < config.samples; ++r) {
    SplitMix64 rng = SplitMix64::substream(config.seed,
                                           static_cast<std::uint64_t>(r));
    for (int i = 0; i < n; ++i) draws[i] = model.first_law.sample(rng);
    for (int i = n; i < m; ++i) draws[i] = model.second_law.sample(rng);

    // Count per interval; the counts summing to the sample size forces
    // every gap empty, so matching all interval counts decides the event.
    std::fill(in_interval.begin(), in_interval.end(), 0);
    for (double v : draws)
      for (std::size_t q = 0; q < s; ++q)
        if (v > event.intervals[q].lower && v < event.intervals[q].upper) {
          ++in_interval[q];
          break;
        }
    bool ok = true;
    for (std::size_t q = 0; q < s && ok; ++q)
      ok = in_interval[q] == event.counts[q];
    if (ok && condition) {
      int below = 0;
      for (int i = 0; i < n; ++i)
        if (draws[i] < first_upper) ++below;
      ok = below == *condition;
    }
    if (ok) ++hits;
  }

  EventEstimate est;
  est.hits = hits;
  est.samples = config.samples;
  est.estimate = static_cast<double>(hits) / static_cast<double>(config.samples);
  est.standard_error = binomial_se(hits, config.samples);
  return est;
}

double EmpiricalJointPmf::standard_error(int k, int j) const {
  return binomial_se(hit_counts[k][j], samples);
}

EmpiricalJointPmf simulate_bh(const BhSpec& spec, const SimConfig& config) {
  spec.validate();
  config.validate();
  const int m = spec.num_tests;
  const int n = spec.num_nulls;
  const std::vector<double> thresholds = spec.thresholds();

  EmpiricalJointPmf result;
  result.samples = config.samples;
  result.hit_counts.assign(m + 1, std::vector<long long>(n + 1, 0));

  const CdfModel null_law = CdfModel::uniform();
  std::vector<double> pvalues(m);
  for (long long r = 0; r < config.samples; ++r) {
    SplitMix64 rng = SplitMix64::substream(config.seed,
                                           static_cast<std::uint64_t>(r));
    for (int i = 0; i < n; ++i) pvalues[i] = null_law.sample(rng);
    for (int i = n; i < m; ++i) pvalues[i] = spec.alt_law.sample(rng);
    const int reject = bh_reject_count(pvalues, thresholds);
    int falsely = 0;
    if (reject > 0) {
      const double cutoff = thresholds[reject - 1];
      for (int i = 0; i < n; ++i)
        if (pvalues[i] <= cutoff) ++falsely;
    }
    ++result.hit_counts[reject][falsely];
  }

  result.pmf.num_tests = m;
  result.pmf.num_nulls = n;
  result.pmf.alpha = spec.alpha;
  result.pmf.alt_literal = spec.alt_law.literal();
  result.pmf.algorithm = "simulation";
  result.pmf.table.assign(m + 1, std::vector<double>(n + 1, 0.0));
  for (int k = 0; k <= m; ++k)
    for (int j = 0; j <= n; ++j)
      result.pmf.table[k][j] = static_cast<double>(result.hit_counts[k][j]) /
                               static_cast<double>(config.samples);
  return result;
}

}  // namespace ordsep
