#pragma once

#include <cstdint>
#include <vector>

#include "ordsep/bh.hpp"
#include "ordsep/engine.hpp"

namespace ordsep {

// Simulation settings.  Replicate r always draws from
// SplitMix64::substream(seed, r), so estimates depend on (seed, samples)
// only; splitting the replicate range across workers cannot change them.
struct SimConfig {
  long long samples = 100000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EventEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  long long hits = 0;
  long long samples = 0;
};

// Draws the pooled sample per replicate and counts how often the event
// (and the side condition, when present) holds.
EventEstimate simulate_event(const TwoPopulationModel& model,
                             const SeparationEvent& event,
                             FirstIntervalCondition condition,
                             const SimConfig& config);

// Empirical joint law of (rejections, false rejections) under the
// Benjamini-Hochberg procedure.
struct EmpiricalJointPmf {
  JointPmf pmf;  // algorithm tag "simulation"
  std::vector<std::vector<long long>> hit_counts;
  long long samples = 0;

  double standard_error(int k, int j) const;
};

EmpiricalJointPmf simulate_bh(const BhSpec& spec, const SimConfig& config);

}  // namespace ordsep
