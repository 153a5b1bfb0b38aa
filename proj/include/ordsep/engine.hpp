#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ordsep/cdf_model.hpp"

namespace ordsep {

// Thrown when a request exceeds a combinatorial size guard.  Distinct from
// std::invalid_argument so callers can map it to a resource exit code.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pooled sample from two populations: the first `first_count` variables
// (set S1) follow `first_law`, the remaining `total_count - first_count`
// (set S2) follow `second_law`.  All variables are independent with values
// in [0, 1].
struct TwoPopulationModel {
  int total_count = 0;   // number of variables pooled before sorting
  int first_count = 0;   // size of S1
  CdfModel first_law = CdfModel::uniform();
  CdfModel second_law = CdfModel::uniform();

  int second_count() const { return total_count - first_count; }
  void validate() const;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// "Exactly counts[q] of the sorted pooled sample fall in intervals[q]".
// Intervals are ordered, may touch (upper == next lower) but not overlap;
// the first lower bound is 0 and the last upper bound is 1, so the counts
// must sum to the model's total and every gap is forced empty.
struct SeparationEvent {
  std::vector<Interval> intervals;
  std::vector<int> counts;

  // Ranks of the smallest / largest order statistic assigned to interval q
  // (1-based; last_index(q) == first_index(q) - 1 when counts[q] == 0).
  int first_index(std::size_t q) const;
  int last_index(std::size_t q) const;

  void validate(int total_count) const;
};

// Optional side condition: exactly this many members of S1 lie below the
// first interval's upper bound.  Empty means unconditioned.
using FirstIntervalCondition = std::optional<int>;

// One coordinate of an order-statistic query: the event
// {order statistic of rank order_index <= value}.  Queries need not be
// sorted and may repeat ranks or values.
struct IndexValuePair {
  int order_index = 1;  // 1-based rank in the pooled sorted sample
  double value = 0.0;   // in [0, 1]
};

// Streams every vector (i_0, i_1, ..., i_e, i_{e+1}) with i_0 = 0,
// i_{e+1} = total, i monotone nondecreasing, and i_a >= min_counts[a-1]
// for 1 <= a <= e, in lexicographic order.  Infeasible bounds give an
// empty stream.
class IndexVectorEnumerator {
 public:
  IndexVectorEnumerator(std::vector<int> min_counts, int total);

  // Writes the next vector (size min_counts.size() + 2) into `out`.
  // Returns false once exhausted.
  bool next(std::vector<int>& out);

 private:
  std::vector<int> bounds_;
  std::vector<int> current_;
  int total_;
  bool fresh_ = true;
  bool exhausted_ = false;
};

// Streams every vector (c_1, ..., c_k) with sum(c) == total and
// 0 <= c_a <= capacities[a-1], optionally pinning c_1, in lexicographic
// order.
class LambdaEnumerator {
 public:
  LambdaEnumerator(std::vector<int> capacities, int total,
                   std::optional<int> first_cell = std::nullopt);

  bool next(std::vector<int>& out);

 private:
  bool assign_minimal(std::size_t from, int remaining);

  std::vector<int> caps_;
  std::vector<int> suffix_caps_;  // capacity available strictly after a
  std::vector<int> current_;
  int total_;
  std::optional<int> first_cell_;
  bool fresh_ = true;
  bool exhausted_ = false;
};

// Number of distinct orderings of a multiset with the given block sizes:
// (sum counts)! / prod(counts[a]!).  Exact 64-bit integer arithmetic up to
// sum <= 20; beyond that the value is formed from lgamma and is accurate to
// roughly 1e-14 relative.
double multinomial_coefficient(std::span<const int> counts);

// Joint distribution function of selected order statistics of the pooled
// two-population sample, intersected with the side condition when present:
//
//   Pr( for every query pair {Y_rank <= value}  and  #S1 below the smallest
//       query value == condition )
//
// Evaluated by summing, over all occupancy assignments of the cells cut by
// the query values, the product of the S1 and S2 multinomial cell masses.
// Throws std::invalid_argument on an invalid query or condition.
double cdf_orderstats_conditioned(const TwoPopulationModel& model,
                                  std::span<const IndexValuePair> query,
                                  FirstIntervalCondition condition = {});

// Pr(event AND condition).  Expands the lower-bound constraints by
// inclusion-exclusion into signed cdf_orderstats_conditioned terms.
// Subsets whose lower bound is 0 contribute nothing and are skipped unless
// `keep_vanishing_terms` is set (a debug mode that evaluates them and
// checks they vanish).
double separation_probability(const TwoPopulationModel& model,
                              const SeparationEvent& event,
                              FirstIntervalCondition condition = {},
                              bool keep_vanishing_terms = false);

// Entry j holds separation_probability with condition j,
// j = 0 ... min(first_count, counts[0]); the entries sum to the
// unconditioned probability.
std::vector<double> separation_probability_by_j(const TwoPopulationModel& model,
                                                const SeparationEvent& event);

// Predicate over per-cell counts of S1 (first span) and S2 (second span);
// cell a covers (thresholds[a-1], thresholds[a]] with the outer thresholds
// 0 and 1 implied.
using CellCountPredicate =
    std::function<bool(std::span<const int>, std::span<const int>)>;

// Direct enumeration of the product-multinomial cell law: sums the mass of
// every (S1 counts, S2 counts) pair satisfying the predicate.  Serves as an
// independent cross-check for separation_probability; it shares no code
// with the inclusion-exclusion path.
double occupancy_event_probability(const TwoPopulationModel& model,
                                   std::span<const double> thresholds,
                                   const CellCountPredicate& predicate);

}  // namespace ordsep
