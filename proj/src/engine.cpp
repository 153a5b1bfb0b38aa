#include "ordsep/engine.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ordsep {

void TwoPopulationModel::validate() const {
  if (total_count < 1)
    throw std::invalid_argument("model: total_count must be >= 1");
  if (first_count < 0 || first_count > total_count)
    throw std::invalid_argument(
        "model: first_count must satisfy 0 <= first_count <= total_count");
}

int SeparationEvent::first_index(std::size_t q) const {
  int s = 0;
  for (std::size_t i = 0; i < q; ++i) s += counts[i];
  return s + 1;
}

int SeparationEvent::last_index(std::size_t q) const {
  return first_index(q) + counts[q] - 1;
}

void SeparationEvent::validate(int total_count) const {
  if (intervals.empty())
    throw std::invalid_argument("event: needs at least one interval");
  if (intervals.size() != counts.size())
    throw std::invalid_argument("event: intervals and counts sizes differ");
  if (intervals.front().lower != 0.0)
    throw std::invalid_argument("event: first interval must start at 0");
  if (intervals.back().upper != 1.0)
    throw std::invalid_argument("event: last interval must end at 1");
  for (std::size_t q = 0; q < intervals.size(); ++q) {
    if (!(intervals[q].lower < intervals[q].upper))
      throw std::invalid_argument("event: interval " + std::to_string(q) +
                                  " is empty or reversed");
    if (q + 1 < intervals.size() &&
        !(intervals[q].upper <= intervals[q + 1].lower))
      throw std::invalid_argument("event: intervals " + std::to_string(q) +
                                  " and " + std::to_string(q + 1) +
                                  " overlap");
    if (counts[q] < 0)
      throw std::invalid_argument("event: counts must be nonnegative");
  }
  const int sum = std::accumulate(counts.begin(), counts.end(), 0);
  if (sum != total_count)
    throw std::invalid_argument(
        "event: interval counts must sum to the model's total (" +
        std::to_string(sum) + " != " + std::to_string(total_count) + ")");
}

// ---------------------------------------------------------------------------
// Enumerators
// ---------------------------------------------------------------------------

IndexVectorEnumerator::IndexVectorEnumerator(std::vector<int> min_counts,
                                             int total)
    : bounds_(std::move(min_counts)), total_(total) {
  for (int b : bounds_)
    if (b > total_) exhausted_ = true;  // some constraint can never hold
  current_.assign(bounds_.size(), 0);
  int prev = 0;
  for (std::size_t a = 0; a < bounds_.size(); ++a) {
    current_[a] = std::max(prev, bounds_[a]);
    prev = current_[a];
  }
}

bool IndexVectorEnumerator::next(std::vector<int>& out) {
  if (exhausted_) return false;
  if (!fresh_) {
    // Advance to the lexicographic successor: bump the rightmost position
    // that can still grow, then re-minimize the suffix.
    std::size_t a = bounds_.size();
    while (a > 0) {
      --a;
      if (current_[a] < total_) {
        ++current_[a];
        int prev = current_[a];
        for (std::size_t b = a + 1; b < bounds_.size(); ++b) {
          current_[b] = std::max(prev, bounds_[b]);
          prev = current_[b];
        }
        break;
      }
      if (a == 0) {
        exhausted_ = true;
        return false;
      }
    }
    if (bounds_.empty()) {
      exhausted_ = true;
      return false;
    }
  }
  fresh_ = false;
  out.resize(bounds_.size() + 2);
  out.front() = 0;
  std::copy(current_.begin(), current_.end(), out.begin() + 1);
  out.back() = total_;
  return true;
}

LambdaEnumerator::LambdaEnumerator(std::vector<int> capacities, int total,
                                   std::optional<int> first_cell)
    : caps_(std::move(capacities)), total_(total), first_cell_(first_cell) {
  suffix_caps_.assign(caps_.size() + 1, 0);
  for (std::size_t a = caps_.size(); a > 0; --a)
    suffix_caps_[a - 1] = suffix_caps_[a] + caps_[a - 1];
  current_.assign(caps_.size(), 0);
  if (total_ < 0 || total_ > suffix_caps_[0]) {
    exhausted_ = true;
    return;
  }
  if (first_cell_) {
    if (*first_cell_ < 0 || caps_.empty() || *first_cell_ > caps_[0] ||
        total_ - *first_cell_ < 0 ||
        total_ - *first_cell_ > suffix_caps_[1]) {
      exhausted_ = true;
      return;
    }
    current_[0] = *first_cell_;
    if (!assign_minimal(1, total_ - *first_cell_)) exhausted_ = true;
  } else {
    if (!assign_minimal(0, total_)) exhausted_ = true;
  }
}

// Fills positions [from, end) with the lexicographically smallest feasible
// suffix summing to `remaining`.
bool LambdaEnumerator::assign_minimal(std::size_t from, int remaining) {
  if (remaining < 0 || remaining > suffix_caps_[from]) return false;
  for (std::size_t a = from; a < caps_.size(); ++a) {
    current_[a] = std::max(0, remaining - suffix_caps_[a + 1]);
    remaining -= current_[a];
  }
  return remaining == 0;
}

bool LambdaEnumerator::next(std::vector<int>& out) {
  if (exhausted_) return false;
  if (!fresh_) {
    // Successor: move one unit leftward.  Find the rightmost position
    // (after any pinned first cell) that can take one more unit from the
    // suffix beyond it, bump it, and minimize the rest.
    const std::size_t first_free = first_cell_ ? 1 : 0;
    bool advanced = false;
    if (caps_.size() > first_free) {
      std::size_t a = caps_.size() - 1;
      int suffix_sum = 0;
      while (true) {
        suffix_sum += current_[a];
        if (a == first_free) break;
        --a;
        // can position a grow, fed by what the suffix currently holds?
        if (current_[a] < caps_[a] && suffix_sum > 0) {
          ++current_[a];
          const bool ok = assign_minimal(a + 1, suffix_sum - 1);
          assert(ok);
          (void)ok;
          advanced = true;
          break;
        }
      }
    }
    if (!advanced) {
      exhausted_ = true;
      return false;
    }
  }
  fresh_ = false;
  out = current_;
  return true;
}

// ---------------------------------------------------------------------------
// Multinomial coefficient
// ---------------------------------------------------------------------------

namespace {

std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // exact: r * (n - k + i) is divisible by i at every step
    r = r * static_cast<std::uint64_t>(n - k + i) /
        static_cast<std::uint64_t>(i);
  }
  return r;
}

}  // namespace

double multinomial_coefficient(std::span<const int> counts) {
  int total = 0;
  for (int c : counts) {
    if (c < 0)
      throw std::invalid_argument("multinomial_coefficient: negative count");
    total += c;
  }
  if (total <= 20) {
    // Product of nested binomials stays within the final value, which fits
    // in 64 bits for totals up to 20 (20! < 2^62).
    std::uint64_t r = 1;
    int placed = 0;
    for (int c : counts) {
      placed += c;
      r *= binomial_u64(placed, c);
    }
    return static_cast<double>(r);
  }
  double lg = std::lgamma(static_cast<double>(total) + 1.0);
  for (int c : counts) lg -= std::lgamma(static_cast<double>(c) + 1.0);
  return std::exp(lg);
}

// ---------------------------------------------------------------------------
// Conditioned order-statistic distribution function
// ---------------------------------------------------------------------------

namespace {

struct CanonicalQuery {
  std::vector<double> values;  // strictly increasing, in (0, 1)
  std::vector<int> bounds;     // minimal rank that must lie at or below value
};

// Reduces a raw query to the equivalent minimal cell layout:
//   * {Y_rank <= 1} always holds, so pairs at value >= 1 are dropped;
//   * equal values keep only the largest rank;
//   * a pair whose rank does not exceed an earlier (smaller-value) pair's
//     rank is implied by it; dropping the pair merges two cells and leaves
//     the occupancy sum unchanged.
// The smallest value always survives, which is what the side condition
// pins, and remains first.
CanonicalQuery canonicalize(std::span<const IndexValuePair> query, int total) {
  std::vector<IndexValuePair> pairs;
  pairs.reserve(query.size());
  for (const IndexValuePair& pr : query) {
    if (pr.order_index < 1 || pr.order_index > total)
      throw std::invalid_argument("query: order statistic index out of range");
    if (!(pr.value >= 0.0 && pr.value <= 1.0))
      throw std::invalid_argument("query: value outside [0, 1]");
    if (pr.value < 1.0) pairs.push_back(pr);
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const IndexValuePair& a, const IndexValuePair& b) {
              return a.value < b.value ||
                     (a.value == b.value && a.order_index < b.order_index);
            });
  CanonicalQuery cq;
  for (const IndexValuePair& pr : pairs) {
    if (!cq.values.empty() && cq.values.back() == pr.value) {
      cq.bounds.back() = std::max(cq.bounds.back(), pr.order_index);
      continue;
    }
    if (!cq.bounds.empty() && pr.order_index <= cq.bounds.back()) continue;
    cq.values.push_back(pr.value);
    cq.bounds.push_back(pr.order_index);
  }
  return cq;
}

}  // namespace

double cdf_orderstats_conditioned(const TwoPopulationModel& model,
                                  std::span<const IndexValuePair> query,
                                  FirstIntervalCondition condition) {
  model.validate();
  const int m = model.total_count;
  const int n = model.first_count;
  if (condition && (*condition < 0 || *condition > n))
    throw std::invalid_argument(
        "condition: count of S1 members must lie in [0, first_count]");

  CanonicalQuery cq = canonicalize(query, m);
  const std::size_t cells = cq.values.size() + 1;

  // Per-cell distribution increments and their powers up to the cell
  // capacity bound.
  std::vector<double> edges(cells + 1);
  edges[0] = 0.0;
  std::copy(cq.values.begin(), cq.values.end(), edges.begin() + 1);
  edges[cells] = 1.0;
  std::vector<std::vector<double>> pow_first(cells), pow_second(cells);
  for (std::size_t a = 0; a < cells; ++a) {
    const double df =
        model.first_law.cdf(edges[a + 1]) - model.first_law.cdf(edges[a]);
    const double dg =
        model.second_law.cdf(edges[a + 1]) - model.second_law.cdf(edges[a]);
    pow_first[a].resize(m + 1);
    pow_second[a].resize(m + 1);
    pow_first[a][0] = pow_second[a][0] = 1.0;
    for (int c = 1; c <= m; ++c) {
      pow_first[a][c] = pow_first[a][c - 1] * df;
      pow_second[a][c] = pow_second[a][c - 1] * dg;
    }
  }

  // Feasibility pruning for the conditioned sum: the first cell must hold
  // the pinned S1 count and the remaining cells must absorb the rest.
  std::vector<int> bounds = cq.bounds;
  if (condition && !bounds.empty() && *condition > bounds[0])
    bounds[0] = *condition;

  double acc = 0.0;
  IndexVectorEnumerator ivec(bounds, m);
  std::vector<int> cum, caps(cells), lam, s2(cells);
  while (ivec.next(cum)) {
    for (std::size_t a = 0; a < cells; ++a) caps[a] = cum[a + 1] - cum[a];
    if (condition && m - caps[0] < n - *condition) continue;
    LambdaEnumerator lambdas(caps, n, condition);
    while (lambdas.next(lam)) {
      for (std::size_t a = 0; a < cells; ++a) s2[a] = caps[a] - lam[a];
      double term = multinomial_coefficient(lam) *
                    multinomial_coefficient(s2);
      for (std::size_t a = 0; a < cells; ++a)
        term *= pow_first[a][lam[a]] * pow_second[a][s2[a]];
      acc += term;
    }
  }
  return std::clamp(acc, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Separation probability (inclusion-exclusion over lower bounds)
// ---------------------------------------------------------------------------

double separation_probability(const TwoPopulationModel& model,
                              const SeparationEvent& event,
                              FirstIntervalCondition condition,
                              bool keep_vanishing_terms) {
  model.validate();
  event.validate(model.total_count);
  const int m = model.total_count;
  const std::size_t s = event.intervals.size();

  if (condition) {
    const int cap = std::min(model.first_count, event.counts[0]);
    if (*condition < 0 || *condition > cap)
      throw std::invalid_argument(
          "condition: count must lie in [0, min(first_count, first interval "
          "count)]");
    // With an empty first interval the event already forces zero members of
    // either set below its upper bound, so the only admissible condition
    // (zero) is implied and the unconditioned sum applies.  The condition
    // would otherwise pin the wrong cell: the smallest query value in the
    // expansion below is no longer the first interval's upper bound.
    if (event.counts[0] == 0) condition.reset();
  }

  // Upper-bound constraints: the largest statistic of each populated
  // interval lies below its upper end.
  std::vector<IndexValuePair> base;
  for (std::size_t q = 0; q < s; ++q)
    if (event.counts[q] >= 1)
      base.push_back({event.last_index(q), event.intervals[q].upper});

  // Lower-bound constraints enter through their complements
  // {Y_first_index(q) <= lower_q}.  A bound at 0 can only be met with
  // probability zero and a rank past the sample is a sure event's
  // complement; both drop out.
  std::vector<std::size_t> active;
  for (std::size_t q = 0; q < s; ++q) {
    if (event.first_index(q) > m) continue;
    if (event.intervals[q].lower <= 0.0 && !keep_vanishing_terms) continue;
    active.push_back(q);
  }
  if (active.size() > 24)
    throw GuardError(
        "separation_probability: inclusion-exclusion over " +
        std::to_string(active.size()) + " lower bounds needs 2^" +
        std::to_string(active.size()) + " terms; refusing");

  double acc = 0.0;
  std::vector<IndexValuePair> pairs;
  for (std::uint64_t mask = 0; mask < (1ULL << active.size()); ++mask) {
    pairs = base;
    bool vanishing = false;
    for (std::size_t t = 0; t < active.size(); ++t) {
      if (!(mask >> t & 1)) continue;
      const std::size_t q = active[t];
      if (event.intervals[q].lower <= 0.0) vanishing = true;
      pairs.push_back({event.first_index(q), event.intervals[q].lower});
    }
    const double term = cdf_orderstats_conditioned(model, pairs, condition);
    if (vanishing) {
      assert(term == 0.0);
      continue;
    }
    acc += (std::popcount(mask) % 2 == 0) ? term : -term;
  }
  return std::clamp(acc, 0.0, 1.0);
}

std::vector<double> separation_probability_by_j(const TwoPopulationModel& model,
                                                const SeparationEvent& event) {
  model.validate();
  event.validate(model.total_count);
  const int jmax = std::min(model.first_count, event.counts[0]);
  std::vector<double> probs(jmax + 1);
  for (int j = 0; j <= jmax; ++j)
    probs[j] = separation_probability(model, event, j);
  return probs;
}

// ---------------------------------------------------------------------------
// Occupancy enumeration (independent cross-check path)
// ---------------------------------------------------------------------------

namespace {

// Recursively enumerates compositions of `remaining` over cells
// [cell, caps-1], carrying the multinomial weight; calls `leaf` with each
// complete assignment.  Weights are built from running binomial factors in
// double precision on purpose: this path must not share arithmetic with
// multinomial_coefficient.
template <typename Leaf>
void enumerate_cell_counts(std::vector<int>& counts, std::size_t cell,
                           int placed, int remaining,
                           std::span<const double> increments, double weight,
                           const Leaf& leaf) {
  if (cell + 1 == counts.size()) {
    counts[cell] = remaining;
    double w = weight;
    for (int i = 1; i <= remaining; ++i)
      w *= increments[cell] * static_cast<double>(placed + i) /
           static_cast<double>(i);
    leaf(w);
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    counts[cell] = c;
    double w = weight;
    for (int i = 1; i <= c; ++i)
      w *= increments[cell] * static_cast<double>(placed + i) /
           static_cast<double>(i);
    enumerate_cell_counts(counts, cell + 1, placed + c, remaining - c,
                          increments, w, leaf);
  }
}

}  // namespace

double occupancy_event_probability(const TwoPopulationModel& model,
                                   std::span<const double> thresholds,
                                   const CellCountPredicate& predicate) {
  model.validate();
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] < 1.0))
      throw std::invalid_argument("occupancy: thresholds must lie in (0, 1)");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
      throw std::invalid_argument(
          "occupancy: thresholds must strictly increase");
  }
  const std::size_t cells = thresholds.size() + 1;
  std::vector<double> d_first(cells), d_second(cells);
  double prev = 0.0;
  for (std::size_t a = 0; a < cells; ++a) {
    const double hi = a + 1 < cells ? thresholds[a] : 1.0;
    d_first[a] = model.first_law.cdf(hi) - model.first_law.cdf(prev);
    d_second[a] = model.second_law.cdf(hi) - model.second_law.cdf(prev);
    prev = hi;
  }

  double acc = 0.0;
  std::vector<int> s1(cells), s2(cells);
  enumerate_cell_counts(
      s1, 0, 0, model.first_count, d_first, 1.0, [&](double w1) {
        enumerate_cell_counts(s2, 0, 0, model.second_count(), d_second, w1,
                              [&](double w) {
                                if (predicate(s1, s2)) acc += w;
                              });
      });
  return std::clamp(acc, 0.0, 1.0);
}

}  // namespace ordsep
