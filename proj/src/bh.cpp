#include "ordsep/bh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ordsep {

std::vector<double> bh_thresholds(int num_tests, double alpha) {
  if (num_tests < 1) throw std::invalid_argument("bh: need at least one test");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("bh: alpha must lie in (0, 1)");
  std::vector<double> b(num_tests);
  for (int i = 1; i <= num_tests; ++i)
    b[i - 1] = static_cast<double>(i) * alpha / num_tests;
  return b;
}

std::vector<double> BhSpec::thresholds() const {
  return bh_thresholds(num_tests, alpha);
}

void BhSpec::validate() const {
  if (num_tests < 1) throw std::invalid_argument("bh: need at least one test");
  if (num_nulls < 0 || num_nulls > num_tests)
    throw std::invalid_argument("bh: num_nulls must lie in [0, num_tests]");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("bh: alpha must lie in (0, 1)");
}

int bh_reject_count(std::span<const double> pvalues,
                    std::span<const double> thresholds) {
  if (pvalues.size() != thresholds.size())
    throw std::invalid_argument(
        "bh_reject_count: p-values and thresholds differ in length");
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  for (double p : sorted)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("bh_reject_count: p-value outside [0, 1]");
  std::sort(sorted.begin(), sorted.end());
  int reject = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] <= thresholds[k]) reject = static_cast<int>(k) + 1;
  return reject;
}

double JointPmf::total_mass() const {
  double s = 0.0;
  for (const auto& row : table)
    for (double v : row) s += v;
  return s;
}

// ---------------------------------------------------------------------------
// Occupancy algorithm
// ---------------------------------------------------------------------------

namespace {

// Reject count implied by cumulative counts at the thresholds: the largest
// k with at least k p-values at or below threshold k.
int reject_count_from_cells(std::span<const int> s1, std::span<const int> s2,
                            int num_tests) {
  int reject = 0, cum = 0;
  for (int t = 1; t <= num_tests; ++t) {
    cum += s1[t - 1] + s2[t - 1];
    if (cum >= t) reject = t;
  }
  return reject;
}

struct CellWalker {
  std::span<const double> increments;
  std::vector<int> counts;

  // Composition enumeration with the multinomial weight carried along;
  // exact integer coefficient (totals here are <= 12).
  template <typename Leaf>
  void walk(std::size_t cell, int placed, int remaining, double weight,
            std::uint64_t coef, const Leaf& leaf) {
    if (cell + 1 == counts.size()) {
      counts[cell] = remaining;
      std::uint64_t c = coef;
      double w = weight;
      for (int i = 1; i <= remaining; ++i) {
        c = c * static_cast<std::uint64_t>(placed + i) /
            static_cast<std::uint64_t>(i);
        w *= increments[cell];
      }
      leaf(static_cast<double>(c) * w);
      return;
    }
    for (int cnt = 0; cnt <= remaining; ++cnt) {
      counts[cell] = cnt;
      std::uint64_t c = coef;
      double w = weight;
      for (int i = 1; i <= cnt; ++i) {
        c = c * static_cast<std::uint64_t>(placed + i) /
            static_cast<std::uint64_t>(i);
        w *= increments[cell];
      }
      walk(cell + 1, placed + cnt, remaining - cnt, w, c, leaf);
    }
  }
};

}  // namespace

JointPmf bh_joint_pmf_occupancy(const BhSpec& spec) {
  spec.validate();
  const int m = spec.num_tests;
  const int n = spec.num_nulls;
  if (m > 12)
    throw GuardError(
        "bh_joint_pmf_occupancy: enumeration over roughly C(n+m,m)*C(2m-n,m) "
        "cell assignments is infeasible past m = 12 (got m = " +
        std::to_string(m) + ")");

  const std::vector<double> b = spec.thresholds();
  const std::size_t cells = static_cast<std::size_t>(m) + 1;
  std::vector<double> d_null(cells), d_alt(cells);
  double prev = 0.0;
  for (std::size_t a = 0; a < cells; ++a) {
    const double hi = a + 1 < cells ? b[a] : 1.0;
    d_null[a] = hi - prev;  // null p-values are uniform
    d_alt[a] = spec.alt_law.cdf(hi) - spec.alt_law.cdf(prev);
    prev = hi;
  }

  JointPmf pmf;
  pmf.num_tests = m;
  pmf.num_nulls = n;
  pmf.alpha = spec.alpha;
  pmf.alt_literal = spec.alt_law.literal();
  pmf.algorithm = "occupancy";
  pmf.table.assign(m + 1, std::vector<double>(n + 1, 0.0));

  CellWalker nulls{d_null, std::vector<int>(cells, 0)};
  CellWalker alts{d_alt, std::vector<int>(cells, 0)};
  nulls.walk(0, 0, n, 1.0, 1, [&](double w_null) {
    alts.walk(0, 0, m - n, w_null, 1, [&](double w) {
      const int reject =
          reject_count_from_cells(nulls.counts, alts.counts, m);
      int falsely = 0;
      for (int t = 0; t < reject; ++t) falsely += nulls.counts[t];
      pmf.table[reject][falsely] += w;
    });
  });
  return pmf;
}

// ---------------------------------------------------------------------------
// Separation algorithm
// ---------------------------------------------------------------------------

std::vector<SeparationEvent> bh_rejection_events(const BhSpec& spec,
                                                 int reject_count) {
  spec.validate();
  const int m = spec.num_tests;
  const int k = reject_count;
  if (k < 0 || k > m)
    throw std::invalid_argument("bh_rejection_events: reject count out of range");
  const std::vector<double> b = spec.thresholds();

  // {R = k} means exactly k statistics at or below threshold k and, for
  // every later threshold l, at most l - 1 at or below it.  Splitting the
  // region above threshold k at the remaining thresholds partitions the
  // event into separation events indexed by the placement counts
  // (remainder[0] in (b_k, b_{k+1}], ..., last in (b_m, 1]).
  std::vector<SeparationEvent> events;
  const int parts = m - k + 1;
  std::vector<int> remainder(parts, 0);

  auto emit = [&]() {
    SeparationEvent ev;
    if (k >= 1) {
      ev.intervals.push_back({0.0, b[k - 1]});
      ev.counts.push_back(k);
    } else {
      // Anchor the event at zero; a count of zero below the first
      // threshold is exactly the R = 0 requirement.
      ev.intervals.push_back({0.0, b[0]});
      ev.counts.push_back(0);
    }
    // Cell t covers (b_{k+t}, b_{k+t+1}); empty cells become gaps, which
    // the count tiling already forces empty.  Cell 0 is always empty here
    // (one more statistic at or below b_{k+1} would mean R > k), so the
    // b[k + t - 1] subscript never underflows.
    for (int t = 0; t + 1 < parts; ++t) {
      if (remainder[t] < 1) continue;
      ev.intervals.push_back({b[k + t - 1], b[k + t]});
      ev.counts.push_back(remainder[t]);
    }
    ev.intervals.push_back({b[m - 1], 1.0});
    ev.counts.push_back(remainder[parts - 1]);
    events.push_back(std::move(ev));
  };

  // Enumerate placements: prefix sums may never reach the running
  // threshold index, i.e. after filling cells up to threshold l we must
  // have k + prefix <= l - 1.
  auto rec = [&](auto&& self, int idx, int prefix, int remaining) -> void {
    if (idx + 1 == parts) {
      remainder[idx] = remaining;
      emit();
      return;
    }
    const int bound_index = k + idx + 1;  // threshold after this cell
    for (int c = 0; c <= remaining; ++c) {
      if (k + prefix + c > bound_index - 1) break;
      remainder[idx] = c;
      self(self, idx + 1, prefix + c, remaining - c);
    }
  };
  rec(rec, 0, 0, m - k);
  return events;
}

JointPmf bh_joint_pmf_separation(const BhSpec& spec) {
  spec.validate();
  const int m = spec.num_tests;
  const int n = spec.num_nulls;
  if (m > 8)
    throw GuardError(
        "bh_joint_pmf_separation: the event decomposition grows like the "
        "Catalan numbers with 2^intervals inclusion-exclusion terms each; "
        "infeasible past m = 8 (got m = " +
        std::to_string(m) + ")");

  TwoPopulationModel model{m, n, CdfModel::uniform(), spec.alt_law};

  JointPmf pmf;
  pmf.num_tests = m;
  pmf.num_nulls = n;
  pmf.alpha = spec.alpha;
  pmf.alt_literal = spec.alt_law.literal();
  pmf.algorithm = "separation";
  pmf.table.assign(m + 1, std::vector<double>(n + 1, 0.0));

  for (int k = 0; k <= m; ++k) {
    for (const SeparationEvent& ev : bh_rejection_events(spec, k)) {
      const std::vector<double> by_j = separation_probability_by_j(model, ev);
      for (std::size_t j = 0; j < by_j.size(); ++j)
        pmf.table[k][j] += by_j[j];
    }
  }
  return pmf;
}

// ---------------------------------------------------------------------------
// Summaries and serialization
// ---------------------------------------------------------------------------

PmfSummaries derived_summaries(const JointPmf& pmf) {
  PmfSummaries s;
  for (int k = 0; k < static_cast<int>(pmf.table.size()); ++k) {
    for (int j = 0; j < static_cast<int>(pmf.table[k].size()); ++j) {
      const double p = pmf.table[k][j];
      s.expected_rejections += k * p;
      s.expected_false_rejections += j * p;
      s.expected_true_rejections += (k - j) * p;
      s.false_discovery_rate += p * j / std::max(k, 1);
      if (k > 0) s.prob_any_rejection += p;
    }
  }
  if (pmf.num_tests > pmf.num_nulls)
    s.average_power =
        s.expected_true_rejections / (pmf.num_tests - pmf.num_nulls);
  return s;
}

double max_discrepancy(const JointPmf& a, const JointPmf& b) {
  if (a.table.size() != b.table.size())
    throw std::invalid_argument("max_discrepancy: table shapes differ");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.table.size(); ++k) {
    if (a.table[k].size() != b.table[k].size())
      throw std::invalid_argument("max_discrepancy: table shapes differ");
    for (std::size_t j = 0; j < a.table[k].size(); ++j)
      worst = std::max(worst, std::fabs(a.table[k][j] - b.table[k][j]));
  }
  return worst;
}

std::string format_probability(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string joint_pmf_to_csv(const JointPmf& pmf, int digits) {
  std::string out = "k,j,prob\n";
  for (std::size_t k = 0; k < pmf.table.size(); ++k)
    for (std::size_t j = 0; j < pmf.table[k].size(); ++j)
      out += std::to_string(k) + "," + std::to_string(j) + "," +
             format_probability(pmf.table[k][j], digits) + "\n";
  return out;
}

nlohmann::json joint_pmf_to_json(const JointPmf& pmf) {
  return nlohmann::json{{"m", pmf.num_tests},     {"n", pmf.num_nulls},
                        {"alpha", pmf.alpha},     {"alt", pmf.alt_literal},
                        {"algorithm", pmf.algorithm}, {"table", pmf.table}};
}

JointPmf joint_pmf_from_json(const nlohmann::json& j) {
  JointPmf pmf;
  try {
    pmf.num_tests = j.at("m").get<int>();
    pmf.num_nulls = j.at("n").get<int>();
    pmf.alpha = j.at("alpha").get<double>();
    pmf.alt_literal = j.at("alt").get<std::string>();
    pmf.algorithm = j.value("algorithm", std::string());
    pmf.table = j.at("table").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("joint pmf json: ") + e.what());
  }
  if (pmf.table.size() != static_cast<std::size_t>(pmf.num_tests) + 1)
    throw std::invalid_argument("joint pmf json: table has wrong row count");
  for (const auto& row : pmf.table)
    if (row.size() != static_cast<std::size_t>(pmf.num_nulls) + 1)
      throw std::invalid_argument("joint pmf json: table has wrong row width");
  return pmf;
}

}  // namespace ordsep
