#pragma once

// Exhaustive sweep of (b, c) grids: every state of S in range is iterated to
// its cycle, and the detected (preperiod, period) is checked against the
// closed-form periodicity results for the chosen algorithm.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "padic_cf/cf_engine.hpp"

namespace padic_cf {

struct CensusRange {
  std::int64_t lo;
  std::int64_t hi;
};

struct CensusRow {
  std::int64_t b;
  std::int64_t c;
  Quadrant quadrant;
  std::int64_t preperiod;
  std::int64_t period;
  bool pure;
  bool closed_form_pure;

  friend bool operator==(const CensusRow&, const CensusRow&) = default;
};

struct CensusViolation {
  std::int64_t b;
  std::int64_t c;
  std::string diagnostic;
};

struct CensusReport {
  Prime prime;
  CensusRange b_range;
  CensusRange c_range;
  AlgorithmId algorithm;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> counts;
  std::vector<CensusRow> rows;  // ordered by (b, c)
  std::vector<CensusViolation> violations;
  std::int64_t max_orbit_length = 0;
  /// Algorithm B only: max over states of (preperiod + period) - (ceil(|b|/p) + 2).
  std::int64_t max_length_excess = 0;
  /// Total orbit states whose discriminant was compared against the start.
  std::int64_t states_checked = 0;
};

namespace detail {

struct CensusSlice {
  std::vector<CensusRow> rows;
  std::vector<CensusViolation> violations;
  std::int64_t max_orbit_length = 0;
  std::int64_t max_length_excess = std::numeric_limits<std::int64_t>::min();
  std::int64_t states_checked = 0;
};

inline std::int64_t ceil_div(std::int64_t n, std::int64_t d) { return (n + d - 1) / d; }

inline void census_state(const HenselState& s, AlgorithmId algorithm, std::int64_t cap,
                         CensusSlice& out) {
  const auto b = s.b().convert_to<std::int64_t>();
  const auto c = s.c().convert_to<std::int64_t>();
  const std::int64_t p = s.p().value();
  auto flag = [&](std::string what) { out.violations.push_back({b, c, std::move(what)}); };

  HenselOrbit orbit;
  try {
    orbit = hensel_orbit(s, algorithm, cap);
  } catch (const CapExceeded& e) {
    flag(std::string("no cycle within cap: ") + e.what());
    return;
  }
  const StateClass cls = classify_state(s);
  CensusRow row{b, c, cls.quadrant, orbit.preperiod, orbit.period, orbit.preperiod == 0,
                classify_pure_periodicity(s, algorithm)};

  const Integer disc = discriminant(s);
  for (const auto& state : orbit.states)
    if (discriminant(state) != disc) flag("discriminant changed at " + state.to_string());
  out.states_checked += static_cast<std::int64_t>(orbit.states.size());

  if (row.pure != row.closed_form_pure) flag("detected pure periodicity disagrees with closed form");
  const std::int64_t length = orbit.preperiod + orbit.period;
  out.max_orbit_length = std::max(out.max_orbit_length, length);
  switch (algorithm) {
    case AlgorithmId::A:
      if (!row.pure) flag("algorithm A orbit is not purely periodic");
      if (row.period != 1 && row.period != 2) flag("algorithm A period is not 1 or 2");
      if ((row.period == 1) != cls.in_R) flag("algorithm A fixed point outside R or vice versa");
      break;
    case AlgorithmId::B: {
      if (row.period != 1) flag("algorithm B does not reach a fixed point");
      if ((row.preperiod > 0) == cls.in_R) flag("algorithm B preperiod disagrees with R");
      const std::int64_t excess = length - (ceil_div(b < 0 ? -b : b, p) + 2);
      out.max_length_excess = std::max(out.max_length_excess, excess);
      if (excess > 0) flag("algorithm B orbit longer than ceil(|b|/p) + 2");
      break;
    }
    case AlgorithmId::C:
    case AlgorithmId::Schneider: break;
  }
  out.rows.push_back(row);
}

}  // namespace detail

/// Sweeps all (b, c) in S within the ranges. The grid is split by b-rows over
/// `jobs` workers; output is identical for every job count.
inline CensusReport run_census(Prime p, AlgorithmId algorithm, CensusRange b_range,
                               CensusRange c_range, unsigned jobs = 1,
                               std::int64_t cap = kDefaultExpandCap) {
  if (algorithm == AlgorithmId::Schneider)
    throw InvalidAlgorithm("the census covers algorithms A, B and C");
  if (b_range.lo > b_range.hi || c_range.lo > c_range.hi)
    throw InvalidInput("empty census range");
  jobs = std::max(1u, jobs);
  const std::int64_t rows = b_range.hi - b_range.lo + 1;
  const std::int64_t per_job = (rows + jobs - 1) / jobs;

  std::vector<detail::CensusSlice> slices(jobs);
  auto work = [&](unsigned j) {
    const std::int64_t first = b_range.lo + j * per_job;
    const std::int64_t last = std::min(b_range.hi, first + per_job - 1);
    for (std::int64_t b = first; b <= last; ++b)
      for (std::int64_t c = c_range.lo; c <= c_range.hi; ++c)
        if (in_S(b, c, p)) detail::census_state(HenselState(b, c, p), algorithm, cap, slices[j]);
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> workers;
    for (unsigned j = 0; j < jobs; ++j) workers.emplace_back(work, j);
    for (auto& w : workers) w.join();
  }

  CensusReport report{p, b_range, c_range, algorithm, {}, {}, {}};
  report.max_length_excess = std::numeric_limits<std::int64_t>::min();
  for (auto& slice : slices) {
    for (const auto& row : slice.rows) ++report.counts[{row.preperiod, row.period}];
    report.rows.insert(report.rows.end(), slice.rows.begin(), slice.rows.end());
    report.violations.insert(report.violations.end(), slice.violations.begin(),
                             slice.violations.end());
    report.max_orbit_length = std::max(report.max_orbit_length, slice.max_orbit_length);
    report.max_length_excess = std::max(report.max_length_excess, slice.max_length_excess);
    report.states_checked += slice.states_checked;
  }
  if (algorithm != AlgorithmId::B) report.max_length_excess = 0;
  return report;
}

inline void write_census_csv(const CensusReport& report, std::ostream& os) {
  os << "b,c,quadrant,preperiod,period,pure,closed_form_pure\n";
  for (const auto& r : report.rows)
    os << r.b << ',' << r.c << ',' << to_string(r.quadrant) << ',' << r.preperiod << ','
       << r.period << ',' << (r.pure ? "true" : "false") << ','
       << (r.closed_form_pure ? "true" : "false") << '\n';
}

}  // namespace padic_cf
