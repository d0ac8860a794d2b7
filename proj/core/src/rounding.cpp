#include "sensel/rounding.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sensel/errors.hpp"
#include "sensel/random.hpp"

namespace sensel {

namespace {

/// For two Boolean vectors of equal cardinality: does a have the
/// lexicographically smaller index set?
bool smaller_index_set(const Selection& a, const Selection& b) {
  for (Eigen::Index m = 0; m < a.size(); ++m) {
    if (a[m] != b[m]) return a[m] > b[m];
  }
  return false;
}

}  // namespace

std::size_t count_selected(const Selection& w, double threshold) {
  return static_cast<std::size_t>((w.array() > threshold).count());
}

RoundingResult randomized_round(const Selection& w_relaxed, const FimAtomSet& atoms,
                                const Constraint& c, const RoundingParams& params) {
  if (params.candidates < 1 || params.max_batches < 1) {
    throw ConfigError("rounding needs at least one candidate and one batch");
  }
  if (static_cast<std::size_t>(w_relaxed.size()) != atoms.sensors()) {
    throw ConfigError("relaxed selection size does not match the number of sensors");
  }
  const Selection p = w_relaxed.cwiseMax(0.0).cwiseMin(1.0);
  const Eigen::Index m_count = p.size();

  double best_margin = -std::numeric_limits<double>::infinity();
  Selection best_infeasible = Selection::Zero(m_count);

  for (int batch = 0; batch < params.max_batches; ++batch) {
    std::optional<Selection> best;
    std::size_t best_card = 0;
    int feasible = 0;
    for (int l = 0; l < params.candidates; ++l) {
      auto rng = make_stream({params.seed, static_cast<std::uint64_t>(batch),
                              static_cast<std::uint64_t>(l)});
      Selection cand(m_count);
      for (Eigen::Index m = 0; m < m_count; ++m) cand[m] = uniform01(rng) < p[m] ? 1.0 : 0.0;

      if (is_feasible(atoms, cand, c)) {
        ++feasible;
        const std::size_t card = count_selected(cand, 0.5);
        if (!best || card < best_card || (card == best_card && smaller_index_set(cand, *best))) {
          best = cand;
          best_card = card;
        }
      } else {
        const double margin = constraint_margin(atoms, cand, c);
        if (margin > best_margin || batch + l == 0) {
          best_margin = margin;
          best_infeasible = cand;
        }
      }
    }
    if (best) return {*best, best_card, batch, feasible};
  }
  throw RoundingError("no feasible candidate in " + std::to_string(params.max_batches) +
                          " batches of " + std::to_string(params.candidates),
                      best_margin, best_infeasible);
}

Selection simple_round(const Selection& w_relaxed) {
  return (w_relaxed.array() >= 0.5).cast<double>().matrix();
}

OracleResult brute_force_min_card(const FimAtomSet& atoms, const Constraint& c, std::size_t m_cap) {
  const std::size_t m_count = atoms.sensors();
  if (m_count > m_cap) {
    throw ConfigError("brute force refused: " + std::to_string(m_count) + " sensors exceed the cap of " +
                      std::to_string(m_cap));
  }
  OracleResult result;
  const auto size = static_cast<Eigen::Index>(m_count);
  for (std::size_t k = 0; k <= m_count; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t j = 0; j < k; ++j) idx[j] = j;
    while (true) {
      Selection w = Selection::Zero(size);
      for (std::size_t j : idx) w[static_cast<Eigen::Index>(j)] = 1.0;
      ++result.subsets_checked;
      if (is_feasible(atoms, w, c)) {
        result.w = w;
        result.cardinality = k;
        return result;
      }
      // Next combination in lexicographic order.
      std::size_t j = k;
      while (j > 0 && idx[j - 1] == m_count - k + j - 1) --j;
      if (j == 0) break;
      ++idx[j - 1];
      for (std::size_t r = j; r < k; ++r) idx[r] = idx[r - 1] + 1;
    }
  }
  return result;
}

}  // namespace sensel
