#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "sensel/constraint.hpp"
#include "sensel/scenario.hpp"

namespace sensel {

struct RoundingParams {
  /// Candidates per batch (L).
  int candidates = 100;
  int max_batches = 50;
  std::uint64_t seed = 0;
};

struct RoundingResult {
  Selection w;
  std::size_t cardinality = 0;
  /// Batch in which the returned candidate was found (0-based).
  int batch = 0;
  /// Feasible candidates seen in that batch.
  int feasible_candidates = 0;
};

/// Draws Boolean candidates with P(w_m = 1) = w_relaxed_m in batches of L,
/// keeps the feasible ones and returns the one of minimum cardinality (ties:
/// lexicographically smallest index set). Candidate l of batch b uses its
/// own stream keyed by (seed, b, l).
///
/// Throws RoundingError, carrying the best infeasible candidate and its
/// constraint margin, when no batch yields a feasible candidate.
RoundingResult randomized_round(const Selection& w_relaxed, const FimAtomSet& atoms,
                                const Constraint& c, const RoundingParams& params = {});

/// Nearest integer per entry, 0.5 rounds up. Feasibility is not checked.
Selection simple_round(const Selection& w_relaxed);

struct OracleResult {
  /// Empty when even the full selection is infeasible.
  std::optional<Selection> w;
  std::size_t cardinality = 0;
  std::size_t subsets_checked = 0;
};

/// Exhaustive search over subsets by increasing cardinality, then
/// lexicographic index order. Throws ConfigError when M > m_cap.
OracleResult brute_force_min_card(const FimAtomSet& atoms, const Constraint& c,
                                  std::size_t m_cap = 20);

/// Number of entries above the 1e-6 cardinality threshold.
std::size_t count_selected(const Selection& w, double threshold = 1e-6);

}  // namespace sensel
