#pragma once

#include <optional>
#include <vector>

#include "cnt/aggregate.hpp"
#include "cnt/filter.hpp"

namespace cnt {

/// Weights of the physics-informed objective J = alpha*K + beta*G + gamma*M,
/// fixed across all experiments. epsilon stabilizes the local contrast ratio.
struct ObjectiveWeights {
  double alpha = 1.0;
  double beta = 0.2;
  double gamma = 5.0;
  double epsilon = 1e-6;

  void validate() const;
};

struct SearchDomain {
  std::vector<int> n_values;      // sorted, unique
  std::vector<int> omega_values;  // sorted, unique

  static SearchDomain defaults();  // n in {1..10}, omega in {20..60}
  static std::vector<int> range(int lo, int hi);
  void validate(int width, int height) const;
};

/// Feasibility constraint from the memory effect: a candidate n is usable
/// only if the per-window displacement v_max * tau / n stays below d_ome.
struct OmeConstraint {
  double v_max_mm_s = 0.0;
  double tau = 0.040;
  double d_ome_mm = 2.0;
  double px_per_mm = 7.5;
};

struct ObjectiveEntry {
  int n = 0;
  int omega = 0;
  bool feasible = true;
  bool evaluated = false;
  double k = 0.0, g = 0.0, m = 0.0, j = 0.0;
};

struct ObjectiveReport {
  std::vector<int> n_values;
  std::vector<int> omega_values;
  std::vector<ObjectiveEntry> entries;  // row-major over (n index, omega index)
  int n_star = 0;
  int omega_star = 0;
  double j_star = 0.0;

  ObjectiveEntry& entry(int n_idx, int omega_idx) {
    return entries[static_cast<size_t>(n_idx) * omega_values.size() + omega_idx];
  }
  const ObjectiveEntry& entry(int n_idx, int omega_idx) const {
    return entries[static_cast<size_t>(n_idx) * omega_values.size() + omega_idx];
  }
};

enum class SearchMode { kCoarseRefine, kExhaustive };

/// Average local speckle contrast: mean over fully interior window_w x
/// window_w neighborhoods of sigma / (|mu| + epsilon), population sigma.
double local_contrast(const SpeckleMap& map, int window_w, double epsilon);

/// Mean squared gradient magnitude over interior pixels, central differences.
double gradient_energy(const SpeckleMap& map);

/// Pearson correlation between two denoised maps over all pixels.
double temporal_correlation(const SpeckleMap& a, const SpeckleMap& b);

struct ObjectiveTerms {
  double k = 0.0, g = 0.0, m = 0.0, j = 0.0;
};

/// K and G averaged over the maps, M over consecutive pairs; each map is
/// normalized to unit max-absolute-value first so the three terms share a
/// scale (this changes J's numeric values and is part of the contract).
ObjectiveTerms composite_objective(const std::vector<SpeckleMap>& denoised_maps,
                                   const ObjectiveWeights& weights);

/// Selects (n*, omega*) maximizing J over the search domain. Coarse lattice
/// (every n, every 5th omega) followed by unit-step coordinate hill climbing,
/// or exhaustive evaluation of the full grid. Ties break toward smaller n,
/// then smaller omega. All evaluated values are reported.
ObjectiveReport optimize(const EventStream& stream, const SearchDomain& domain,
                         const ObjectiveWeights& weights, double tau = 0.040,
                         const std::optional<OmeConstraint>& constraint = std::nullopt,
                         SearchMode mode = SearchMode::kCoarseRefine);

}  // namespace cnt
