#include "cnt/objective.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cnt/error.hpp"
#include "cnt/fft.hpp"

namespace cnt {

void ObjectiveWeights::validate() const {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
    throw ConfigError("ObjectiveWeights: weights must be >= 0");
  if (epsilon <= 0.0) throw ConfigError("ObjectiveWeights: epsilon must be > 0");
}

std::vector<int> SearchDomain::range(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

SearchDomain SearchDomain::defaults() { return {range(1, 10), range(20, 60)}; }

void SearchDomain::validate(int width, int height) const {
  if (n_values.empty() || omega_values.empty())
    throw ConfigError("SearchDomain: empty candidate set");
  if (!std::is_sorted(n_values.begin(), n_values.end()) ||
      !std::is_sorted(omega_values.begin(), omega_values.end()))
    throw ConfigError("SearchDomain: candidate sets must be sorted");
  if (n_values.front() < 1) throw ConfigError("SearchDomain: n must be >= 1");
  const int nyquist = std::min(width, height) / 2;
  if (omega_values.front() < 1 || omega_values.back() > nyquist)
    throw ConfigError("SearchDomain: omega must be in [1, min(dims)/2]");
}

double local_contrast(const SpeckleMap& map, int window_w, double epsilon) {
  if (map.stage != MapStage::kDenoised)
    throw InputError("local_contrast: map must be denoised");
  if (window_w < 3 || window_w % 2 == 0)
    throw ConfigError("local_contrast: window must be odd and >= 3");
  const int w = map.values.width();
  const int h = map.values.height();
  if (w < window_w || h < window_w)
    throw RangeError("local_contrast: map smaller than window");

  // Integral images over values and squares.
  const int iw = w + 1;
  std::vector<double> s1(static_cast<size_t>(iw) * (h + 1), 0.0);
  std::vector<double> s2(static_cast<size_t>(iw) * (h + 1), 0.0);
  for (int y = 0; y < h; ++y) {
    double row1 = 0.0, row2 = 0.0;
    for (int x = 0; x < w; ++x) {
      const double v = map.values.at(x, y);
      row1 += v;
      row2 += v * v;
      s1[static_cast<size_t>(y + 1) * iw + x + 1] = s1[static_cast<size_t>(y) * iw + x + 1] + row1;
      s2[static_cast<size_t>(y + 1) * iw + x + 1] = s2[static_cast<size_t>(y) * iw + x + 1] + row2;
    }
  }

  const double n = static_cast<double>(window_w) * window_w;
  double acc = 0.0;
  int count = 0;
  for (int y = 0; y + window_w <= h; ++y) {
    for (int x = 0; x + window_w <= w; ++x) {
      const size_t a = static_cast<size_t>(y) * iw + x;
      const size_t b = static_cast<size_t>(y) * iw + x + window_w;
      const size_t c = static_cast<size_t>(y + window_w) * iw + x;
      const size_t d = static_cast<size_t>(y + window_w) * iw + x + window_w;
      const double sum = s1[d] - s1[b] - s1[c] + s1[a];
      const double sumsq = s2[d] - s2[b] - s2[c] + s2[a];
      const double mu = sum / n;
      const double var = std::max(0.0, sumsq / n - mu * mu);
      acc += std::sqrt(var) / (std::fabs(mu) + epsilon);
      ++count;
    }
  }
  return acc / count;
}

double gradient_energy(const SpeckleMap& map) {
  if (map.stage != MapStage::kDenoised)
    throw InputError("gradient_energy: map must be denoised");
  const int w = map.values.width();
  const int h = map.values.height();
  if (w < 3 || h < 3) throw RangeError("gradient_energy: dims must be >= 3");

  double acc = 0.0;
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const double gx = (map.values.at(x + 1, y) - map.values.at(x - 1, y)) / 2.0;
      const double gy = (map.values.at(x, y + 1) - map.values.at(x, y - 1)) / 2.0;
      acc += gx * gx + gy * gy;
    }
  }
  return acc / (static_cast<double>(w - 2) * (h - 2));
}

double temporal_correlation(const SpeckleMap& a, const SpeckleMap& b) {
  if (a.stage != MapStage::kDenoised || b.stage != MapStage::kDenoised)
    throw InputError("temporal_correlation: maps must be denoised");
  if (!a.values.same_dims(b.values))
    throw InputError("temporal_correlation: dimension mismatch");
  const size_t n = a.values.size();
  const double mu_a = a.values.mean();
  const double mu_b = b.values.mean();
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double da = a.values.data()[i] - mu_a;
    const double db = b.values.data()[i] - mu_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  const double tol_a = 1e-12 * a.values.max_abs();
  const double tol_b = 1e-12 * b.values.max_abs();
  if (std::sqrt(var_a / n) <= tol_a || std::sqrt(var_b / n) <= tol_b ||
      var_a == 0.0 || var_b == 0.0)
    throw DegenerateInputError("temporal_correlation: zero-variance map");
  return cov / std::sqrt(var_a * var_b);
}

namespace {

constexpr int kContrastWindow = 7;

SpeckleMap normalized_unit_max(const SpeckleMap& m) {
  SpeckleMap out = m;
  const double ma = out.values.max_abs();
  if (ma > 0.0) out.values *= 1.0 / ma;
  return out;
}

}  // namespace

ObjectiveTerms composite_objective(const std::vector<SpeckleMap>& denoised_maps,
                                   const ObjectiveWeights& weights) {
  weights.validate();
  if (denoised_maps.size() < 2)
    throw ConfigError("composite_objective: need at least 2 maps");

  std::vector<SpeckleMap> norm;
  norm.reserve(denoised_maps.size());
  for (const auto& m : denoised_maps) norm.push_back(normalized_unit_max(m));

  ObjectiveTerms t;
  for (const auto& m : norm) {
    t.k += local_contrast(m, kContrastWindow, weights.epsilon);
    t.g += gradient_energy(m);
  }
  t.k /= static_cast<double>(norm.size());
  t.g /= static_cast<double>(norm.size());
  for (size_t i = 0; i + 1 < norm.size(); ++i)
    t.m += temporal_correlation(norm[i], norm[i + 1]);
  t.m /= static_cast<double>(norm.size() - 1);
  t.j = weights.alpha * t.k + weights.beta * t.g + weights.gamma * t.m;
  return t;
}

namespace {

// Per-n aggregated map spectra are cached so each omega candidate costs one
// masked inverse transform instead of a full aggregate + forward pass.
class ObjectiveEvaluator {
public:
  ObjectiveEvaluator(const EventStream& stream, double tau, const ObjectiveWeights& weights)
      : stream_(stream), tau_(tau), weights_(weights) {}

  static constexpr int kMaxMaps = 12;

  ObjectiveTerms evaluate(int n, int omega) {
    const auto& spectra = spectra_for(n);
    FilterSpec spec{omega, FilterShape::kIdealCircular};
    const Grid tf = transfer_function(spec, stream_.width, stream_.height);

    std::vector<SpeckleMap> denoised;
    denoised.reserve(spectra.size());
    const auto& meta = meta_[n];
    for (size_t i = 0; i < spectra.size(); ++i) {
      ComplexGrid g = spectra[i];
      for (size_t k = 0; k < g.size(); ++k) g.data()[k] *= tf.data()[k];
      fft2_inverse(g);
      SpeckleMap m;
      m.values = Grid(stream_.width, stream_.height);
      for (size_t k = 0; k < g.size(); ++k) m.values.data()[k] = g.data()[k].real();
      m.t_center = meta[i].first;
      m.window = meta[i].second;
      m.stage = MapStage::kDenoised;
      denoised.push_back(std::move(m));
    }
    return composite_objective(denoised, weights_);
  }

  int map_count(int n) const {
    const double dt = tau_ / n;
    const double span = stream_.duration_us * 1e-6;
    return std::min(kMaxMaps, static_cast<int>(std::floor(span / dt + 1e-9)));
  }

private:
  const std::vector<ComplexGrid>& spectra_for(int n) {
    auto it = spectra_.find(n);
    if (it != spectra_.end()) return it->second;

    const AggregationParams params{n, tau_};
    const int count = map_count(n);
    if (count < 2)
      throw RangeError("optimize: stream too short for 2 windows at n = " + std::to_string(n));
    const auto maps = map_sequence(stream_, params.window() / 2.0, count, params);

    std::vector<ComplexGrid> spectra;
    std::vector<std::pair<double, double>> meta;
    spectra.reserve(maps.size());
    for (const auto& m : maps) {
      ComplexGrid g(stream_.width, stream_.height);
      for (size_t k = 0; k < g.size(); ++k) g.data()[k] = m.values.data()[k];
      fft2_forward(g);
      spectra.push_back(std::move(g));
      meta.emplace_back(m.t_center, m.window);
    }
    meta_[n] = std::move(meta);
    return spectra_.emplace(n, std::move(spectra)).first->second;
  }

  const EventStream& stream_;
  double tau_;
  ObjectiveWeights weights_;
  std::map<int, std::vector<ComplexGrid>> spectra_;
  std::map<int, std::vector<std::pair<double, double>>> meta_;
};

bool better(double j, int n, int omega, double best_j, int best_n, int best_omega) {
  if (j != best_j) return j > best_j;
  if (n != best_n) return n < best_n;
  return omega < best_omega;
}

}  // namespace

ObjectiveReport optimize(const EventStream& stream, const SearchDomain& domain,
                         const ObjectiveWeights& weights, double tau,
                         const std::optional<OmeConstraint>& constraint,
                         SearchMode mode) {
  domain.validate(stream.width, stream.height);
  weights.validate();
  if (tau <= 0.0) throw ConfigError("optimize: tau must be > 0");

  ObjectiveReport report;
  report.n_values = domain.n_values;
  report.omega_values = domain.omega_values;
  report.entries.resize(domain.n_values.size() * domain.omega_values.size());

  for (size_t ni = 0; ni < domain.n_values.size(); ++ni) {
    const int n = domain.n_values[ni];
    bool feasible = true;
    if (constraint)
      feasible = constraint->v_max_mm_s * constraint->tau / n < constraint->d_ome_mm;
    for (size_t wi = 0; wi < domain.omega_values.size(); ++wi) {
      auto& e = report.entry(ni, wi);
      e.n = n;
      e.omega = domain.omega_values[wi];
      e.feasible = feasible;
    }
  }

  std::vector<size_t> feasible_n;
  for (size_t ni = 0; ni < domain.n_values.size(); ++ni)
    if (report.entry(ni, 0).feasible) feasible_n.push_back(ni);
  if (feasible_n.empty()) {
    const auto& c = *constraint;
    throw ConfigError("optimize: empty feasible set; OME constraint v_max*tau/n < d_ome "
                      "(v_max = " + std::to_string(c.v_max_mm_s) +
                      " mm/s, tau = " + std::to_string(c.tau) +
                      " s, d_ome = " + std::to_string(c.d_ome_mm) +
                      " mm) rejects every candidate n");
  }

  ObjectiveEvaluator eval(stream, tau, weights);
  for (int n : domain.n_values) {
    if (eval.map_count(n) < 2)
      throw RangeError("optimize: stream too short for 2 windows at n = " + std::to_string(n));
  }

  auto evaluate_at = [&](size_t ni, size_t wi) -> const ObjectiveEntry& {
    auto& e = report.entry(ni, wi);
    if (!e.evaluated) {
      const ObjectiveTerms t = eval.evaluate(e.n, e.omega);
      e.k = t.k;
      e.g = t.g;
      e.m = t.m;
      e.j = t.j;
      e.evaluated = true;
    }
    return e;
  };

  size_t best_ni = feasible_n.front(), best_wi = 0;
  bool have_best = false;
  auto consider = [&](size_t ni, size_t wi) {
    const auto& e = evaluate_at(ni, wi);
    if (!have_best ||
        better(e.j, e.n, e.omega, report.entry(best_ni, best_wi).j,
               report.entry(best_ni, best_wi).n, report.entry(best_ni, best_wi).omega)) {
      best_ni = ni;
      best_wi = wi;
      have_best = true;
    }
  };

  if (mode == SearchMode::kExhaustive) {
    for (size_t ni : feasible_n)
      for (size_t wi = 0; wi < domain.omega_values.size(); ++wi) consider(ni, wi);
  } else {
    // Coarse lattice: every n, every 5th omega.
    for (size_t ni : feasible_n)
      for (size_t wi = 0; wi < domain.omega_values.size(); wi += 5) consider(ni, wi);

    // Unit-step coordinate hill climb from the coarse argmax.
    bool moved = true;
    while (moved) {
      moved = false;
      const double cur_j = report.entry(best_ni, best_wi).j;
      size_t cand_ni = best_ni, cand_wi = best_wi;
      double cand_j = cur_j;
      const long nn = static_cast<long>(domain.n_values.size());
      const long nw = static_cast<long>(domain.omega_values.size());
      const long moves[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
      for (const auto& mv : moves) {
        const long ni = static_cast<long>(best_ni) + mv[0];
        const long wi = static_cast<long>(best_wi) + mv[1];
        if (ni < 0 || ni >= nn || wi < 0 || wi >= nw) continue;
        if (!report.entry(ni, wi).feasible) continue;
        const auto& e = evaluate_at(ni, wi);
        if (e.j > cur_j &&
            better(e.j, e.n, e.omega, cand_j, report.entry(cand_ni, cand_wi).n,
                   report.entry(cand_ni, cand_wi).omega)) {
          cand_ni = ni;
          cand_wi = wi;
          cand_j = e.j;
        }
      }
      if (cand_ni != best_ni || cand_wi != best_wi) {
        best_ni = cand_ni;
        best_wi = cand_wi;
        moved = true;
      }
    }
  }

  const auto& star = report.entry(best_ni, best_wi);
  report.n_star = star.n;
  report.omega_star = star.omega;
  report.j_star = star.j;
  return report;
}

}  // namespace cnt
