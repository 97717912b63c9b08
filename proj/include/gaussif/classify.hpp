#pragma once

// Grid scan of the time axis into heavy-tail / degenerate / infinite-IF
// labels, and the stationary dichotomy diagnostic.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaussif/errors.hpp"
#include "gaussif/ifdist.hpp"
#include "gaussif/models.hpp"

namespace gaussif {

struct RegimeInterval {
  double start = 0.0;  // first grid time of the run
  double end = 0.0;    // last grid time of the run
  Regime regime = Regime::HeavyTail;
  std::size_t first = 0;
  std::size_t last = 0;
};

struct TimePartition {
  std::vector<double> grid;
  std::vector<Regime> labels;
  std::vector<IFParams> params;
  std::vector<RegimeInterval> intervals;
  double min_delta = 0.0;
  double max_delta = 0.0;

  bool mixed() const { return intervals.size() > 1; }
};

/// t_start + i*step for i = 0.. while <= t_end (with a relative slack of 1e-9 steps).
inline std::vector<double> make_grid(double t_start, double t_end, double step) {
  if (!(t_start < t_end)) throw DomainError("time range needs start < end");
  if (!(step > 0.0)) throw DomainError("time step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((t_end - t_start) / step + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = t_start + static_cast<double>(i) * step;
  return g;
}

inline TimePartition scan_grid(const CovarianceModel& model, std::span<const double> grid,
                               const IFTolerances& tol = {}) {
  if (grid.empty()) throw DomainError("empty scan grid");
  TimePartition part;
  part.grid.assign(grid.begin(), grid.end());
  part.min_delta = std::numeric_limits<double>::infinity();
  part.max_delta = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    IFParams p;
    try {
      p = if_params(model, grid[i], tol);
    } catch (const ScanError&) {
      throw;
    } catch (const Error& e) {
      throw ScanError(grid[i], e.what());
    }
    const Regime r = classify_regime(p, tol);
    part.params.push_back(p);
    part.labels.push_back(r);
    part.min_delta = std::min(part.min_delta, p.delta);
    part.max_delta = std::max(part.max_delta, p.delta);
    if (part.intervals.empty() || part.intervals.back().regime != r)
      part.intervals.push_back({grid[i], grid[i], r, i, i});
    else
      part.intervals.back().end = grid[i], part.intervals.back().last = i;
  }
  return part;
}

inline TimePartition scan_time_axis(const CovarianceModel& model, double t_start, double t_end,
                                    double step, const IFTolerances& tol = {}) {
  const auto grid = make_grid(t_start, t_end, step);
  return scan_grid(model, grid, tol);
}

/// Stationary view of a model when it has one: Wss itself, an uncorrelated
/// two-tone model, or an atomic measure supported on the diagonal xi = eta.
inline std::optional<Wss> as_wss(const CovarianceModel& model) {
  if (const auto* w = std::get_if<Wss>(&model)) return *w;
  auto from_lines = [](const std::vector<std::pair<double, double>>& lines) {
    Wss w{LagFunction::zero(), LagFunction::zero()};
    // rho_z(tau) = sum p e^{i f tau} = 2 rho_x + 2i rho_yx
    for (const auto& [pw, f] : lines) {
      w.rho_x = w.rho_x + LagFunction::cosine(0.5 * pw, f);
      w.rho_yx = w.rho_yx + LagFunction::sine(0.5 * pw, f);
    }
    return w;
  };
  if (const auto* tt = std::get_if<TwoTone>(&model)) {
    if (tt->corr != cplx{}) return std::nullopt;
    return from_lines({{1.0, tt->xi}, {1.0, tt->eta}});
  }
  if (const auto* at = std::get_if<AtomicSpectral>(&model)) {
    std::vector<std::pair<double, double>> lines;
    for (const auto& a : at->measure.atoms) {
      if (a.weight == cplx{}) continue;
      if (a.xi != a.eta || a.weight.imag() != 0.0) return std::nullopt;
      lines.emplace_back(a.weight.real(), a.xi);
    }
    return from_lines(lines);
  }
  return std::nullopt;
}

struct DichotomyReport {
  enum class Verdict { EmptySet, WholeLine };  // T = {} or T = T' = R
  Verdict verdict = Verdict::EmptySet;
  double delta0 = 0.0;
  double tolerance = 0.0;
  double beta = 0.0;                // sqrt(-rho_x''(0) / rho_x(0))
  double max_cos_deviation = 0.0;   // max |rho_x(t) - rho_x(0) cos(beta t)| / rho_x(0)
  bool infinite_set_empty = false;  // T'' = {} since rho_x(0) > 0
};

inline std::string to_string(DichotomyReport::Verdict v) {
  return v == DichotomyReport::Verdict::EmptySet ? "T=empty" : "T=R";
}

/// For a stationary model the discriminant is constant in t, so the
/// degenerate set is either empty or the whole line; in the latter case
/// rho_x(t) = rho_x(0) cos(beta t).
inline DichotomyReport wss_dichotomy_check(const CovarianceModel& model,
                                           std::span<const double> grid,
                                           const IFTolerances& tol = {}) {
  const auto wss = as_wss(model);
  if (!wss) throw ParameterDomainError("dichotomy check needs a stationary model (got " +
                                       model_name(model) + ")");
  const CovarianceModel m{*wss};
  const IFParams p = if_params(m, 0.0, tol);
  DichotomyReport rep;
  rep.delta0 = p.delta;
  rep.tolerance = delta_tolerance(p.a, p.b, p.c, p.d, tol.delta_rel);
  rep.verdict = classify_regime(p, tol) == Regime::HeavyTail ? DichotomyReport::Verdict::EmptySet
                                                             : DichotomyReport::Verdict::WholeLine;
  const double rho0 = wss->rho_x.value(0.0);
  rep.infinite_set_empty = rho0 > a_tolerance(p.d, tol.a_rel);
  if (rho0 > 0.0) {
    rep.beta = std::sqrt(std::max(0.0, -wss->rho_x.second(0.0) / rho0));
    for (double t : grid)
      rep.max_cos_deviation = std::max(
          rep.max_cos_deviation, std::abs(wss->rho_x.value(t) - rho0 * std::cos(rep.beta * t)) / rho0);
  }
  return rep;
}

}  // namespace gaussif
