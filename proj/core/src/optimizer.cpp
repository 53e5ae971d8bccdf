#include "ghostpol/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ghostpol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogitWall = 8.0;
constexpr std::array<int, 8> kHaltonBases{2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

double logit_of(double sigma, const OptimizerConfig& cfg) {
  const double u = std::clamp((sigma - cfg.sigma_min) / (cfg.sigma_max - cfg.sigma_min), 1e-9, 1.0 - 1e-9);
  return std::log(u / (1.0 - u));
}

double wall(double logit) {
  const double excess = std::abs(logit) - kLogitWall;
  return excess > 0.0 ? excess * excess : 0.0;
}

double search_tol(const ObjectSet& set, const OptimizerConfig& cfg) {
  return std::max(cfg.angle_tol, set.theta_period / static_cast<double>(cfg.search_grid));
}

ProbeTransform decode_probe(std::span<const double> p, const OptimizerConfig& cfg) {
  ProbeTransform probe;
  probe.m1 = unit_from_angles(p[0], p[1]);
  probe.sigma1 = 1.0;
  probe.sigma2 = logistic_sigma(p[2], cfg);
  return probe;
}

ReferenceBank decode_bank(std::span<const double> p, int outputs, const OptimizerConfig& cfg) {
  return make_bank_coplanar(unit_from_angles(p[0], p[1]), p[2], 1.0, logistic_sigma(p[3], cfg), outputs);
}

ReferenceBank default_bank(int outputs) { return make_bank_coplanar({1.0, 0.0, 0.0}, 0.0, 1.0, 0.3, outputs); }

double probe_objective(std::span<const double> p, const ObjectSet& set, double q, const OptimizerConfig& cfg) {
  const ProbeTransform probe = decode_probe(p, cfg);
  const PatternLibrary lib = build_library(set, cfg.search_grid, probe.jones(), default_bank(3), q);
  const double penalty = cfg.range_weight * wall(p[2]) + cfg.linear_basis_weight * probe.m1.c * probe.m1.c;
  return -poincare_margin(lib, search_tol(set, cfg)) + penalty;
}

double bank_objective(std::span<const double> p, const ObjectSet& set, const JonesMatrix& probe, double q,
                      int outputs, const OptimizerConfig& cfg) {
  const ReferenceBank bank = decode_bank(p, outputs, cfg);
  const PatternLibrary lib = build_library(set, cfg.search_grid, probe, bank, q);
  return -separation_margin(lib, search_tol(set, cfg)) + cfg.range_weight * wall(p[3]);
}

struct MultistartOutcome {
  MinimizeResult best;
  std::vector<TracePoint> trace;
};

MultistartOutcome multistart(const Objective& f, const std::vector<std::vector<double>>& starts,
                             const OptimizerConfig& cfg, int iteration_offset) {
  MultistartOutcome out;
  out.best.f = std::numeric_limits<double>::infinity();
  bool any = false;
  int it = iteration_offset;
  for (const std::vector<double>& x0 : starts) {
    MinimizeResult r;
    try {
      r = nelder_mead(f, x0, cfg);
    } catch (const Error&) {
      continue;
    }
    for (double v : r.trace) out.trace.push_back({it++, std::min(v, out.best.f)});
    if (!any || r.f < out.best.f) {
      out.best = std::move(r);
      any = true;
    }
  }
  if (!any)
    throw Error("design search failed: objective non-finite at all " + std::to_string(starts.size()) +
                " start points");
  return out;
}

std::vector<std::vector<double>> project(const std::vector<std::vector<double>>& pts, std::size_t first,
                                         std::size_t count) {
  std::vector<std::vector<double>> out;
  for (const auto& p : pts) out.emplace_back(p.begin() + static_cast<long>(first), p.begin() + static_cast<long>(first + count));
  return out;
}

}  // namespace

void validate(const OptimizerConfig& cfg) {
  if (cfg.multistarts < 1) throw Error("optimizer.multistarts must be at least 1");
  if (cfg.max_iterations < 1) throw Error("optimizer.max_iterations must be at least 1");
  if (!(cfg.f_tol > 0.0) || !(cfg.x_tol > 0.0)) throw Error("optimizer tolerances must be positive");
  if (!(cfg.sigma_min > 0.0 && cfg.sigma_min < cfg.sigma_max && cfg.sigma_max < 1.0))
    throw Error("optimizer sigma range must satisfy 0 < sigma_min < sigma_max < 1");
  if (cfg.search_grid < 2 || cfg.final_grid < 2) throw Error("optimizer grids need at least 2 points");
  if (!(cfg.angle_tol > 0.0)) throw Error("optimizer.angle_tol must be positive");
}

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg) {
  const std::size_t n = x0.size();
  if (n == 0) throw Error("nelder_mead needs at least one parameter");
  const double f0 = f(x0);
  if (!std::isfinite(f0)) throw Error("objective is not finite at the start point");

  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> simplex{x0};
  std::vector<double> values{f0};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    x[i] += cfg.initial_step;
    values.push_back(eval(x));
    simplex.push_back(std::move(x));
  }

  std::vector<std::size_t> order(n + 1);
  MinimizeResult res;
  auto affine = [n](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i] + t * (b[i] - a[i]);
    return x;
  };

  for (res.iterations = 0; res.iterations < cfg.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<std::vector<double>> s;
      std::vector<double> v;
      for (std::size_t i : order) {
        s.push_back(std::move(simplex[i]));
        v.push_back(values[i]);
      }
      simplex = std::move(s);
      values = std::move(v);
    }

    double size = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) size = std::max(size, std::abs(simplex[i][k] - simplex[0][k]));
    if (values[n] - values[0] <= cfg.f_tol && size <= cfg.x_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);

    const std::vector<double> xr = affine(centroid, simplex[n], -1.0);
    const double fr = eval(xr);
    if (fr < values[0]) {
      const std::vector<double> xe = affine(centroid, simplex[n], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else {
      const bool outside = fr < values[n];
      const std::vector<double> xc = affine(centroid, simplex[n], outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : values[n])) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          simplex[i] = affine(simplex[0], simplex[i], 0.5);
          values[i] = eval(simplex[i]);
        }
      }
    }
    res.trace.push_back(*std::min_element(values.begin(), values.end()));
  }

  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  res.x = simplex[best];
  res.f = values[best];
  return res;
}

PoincareVector unit_from_angles(double polar, double azimuth) {
  return {std::cos(polar), std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth)};
}

double logistic_sigma(double logit, const OptimizerConfig& cfg) {
  return cfg.sigma_min + (cfg.sigma_max - cfg.sigma_min) / (1.0 + std::exp(-logit));
}

DecodedDesign decode_design(std::span<const double> p, int outputs, const OptimizerConfig& cfg) {
  if (p.size() != kDesignParams) throw Error("design vector must have 7 parameters");
  for (double v : p)
    if (!std::isfinite(v)) throw Error("design vector has non-finite entries");
  return {decode_probe(p.subspan(0, 3), cfg), decode_bank(p.subspan(3, 4), outputs, cfg)};
}

std::vector<double> encode_design(const ProbeTransform& probe, const ReferenceBank& bank, const OptimizerConfig& cfg) {
  const PoincareVector m = probe.m1.normalized();
  const PoincareVector n = bank.normal.normalized();
  return {std::acos(std::clamp(m.h, -1.0, 1.0)),
          std::atan2(m.c, m.d),
          logit_of(probe.sigma2 / probe.sigma1, cfg),
          std::acos(std::clamp(n.h, -1.0, 1.0)),
          std::atan2(n.c, n.d),
          bank.azimuth0,
          logit_of(bank.sigma2 / bank.sigma1, cfg)};
}

double design_penalty(std::span<const double> p, const ProbeTransform& probe, const OptimizerConfig& cfg) {
  const double excess = svd2(probe.jones()).sigma1 - 1.0;
  double penalty = excess > 1e-12 ? cfg.passivity_weight * excess * excess : 0.0;
  penalty += cfg.range_weight * (wall(p[2]) + wall(p[6]));
  penalty += cfg.linear_basis_weight * probe.m1.c * probe.m1.c;
  return penalty;
}

double design_objective(std::span<const double> p, const ObjectSet& set, double q, int outputs,
                        const OptimizerConfig& cfg) {
  const DecodedDesign d = decode_design(p, outputs, cfg);
  const PatternLibrary lib = build_library(set, cfg.search_grid, d.probe.jones(), d.bank, q);
  return -separation_margin(lib, search_tol(set, cfg)) + design_penalty(p, d.probe, cfg);
}

std::vector<std::vector<double>> start_points(std::size_t dims, int count, std::uint64_t seed, int outputs) {
  if (dims > kHaltonBases.size()) throw Error("too many dimensions for the start sequence");
  std::vector<double> shift(dims);
  for (std::size_t d = 0; d < dims; ++d)
    shift[d] = static_cast<double>(derive_seed(seed, 0x5eed, d) >> 11) * 0x1.0p-53;

  std::vector<std::vector<double>> pts;
  for (int i = 0; i < count; ++i) {
    std::vector<double> x(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      double u = radical_inverse(static_cast<std::uint64_t>(i) + 1, kHaltonBases[d]) + shift[d];
      u -= std::floor(u);
      switch (d) {
        case 0:
        case 3: x[d] = kPi * u; break;                              // polar angles
        case 1:
        case 4: x[d] = 2.0 * kPi * u - kPi; break;                  // azimuths
        case 5: x[d] = 2.0 * kPi * u / std::max(outputs, 1); break;  // in-plane orientation
        default: x[d] = 6.0 * u - 3.0; break;                       // sigma logits
      }
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

ProbeDesign optimize_probe(const ObjectSet& set, double q, const OptimizerConfig& cfg) {
  validate(set);
  validate(cfg);
  check_concurrence(q);
  const Objective f = [&](std::span<const double> p) { return probe_objective(p, set, q, cfg); };
  const auto starts = project(start_points(kDesignParams, cfg.multistarts, cfg.seed, 3), 0, 3);
  const MultistartOutcome ms = multistart(f, starts, cfg, 0);

  ProbeDesign out;
  out.probe = decode_probe(ms.best.x, cfg);
  out.objective = ms.best.f;
  const PatternLibrary lib = build_library(set, cfg.final_grid, out.probe.jones(), default_bank(3), q);
  out.margin = poincare_margin(lib, std::max(cfg.angle_tol, lib.grid_spacing));
  out.discriminable = out.margin > kDiscriminableMargin;
  return out;
}

ReferenceDesign optimize_reference(const ObjectSet& set, const ProbeTransform& probe, double q, int outputs,
                                   const OptimizerConfig& cfg) {
  validate(set);
  validate(cfg);
  check_concurrence(q);
  if (outputs < 2 || outputs > 4) throw Error("reference bank output count must be 2, 3 or 4");
  const JonesMatrix probe_jones = probe.jones();
  const Objective f = [&](std::span<const double> p) { return bank_objective(p, set, probe_jones, q, outputs, cfg); };
  const auto starts = project(start_points(kDesignParams, cfg.multistarts, cfg.seed, outputs), 3, 4);
  const MultistartOutcome ms = multistart(f, starts, cfg, 0);

  ReferenceDesign out;
  out.bank = decode_bank(ms.best.x, outputs, cfg);
  out.objective = ms.best.f;
  out.margin = design_margin(set, probe, out.bank, q, cfg);
  return out;
}

double design_margin(const ObjectSet& set, const ProbeTransform& probe, const ReferenceBank& bank, double q,
                     const OptimizerConfig& cfg) {
  const PatternLibrary lib = build_library(set, cfg.final_grid, probe.jones(), bank, q, cfg.angle_tol);
  return separation_margin(lib, std::max(cfg.angle_tol, lib.grid_spacing));
}

DesignResult optimize_joint(const ObjectSet& set, double q, int outputs, const OptimizerConfig& cfg) {
  const ProbeDesign probe_stage = optimize_probe(set, q, cfg);
  const ReferenceDesign bank_stage = optimize_reference(set, probe_stage.probe, q, outputs, cfg);

  DesignResult out;
  out.q = q;
  out.outputs = outputs;
  out.config = cfg;
  out.probe = probe_stage.probe;
  out.bank = bank_stage.bank;
  out.margin = bank_stage.margin;

  const Objective f = [&](std::span<const double> p) { return design_objective(p, set, q, outputs, cfg); };
  std::vector<double> x = encode_design(out.probe, out.bank, cfg);
  out.objective = f(x);
  int it = 0;
  out.trace.push_back({it++, out.objective});
  for (int round = 0; round < 2; ++round) {
    const MinimizeResult r = nelder_mead(f, x, cfg);
    for (double v : r.trace) out.trace.push_back({it++, std::min(v, out.objective)});
    const DecodedDesign d = decode_design(r.x, outputs, cfg);
    const double margin = design_margin(set, d.probe, d.bank, q, cfg);
    if (r.f < out.objective && margin >= out.margin) {
      out.probe = d.probe;
      out.bank = d.bank;
      out.margin = margin;
      out.objective = r.f;
    }
    x = r.x;
  }
  out.discriminable = out.margin > kDiscriminableMargin;
  return out;
}

}  // namespace ghostpol
