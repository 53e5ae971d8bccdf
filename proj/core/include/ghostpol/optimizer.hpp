#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "ghostpol/discrimination.hpp"

namespace ghostpol {

struct OptimizerConfig {
  int multistarts = 8;
  int max_iterations = 1000;
  double f_tol = 1e-10;   ///< spread of simplex values
  double x_tol = 1e-7;    ///< simplex size (infinity norm)
  double initial_step = 0.4;
  std::uint64_t seed = 1;

  double passivity_weight = 1e3;
  double range_weight = 1.0;            ///< quadratic wall on logit parameters beyond +-8
  double linear_basis_weight = 1e-4;    ///< mild preference for linear-polarization probe bases
  double sigma_min = 0.02;              ///< logistic range of searched sigma2 values
  double sigma_max = 0.98;

  std::size_t search_grid = 60;
  std::size_t final_grid = 180;
  double angle_tol = std::numbers::pi / 90.0;  ///< 2 degrees
};

/// Throws Error unless the configuration is usable.
void validate(const OptimizerConfig& cfg);

using Objective = std::function<double(std::span<const double>)>;

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  std::vector<double> trace;  ///< best value after each iteration
};

/// Nelder-Mead simplex minimization (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Stops when both the value spread and the simplex size fall below tolerance, or at max_iterations.
MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg);

/// Layout of the joint design vector.
///   0,1  probe m1 polar/azimuth angles     2  probe sigma2 (logit)
///   3,4  bank normal polar/azimuth angles  5  bank azimuth0
///   6    bank sigma2 (logit)
inline constexpr std::size_t kDesignParams = 7;

struct DecodedDesign {
  ProbeTransform probe;
  ReferenceBank bank;
};

PoincareVector unit_from_angles(double polar, double azimuth);
double logistic_sigma(double logit, const OptimizerConfig& cfg);

DecodedDesign decode_design(std::span<const double> params, int outputs, const OptimizerConfig& cfg);
std::vector<double> encode_design(const ProbeTransform& probe, const ReferenceBank& bank, const OptimizerConfig& cfg);

/// Penalties added to the negated margin: passivity violation of the probe, logit
/// excursions, and the linear-basis preference.
double design_penalty(std::span<const double> params, const ProbeTransform& probe, const OptimizerConfig& cfg);

/// -separation_margin on the search grid plus penalties.
double design_objective(std::span<const double> params, const ObjectSet& set, double q, int outputs,
                        const OptimizerConfig& cfg);

/// Low-discrepancy start points (shifted Halton) in the design box; the list for k
/// starts is a prefix of the list for k + 1.
std::vector<std::vector<double>> start_points(std::size_t dims, int count, std::uint64_t seed, int outputs);

/// Margin below which a design counts as non-discriminating.
inline constexpr double kDiscriminableMargin = 1e-9;

struct ProbeDesign {
  ProbeTransform probe;
  double objective = 0.0;
  double margin = 0.0;  ///< Poincare-space margin on the final grid
  bool discriminable = false;
};

/// Probe maximizing the worst-case separation of heralded reference states.
ProbeDesign optimize_probe(const ObjectSet& set, double q, const OptimizerConfig& cfg);

struct ReferenceDesign {
  ReferenceBank bank;
  double objective = 0.0;
  double margin = 0.0;  ///< D-space margin on the final grid
};

/// Constrained coplanar bank maximizing the D-space margin for a fixed probe.
ReferenceDesign optimize_reference(const ObjectSet& set, const ProbeTransform& probe, double q, int outputs,
                                   const OptimizerConfig& cfg);

struct TracePoint {
  int iteration = 0;
  double value = 0.0;
};

struct DesignResult {
  ProbeTransform probe;
  ReferenceBank bank;
  double margin = 0.0;  ///< D-space margin on the final grid at cfg.angle_tol
  double objective = 0.0;
  bool discriminable = false;
  double q = 1.0;
  int outputs = 3;
  OptimizerConfig config;
  std::vector<TracePoint> trace;
};

/// Probe stage, bank stage, then a joint polish over all seven parameters.
DesignResult optimize_joint(const ObjectSet& set, double q, int outputs, const OptimizerConfig& cfg);

/// separation_margin of a design on a fresh final-grid library.
double design_margin(const ObjectSet& set, const ProbeTransform& probe, const ReferenceBank& bank, double q,
                     const OptimizerConfig& cfg);

}  // namespace ghostpol
