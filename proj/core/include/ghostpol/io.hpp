#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ghostpol/optimizer.hpp"

namespace ghostpol {

/// Lossless decimal rendering of a double (17 significant digits).
std::string format_double(double v);

/// Probe + bank pair as stored in design documents.
struct Design {
  ProbeTransform probe;
  ReferenceBank bank;
};

/// `{probe: {m1, sigma1, sigma2[, left_angles]}, bank: {mode, normal, azimuth0_rad, sigma1, sigma2, count | outputs}}`.
/// Extra keys (margin, config, trace) are ignored.
Design parse_design(std::string_view text);
std::string serialize_design(const Design& design);

/// Full optimizer export: the design keys plus margin, objective, config echo and trace.
std::string serialize_design_result(const DesignResult& result);

struct PoincareRow {
  std::string object_name;
  double theta = 0.0;
  PoincareVector p;
};

struct PatternRow {
  std::string object_name;
  double theta = 0.0;
  std::vector<double> gammas;
  std::vector<double> joints;
};

std::string poincare_csv(const PatternLibrary& lib);
std::vector<PoincareRow> parse_poincare_csv(std::string_view text);

/// Columns object_name, theta_rad, gamma_1..gamma_N, joint_1..joint_N.
std::string patterns_csv(const PatternLibrary& lib);
std::vector<PatternRow> parse_patterns_csv(std::string_view text);

/// Columns budget, accuracy, trials, seed.
std::string noise_csv(const std::vector<NoiseSweepRow>& rows);
std::vector<NoiseSweepRow> parse_noise_csv(std::string_view text);

/// Whitespace- or comma-separated non-negative integers.
Counts parse_counts(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ghostpol
