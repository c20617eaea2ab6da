#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rotnum/oracle.hpp"
#include "rotnum/potential.hpp"
#include "rotnum/prufer.hpp"

namespace rotnum::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lattice families ("type": "periodic" | "sine").
struct PeriodicLatticeSpec {
  double spacing = 1.0;
  bool operator==(const PeriodicLatticeSpec&) const = default;
};
struct SineLatticeSpec {
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
  double spacing = 1.0;
  bool operator==(const SineLatticeSpec&) const = default;
};
using LatticeSpec = std::variant<PeriodicLatticeSpec, SineLatticeSpec>;

struct TrigTermSpec {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  bool operator==(const TrigTermSpec&) const = default;
};

// Sequence families ("type": "constant" | "alternating" | "sine" | "trig").
struct ConstantSeqSpec {
  double value = 0.0;
  bool operator==(const ConstantSeqSpec&) const = default;
};
struct AlternatingSeqSpec {
  double amplitude = 1.0;
  bool operator==(const AlternatingSeqSpec&) const = default;
};
struct SineSeqSpec {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
  bool operator==(const SineSeqSpec&) const = default;
};
struct TrigSeqSpec {
  double offset = 0.0;
  std::vector<TrigTermSpec> terms;
  bool operator==(const TrigSeqSpec&) const = default;
};
using SequenceSpec = std::variant<ConstantSeqSpec, AlternatingSeqSpec, SineSeqSpec, TrigSeqSpec>;

// Background families ("type": "constant" | "trig" | "piecewise_constant").
struct ConstantQSpec {
  double value = 0.0;
  bool operator==(const ConstantQSpec&) const = default;
};
struct TrigQSpec {
  double offset = 0.0;
  std::vector<TrigTermSpec> terms;
  bool operator==(const TrigQSpec&) const = default;
};
struct PiecewiseConstantQSpec {
  SequenceSpec values = ConstantSeqSpec{};
  bool operator==(const PiecewiseConstantQSpec&) const = default;
};
using BackgroundSpec = std::variant<ConstantQSpec, TrigQSpec, PiecewiseConstantQSpec>;

struct PotentialSpec {
  BackgroundSpec q = ConstantQSpec{};
  SequenceSpec v = ConstantSeqSpec{};
  LatticeSpec lattice = PeriodicLatticeSpec{};
  bool operator==(const PotentialSpec&) const = default;
};

struct EnergyRange {
  double min = 0.0;
  double max = 1.0;
  /// Absent: chosen so the grid has at most 10^4 points.
  std::optional<double> step;
  bool operator==(const EnergyRange&) const = default;
};
using EnergySpec = std::variant<EnergyRange, std::vector<double>>;

struct IntegratorSpec {
  /// Absent: min_gap / 50.
  std::optional<double> h_max;
  double substep_angle_cap = std::numbers::pi / 4;
  bool operator==(const IntegratorSpec&) const = default;
};

struct OutputSpec {
  std::optional<std::string> path;
  std::string format = "csv";
  bool operator==(const OutputSpec&) const = default;
};

struct PlateauSpec {
  double flat_tol = 1e-3;
  std::int64_t min_width = 5;
  bool operator==(const PlateauSpec&) const = default;
};

struct DiagnosticsSpec {
  std::int64_t window = 1000;
  std::int64_t samples_per_gap = 64;
  std::int64_t quad_points_per_gap = 16;
  bool operator==(const DiagnosticsSpec&) const = default;
};

struct RunConfig {
  PotentialSpec potential;
  EnergySpec energies = std::vector<double>{};
  IntegratorSpec integrator;
  std::int64_t horizon = 10000;
  double initial_angle = 0.0;
  OutputSpec output;
  PlateauSpec plateaus;
  DiagnosticsSpec diagnostics;
  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError on malformed or out-of-range input.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

GeneralizedPotential build_potential(const PotentialSpec& spec);
IntegratorConfig build_integrator(const RunConfig& cfg, const PointSet& gamma);
/// Explicit list, or the range grid; throws ConfigError when empty.
std::vector<double> energies(const RunConfig& cfg);

/// Value of q when it is a constant and every δ-strength is zero.
std::optional<double> free_background(const PotentialSpec& spec);
/// (q0, v, L) when q is constant, V is constant and Γ is periodic.
struct KronigPenney {
  double q0 = 0.0;
  double v = 0.0;
  double spacing = 1.0;
};
std::optional<KronigPenney> kronig_penney(const PotentialSpec& spec);
/// Smallest lattice shift p <= 64 leaving the potential invariant, if any.
std::optional<std::int64_t> lattice_period(const PotentialSpec& spec);

}  // namespace rotnum::config
