#pragma once

#include "qfk/classical_oracle.hpp"
#include "qfk/config.hpp"
#include "qfk/ito_algebra.hpp"
#include "qfk/report.hpp"
#include "qfk/semigroup_lab.hpp"

namespace qfk {

/// Flow datum and multiplier coefficients for one named experiment.
struct PresetInstance {
  HPGenerator gen;
  MultiplierCoeff c;
  MultiplierCoeff d;
  bool cp_claim;  // left and right coefficients coincide
};

PresetInstance build_preset(const ExperimentConfig& config);

/// Execute the preset's check suite; deterministic for a fixed
/// (config, seed) pair.
RunReport run_experiment(const ExperimentConfig& config);

/// Error-versus-h study over a halving ladder (at least three rungs).
RunReport run_convergence(const ExperimentConfig& config, const std::vector<double>& ladder);

}  // namespace qfk
