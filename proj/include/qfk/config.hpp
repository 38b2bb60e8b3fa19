#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qfk/operator_core.hpp"

namespace qfk {

enum class Preset {
  GaussianSubordination,
  LindsaySinha,
  BahnPark,
  UnitaryConjugation,
  RandomStructure,
};

std::string preset_name(Preset p);
Preset parse_preset(const std::string& name);
std::vector<Preset> all_presets();

/// Plain-text key=value experiment description; every field has a desk-
/// scale default so a config may pin only the preset.
struct ExperimentConfig {
  Preset preset = Preset::GaussianSubordination;
  int n = 2;
  int d = 1;
  int num_slices = 10;
  double h = 0.05;
  bool h_given = false;
  double total_time = -1.0;  // optional T key; resolved in finalize()
  std::uint64_t seed = 1;
  std::string out_dir;

  // Matrix-valued keys stay textual until finalize(), when the algebra
  // dimension is settled.
  std::string htilde_text;  // base-flow datum for the Gaussian-type presets
  std::string b_text;       // Lindsay-Sinha / Bahn-Park coefficient
  std::string uc_h_text;    // unitary-conjugation Hamiltonian
  std::string uc_l_text;    // '|'-separated list, one matrix per color

  Matrix htilde;
  Matrix b;
  Matrix uc_h;
  std::vector<Matrix> uc_l;

  std::map<std::string, double> tolerance_overrides;  // keys tol.<check>

  double horizon() const { return num_slices * h; }
  double tolerance(const std::string& check, double fallback) const;

  /// Fills matrix defaults for the dimensions and validates preset
  /// requirements (Hermitian b for bahn-park, etc.).
  void finalize();
};

/// Parse "a+bi" style complex scalars.
Complex parse_complex(const std::string& text);

/// Named matrices (sigma_x, sigma_y, sigma_z, identity, zero with an
/// optional "<scale>*" prefix) or literals with rows separated by ';'
/// and entries by ','.
Matrix parse_matrix(const std::string& text, int n);

ExperimentConfig parse_config_file(const std::string& path);

/// Apply one key=value assignment (file line or command-line override).
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

}  // namespace qfk
