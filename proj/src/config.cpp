#include "qfk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qfk {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::GaussianSubordination: return "gaussian-subordination";
    case Preset::LindsaySinha: return "lindsay-sinha";
    case Preset::BahnPark: return "bahn-park";
    case Preset::UnitaryConjugation: return "unitary-conjugation";
    case Preset::RandomStructure: return "random-structure";
  }
  return "?";
}

Preset parse_preset(const std::string& name) {
  for (Preset p : all_presets())
    if (preset_name(p) == name) return p;
  throw std::invalid_argument("unknown preset: " + name);
}

std::vector<Preset> all_presets() {
  return {Preset::GaussianSubordination, Preset::LindsaySinha, Preset::BahnPark,
          Preset::UnitaryConjugation, Preset::RandomStructure};
}

double ExperimentConfig::tolerance(const std::string& check, double fallback) const {
  const auto it = tolerance_overrides.find(check);
  return it == tolerance_overrides.end() ? fallback : it->second;
}

Complex parse_complex(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  // Split into (real)(+/- imag i); the imaginary unit is a trailing i.
  if (s.back() == 'i' || s.back() == 'I') {
    s.pop_back();
    // Find the split point: a +/- that is not an exponent sign, skipping
    // position 0 (leading sign of the first term).
    for (std::size_t pos = s.size(); pos-- > 1;) {
      if ((s[pos] == '+' || s[pos] == '-') && s[pos - 1] != 'e' && s[pos - 1] != 'E') {
        const std::string re = trim(s.substr(0, pos));
        std::string im = trim(s.substr(pos));
        if (im == "+" || im == "-") im += "1";
        return Complex(std::stod(re), std::stod(im));
      }
    }
    std::string im = trim(s);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return Complex(0.0, std::stod(im));
  }
  return Complex(std::stod(s), 0.0);
}

Matrix parse_matrix(const std::string& text, int n) {
  std::string s = trim(text);
  double scale = 1.0;
  const auto star = s.find('*');
  if (star != std::string::npos && s.find(';') == std::string::npos &&
      s.find(',') == std::string::npos) {
    scale = std::stod(trim(s.substr(0, star)));
    s = trim(s.substr(star + 1));
  }

  Matrix m;
  if (s == "sigma_x") m = pauli_x();
  else if (s == "sigma_y") m = pauli_y();
  else if (s == "sigma_z") m = pauli_z();
  else if (s == "identity") m = identity(n);
  else if (s == "zero") m = Matrix::Zero(n, n);
  else {
    const std::vector<std::string> rows = split(s, ';');
    const int r = int(rows.size());
    int c = -1;
    for (int i = 0; i < r; ++i) {
      const std::vector<std::string> entries = split(rows[i], ',');
      if (c < 0) {
        c = int(entries.size());
        m = Matrix::Zero(r, c);
      } else if (int(entries.size()) != c) {
        throw std::invalid_argument("matrix literal has ragged rows: " + text);
      }
      for (int j = 0; j < c; ++j) m(i, j) = parse_complex(entries[j]);
    }
  }
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("matrix does not have the configured dimension " +
                                std::to_string(n) + ": " + text);
  return scale * m;
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  const std::string k = trim(key);
  const std::string v = trim(value);
  if (k == "preset") config.preset = parse_preset(v);
  else if (k == "n") config.n = std::stoi(v);
  else if (k == "d") config.d = std::stoi(v);
  else if (k == "N" || k == "slices") config.num_slices = std::stoi(v);
  else if (k == "h") {
    config.h = std::stod(v);
    config.h_given = true;
  } else if (k == "T") config.total_time = std::stod(v);
  else if (k == "seed") config.seed = std::stoull(v);
  else if (k == "out") config.out_dir = v;
  else if (k == "htilde") config.htilde_text = v;
  else if (k == "b") config.b_text = v;
  else if (k == "uc_h") config.uc_h_text = v;
  else if (k == "uc_l") config.uc_l_text = v;
  else if (k.rfind("tol.", 0) == 0) config.tolerance_overrides[k.substr(4)] = std::stod(v);
  else throw std::invalid_argument("unknown configuration key: " + k);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  ExperimentConfig config;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + line);
    apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

void ExperimentConfig::finalize() {
  if (n <= 0 || d <= 0 || num_slices <= 0)
    throw std::invalid_argument("config: n, d and N must be positive");
  if (total_time > 0.0) {
    if (h_given) {
      if (std::abs(num_slices * h - total_time) > 1e-12)
        throw std::invalid_argument("config: N*h must equal T");
    } else {
      h = total_time / num_slices;
    }
  }
  if (!(h > 0.0)) throw std::invalid_argument("config: h must be positive");

  htilde = htilde_text.empty()
               ? ((n == 2) ? pauli_z() : Matrix(Matrix::Zero(n, n)))
               : parse_matrix(htilde_text, n);
  b = b_text.empty() ? ((n == 2) ? pauli_x() : Matrix(Matrix::Zero(n, n)))
                     : parse_matrix(b_text, n);
  uc_h = uc_h_text.empty() ? ((n == 2) ? pauli_z() : Matrix(Matrix::Zero(n, n)))
                           : parse_matrix(uc_h_text, n);
  if (uc_l_text.empty()) {
    uc_l.assign(d, Matrix::Zero(n, n));
    if (n == 2) uc_l[0] = pauli_x();
  } else {
    uc_l.clear();
    for (const std::string& piece : split(uc_l_text, '|'))
      uc_l.push_back(parse_matrix(piece, n));
  }

  if (!is_hermitian(htilde, 1e-12))
    throw std::invalid_argument("config: htilde must be Hermitian");
  if (preset == Preset::BahnPark && !is_hermitian(b, 1e-12))
    throw std::invalid_argument("config: bahn-park requires a Hermitian b");
  if (preset == Preset::UnitaryConjugation && !is_hermitian(uc_h, 1e-12))
    throw std::invalid_argument("config: unitary-conjugation requires a Hermitian uc_h");
  if (int(uc_l.size()) != d)
    throw std::invalid_argument("config: uc_l must provide one matrix per color");
}

}  // namespace qfk
