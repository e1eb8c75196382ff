#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gtoci/basis.hpp"

namespace gtoci {

/// Run configuration.  Every physical quantity is stored in trap units
/// (lengths in d_ho, energies in hbar*omega) and converted on use.  GTO
/// exponents are in units of m*omega/hbar, the convention of the named bases.
struct RunConfig {
  struct Well {
    Vec3 center_dho{};
    double depth_hw = 1.0;
    double width_dho = 1.0;
  };
  struct Trap {
    std::string kind = "harmonic";
    double omega = 1.0;
    std::vector<Well> wells;
  };
  struct Morse {
    double depth_hw = 3.0;
    double r_min_dho = 0.0;
    double stiffness_per_dho = 0.0;
  };
  struct Shell {
    int sigma = 0;
    std::vector<double> exponents;
    Vec3 center_dho{};
  };
  struct Basis {
    std::string name = "GTO";
    std::vector<Shell> shells;
  };
  struct Solver {
    double lindep = 1e-10;
    std::string route = "canonical";
    double integral_threshold = 1e-14;
    double degeneracy_tol = 1e-4;
    int report_states = 60;
  };
  struct Depths {
    std::vector<double> values;
    double lo = 0.5;
    double hi = 15.0;
    int points = 60;
  };
  struct Scatter {
    double lo = 0.5;
    double hi = 15.0;
    int points = 200;
    double pole_lo = 0.5;
    double pole_hi = 70.0;
    int pole_count = 3;
  };
  struct Reference {
    int n_points = 20000;
    double r_max_dho = 12.0;
    int n_com_max = 4;
  };
  struct Converge {
    std::vector<double> depths{3.0, 5.0, 10.0, 13.0};
    std::vector<std::string> rungs{"s", "sp", "spd", "spdf"};
  };
  struct Density {
    std::vector<std::string> states{"MGS", "MS1", "MS2"};
    double z_max_dho = 2.0;
    int points = 81;
  };

  Trap trap;
  Morse morse;
  Basis basis;
  Solver solver;
  Depths sweep;
  Scatter scatter;
  Reference reference;
  Converge converge;
  Density density;
  std::filesystem::path out_dir = "out";
  std::filesystem::path cache_dir;
  int threads = 0;

  RunConfig();

  MorseParams morse_params() const;
  MorseParams morse_params(double depth_hw) const;
  TrapParams trap_params() const;
  BasisSet basis_set() const;
  /// Explicit values when given, otherwise `points` geometrically spaced
  /// depths over [lo, hi].
  std::vector<double> sweep_depths() const;
  void validate() const;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);
  std::string to_json_text() const;
};

}  // namespace gtoci
