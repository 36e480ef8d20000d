#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/eigensolver.hpp"
#include "zeropi/params.hpp"

namespace zeropi {

enum class SweepParameter { flux, ng_theta, EJ, EL };

SweepParameter parse_sweep_parameter(const std::string& name);
std::string sweep_parameter_name(SweepParameter p);

/// Returns params with the swept parameter set.  EJ and EL are interpreted as
/// relative values: value = 0 keeps the base energy, 0.01 scales it by 1.01
/// when `relative` is true; otherwise the absolute energy in GHz.
CircuitParams apply_parameter(CircuitParams params, SweepParameter p,
                              double value, bool relative = false);

struct StateLabel {
  double energy = 0.0;  // GHz
  int l = -1;           // primary-qubit index
  int n = -1;           // zeta excitation
  double overlap = 0.0; // max squared bare-product overlap, in [0, 1]
  bool hybridized = false;
};

struct LabeledSpectrum {
  std::vector<StateLabel> states;          // in 3d eigenvalue order
  double hybridization_threshold = 0.5;

  /// Index into states for a given (l, n), or -1 when not retained.
  int find(int l, int n) const;
};

struct DispersionCurve {
  SweepParameter parameter;
  std::vector<double> grid;
  std::vector<std::vector<double>> energies;  // [point][level], GHz, tracked
  std::vector<bool> point_failed;
  std::vector<bool> anticrossing;             // tracking overlap dipped below 0.8
  std::vector<double> d1_omega_ge;            // rad/s per lambda, interior points
  std::vector<double> d2_omega_ge;            // rad/s per lambda^2
};

struct SweepOptions {
  bool three_d = false;
  EigenOptions eigen;
  int workers = 1;
  double track_overlap_warn = 0.8;
};

/// Eigenvalues along a strictly increasing parameter grid, continuity-ordered
/// by eigenvector overlap with the previous point.  Points where the solver
/// fails are flagged; more than 10% failures aborts.
DispersionCurve sweep(const CircuitParams& params, const BasisSpec& basis,
                      SweepParameter parameter, const std::vector<double>& grid,
                      int k, const SweepOptions& options = {});

/// Assigns (l, n) labels to 3d eigenstates by maximum overlap with bare
/// products of 2d eigenstates and zeta Fock states.  Ties break toward
/// smaller (l, n) lexicographically.  Duplicate assignments raise an error
/// naming the conflicting states.
LabeledSpectrum label_dressed(const EigenSolution& sol3d, const EigenSolution& sol2d,
                              const BasisSpec& basis,
                              double hybridization_threshold = 0.5);

struct DerivativeResult {
  double d1 = 0.0;    // rad/s per lambda
  double d2 = 0.0;    // rad/s per lambda^2
  double err1 = 0.0;  // Richardson error estimates
  double err2 = 0.0;
};

/// Central differences with one Richardson refinement on a scalar frequency
/// function omega(lambda) in rad/s.
DerivativeResult differentiate(const std::function<double(double)>& omega,
                               double lambda0, double step);

/// Qubit-frequency susceptibilities d omega_ge / d lambda from the 2d
/// Hamiltonian.  EJ and EL derivatives are with respect to relative changes.
/// Default steps: flux 1e-3, ng 1e-3, EJ/EL 1e-4 (relative).
DerivativeResult energy_derivatives(const CircuitParams& params, const BasisSpec& basis,
                                    SweepParameter parameter, double step = 0.0,
                                    const EigenOptions& eigen = {});

class LabelingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zeropi
