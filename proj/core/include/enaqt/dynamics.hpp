#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "enaqt/integrator.hpp"
#include "enaqt/model.hpp"

namespace enaqt {

enum class SolverKind {
  kTimeStepping,        // adaptive RK45 until the trace is exhausted
  kLiouvillianDense,    // one dense N^2 x N^2 solve of L X = -rho0
  kLiouvillianReduced,  // same linear system via Schur/Sylvester + N x N diagonal closure
};

std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& text);

struct EfficiencyResult {
  double eta = 0.0;             // probability trapped
  double eta_loss = 0.0;        // probability lost to recombination
  double residual_trace = 0.0;  // trace left at truncation (0 for direct solves)
  SolverKind method = SolverKind::kLiouvillianReduced;
  double horizon = 0.0;         // final time reached; infinity for direct solves
  bool converged = true;        // false when the time horizon ran out first
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
};

struct PureTrajectory {
  std::vector<double> times;
  std::vector<ComplexVector> amplitudes;
};

/// Uniform output grid [t_start, t_final] with `points` samples.
struct OutputGrid {
  std::size_t points = 2000;
  double t_start = 0.0;

  std::vector<double> times(double t_final) const;
};

/// Precomputed generator d(rho)/dt = -i(H rho - rho H^dag) + L_phi(rho).
class MasterEquation {
 public:
  explicit MasterEquation(const TransportModel& model);

  ComplexMatrix operator()(const ComplexMatrix& rho) const;

  const ComplexMatrix& hamiltonian() const { return h_; }
  double coherence_damping_rate() const { return damping_; }

 private:
  ComplexMatrix h_;
  ComplexMatrix minus_i_h_;
  double damping_;
};

ComplexMatrix master_equation_rhs(const ComplexMatrix& rho, const TransportModel& model);

/// Column-stacked N^2 x N^2 generator: vec(d rho/dt) = L vec(rho).
ComplexMatrix liouvillian_matrix(const TransportModel& model);

StepControl default_step_control();

Trajectory propagate(const ComplexMatrix& rho0, const TransportModel& model, double t_final,
                     const OutputGrid& grid = {}, const StepControl& control = default_step_control());

/// Integrates d psi/dt = -i H psi with the non-Hermitian H. Requires zero dephasing.
PureTrajectory propagate_pure(const ComplexVector& psi0, const TransportModel& model,
                              double t_final, const OutputGrid& grid = {},
                              const StepControl& control = default_step_control());

struct TimeSteppingOptions {
  double trace_tol = 1e-7;
  // Horizon used when Gamma = 0 (no guaranteed decay rate).
  double max_time_without_recombination = 1e5;
  StepControl control = default_step_control();
};

EfficiencyResult efficiency_timestepping(const ComplexMatrix& rho0, const TransportModel& model,
                                         const TimeSteppingOptions& options = {});

EfficiencyResult efficiency_liouvillian(const ComplexMatrix& rho0, const TransportModel& model);

/// Exact solve of the same linear system as efficiency_liouvillian in O(N^4):
/// the Hamiltonian part plus uniform damping is a Sylvester equation solved
/// through a complex Schur form, and the diagonal correction of the dephasing
/// map closes on an N x N system for the populations of the time integral.
EfficiencyResult efficiency_reduced(const ComplexMatrix& rho0, const TransportModel& model);

/// Diagonal of X = int_0^inf rho(t) dt via the reduced solve.
RealVector integrated_populations(const ComplexMatrix& rho0, const TransportModel& model);

EfficiencyResult compute_efficiency(const ComplexMatrix& rho0, const TransportModel& model,
                                    SolverKind solver = SolverKind::kLiouvillianReduced);

struct TrapObservables {
  std::vector<double> times;
  std::vector<double> rho11;     // trap population
  std::vector<double> im_rho12;  // Im <trap|rho|first neighbor>
  std::vector<double> im_rho13;  // Im <trap|rho|second neighbor>
  std::vector<double> trace;
};

/// Samples the trap population and the imaginary parts of the coherences with
/// up to two trap neighbors (missing neighbors yield zeros).
TrapObservables record_trap_observables(const Trajectory& trajectory, std::size_t trap,
                                        const std::vector<std::size_t>& trap_neighbors);

/// Trapezoidal integral of the trap population on the output grid.
double integrate_trap_population(const TrapObservables& observables);

}  // namespace enaqt
