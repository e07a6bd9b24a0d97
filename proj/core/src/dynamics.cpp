#include "enaqt/dynamics.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace enaqt {

namespace {

const Complex kI(0.0, 1.0);

// Density matrix plus the two running integrals 2*kappa*int rho_tt and
// 2*Gamma*int tr rho, integrated as extra ODE components so the quadrature
// has the integrator's order.
struct AccumulatedState {
  ComplexMatrix rho;
  double trapped = 0.0;
  double lost = 0.0;
};

AccumulatedState operator+(const AccumulatedState& a, const AccumulatedState& b) {
  return {a.rho + b.rho, a.trapped + b.trapped, a.lost + b.lost};
}

AccumulatedState operator*(double s, const AccumulatedState& a) {
  return {s * a.rho, s * a.trapped, s * a.lost};
}

ComplexMatrix hermitize(const ComplexMatrix& rho) { return 0.5 * (rho + rho.adjoint()); }

void check_square(const ComplexMatrix& rho, std::size_t n, const char* what) {
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != n) {
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix, got " + std::to_string(rho.rows()) +
                          "x" + std::to_string(rho.cols()));
  }
}

}  // namespace

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kTimeStepping:
      return "time-stepping";
    case SolverKind::kLiouvillianDense:
      return "liouvillian-dense";
    case SolverKind::kLiouvillianReduced:
      return "liouvillian-reduced";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& text) {
  if (text == "time-stepping" || text == "rk45") return SolverKind::kTimeStepping;
  if (text == "liouvillian-dense" || text == "dense") return SolverKind::kLiouvillianDense;
  if (text == "liouvillian-reduced" || text == "reduced" || text == "liouvillian") {
    return SolverKind::kLiouvillianReduced;
  }
  throw InvalidArgument("unknown solver '" + text +
                        "' (expected liouvillian, liouvillian-dense or time-stepping)");
}

std::vector<double> OutputGrid::times(double t_final) const {
  if (points < 2) throw InvalidArgument("output grid needs at least 2 points");
  if (!(t_final > t_start)) throw InvalidArgument("output window must have t_final > t_start");
  std::vector<double> out(points);
  const double dt = (t_final - t_start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = t_start + dt * static_cast<double>(i);
  out.back() = t_final;
  return out;
}

MasterEquation::MasterEquation(const TransportModel& model)
    : h_(assemble_effective_hamiltonian(model)),
      minus_i_h_(-kI * h_),
      damping_(model.coherence_damping_rate()) {}

ComplexMatrix MasterEquation::operator()(const ComplexMatrix& rho) const {
  // -i(H rho - rho H^dag) = (-iH) rho + ((-iH) rho^dag)^dag; the second form
  // avoids a separate product with H^dag.
  ComplexMatrix out = minus_i_h_ * rho;
  out += (minus_i_h_ * rho.adjoint()).adjoint();
  if (damping_ != 0.0) {
    const Eigen::Index n = rho.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i != j) out(i, j) -= damping_ * rho(i, j);
      }
    }
  }
  return out;
}

ComplexMatrix master_equation_rhs(const ComplexMatrix& rho, const TransportModel& model) {
  check_square(rho, model.n_sites(), "master_equation_rhs");
  return MasterEquation(model)(rho);
}

ComplexMatrix liouvillian_matrix(const TransportModel& model) {
  const ComplexMatrix h = assemble_effective_hamiltonian(model);
  const Eigen::Index n = h.rows();
  const Eigen::Index n2 = n * n;
  const double damping = model.coherence_damping_rate();
  ComplexMatrix l = ComplexMatrix::Zero(n2, n2);
  // Column stacking: vec(A X B) = (B^T kron A) vec(X), so
  // -i(H X - X H^dag) -> -i (I kron H - conj(H) kron I).
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = i + j * n;
      for (Eigen::Index k = 0; k < n; ++k) {
        l(row, k + j * n) += -kI * h(i, k);
        l(row, i + k * n) += kI * std::conj(h(j, k));
      }
      if (i != j) l(row, row) -= damping;
    }
  }
  return l;
}

StepControl default_step_control() {
  StepControl control;
  control.rtol = 1e-8;
  control.atol = 1e-10;
  control.initial_step = 1e-3;
  return control;
}

Trajectory propagate(const ComplexMatrix& rho0, const TransportModel& model, double t_final,
                     const OutputGrid& grid, const StepControl& control) {
  check_square(rho0, model.n_sites(), "propagate");
  if (!(t_final > 0.0)) throw InvalidArgument("propagate: t_final must be > 0");
  const MasterEquation generator(model);
  const std::vector<double> times = grid.times(t_final);

  Trajectory out;
  out.times.reserve(times.size());
  out.states.reserve(times.size());
  ComplexMatrix rho = rho0;
  auto rhs = [&generator](double, const ComplexMatrix& y) { return generator(y); };
  auto norm = [&control](const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& e) {
    return scaled_rms(a, b, e, control.rtol, control.atol);
  };
  auto observer = [&](double t, const ComplexMatrix& y, std::optional<std::size_t> hit) {
    if (hit) {
      out.times.push_back(t);
      out.states.push_back(hermitize(y));
    }
    return true;
  };
  // The window may start after t = 0; the evolution always starts from rho0 at t = 0.
  integrate_dopri5(rhs, rho, 0.0, t_final, control, norm, observer, times);
  return out;
}

PureTrajectory propagate_pure(const ComplexVector& psi0, const TransportModel& model,
                              double t_final, const OutputGrid& grid,
                              const StepControl& control) {
  if (model.dephasing_rate() != 0.0) {
    throw InvalidArgument("propagate_pure requires zero dephasing (pure states do not close "
                          "under the dephasing map)");
  }
  if (static_cast<std::size_t>(psi0.size()) != model.n_sites()) {
    throw InvalidArgument("propagate_pure: amplitude vector has wrong length");
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-10) {
    throw InvalidArgument("propagate_pure: initial state must be normalized");
  }
  if (!(t_final > 0.0)) throw InvalidArgument("propagate_pure: t_final must be > 0");
  const ComplexMatrix minus_i_h = -kI * assemble_effective_hamiltonian(model);
  const std::vector<double> times = grid.times(t_final);

  PureTrajectory out;
  ComplexVector psi = psi0;
  auto rhs = [&minus_i_h](double, const ComplexVector& y) -> ComplexVector {
    return minus_i_h * y;
  };
  auto norm = [&control](const ComplexVector& a, const ComplexVector& b, const ComplexVector& e) {
    return scaled_rms(a, b, e, control.rtol, control.atol);
  };
  auto observer = [&](double t, const ComplexVector& y, std::optional<std::size_t> hit) {
    if (hit) {
      out.times.push_back(t);
      out.amplitudes.push_back(y);
    }
    return true;
  };
  integrate_dopri5(rhs, psi, 0.0, t_final, control, norm, observer, times);
  return out;
}

EfficiencyResult efficiency_timestepping(const ComplexMatrix& rho0, const TransportModel& model,
                                         const TimeSteppingOptions& options) {
  check_square(rho0, model.n_sites(), "efficiency_timestepping");
  if (!(options.trace_tol > 0.0 && options.trace_tol < 1.0)) {
    throw InvalidArgument("trace_tol must lie in (0, 1)");
  }
  const double gamma = model.recomb_rate();
  const double kappa = model.trap_rate();
  const double t_max = gamma > 0.0 ? std::log(1.0 / options.trace_tol) / (2.0 * gamma)
                                   : options.max_time_without_recombination;
  const auto trap = static_cast<Eigen::Index>(model.trap_site());
  const MasterEquation generator(model);

  AccumulatedState state{rho0, 0.0, 0.0};
  auto rhs = [&](double, const AccumulatedState& y) {
    AccumulatedState dy;
    dy.rho = generator(y.rho);
    dy.trapped = 2.0 * kappa * y.rho(trap, trap).real();
    dy.lost = 2.0 * gamma * y.rho.trace().real();
    return dy;
  };
  const StepControl& control = options.control;
  auto norm = [&control](const AccumulatedState& a, const AccumulatedState& b,
                         const AccumulatedState& e) {
    const Eigen::Index n = a.rho.size();
    const double r = scaled_rms(a.rho, b.rho, e.rho, control.rtol, control.atol);
    auto term = [&](double y0, double y1, double err) {
      const double scale = control.atol + control.rtol * std::max(std::abs(y0), std::abs(y1));
      return (err / scale) * (err / scale);
    };
    const double extra = term(a.trapped, b.trapped, e.trapped) + term(a.lost, b.lost, e.lost);
    return std::sqrt((r * r * static_cast<double>(n) + extra) / static_cast<double>(n + 2));
  };
  const double tol = options.trace_tol;
  auto observer = [tol](double, const AccumulatedState& y, std::optional<std::size_t>) {
    return y.rho.trace().real() >= tol;
  };
  const IntegrationStats stats =
      integrate_dopri5(rhs, state, 0.0, t_max, control, norm, observer);

  EfficiencyResult result;
  result.eta = state.trapped;
  result.eta_loss = state.lost;
  result.residual_trace = std::max(0.0, state.rho.trace().real());
  result.method = SolverKind::kTimeStepping;
  result.horizon = stats.t_end;
  result.converged = result.residual_trace < tol * (1.0 + 1e-6) || stats.stopped_by_observer;
  return result;
}

EfficiencyResult efficiency_liouvillian(const ComplexMatrix& rho0, const TransportModel& model) {
  check_square(rho0, model.n_sites(), "efficiency_liouvillian");
  const Eigen::Index n = rho0.rows();
  const ComplexMatrix l = liouvillian_matrix(model);
  const Eigen::PartialPivLU<ComplexMatrix> lu(l);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw SolverError("Liouvillian is singular or ill-conditioned (rcond = " +
                      std::to_string(rcond) + "); expected only when Gamma = 0");
  }
  const ComplexVector b = -Eigen::Map<const ComplexVector>(rho0.data(), n * n);
  const ComplexVector x = lu.solve(b);
  const Eigen::Map<const ComplexMatrix> integral(x.data(), n, n);
  const auto trap = static_cast<Eigen::Index>(model.trap_site());

  EfficiencyResult result;
  result.eta = 2.0 * model.trap_rate() * integral(trap, trap).real();
  result.eta_loss = 2.0 * model.recomb_rate() * integral.trace().real();
  result.residual_trace = 0.0;
  result.method = SolverKind::kLiouvillianDense;
  result.horizon = std::numeric_limits<double>::infinity();
  return result;
}

EfficiencyResult efficiency_reduced(const ComplexMatrix& rho0, const TransportModel& model) {
  const RealVector populations = integrated_populations(rho0, model);
  EfficiencyResult result;
  result.eta = 2.0 * model.trap_rate() * populations(static_cast<Eigen::Index>(model.trap_site()));
  result.eta_loss = 2.0 * model.recomb_rate() * populations.sum();
  result.residual_trace = 0.0;
  result.method = SolverKind::kLiouvillianReduced;
  result.horizon = std::numeric_limits<double>::infinity();
  return result;
}

EfficiencyResult compute_efficiency(const ComplexMatrix& rho0, const TransportModel& model,
                                    SolverKind solver) {
  switch (solver) {
    case SolverKind::kTimeStepping:
      return efficiency_timestepping(rho0, model);
    case SolverKind::kLiouvillianDense:
      return efficiency_liouvillian(rho0, model);
    case SolverKind::kLiouvillianReduced:
      return efficiency_reduced(rho0, model);
  }
  throw InvalidArgument("unknown solver");
}

TrapObservables record_trap_observables(const Trajectory& trajectory, std::size_t trap,
                                        const std::vector<std::size_t>& trap_neighbors) {
  TrapObservables out;
  const auto t = static_cast<Eigen::Index>(trap);
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const ComplexMatrix& rho = trajectory.states[k];
    if (t >= rho.rows()) throw InvalidArgument("trap index out of range");
    out.times.push_back(trajectory.times[k]);
    out.rho11.push_back(rho(t, t).real());
    auto coherence = [&](std::size_t which) {
      if (which >= trap_neighbors.size()) return 0.0;
      return rho(t, static_cast<Eigen::Index>(trap_neighbors[which])).imag();
    };
    out.im_rho12.push_back(coherence(0));
    out.im_rho13.push_back(coherence(1));
    out.trace.push_back(rho.trace().real());
  }
  return out;
}

double integrate_trap_population(const TrapObservables& observables) {
  double sum = 0.0;
  for (std::size_t k = 1; k < observables.times.size(); ++k) {
    sum += 0.5 * (observables.rho11[k] + observables.rho11[k - 1]) *
           (observables.times[k] - observables.times[k - 1]);
  }
  return sum;
}

}  // namespace enaqt
