// Acceptance suite: one PASS/FAIL line per criterion.
//
//   enaqt_acceptance            run all criteria
//   enaqt_acceptance 1 4        run a subset
//
// Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "enaqt/enaqt.hpp"
#include "oracles.hpp"

namespace {

using namespace enaqt;

class Verdict {
 public:
  void expect(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    if (!notes_.empty()) notes_ += "; ";
    notes_ += (ok ? "" : "FAILED ") + what;
  }
  bool ok() const { return ok_; }
  const std::string& notes() const { return notes_; }

 private:
  bool ok_ = true;
  std::string notes_;
};

std::string fmt(double value, int digits = 4) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

// Ensemble defaults shared by the paper-scale criteria: kappa = 1, Gamma = 1e-2,
// trap at vertex 0, leaf mixture on trees and uniform mixture on hypercubes.
EnsembleSetup tree_setup() {
  EnsembleSetup setup{build_binary_tree(5)};
  setup.initial = InitialState::leaf_mixture();
  return setup;
}

EnsembleSetup hypercube_setup() {
  EnsembleSetup setup{build_hypercube(4)};
  setup.initial = InitialState::uniform_mixture();
  return setup;
}

double ordered_eta(const EnsembleSetup& setup, double dephasing) {
  return run_point(setup, 0.0, dephasing, 0).eta;
}

const std::vector<double>& disorder_grid() {
  static const std::vector<double> grid = linear_grid(0.0, 2.5, 0.1);
  return grid;
}

constexpr std::size_t kRealizations = 100;

// 1. Ordered noiseless tree.
Verdict ordered_tree() {
  Verdict v;
  struct Case {
    double recomb;
    double expected;
    double tol;
  };
  for (const auto& c : {Case{1e-2, 0.0584, 0.002}, Case{1e-3, 0.0620, 0.0005},
                        Case{1e-4, 0.0625, 0.0005}}) {
    auto setup = tree_setup();
    setup.recomb_rate = c.recomb;
    const double eta = ordered_eta(setup, 0.0);
    v.expect(std::abs(eta - c.expected) <= c.tol,
             "Gamma=" + fmt(c.recomb) + " eta=" + fmt(eta, 6) + " (" + fmt(c.expected) + "+-" +
                 fmt(c.tol) + ")");
  }
  return v;
}

// 2. Exact bounds and their approach as Gamma -> 0.
Verdict exact_bounds() {
  Verdict v;
  struct Case {
    const char* name;
    EnsembleSetup setup;
    double bound;
  };
  for (auto& c : {Case{"tree", tree_setup(), 1.0 / 16.0},
                  Case{"hypercube", hypercube_setup(), 5.0 / 16.0}}) {
    const auto n = static_cast<Eigen::Index>(c.setup.topology.n_sites());
    const auto sub =
        invariant_subspace(assemble_system_hamiltonian(c.setup.topology, RealVector::Zero(n)), 0);
    const ComplexMatrix rho0 = initial_state(c.setup.topology, c.setup.initial);
    const double bound = efficiency_upper_bound(sub, rho0);
    v.expect(std::abs(bound - c.bound) <= 1e-12,
             std::string(c.name) + " bound=" + fmt(bound, 15) + " D'=" +
                 std::to_string(sub.dimension()));
    auto setup = c.setup;
    setup.recomb_rate = 1e-6;
    const double eta = ordered_eta(setup, 0.0);
    v.expect(std::abs(eta - c.bound) <= 1e-3,
             std::string(c.name) + " eta(Gamma=1e-6)=" + fmt(eta, 7));
  }
  return v;
}

// 3. Dephasing-assisted transport on the ordered tree.
Verdict ordered_dephasing() {
  Verdict v;
  const auto setup = tree_setup();
  const auto grid = linear_grid(0.0, 3.0, 0.05);
  const auto profile = dephasing_profile(setup, grid);
  bool increasing = true;
  for (std::size_t k = 1; k < grid.size() && grid[k] <= 1.0 + 1e-12; ++k) {
    increasing = increasing && profile[k] > profile[k - 1];
  }
  v.expect(increasing, "eta increasing on [0,1]");
  const auto best = static_cast<std::size_t>(
      std::max_element(profile.begin(), profile.end()) - profile.begin());
  v.expect(grid[best] >= 1.2 && grid[best] <= 2.0,
           "argmax gamma=" + fmt(grid[best]) + " eta=" + fmt(profile[best]));
  const double zeno = ordered_eta(setup, 1e3);
  v.expect(zeno < profile[best] / 2.0, "eta(1e3)=" + fmt(zeno));
  return v;
}

struct Curve {
  std::vector<double> disorder;
  std::vector<double> mean;
};

Curve disorder_curve(const EnsembleSetup& setup, double dephasing) {
  const auto table = run_sweep(setup, SweepGrid{disorder_grid(), {dephasing}, kRealizations});
  if (!table.failures.empty()) throw SolverError(table.failures.front().message);
  Curve curve;
  for (const auto& row : table.rows) {
    curve.disorder.push_back(row.disorder);
    curve.mean.push_back(row.eta_mean);
  }
  return curve;
}

// 4. Disorder-assisted transport, Monte Carlo with 100 realizations.
Verdict disorder_assisted() {
  Verdict v;
  constexpr double kTol = 0.03;
  struct Case {
    const char* name;
    EnsembleSetup setup;
    double dephasing;
    double start;
    double peak;
    double peak_disorder;
  };
  for (auto& c : {Case{"tree g=0", tree_setup(), 0.0, 0.06, 0.34, 0.83},
                  Case{"tree g=0.2", tree_setup(), 0.2, 0.30, 0.47, 0.8},
                  Case{"hypercube g=0.2", hypercube_setup(), 0.2, 0.54, 0.70, 1.4}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const Curve curve = disorder_curve(c.setup, c.dephasing);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::size_t near = 0;
    for (std::size_t k = 0; k < curve.disorder.size(); ++k) {
      if (std::abs(curve.disorder[k] - c.peak_disorder) <
          std::abs(curve.disorder[near] - c.peak_disorder)) {
        near = k;
      }
    }
    const double at_zero = curve.mean.front();
    const double at_peak = curve.mean[near];
    v.expect(std::abs(at_zero - c.start) <= kTol && std::abs(at_peak - c.peak) <= kTol &&
                 seconds <= 120.0,
             std::string(c.name) + ": " + fmt(at_zero, 3) + " -> " + fmt(at_peak, 3) + " at d=" +
                 fmt(curve.disorder[near]) + " (" + fmt(seconds, 3) + " s)");
  }
  return v;
}

// 5. Delta_max profile along a log-spaced dephasing grid.
Verdict delta_max_profile_check() {
  Verdict v;
  std::vector<double> dephasing{0.0};
  const auto log_values = log_grid(1e-2, 1e2, 25);
  dephasing.insert(dephasing.end(), log_values.begin(), log_values.end());
  struct Case {
    const char* name;
    EnsembleSetup setup;
  };
  for (auto& c : {Case{"tree", tree_setup()}, Case{"hypercube", hypercube_setup()}}) {
    const auto table = run_sweep(c.setup, SweepGrid{disorder_grid(), dephasing, kRealizations});
    if (!table.failures.empty()) throw SolverError(table.failures.front().message);
    const DeltaMax limit = delta_max(table, 0.0);
    v.expect(limit.delta_max >= 0.25 && limit.delta_max <= 0.33,
             std::string(c.name) + " Dmax(0)=" + fmt(limit.delta_max, 3));
    const DeltaMax optimal = delta_max(table, 1.0);
    v.expect(optimal.delta_max <= 0.03, std::string(c.name) + " Dmax(1)=" +
                                            fmt(optimal.delta_max, 3) + "+-" +
                                            fmt(optimal.stderr_estimate, 2));
    std::vector<DeltaMax> profile;
    for (double g : log_values) profile.push_back(delta_max(table, g));
    double worst = -1.0;
    double worst_at = 0.0;
    for (std::size_t k = 1; k < profile.size(); ++k) {
      const double rise = profile[k].delta_max - profile[k - 1].delta_max;
      const double se = std::hypot(profile[k].stderr_estimate, profile[k - 1].stderr_estimate);
      const double excess = rise - 2.0 * se;
      if (excess > worst) {
        worst = excess;
        worst_at = profile[k].dephasing;
      }
    }
    v.expect(worst <= 0.0, std::string(c.name) + " monotone (worst rise-2se=" + fmt(worst, 2) +
                               " at g=" + fmt(worst_at, 3) + ")");
  }
  return v;
}

// 6. Trajectory physics at the trap.
Verdict trajectory_physics() {
  Verdict v;
  const auto setup = tree_setup();
  const auto& tree = setup.topology;
  const std::size_t leaf = 30;  // label "31"
  {
    const auto model = setup.make_model(RealVector::Zero(31), 0.0);
    ComplexVector psi0 = ComplexVector::Zero(31);
    psi0(static_cast<Eigen::Index>(leaf)) = 1.0;
    const auto traj = propagate_pure(psi0, model, 50.0, OutputGrid{2000});
    double worst = 0.0;
    for (const auto& psi : traj.amplitudes) {
      worst = std::max({worst, std::abs(psi(0).imag()), std::abs(psi(1).real()),
                        std::abs(psi(2).real())});
    }
    v.expect(worst <= 1e-8, "phase symmetry max=" + fmt(worst, 2));
  }

  const ComplexMatrix rho0 = initial_state(tree, InitialState::single_site(leaf));
  const auto neighbors = tree.neighbors(0);
  double worst_residual = 0.0;
  std::vector<double> integral;
  for (const auto& [dephasing, disorder] :
       std::vector<std::pair<double, double>>{{0.0, 0.0}, {0.2, 0.0}, {1.0, 0.0}, {0.2, 1.4}}) {
    const auto model =
        setup.make_model(realization_energies(setup, disorder, dephasing, 0), dephasing);
    const auto traj = propagate(rho0, model, 50.0, OutputGrid{5001});
    const auto obs = record_trap_observables(traj, 0, neighbors);
    for (std::size_t k = 1; k + 1 < obs.times.size(); ++k) {
      const double fd =
          (obs.rho11[k + 1] - obs.rho11[k - 1]) / (obs.times[k + 1] - obs.times[k - 1]);
      const double rate = -2.0 * (obs.im_rho12[k] + obs.im_rho13[k]) -
                          2.0 * (model.trap_rate() + model.recomb_rate()) * obs.rho11[k];
      worst_residual = std::max(worst_residual, std::abs(fd - rate));
    }
    integral.push_back(integrate_trap_population(obs));
  }
  v.expect(worst_residual < 1e-4, "rho11 equation residual=" + fmt(worst_residual, 2));
  v.expect(integral[1] > integral[0],
           "int rho11: " + fmt(integral[0]) + " (g=0) < " + fmt(integral[1]) + " (g=0.2)");
  return v;
}

// Random connected graph on n vertices with random energies and rates.
TransportModel random_model(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 1; k < n; ++k) {
    edges.emplace_back(std::uniform_int_distribution<std::size_t>(0, k - 1)(rng), k);
  }
  RealVector eps(static_cast<Eigen::Index>(n));
  for (auto& e : eps) e = normal(rng);
  return TransportModel(build_custom(n, edges), eps,
                        std::uniform_int_distribution<std::size_t>(0, n - 1)(rng),
                        0.2 + unit(rng), 0.02 + 0.2 * unit(rng), 1.5 * unit(rng));
}

// 7. Property suite.
Verdict properties() {
  Verdict v;
  std::mt19937_64 rng(20150327);

  double bookkeeping = 0.0;
  double agreement = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 1.0;
  double shift = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 15;
    const auto model = random_model(n, rng);
    const ComplexMatrix rho0 = oracle::random_density(n, rng);
    const auto stepped = efficiency_timestepping(rho0, model);
    const auto direct = efficiency_liouvillian(rho0, model);
    bookkeeping = std::max(
        bookkeeping, std::abs(stepped.eta + stepped.eta_loss + stepped.residual_trace - 1.0));
    agreement = std::max(agreement, std::abs(stepped.eta - direct.eta));

    const RealVector shifted =
        model.site_energies().array() + std::normal_distribution<double>(0.0, 3.0)(rng);
    shift = std::max(shift, std::abs(efficiency_reduced(rho0, model.with_site_energies(shifted)).eta -
                                     efficiency_reduced(rho0, model).eta));

    const ComplexMatrix h = oracle::random_hermitian(n, rng);
    const ComplexMatrix generated = master_equation_rhs(h, model);
    hermiticity = std::max(hermiticity, (generated - generated.adjoint()).cwiseAbs().maxCoeff());

    const auto traj = propagate(rho0, model, 20.0, OutputGrid{41});
    for (const auto& rho : traj.states) {
      hermiticity = std::max(hermiticity, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
      min_eigenvalue = std::min(min_eigenvalue, es.eigenvalues().minCoeff());
    }
  }
  v.expect(bookkeeping <= 1e-6, "bookkeeping=" + fmt(bookkeeping, 2));
  v.expect(agreement <= 1e-6, "solver agreement=" + fmt(agreement, 2));
  v.expect(hermiticity <= 1e-10 && min_eigenvalue >= -1e-8,
           "hermiticity=" + fmt(hermiticity, 2) + " min eig=" + fmt(min_eigenvalue, 2));
  v.expect(shift <= 1e-9, "energy shift=" + fmt(shift, 2));

  {
    const TransportModel dimer(build_custom(2, {{0, 1}}), RealVector::Zero(2), 0, 0.0, 0.0, 0.0);
    ComplexMatrix rho0 = ComplexMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    const auto traj = propagate(rho0, dimer, 10.0, OutputGrid{201});
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const double c = std::cos(traj.times[k]);
      worst = std::max(worst, std::abs(traj.states[k](0, 0).real() - c * c));
    }
    v.expect(worst <= 1e-6, "Rabi=" + fmt(worst, 2));
  }

  {
    EnsembleSetup setup{build_binary_tree(4)};
    const SweepGrid grid{{0.0, 0.5, 1.0}, {0.0, 0.3}, 8};
    const auto serial = run_sweep(setup, grid, {1});
    const auto parallel = run_sweep(setup, grid, {4});
    bool identical = serial.rows.size() == parallel.rows.size();
    for (std::size_t k = 0; identical && k < serial.rows.size(); ++k) {
      identical = serial.rows[k].eta_mean == parallel.rows[k].eta_mean &&
                  serial.rows[k].eta_stderr == parallel.rows[k].eta_stderr;
    }
    v.expect(identical, "sweep 1 vs 4 workers identical");
  }
  return v;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "ordered noiseless tree", ordered_tree},
      {2, "exact efficiency bounds", exact_bounds},
      {3, "dephasing-assisted transport (ordered)", ordered_dephasing},
      {4, "disorder-assisted transport", disorder_assisted},
      {5, "Delta_max profile", delta_max_profile_check},
      {6, "trajectory physics", trajectory_physics},
      {7, "property suite", properties},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Verdict verdict;
    try {
      verdict = c.run();
    } catch (const std::exception& e) {
      verdict.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (verdict.ok() ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title
              << " [" << fmt(seconds, 3) << " s] " << verdict.notes() << std::endl;
    if (!verdict.ok()) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
