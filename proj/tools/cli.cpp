#include "cli.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "enaqt/enaqt.hpp"

namespace enaqt::cli {

namespace {

constexpr int kUsageError = 1;
constexpr int kInvalidParameters = 2;
constexpr int kSolverFailure = 3;

// Flags shared by every subcommand that builds a model. Values stay strings
// and go through apply_setting so flags and config files share one parser.
struct ModelFlags {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App& app, const std::string& flag, const std::string& key,
           const std::string& help) {
    options.emplace_back(key, app.add_option(flag, values[key], help));
  }

  void apply(SweepConfig& config) const {
    for (const auto& [key, option] : options) {
      if (option->count() > 0) apply_setting(config, key, values.at(key));
    }
  }

  bool given(const std::string& key) const {
    for (const auto& [k, option] : options) {
      if (k == key) return option->count() > 0;
    }
    return false;
  }

  std::string value(const std::string& key) const { return values.at(key); }
};

void add_graph_flags(CLI::App& app, ModelFlags& flags) {
  flags.add(app, "--graph", "graph", "binary-tree | hypercube | custom (default binary-tree)");
  flags.add(app, "--generations", "generations", "binary-tree generations g (default 5)");
  flags.add(app, "--dimension", "dimension", "hypercube dimension d (default 4)");
  flags.add(app, "--edge-file", "edge_file",
            "custom graph edge list: first line N, then 0-based 'i j' pairs");
  flags.add(app, "--init", "init",
            "initial state: leaves | uniform | site:<index> (default leaves on trees, "
            "uniform otherwise)");
  flags.add(app, "--trap", "trap", "trap site: root | <vertex index> (default root / vertex 0)");
}

void add_rate_flags(CLI::App& app, ModelFlags& flags) {
  flags.add(app, "--kappa", "kappa", "trapping rate kappa, units of V (default 1)");
  flags.add(app, "--gamma-recomb", "gamma_recomb",
            "recombination rate Gamma, units of V (default 0.01)");
  flags.add(app, "--dephasing-convention", "convention",
            "half-rate (coherences decay at gamma_phi/2, default) | lindblad (decay at "
            "gamma_phi)");
  flags.add(app, "--seed", "seed", "master seed for the disorder draws (default 20150327)");
  flags.add(app, "--solver", "solver",
            "liouvillian (reduced exact solve, default) | liouvillian-dense | time-stepping");
}

// Point flags: a single dephasing and disorder value.
struct PointFlags {
  double dephasing = 0.0;
  double disorder = 0.0;
  std::size_t realization = 0;

  void add(CLI::App& app) {
    app.add_option("--dephasing", dephasing, "dephasing rate gamma_phi, units of V (default 0)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--disorder", disorder,
                   "site-energy disorder std. dev. delta_eps, units of V (default 0)")
        ->check(CLI::NonNegativeNumber);
  }
};

void write_or_print(const std::string& path, std::ostream& out,
                    const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-") {
    writer(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw InvalidArgument("cannot open output file '" + path + "'");
  writer(file);
  out << "wrote " << path << '\n';
}

void write_efficiency_row(std::ostream& os, const SweepConfig& config, const EnsembleSetup& setup,
                          double dephasing, double disorder, const EfficiencyResult& r) {
  os << csv::kUnitsComment << '\n' << csv::kEfficiencyHeader << '\n';
  os << to_string(setup.topology.kind()) << ',' << setup.topology.n_sites() << ','
     << setup.trap.resolve(setup.topology) << ',' << to_string(setup.initial) << ','
     << csv::format(config.kappa) << ',' << csv::format(config.gamma_recomb) << ','
     << csv::format(dephasing) << ',' << to_string(config.convention) << ','
     << csv::format(disorder) << ',' << config.seed << ',' << to_string(r.method) << ','
     << csv::format(r.eta) << ',' << csv::format(r.eta_loss) << ','
     << csv::format(r.residual_trace) << ',' << csv::format(r.horizon) << ','
     << (r.converged ? "true" : "false") << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-transport efficiency of a single excitation on tight-binding networks "
               "under pure dephasing, trapping and recombination. All energies, rates and "
               "disorder strengths are in units of the coupling V."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "enaqt 0.1.0");

  // single
  auto* single = app.add_subcommand("single", "efficiency of one model (one disorder realization)");
  ModelFlags single_flags;
  PointFlags single_point;
  std::string single_output;
  add_graph_flags(*single, single_flags);
  add_rate_flags(*single, single_flags);
  single_point.add(*single);
  single->add_option("--realization", single_point.realization,
                     "disorder realization index (default 0)");
  single->add_option("-o,--output", single_output, "CSV output path (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "ensemble-averaged efficiency over a disorder x "
                                            "dephasing grid");
  ModelFlags sweep_flags;
  std::string sweep_config_path;
  std::string sweep_output;
  bool log_dephasing = false;
  sweep->add_option("-c,--config", sweep_config_path,
                    "key = value file with sweep settings; flags override it");
  add_graph_flags(*sweep, sweep_flags);
  add_rate_flags(*sweep, sweep_flags);
  sweep_flags.add(*sweep, "--disorder", "disorder",
                  "disorder grid: start:stop:step | log:lo:hi:count | a,b,c (default 0:2.5:0.1)");
  sweep_flags.add(*sweep, "--dephasing", "dephasing",
                  "dephasing grid, same syntax (default 0:1.2:0.05)");
  sweep_flags.add(*sweep, "--realizations", "realizations",
                  "disorder realizations per cell (default 100)");
  sweep_flags.add(*sweep, "--threads", "threads", "worker threads, 0 = all cores (default 0)");
  sweep->add_flag("--log-dephasing", log_dephasing,
                  "use 25 log-spaced dephasing values from 1e-2 to 1e2");
  sweep->add_option("-o,--output", sweep_output, "CSV output path (default stdout)");

  // bound
  auto* bound = app.add_subcommand("bound", "invariant subspace and efficiency upper bound");
  ModelFlags bound_flags;
  PointFlags bound_point;
  add_graph_flags(*bound, bound_flags);
  bound_flags.add(*bound, "--seed", "seed", "master seed for --disorder (default 20150327)");
  bound->add_option("--disorder", bound_point.disorder,
                    "site-energy disorder of the Hamiltonian (default 0)")
      ->check(CLI::NonNegativeNumber);
  double cluster_tol = 1e-8;
  bound->add_option("--cluster-tol", cluster_tol,
                    "relative eigenvalue gap below which levels are degenerate (default 1e-8)");

  // trajectory
  auto* trajectory = app.add_subcommand(
      "trajectory", "trap population and trap-neighbor coherences over time");
  ModelFlags traj_flags;
  PointFlags traj_point;
  double t_final = 50.0;
  double t_start = 0.0;
  std::size_t points = 2000;
  std::size_t traj_realizations = 1;
  std::size_t traj_threads = 0;
  bool pure = false;
  std::string traj_output;
  add_graph_flags(*trajectory, traj_flags);
  add_rate_flags(*trajectory, traj_flags);
  traj_point.add(*trajectory);
  trajectory->add_option("--t-final", t_final, "end of the output window, units of 1/V "
                                               "(default 50)");
  trajectory->add_option("--t-start", t_start, "start of the output window (default 0)");
  trajectory->add_option("--points", points, "output samples (default 2000)");
  trajectory->add_option("--realizations", traj_realizations,
                         "disorder realizations to average (default 1)");
  trajectory->add_option("--threads", traj_threads, "worker threads, 0 = all cores");
  trajectory->add_flag("--pure", pure,
                       "integrate the wave function instead (requires --dephasing 0 and a "
                       "site:<index> initial state); writes amplitudes of the trap and its "
                       "neighbors");
  trajectory->add_option("-o,--output", traj_output, "CSV output path (default stdout)");

  // delta-max
  auto* dmax = app.add_subcommand("delta-max", "maximum disorder gain per dephasing value");
  std::string dmax_input;
  std::string dmax_output;
  std::vector<double> dmax_dephasing;
  dmax->add_option("sweep_csv", dmax_input, "CSV produced by the sweep subcommand")->required();
  dmax->add_option("--dephasing", dmax_dephasing,
                   "restrict to these dephasing values (default: all in the table)");
  dmax->add_option("-o,--output", dmax_output, "CSV output path (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (single->parsed()) {
      SweepConfig config;
      single_flags.apply(config);
      const EnsembleSetup setup = config.setup();
      const EfficiencyResult r =
          run_point(setup, single_point.disorder, single_point.dephasing, single_point.realization);
      write_or_print(single_output, out, [&](std::ostream& os) {
        write_efficiency_row(os, config, setup, single_point.dephasing, single_point.disorder, r);
      });
      if (!single_output.empty()) out << "eta = " << csv::format(r.eta) << '\n';
      if (!r.converged) {
        err << "warning: time horizon exhausted before the trace decayed; eta is a lower "
               "bound\n";
      }
      return 0;
    }

    if (sweep->parsed()) {
      SweepConfig config;
      if (!sweep_config_path.empty()) config = load_sweep_config(sweep_config_path);
      sweep_flags.apply(config);
      if (log_dephasing) {
        if (sweep_flags.given("dephasing")) {
          throw InvalidArgument("--log-dephasing and --dephasing are mutually exclusive");
        }
        config.dephasing = log_grid(1e-2, 1e2, 25);
      }
      const EnsembleSetup setup = config.setup();
      const SweepGrid grid = config.grid();
      const SweepTable table = run_sweep(setup, grid, {config.threads});
      write_or_print(sweep_output, out, [&](std::ostream& os) { csv::write_sweep(os, table); });
      for (const auto& f : table.failures) {
        err << "failed: delta_eps=" << csv::format(f.disorder)
            << " gamma_phi=" << csv::format(f.dephasing) << " realization=" << f.realization
            << ": " << f.message << '\n';
      }
      return table.failures.empty() ? 0 : kSolverFailure;
    }

    if (bound->parsed()) {
      SweepConfig config;
      bound_flags.apply(config);
      const EnsembleSetup setup = config.setup();
      const RealVector energies = realization_energies(setup, bound_point.disorder, 0.0, 0);
      const ComplexMatrix hs = assemble_system_hamiltonian(setup.topology, energies);
      InvariantSubspaceOptions options;
      options.cluster_tol = cluster_tol;
      const InvariantSubspace subspace =
          invariant_subspace(hs, setup.trap.resolve(setup.topology), options);
      const double b =
          efficiency_upper_bound(subspace, initial_state(setup.topology, setup.initial));
      out << "# " << setup.topology.describe() << " trap=" << setup.trap.resolve(setup.topology)
          << " init=" << to_string(setup.initial) << '\n';
      out << "# units: energies in units of V\n";
      out << "invariant_dimension," << subspace.dimension() << '\n';
      out << "efficiency_bound," << csv::format(b) << '\n';
      out << "energy,multiplicity,decoupled,trap_weight\n";
      for (const auto& c : subspace.clusters) {
        out << csv::format(std::abs(c.energy) < 1e-12 ? 0.0 : c.energy) << ',' << c.multiplicity
            << ',' << c.decoupled << ',' << csv::format(c.trap_weight < 1e-15 ? 0.0 : c.trap_weight)
            << '\n';
      }
      return 0;
    }

    if (trajectory->parsed()) {
      SweepConfig config;
      traj_flags.apply(config);
      const EnsembleSetup setup = config.setup();
      OutputGrid grid{points, t_start};
      (void)grid.times(t_final);
      if (pure) {
        if (traj_point.dephasing != 0.0) {
          throw InvalidArgument("--pure requires --dephasing 0");
        }
        if (setup.initial.kind != InitialStateKind::kSingleSite) {
          throw InvalidArgument("--pure requires --init site:<index>");
        }
        const TransportModel model = setup.make_model(
            realization_energies(setup, traj_point.disorder, 0.0, 0), 0.0);
        ComplexVector psi0 = ComplexVector::Zero(static_cast<Eigen::Index>(model.n_sites()));
        psi0(static_cast<Eigen::Index>(setup.initial.site)) = 1.0;
        const PureTrajectory traj = propagate_pure(psi0, model, t_final, grid);
        std::vector<std::size_t> sites{model.trap_site()};
        for (auto n : setup.topology.neighbors(model.trap_site())) sites.push_back(n);
        std::vector<std::string> labels;
        for (auto s : sites) labels.push_back(setup.topology.label(s));
        write_or_print(traj_output, out, [&](std::ostream& os) {
          csv::write_pure_trajectory(os, traj, sites, labels);
        });
        return 0;
      }
      const TrapObservables obs =
          averaged_trap_observables(setup, traj_point.disorder, traj_point.dephasing,
                                    traj_realizations, t_final, grid, {traj_threads});
      write_or_print(traj_output, out,
                     [&](std::ostream& os) { csv::write_trap_observables(os, obs); });
      return 0;
    }

    if (dmax->parsed()) {
      std::ifstream in(dmax_input);
      if (!in) throw InvalidArgument("cannot open sweep CSV '" + dmax_input + "'");
      const SweepTable table = csv::read_sweep(in);
      std::vector<DeltaMax> profile;
      if (dmax_dephasing.empty()) {
        profile = delta_max_profile(table);
      } else {
        for (double g : dmax_dephasing) profile.push_back(delta_max(table, g));
      }
      write_or_print(dmax_output, out, [&](std::ostream& os) { csv::write_delta_max(os, profile); });
      return 0;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsageError;
}

}  // namespace enaqt::cli
