#include "enaqt/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <thread>

namespace enaqt {

std::size_t TrapPlacement::resolve(const Topology& topology) const {
  if (vertex) {
    if (*vertex >= topology.n_sites()) {
      throw InvalidArgument("trap vertex " + std::to_string(*vertex) + " out of range");
    }
    return *vertex;
  }
  return topology.kind() == GraphKind::kBinaryTree ? root(topology) : 0;
}

TransportModel EnsembleSetup::make_model(const RealVector& energies, double dephasing) const {
  return TransportModel(topology, energies, trap.resolve(topology), trap_rate, recomb_rate,
                        dephasing, convention);
}

void SweepGrid::validate() const {
  auto check = [](const std::vector<double>& values, const char* name) {
    if (values.empty()) throw InvalidArgument(std::string(name) + " grid is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i]) || values[i] < 0.0) {
        throw InvalidArgument(std::string(name) + " values must be finite and >= 0");
      }
      if (i > 0 && !(values[i] > values[i - 1])) {
        throw InvalidArgument(std::string(name) + " grid must be strictly increasing");
      }
    }
  };
  check(disorder_values, "disorder");
  check(dephasing_values, "dephasing");
  if (n_realizations == 0) throw InvalidArgument("n_realizations must be >= 1");
}

const SweepRow* SweepTable::find(double disorder, double dephasing) const {
  for (const auto& row : rows) {
    if (std::abs(row.disorder - disorder) < 1e-12 && std::abs(row.dephasing - dephasing) < 1e-12) {
      return &row;
    }
  }
  return nullptr;
}

std::uint64_t cell_seed(std::uint64_t master_seed, double disorder, double dephasing) {
  // +0.0 and -0.0 must agree.
  const auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v); };
  return derive_seed(derive_seed(master_seed, bits(disorder)), bits(dephasing));
}

RealVector realization_energies(const EnsembleSetup& setup, double disorder, double dephasing,
                                std::size_t realization_index) {
  const DisorderSpec spec{disorder, cell_seed(setup.master_seed, disorder, dephasing)};
  return sample_site_energies(spec, realization_index, setup.topology.n_sites());
}

EfficiencyResult run_point(const EnsembleSetup& setup, double disorder, double dephasing,
                           std::size_t realization_index) {
  try {
    const TransportModel model =
        setup.make_model(realization_energies(setup, disorder, dephasing, realization_index),
                         dephasing);
    return compute_efficiency(initial_state(setup.topology, setup.initial), model, setup.solver);
  } catch (const InvalidArgument&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverError(std::string(e.what()) + " [disorder=" + std::to_string(disorder) +
                      " dephasing=" + std::to_string(dephasing) +
                      " realization=" + std::to_string(realization_index) + "]");
  }
}

namespace {

std::size_t worker_count(const ExecutionOptions& execution, std::size_t jobs) {
  std::size_t threads = execution.threads;
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(threads, jobs));
}

// Runs job(i) for i in [0, count) on a pool that pulls indices from a shared
// counter. Results must be written by index so the outcome does not depend on
// the schedule.
template <class Job>
void parallel_for(std::size_t count, const ExecutionOptions& execution, Job&& job) {
  const std::size_t workers = worker_count(execution, count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
}

}  // namespace

SweepTable run_sweep(const EnsembleSetup& setup, const SweepGrid& grid,
                     const ExecutionOptions& execution) {
  grid.validate();
  // Validate the fixed part once so configuration errors surface immediately.
  const ComplexMatrix rho0 = initial_state(setup.topology, setup.initial);
  (void)setup.make_model(RealVector::Zero(static_cast<Eigen::Index>(setup.topology.n_sites())),
                         grid.dephasing_values.front());

  struct Job {
    std::size_t cell;
    std::size_t realization;
  };
  struct Cell {
    double disorder;
    double dephasing;
    std::size_t first_job;
    std::size_t n;
  };
  std::vector<Cell> cells;
  std::vector<Job> jobs;
  for (double disorder : grid.disorder_values) {
    for (double dephasing : grid.dephasing_values) {
      const std::size_t n = disorder == 0.0 ? 1 : grid.n_realizations;
      cells.push_back({disorder, dephasing, jobs.size(), n});
      for (std::size_t r = 0; r < n; ++r) jobs.push_back({cells.size() - 1, r});
    }
  }

  struct Outcome {
    bool ok = false;
    double eta = 0.0;
    double loss = 0.0;
    std::string error;
  };
  std::vector<Outcome> outcomes(jobs.size());
  parallel_for(jobs.size(), execution, [&](std::size_t i) {
    const Cell& cell = cells[jobs[i].cell];
    try {
      const EfficiencyResult r =
          run_point(setup, cell.disorder, cell.dephasing, jobs[i].realization);
      outcomes[i] = {true, r.eta, r.eta_loss, {}};
    } catch (const std::exception& e) {
      outcomes[i] = {false, 0.0, 0.0, e.what()};
    }
  });

  SweepTable table;
  for (const Cell& cell : cells) {
    double sum = 0.0;
    double loss_sum = 0.0;
    std::size_t n_ok = 0;
    for (std::size_t j = cell.first_job; j < cell.first_job + cell.n; ++j) {
      if (outcomes[j].ok) {
        sum += outcomes[j].eta;
        loss_sum += outcomes[j].loss;
        ++n_ok;
      } else {
        table.failures.push_back(
            {cell.disorder, cell.dephasing, j - cell.first_job, outcomes[j].error});
      }
    }
    if (n_ok == 0) continue;
    const double mean = sum / static_cast<double>(n_ok);
    double ss = 0.0;
    for (std::size_t j = cell.first_job; j < cell.first_job + cell.n; ++j) {
      if (outcomes[j].ok) ss += (outcomes[j].eta - mean) * (outcomes[j].eta - mean);
    }
    const double stderr_eta =
        n_ok > 1 ? std::sqrt(ss / static_cast<double>(n_ok - 1)) / std::sqrt(static_cast<double>(n_ok))
                 : 0.0;
    table.rows.push_back({cell.disorder, cell.dephasing, mean, stderr_eta, n_ok,
                          loss_sum / static_cast<double>(n_ok)});
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.disorder != b.disorder ? a.disorder < b.disorder : a.dephasing < b.dephasing;
  });
  return table;
}

std::vector<double> dephasing_profile(const EnsembleSetup& setup,
                                      const std::vector<double>& dephasing_values) {
  std::vector<double> out;
  out.reserve(dephasing_values.size());
  for (double g : dephasing_values) out.push_back(run_point(setup, 0.0, g, 0).eta);
  return out;
}

TrapObservables averaged_trap_observables(const EnsembleSetup& setup, double disorder,
                                          double dephasing, std::size_t n_realizations,
                                          double t_final, const OutputGrid& grid,
                                          const ExecutionOptions& execution) {
  if (n_realizations == 0) throw InvalidArgument("n_realizations must be >= 1");
  const std::size_t n = disorder == 0.0 ? 1 : n_realizations;
  const std::size_t trap = setup.trap.resolve(setup.topology);
  const auto neighbors = setup.topology.neighbors(trap);
  const ComplexMatrix rho0 = initial_state(setup.topology, setup.initial);

  std::vector<TrapObservables> runs(n);
  parallel_for(n, execution, [&](std::size_t r) {
    const TransportModel model =
        setup.make_model(realization_energies(setup, disorder, dephasing, r), dephasing);
    runs[r] = record_trap_observables(propagate(rho0, model, t_final, grid), trap, neighbors);
  });

  TrapObservables mean = runs.front();
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t k = 0; k < mean.times.size(); ++k) {
      mean.rho11[k] += runs[r].rho11[k];
      mean.im_rho12[k] += runs[r].im_rho12[k];
      mean.im_rho13[k] += runs[r].im_rho13[k];
      mean.trace[k] += runs[r].trace[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < mean.times.size(); ++k) {
    mean.rho11[k] *= inv;
    mean.im_rho12[k] *= inv;
    mean.im_rho13[k] *= inv;
    mean.trace[k] *= inv;
  }
  return mean;
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw InvalidArgument("grid step must be > 0");
  if (stop < start) throw InvalidArgument("grid stop must be >= start");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-6)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Round to 12 significant digits so 0.1*3 prints and keys as 0.3.
    const double v = start + step * static_cast<double>(i);
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("log grid needs 0 < lo < hi");
  if (count < 2) throw InvalidArgument("log grid needs at least 2 points");
  std::vector<double> out(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace enaqt
