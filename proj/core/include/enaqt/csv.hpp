#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "enaqt/analysis.hpp"
#include "enaqt/dynamics.hpp"
#include "enaqt/ensemble.hpp"

namespace enaqt::csv {

inline constexpr const char* kUnitsComment =
    "# units: energies, rates and disorder in units of V; times in units of 1/V";
inline constexpr const char* kSweepHeader =
    "delta_eps,gamma_phi,eta_mean,eta_stderr,n,eta_loss_mean";
inline constexpr const char* kTrajectoryHeader = "t,re_rho11,im_rho12,im_rho13,trace";
inline constexpr const char* kEfficiencyHeader =
    "graph,n_sites,trap,init,kappa,gamma_recomb,gamma_phi,convention,delta_eps,seed,solver,"
    "eta,eta_loss,residual_trace,horizon,converged";
inline constexpr const char* kDeltaMaxHeader =
    "gamma_phi,delta_max,argmax_delta_eps,eta_ordered,eta_best,stderr";

/// Locale-independent shortest-ish representation ("%.12g").
std::string format(double value);
double parse_double(const std::string& text);

/// Splits one CSV line on commas (no quoting; none of our fields need it).
std::vector<std::string> split(const std::string& line);

void write_sweep(std::ostream& out, const SweepTable& table);
/// Reads a sweep CSV; '#' lines are skipped and the header must match.
SweepTable read_sweep(std::istream& in);

void write_trap_observables(std::ostream& out, const TrapObservables& observables);

/// Pure-state amplitudes of the listed sites: t,re_psi<i>,im_psi<i>,...,norm2.
void write_pure_trajectory(std::ostream& out, const PureTrajectory& trajectory,
                           const std::vector<std::size_t>& sites,
                           const std::vector<std::string>& labels);

void write_delta_max(std::ostream& out, const std::vector<DeltaMax>& profile);

}  // namespace enaqt::csv
