#include "enaqt/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace enaqt {

std::string to_string(DephasingConvention convention) {
  return convention == DephasingConvention::kLindblad ? "lindblad" : "half-rate";
}

DephasingConvention parse_dephasing_convention(const std::string& text) {
  if (text == "lindblad") return DephasingConvention::kLindblad;
  if (text == "half-rate" || text == "half") return DephasingConvention::kHalfRate;
  throw InvalidArgument("unknown dephasing convention '" + text +
                        "' (expected half-rate or lindblad)");
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  std::uint64_t z = parent + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RealVector sample_site_energies(const DisorderSpec& spec, std::uint64_t realization_index,
                                std::size_t n_sites) {
  if (!(spec.std_dev >= 0.0)) throw InvalidArgument("disorder std_dev must be >= 0");
  RealVector eps = RealVector::Zero(static_cast<Eigen::Index>(n_sites));
  if (spec.std_dev == 0.0) return eps;
  std::mt19937_64 rng(derive_seed(spec.master_seed, realization_index));
  std::normal_distribution<double> normal(0.0, spec.std_dev);
  for (auto& e : eps) e = normal(rng);
  return eps;
}

TransportModel::TransportModel(Topology topology, RealVector site_energies,
                               std::size_t trap_site, double trap_rate, double recomb_rate,
                               double dephasing_rate, DephasingConvention convention)
    : topology_(std::move(topology)),
      site_energies_(std::move(site_energies)),
      trap_site_(trap_site),
      trap_rate_(trap_rate),
      recomb_rate_(recomb_rate),
      dephasing_rate_(dephasing_rate),
      convention_(convention) {
  if (static_cast<std::size_t>(site_energies_.size()) != topology_.n_sites()) {
    throw InvalidArgument("site_energies has length " + std::to_string(site_energies_.size()) +
                          ", topology has " + std::to_string(topology_.n_sites()) + " sites");
  }
  if (trap_site_ >= topology_.n_sites()) {
    throw InvalidArgument("trap site " + std::to_string(trap_site_) + " out of range");
  }
  if (!(trap_rate_ >= 0.0)) throw InvalidArgument("trap rate kappa must be >= 0");
  if (!(recomb_rate_ >= 0.0)) throw InvalidArgument("recombination rate Gamma must be >= 0");
  if (!(dephasing_rate_ >= 0.0)) throw InvalidArgument("dephasing rate must be >= 0");
  if (!site_energies_.allFinite()) throw InvalidArgument("site energies must be finite");
}

double TransportModel::coherence_damping_rate() const {
  return convention_ == DephasingConvention::kLindblad ? dephasing_rate_
                                                      : 0.5 * dephasing_rate_;
}

TransportModel TransportModel::with_site_energies(RealVector energies) const {
  return TransportModel(topology_, std::move(energies), trap_site_, trap_rate_, recomb_rate_,
                        dephasing_rate_, convention_);
}

TransportModel TransportModel::with_dephasing(double dephasing_rate) const {
  return TransportModel(topology_, site_energies_, trap_site_, trap_rate_, recomb_rate_,
                        dephasing_rate, convention_);
}

TransportModel TransportModel::with_recomb_rate(double recomb_rate) const {
  return TransportModel(topology_, site_energies_, trap_site_, trap_rate_, recomb_rate,
                        dephasing_rate_, convention_);
}

TransportModel TransportModel::with_trap_rate(double trap_rate) const {
  return TransportModel(topology_, site_energies_, trap_site_, trap_rate, recomb_rate_,
                        dephasing_rate_, convention_);
}

ComplexMatrix assemble_system_hamiltonian(const Topology& topology,
                                          const RealVector& site_energies) {
  const auto n = static_cast<Eigen::Index>(topology.n_sites());
  if (site_energies.size() != n) {
    throw InvalidArgument("site_energies length does not match topology");
  }
  ComplexMatrix h = topology.coupling_matrix().cast<Complex>();
  for (Eigen::Index m = 0; m < n; ++m) h(m, m) = site_energies(m);
  return h;
}

ComplexMatrix assemble_effective_hamiltonian(const TransportModel& model) {
  ComplexMatrix h = assemble_system_hamiltonian(model.topology(), model.site_energies());
  const Complex i_unit(0.0, 1.0);
  h.diagonal().array() -= i_unit * model.recomb_rate();
  const auto t = static_cast<Eigen::Index>(model.trap_site());
  h(t, t) -= i_unit * model.trap_rate();
  return h;
}

ComplexMatrix apply_dephasing(const ComplexMatrix& rho, double rate) {
  if (rho.rows() != rho.cols()) throw InvalidArgument("density matrix must be square");
  ComplexMatrix out = -rate * rho;
  out.diagonal().setZero();
  return out;
}

std::string to_string(const InitialState& state) {
  switch (state.kind) {
    case InitialStateKind::kLeafMixture:
      return "leaves";
    case InitialStateKind::kUniformMixture:
      return "uniform";
    case InitialStateKind::kSingleSite:
      return "site:" + std::to_string(state.site);
  }
  return "unknown";
}

InitialState parse_initial_state(const std::string& text) {
  if (text == "leaves" || text == "leaf-mixture") return InitialState::leaf_mixture();
  if (text == "uniform" || text == "uniform-mixture") return InitialState::uniform_mixture();
  const std::string prefix = "site:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string digits = text.substr(prefix.size());
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw InvalidArgument("bad site index in initial state '" + text + "'");
    }
    return InitialState::single_site(std::stoul(digits));
  }
  throw InvalidArgument("unknown initial state '" + text +
                        "' (expected leaves, uniform or site:<index>)");
}

ComplexMatrix initial_state(const Topology& topology, const InitialState& state) {
  const auto n = static_cast<Eigen::Index>(topology.n_sites());
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  switch (state.kind) {
    case InitialStateKind::kLeafMixture: {
      if (topology.kind() != GraphKind::kBinaryTree) {
        throw InvalidArgument("leaf-mixture initial state requires a binary tree");
      }
      const auto leaf_sites = leaves(topology);
      const double w = 1.0 / static_cast<double>(leaf_sites.size());
      for (auto s : leaf_sites) rho(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = w;
      break;
    }
    case InitialStateKind::kUniformMixture:
      rho.diagonal().setConstant(1.0 / static_cast<double>(n));
      break;
    case InitialStateKind::kSingleSite:
      if (state.site >= topology.n_sites()) {
        throw InvalidArgument("initial site " + std::to_string(state.site) + " out of range");
      }
      rho(static_cast<Eigen::Index>(state.site), static_cast<Eigen::Index>(state.site)) = 1.0;
      break;
  }
  return rho;
}

std::string density_matrix_violation(const ComplexMatrix& rho, double hermitian_tol,
                                     double eigen_tol) {
  if (rho.rows() != rho.cols()) return "not square";
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > hermitian_tol) {
    std::ostringstream os;
    os << "not Hermitian (max |rho - rho^dag| = " << herm << ")";
    return os.str();
  }
  const Complex tr = rho.trace();
  if (std::abs(tr.imag()) > hermitian_tol * static_cast<double>(rho.rows()) ||
      tr.real() < -eigen_tol || tr.real() > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "trace out of range: " << tr;
    return os.str();
  }
  const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return "eigensolver failed";
  if (es.eigenvalues().minCoeff() < -eigen_tol) {
    std::ostringstream os;
    os << "negative eigenvalue " << es.eigenvalues().minCoeff();
    return os.str();
  }
  return {};
}

}  // namespace enaqt
