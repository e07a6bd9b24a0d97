// Reduced solve of  L X = -rho0  for the time-integrated density matrix.
//
// Write L = M + c * Diag with M(X) = A X + X A^dag, A = -iH - (c/2) I, where c is
// the coherence damping rate and Diag keeps only the diagonal. Then the diagonal
// d of X obeys (I + c K) d = diag(M^-1(-rho0)) with K(m, n) = [M^-1(|n><n|)]_mm.
// M is inverted through the complex Schur form of H (Bartels-Stewart).

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "enaqt/dynamics.hpp"

namespace enaqt {

namespace {

class SylvesterInverse {
 public:
  SylvesterInverse(const ComplexMatrix& h, double damping) {
    const Eigen::ComplexSchur<ComplexMatrix> schur(h);
    if (schur.info() != Eigen::Success) throw SolverError("complex Schur decomposition failed");
    q_ = schur.matrixU();
    t_ = Complex(0.0, -1.0) * schur.matrixT();
    t_.diagonal().array() -= 0.5 * damping;
    t_.triangularView<Eigen::StrictlyLower>().setZero();

    const Eigen::Index n = t_.rows();
    const double scale = std::max(1.0, t_.cwiseAbs().maxCoeff());
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        smallest = std::min(smallest, std::abs(t_(i, i) + std::conj(t_(j, j))));
      }
    }
    if (!(smallest > 1e-13 * scale)) {
      throw SolverError("time-integral operator is singular (no decay channel for some mode); "
                        "expected only when Gamma = 0 and dephasing = 0");
    }
  }

  // Diagonal of X solving A X + X A^dag = C, with C given in the Schur basis.
  RealVector diagonal_from_schur_rhs(const ComplexMatrix& c_schur) const {
    const ComplexMatrix y = solve_triangular(c_schur);
    const ComplexMatrix qy = q_ * y;
    return qy.cwiseProduct(q_.conjugate()).rowwise().sum().real();
  }

  // K(m, n) = [M^-1(|n><n|)]_mm for all n at once. Column j of every Y_n is
  // solved together, so the work is a sequence of GEMV/TRSM/GEMM calls.
  RealMatrix site_response() const {
    const Eigen::Index n = t_.rows();
    const ComplexMatrix u = q_.adjoint();
    // Column k holds vec(Y(:, k, :)), i.e. entry (i + n * site) = Y_site(i, k).
    ComplexMatrix y(n * n, n);
    ComplexMatrix shifted(n, n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
      ComplexMatrix r = u * u.row(j).conjugate().asDiagonal();
      const Eigen::Index tail = n - 1 - j;
      if (tail > 0) {
        Eigen::Map<ComplexVector> rv(r.data(), n * n);
        rv.noalias() -= y.rightCols(tail) * t_.row(j).tail(tail).adjoint();
      }
      shifted = t_;
      shifted.diagonal().array() += std::conj(t_(j, j));
      shifted.triangularView<Eigen::Upper>().solveInPlace(r);
      y.col(j) = Eigen::Map<const ComplexVector>(r.data(), n * n);
    }
    ComplexMatrix k = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Map<const ComplexMatrix> yj(y.col(j).data(), n, n);
      k.noalias() += q_.col(j).conjugate().asDiagonal() * (q_ * yj);
    }
    return k.real();
  }

  const ComplexMatrix& q() const { return q_; }

 private:
  // T Y + Y T^dag = C with T upper triangular; columns from last to first.
  ComplexMatrix solve_triangular(const ComplexMatrix& c) const {
    const Eigen::Index n = t_.rows();
    ComplexMatrix y(n, n);
    ComplexVector rhs(n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
      rhs = c.col(j);
      const Eigen::Index tail = n - 1 - j;
      if (tail > 0) {
        rhs.noalias() -= y.rightCols(tail) * t_.row(j).tail(tail).adjoint();
      }
      const Complex shift = std::conj(t_(j, j));
      for (Eigen::Index i = n - 1; i >= 0; --i) {
        Complex acc = rhs(i);
        for (Eigen::Index k = i + 1; k < n; ++k) acc -= t_(i, k) * y(k, j);
        y(i, j) = acc / (t_(i, i) + shift);
      }
    }
    return y;
  }

  ComplexMatrix q_;
  ComplexMatrix t_;
};

}  // namespace

RealVector integrated_populations(const ComplexMatrix& rho0, const TransportModel& model) {
  const auto n = static_cast<Eigen::Index>(model.n_sites());
  if (rho0.rows() != n || rho0.cols() != n) {
    throw InvalidArgument("integrated_populations: rho0 has wrong shape");
  }
  const double damping = model.coherence_damping_rate();
  const SylvesterInverse inverse(assemble_effective_hamiltonian(model), damping);
  const ComplexMatrix& q = inverse.q();

  const ComplexMatrix source = q.adjoint() * (-rho0) * q;
  const RealVector r = inverse.diagonal_from_schur_rhs(source);
  if (damping == 0.0) return r;

  const RealMatrix closure = RealMatrix::Identity(n, n) + damping * inverse.site_response();
  const Eigen::PartialPivLU<RealMatrix> lu(closure);
  if (!(lu.rcond() > 1e-14)) {
    throw SolverError("population closure is singular (rcond = " + std::to_string(lu.rcond()) +
                      ")");
  }
  return lu.solve(r);
}

}  // namespace enaqt
