#include "synthdim/eig.hpp"

#include <algorithm>
#include <cmath>

namespace synthdim::spectra {

namespace {

bool is_real(const Eigen::MatrixXcd& h) { return (h.imag().array() == 0.0).all(); }

void require_hermitian(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix is not square");
  if (!h.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  if (hermiticity_defect(h) > 1e-12) throw std::invalid_argument("matrix is not Hermitian");
}

void check_residual(const Eigen::RowVectorXd& norms, double bound) {
  if (norms.size() && norms.maxCoeff() > bound) throw NumericalError("eigenpair residual above 1e-9 |H|");
}

}  // namespace

double hermiticity_defect(const Eigen::MatrixXcd& h) {
  if (h.size() == 0) return 0.0;
  const double scale = h.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff() / scale;
}

std::vector<EigenPair> hermitian_eig(const Eigen::MatrixXcd& h) {
  require_hermitian(h);
  const Eigen::Index n = h.rows();
  const double norm = n ? h.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  const double bound = 1e-9 * std::max(norm, 1e-300);
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  if (is_real(h)) {
    const Eigen::MatrixXd hr = h.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hr);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    values = solver.eigenvalues();
    const Eigen::MatrixXd residual = hr * solver.eigenvectors() - solver.eigenvectors() * values.asDiagonal();
    check_residual(residual.colwise().norm(), bound);
    vectors = solver.eigenvectors().cast<std::complex<double>>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
    const Eigen::MatrixXcd residual = h * vectors - vectors * values.asDiagonal();
    check_residual(residual.colwise().norm(), bound);
  }

  std::vector<EigenPair> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)].energy = values(i);
    out[static_cast<std::size_t>(i)].vector = vectors.col(i);
  }
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  require_hermitian(h);
  if (is_real(h)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    return solver.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return solver.eigenvalues();
}

}  // namespace synthdim::spectra
