#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace synthdim::spectra {

// Raised when a numerical postcondition (residual, stability) fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenPair {
  double energy = 0.0;
  Eigen::VectorXcd vector;
};

// Max-abs Hermiticity defect relative to the largest entry.
double hermiticity_defect(const Eigen::MatrixXcd& h);

// All eigenpairs, energies ascending, orthonormal vectors. Rejects input
// that is not Hermitian to 1e-12 relative (std::invalid_argument) and
// throws NumericalError if some residual exceeds 1e-9 |H|.
std::vector<EigenPair> hermitian_eig(const Eigen::MatrixXcd& h);

// Eigenvalues only, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h);

}  // namespace synthdim::spectra
