#include <algorithm>

#include <Eigen/Eigenvalues>

#include "qtrack/graph.hpp"

namespace qtrack {

LaplacianSpectrum spectrum(const Eigen::MatrixXd& laplacian_matrix) {
  if (laplacian_matrix.rows() != laplacian_matrix.cols())
    throw DomainError("spectrum needs a square matrix");
  if (laplacian_matrix.rows() < 2)
    throw DomainError("spectrum of a 1x1 Laplacian has no second eigenvalue");

  // Hessenberg reduction followed by shifted QR on the real Schur form.
  Eigen::EigenSolver<Eigen::MatrixXd> solver(laplacian_matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");

  LaplacianSpectrum out;
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
            });
  out.lambda2_real_abs = std::abs(out.eigenvalues[1].real());
  return out;
}

}  // namespace qtrack
