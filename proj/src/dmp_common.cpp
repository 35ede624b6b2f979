#include "geodmp/dmp_common.hpp"

#include <cmath>

namespace geodmp {

GaussianBasis GaussianBasis::phase_spaced(int n_basis, double alpha_x) {
  if (n_basis < 2) throw InvalidParamsError("need at least 2 basis functions");
  GaussianBasis b;
  b.centers.resize(n_basis);
  b.widths.resize(n_basis);
  for (int i = 0; i < n_basis; ++i) {
    b.centers[i] = std::exp(-alpha_x * static_cast<double>(i) / (n_basis - 1));
  }
  for (int i = 0; i + 1 < n_basis; ++i) {
    const double dc = b.centers[i + 1] - b.centers[i];
    b.widths[i] = 1.0 / (2.0 * dc * dc);
  }
  b.widths[n_basis - 1] = b.widths[n_basis - 2];
  return b;
}

Eigen::VectorXd GaussianBasis::activations(double x) const {
  Eigen::VectorXd psi(centers.size());
  for (int i = 0; i < centers.size(); ++i) {
    const double d = x - centers[i];
    psi[i] = std::exp(-widths[i] * d * d);
  }
  return psi;
}

Eigen::VectorXd GaussianBasis::forcing(double x, const Eigen::MatrixXd& weights) const {
  const Eigen::VectorXd psi = activations(x);
  const double denom = psi.sum();
  if (denom < 1e-300) return Eigen::VectorXd::Zero(weights.cols());
  return (weights.transpose() * psi) * (x / denom);
}

Eigen::MatrixXd fit_forcing_weights(const Eigen::VectorXd& phases,
                                    const Eigen::MatrixXd& targets,
                                    const GaussianBasis& basis, double reg) {
  const int n = static_cast<int>(phases.size());
  const int dims = static_cast<int>(targets.cols());
  if (targets.rows() != n) throw InvalidParamsError("phase/target length mismatch");

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(basis.size(), dims);
  for (int i = 0; i < basis.size(); ++i) {
    const double c = basis.centers[i];
    const double h = basis.widths[i];
    double sxx = 0.0;
    Eigen::VectorXd sxt = Eigen::VectorXd::Zero(dims);
    for (int k = 0; k < n; ++k) {
      const double x = phases[k];
      const double d = x - c;
      const double psi = std::exp(-h * d * d);
      sxx += psi * x * x;
      sxt += psi * x * targets.row(k).transpose();
    }
    w.row(i) = (sxt / (sxx + reg)).transpose();
  }
  return w;
}

}  // namespace geodmp
