#pragma once

#include <Eigen/Dense>

#include "geodmp/errors.hpp"

namespace geodmp {

/// Transformation- and canonical-system gains shared by all DMP variants.
/// beta_z = alpha_z / 4 gives critical damping.
struct DmpGains {
  double alpha_z = 25.0;
  double beta_z = 25.0 / 4.0;
  double alpha_x = 4.0;

  void validate() const {
    if (alpha_z <= 0.0 || beta_z <= 0.0 || alpha_x <= 0.0)
      throw InvalidParamsError("DMP gains must be positive");
  }
};

/// Gaussian basis over the phase variable x in (0, 1].
/// Centers c_i = exp(-alpha_x * i / (N-1)) are uniform in normalized
/// progress, hence log-spaced in x and strictly decreasing from 1.
struct GaussianBasis {
  Eigen::VectorXd centers;
  Eigen::VectorXd widths;

  static GaussianBasis phase_spaced(int n_basis, double alpha_x);

  int size() const { return static_cast<int>(centers.size()); }

  /// Activation vector psi_i(x) = exp(-h_i (x - c_i)^2).
  Eigen::VectorXd activations(double x) const;

  /// Normalized weighted sum (sum_i w_i psi_i) / (sum_i psi_i), gated by x.
  /// `weights` is n_basis x dims; returns a dims-vector.
  Eigen::VectorXd forcing(double x, const Eigen::MatrixXd& weights) const;
};

/// Per-basis locally weighted regression for forcing weights.
/// Fits targets_k ~ (sum_i w_i psi_i(x_k) / sum_i psi_i(x_k)) * x_k, i.e.
/// w_{i,d} = sum_k psi_i(x_k) x_k t_{k,d} / (sum_k psi_i(x_k) x_k^2 + reg).
/// `targets` is n_samples x dims; returns n_basis x dims.
Eigen::MatrixXd fit_forcing_weights(const Eigen::VectorXd& phases,
                                    const Eigen::MatrixXd& targets,
                                    const GaussianBasis& basis, double reg = 1e-8);

}  // namespace geodmp
