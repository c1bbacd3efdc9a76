#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "rpu/losses.hpp"

namespace rpu::detail {

// phi(v) = |v| H(v / |v|) for the mass vector v of one message, with outcomes[k] the outcome
// carrying v[k]. `scratch` must have one slot per outcome of the game and be all zero on entry;
// it is left all zero on return.
double message_phi(const LossSpec& spec, const std::vector<std::size_t>& outcomes, const double* v,
                   std::vector<double>& scratch);

// Gradient and Hessian of phi for the smooth kinds (log, brier, skewed_log and affine wrappers).
// The gradient entry k equals L(outcomes[k], v / |v|). Requires |v| > 0.
void message_gradient(const LossSpec& spec, const std::vector<std::size_t>& outcomes, const double* v,
                      double* grad);
void message_hessian(const LossSpec& spec, const std::vector<std::size_t>& outcomes, const double* v,
                     Eigen::MatrixXd& hess);

// argmax over w in the simplex on `outcomes` of H(w) - lambda . w, written over all outcomes.
std::vector<double> max_gap_point(const LossSpec& spec, const std::vector<std::size_t>& outcomes,
                                  const std::vector<double>& lambda, std::size_t num_outcomes);

// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(const std::vector<double>& v);

}  // namespace rpu::detail
