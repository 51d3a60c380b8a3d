#pragma once

#include <Eigen/SparseCore>

#include "hqom/common.hpp"

namespace hqom {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

namespace bosonic {

/// Unnormalized Fock amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n < dim.
CVector coherent_amplitudes(Complex alpha, Index dim);

/// Poisson weight beyond the truncation: sum_{n >= dim} e^{-mu} mu^n / n!.
double poisson_tail(double mean, Index dim);

/// Geometric (thermal) weight beyond the truncation: (nbar / (1 + nbar))^dim.
double thermal_tail(double nbar, Index dim);

/// Exact matrix elements <m|D(x)|k> of the infinite-dimensional displacement
/// operator for m < rows, k < cols, from the associated-Laguerre closed form.
CMatrix displacement_elements(Complex x, Index rows, Index cols);

/// exp(x b^dag - x^* b) of the generator truncated to dim levels. Exactly
/// unitary; agrees with displacement_elements away from the cutoff.
CMatrix truncated_displacement(Complex x, Index dim);

/// Associated Laguerre L_n^{(a)}(x) by forward recurrence.
double laguerre(int n, double a, double x);

SparseMatrix annihilation(Index dim);
SparseMatrix creation(Index dim);
SparseMatrix number(Index dim);
SparseMatrix identity(Index dim);

}  // namespace bosonic
}  // namespace hqom
