#pragma once

#include <Eigen/Dense>

#include "cliffsub/rng.hpp"
#include "cliffsub/substructure.hpp"

namespace cliffsub::app {

/// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
Eigen::MatrixXcd random_unitary(std::size_t n, Rng& rng);

/// U diag(d) U† with a spectrum that mixes signs and includes zero and
/// repeated eigenvalues.
Eigen::MatrixXcd random_hermitian(std::size_t n, Rng& rng);

FourVector random_four_vector(Rng& rng, double scale = 1.0);
FourVector random_on_shell(double mass, Rng& rng);
SpaceTimeSpectrum random_spectrum(std::size_t n, Rng& rng);
HilbertState random_state(std::size_t n, Rng& rng);

/// Independent stream for sub-task `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace cliffsub::app
