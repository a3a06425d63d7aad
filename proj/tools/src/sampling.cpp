#include "cliffsub/app/sampling.hpp"

#include <cmath>

namespace cliffsub::app {

Eigen::MatrixXcd random_unitary(std::size_t n, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
}

Eigen::MatrixXcd random_hermitian(std::size_t n, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::VectorXd d(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double pick = rng.uniform();
    if (pick < 0.2) d(i) = 0.0;
    else if (pick < 0.35 && i > 0) d(i) = d(i - 1);
    else d(i) = rng.uniform(-3.0, 3.0);
  }
  const Eigen::MatrixXcd u = random_unitary(n, rng);
  const Eigen::MatrixXcd h = u * d.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (h + h.adjoint());
}

FourVector random_four_vector(Rng& rng, double scale) {
  return {{scale * rng.normal(), scale * rng.normal(), scale * rng.normal(), scale * rng.normal()}};
}

FourVector random_on_shell(double mass, Rng& rng) {
  const double px = rng.normal(), py = rng.normal(), pz = rng.normal();
  return {{std::sqrt(mass * mass + px * px + py * py + pz * pz), px, py, pz}};
}

SpaceTimeSpectrum random_spectrum(std::size_t n, Rng& rng) {
  SpaceTimeSpectrum s;
  for (std::size_t r = 0; r < n; ++r) {
    s.points.push_back(random_four_vector(rng, 2.0));
    s.labels.push_back("x" + std::to_string(r));
  }
  return s;
}

HilbertState random_state(std::size_t n, Rng& rng) {
  HilbertState s;
  double norm = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    s.amplitudes.emplace_back(rng.normal(), rng.normal());
    norm += std::norm(s.amplitudes.back());
  }
  for (auto& a : s.amplitudes) a /= std::sqrt(norm);
  return s;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace cliffsub::app
