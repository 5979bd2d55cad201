#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace ltrace {

using Rng = std::mt19937_64;

/// Quasi-uniform points on S^{n-1}: equispaced angles for n = 2, a Fibonacci
/// lattice for n = 3, normalized Gaussians (seeded) for n > 3, and {-1, +1}
/// for n = 1.
std::vector<std::vector<double>> sphere_samples(int n, int count, std::uint64_t seed);

std::vector<double> gaussian_unit(int n, Rng& rng);

/// Orthonormalized Gaussian pair spanning a random 2-plane of R^n.
std::pair<std::vector<double>, std::vector<double>> random_plane(int n, Rng& rng);

/// Derived seed for shard `index` of a stream, so parallel shards stay
/// reproducible.
std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t index);

struct SphereMinimum {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

/// Pattern search on the unit sphere: tries +-step along an orthonormal
/// tangent frame, moves to the best improvement, halves the step otherwise.
SphereMinimum minimize_on_sphere(const std::function<double(std::span<const double>)>& f,
                                 std::vector<double> start, double step, double min_step = 1e-12,
                                 int max_evaluations = 20000);

}  // namespace ltrace
