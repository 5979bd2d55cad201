#include "ltrace/sampling.hpp"

#include <cmath>
#include <numbers>

#include "ltrace/errors.hpp"

namespace ltrace {

namespace {

void normalize(std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
}

}  // namespace

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> gaussian_unit(int n, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(static_cast<std::size_t>(n));
  double s = 0;
  do {
    s = 0;
    for (double& x : v) {
      x = g(rng);
      s += x * x;
    }
  } while (s < 1e-20);
  normalize(v);
  return v;
}

std::pair<std::vector<double>, std::vector<double>> random_plane(int n, Rng& rng) {
  if (n < 2) throw DomainError("random_plane: n must be >= 2");
  std::vector<double> a = gaussian_unit(n, rng);
  for (;;) {
    std::vector<double> b = gaussian_unit(n, rng);
    double dot = 0;
    for (int i = 0; i < n; ++i) dot += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] -= dot * a[static_cast<std::size_t>(i)];
    double s = 0;
    for (double x : b) s += x * x;
    if (s > 1e-6) {
      normalize(b);
      return {a, b};
    }
  }
}

std::vector<std::vector<double>> sphere_samples(int n, int count, std::uint64_t seed) {
  if (n < 1) throw DomainError("sphere_samples: n must be >= 1");
  std::vector<std::vector<double>> pts;
  if (n == 1) return {{1.0}, {-1.0}};
  count = std::max(count, 4);
  pts.reserve(static_cast<std::size_t>(count));
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double t = 2 * std::numbers::pi * (i + 0.5) / count;
      pts.push_back({std::cos(t), std::sin(t)});
    }
  } else if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  } else {
    Rng rng(seed);
    for (int i = 0; i < count; ++i) pts.push_back(gaussian_unit(n, rng));
  }
  return pts;
}

SphereMinimum minimize_on_sphere(const std::function<double(std::span<const double>)>& f,
                                 std::vector<double> start, double step, double min_step,
                                 int max_evaluations) {
  const int n = static_cast<int>(start.size());
  normalize(start);
  SphereMinimum best{start, f(start), 1};
  if (n == 1) return best;
  std::vector<double> trial(static_cast<std::size_t>(n));
  while (step > min_step && best.evaluations < max_evaluations) {
    // Tangent frame: Gram-Schmidt of the coordinate axes against x, skipping
    // the axis most aligned with x.
    const auto& x = best.x;
    int skip = 0;
    for (int i = 1; i < n; ++i) {
      if (std::abs(x[static_cast<std::size_t>(i)]) > std::abs(x[static_cast<std::size_t>(skip)])) skip = i;
    }
    std::vector<std::vector<double>> frame;
    for (int i = 0; i < n; ++i) {
      if (i == skip) continue;
      std::vector<double> t(static_cast<std::size_t>(n), 0.0);
      t[static_cast<std::size_t>(i)] = 1.0;
      auto project_out = [&](const std::vector<double>& u) {
        double d = 0;
        for (int j = 0; j < n; ++j) d += t[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)];
        for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] -= d * u[static_cast<std::size_t>(j)];
      };
      project_out(x);
      for (const auto& u : frame) project_out(u);
      normalize(t);
      frame.push_back(std::move(t));
    }
    std::vector<double> move;
    double move_value = best.value;
    for (const auto& t : frame) {
      for (double sign : {1.0, -1.0}) {
        for (int j = 0; j < n; ++j) {
          trial[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + sign * step * t[static_cast<std::size_t>(j)];
        }
        normalize(trial);
        const double v = f(trial);
        ++best.evaluations;
        if (v < move_value) {
          move_value = v;
          move = trial;
        }
      }
    }
    if (!move.empty()) {
      best.x = std::move(move);
      best.value = move_value;
    } else {
      step *= 0.5;
    }
  }
  return best;
}

}  // namespace ltrace
