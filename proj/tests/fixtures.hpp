#pragma once

// Small shared fixtures for the test binaries.

#include <cmath>
#include <random>
#include <vector>

#include "fnb/complex.hpp"
#include "fnb/plmap.hpp"

namespace fixtures {

using namespace fnb;

/// Four-edge circle with vertex x-values 1, 0, −1, 1/8; edges a, b, c, d in
/// cyclic order are simplices 0..3 after sorting.
inline Triangulation quad_circle() {
  Triangulation T;
  T.n = 1;
  T.ambient_dim = 2;
  T.coords = {QVec{1, 0}, QVec{0, 1}, QVec{-1, 0}, QVec{rat(1, 8), -1}};
  T.ids = {0, 1, 2, 3};
  T.simplices = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return T;
}

/// f = first coordinate.
inline PLMap x_map(const Triangulation& T) {
  return interpolate(T, 1, [](const QVec& x) { return QVec{x[0]}; });
}

/// Coordinate projection onto the listed axes.
inline PLMap projection(const Triangulation& T, std::vector<int> axes) {
  return interpolate(T, static_cast<int>(axes.size()), [&](const QVec& x) {
    QVec y(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) y[i] = x[axes[i]];
    return y;
  });
}

inline Rat dyadic(double x, int bits = 16) {
  return rat(std::lround(std::ldexp(x, bits)), 1L << bits);
}

/// Smooth random map of the ambient coordinates, rounded to dyadic values
/// and brought into general position.
inline PLMap random_gp_map(const Triangulation& T, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const int n = T.n, d = T.ambient_dim;
  std::vector<std::vector<double>> lin(n, std::vector<double>(d)), quad(n, std::vector<double>(d)), phase(n, std::vector<double>(d));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) {
      lin[i][j] = nd(rng);
      quad[i][j] = 0.5 * nd(rng);
      phase[i][j] = nd(rng);
    }
  const bool periodic = T.period.has_value();
  PLMap f = interpolate(T, n, [&](const QVec& x) {
    QVec y(n);
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j = 0; j < d; ++j) {
        const double xj = x[j].get_d();
        if (periodic)
          s += lin[i][j] * std::sin(2 * M_PI * xj + phase[i][j]) + quad[i][j] * std::cos(4 * M_PI * xj + phase[i][j]);
        else
          s += lin[i][j] * xj + quad[i][j] * xj * xj + 0.2 * std::sin(3 * xj + phase[i][j]);
      }
      y[i] = dyadic(s);
    }
    return y;
  });
  return ensure_general_position(T, f, rng(), rat(1, 1024));
}

}  // namespace fixtures
