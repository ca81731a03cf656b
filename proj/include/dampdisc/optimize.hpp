#pragma once

// Derivative-free maximizers. The objectives here are built from trace
// norms and have kinks where eigenvalues cross, so everything is a coarse
// grid scan followed by golden-section refinement around the best cell.

#include <array>
#include <functional>
#include <span>

#include "dampdisc/discrimination.hpp"

namespace dampdisc {

inline constexpr int kDefaultScalarGrid = 257;

struct ScalarMax {
  double argmax = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of f on [a, b]; stops when the
/// bracket is narrower than tol.
ScalarMax golden_section_max(const std::function<double(double)>& f, double a, double b,
                             double tol = 1e-10);

/// Scans `grid_points` equally spaced points of [lo, hi] (endpoints
/// included), keeps the first best one (values within 1e-12 tie) and refines it with golden-section
/// search over the neighbouring cells. The refined point replaces the grid
/// point only if it is strictly better, so a constant f returns lo and a
/// maximum sitting on an endpoint is returned exactly.
/// Throws NumericError if lo >= hi or grid_points < 2.
ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          int grid_points = kDefaultScalarGrid, double tol = 1e-10);

struct PlanarMax {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

/// Grid scan over [x_lo, x_hi] x [y_lo, y_hi] followed by nested
/// golden-section refinement in the neighbourhood of the best cell. Ties on
/// the grid (within 1e-12) keep the smallest y, then the smallest x.
PlanarMax maximize_2d(const std::function<double(double, double)>& f, double x_lo, double x_hi,
                      double y_lo, double y_hi, int grid_points = 33, double tol = 1e-9);

inline constexpr int kPovmGridPoints = 17;

struct PovmMax {
  BinaryPovm povm;
  double value = 0.0;
  /// (l1, l2, theta, chi) of the returned effect; NaN when a seed won.
  std::array<double, 4> params{};
};

/// Maximizes an objective over two-outcome qubit POVMs {M, I - M} with
/// M = l1 |u><u| + l2 |u_perp><u_perp|, u = (cos theta, exp(i chi) sin theta),
/// l1, l2 in [0, 1], theta in [0, pi/2], chi in [0, 2 pi). A 17-point grid
/// per parameter is followed by coordinate-wise golden refinement. Every
/// seed is evaluated too and the best of all candidates is returned.
PovmMax maximize_povm_2x2(const std::function<double(const BinaryPovm&)>& objective,
                          std::span<const BinaryPovm> seeds = {});

}  // namespace dampdisc
