#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

// Numerical toolkit for Lorentz-space quantities of sampled functions:
// distribution functions, L^{p,q} and weak-L^p norms, truncation at level K,
// distance to L^inf, the Sobolev embedding constant and the selection of a
// truncation level certifying a prescribed weak-norm bound on the remainder.

namespace splitcd {

// A scalar function known through samples: value v_i on a cell of measure
// w_i. All norms here treat it as the piecewise-constant function equal to
// v_i on its cell, which makes the layer-cake integrals exact.
struct SampledFunction {
  std::vector<double> values;
  std::vector<double> weights;      // cell measures, >= 0
  double total_measure = 0.0;       // sum of weights

  // Throws std::invalid_argument if sizes differ, a weight is negative, a
  // value is non-finite, or total_measure is off by more than 1e-12 relative.
  void validate() const;
};

// A vector-valued sampled function; components beyond `dim` are zero.
struct VectorSampledFunction {
  int dim = 2;
  std::vector<std::array<double, 3>> values;
  std::vector<double> weights;
  double total_measure = 0.0;

  SampledFunction magnitude() const;
};

struct LorentzParams {
  double p;    // > 1
  double q;    // in (1, inf]; use weak_norm for q = inf
  int N = 2;   // space dimension, >= 2
};

struct TruncationLevel {
  double K = 0.0;       // truncation level, > 0
  double delta = 0.0;   // achieved weak norm of the remainder c - T_K c
  bool certified = true;
};

// lambda_g(h) = measure of { |g| > h }.
double distribution_function(const SampledFunction& g, double h);

// ( p * integral_0^max|g| lambda_g(h)^{q/p} h^{q-1} dh )^{1/q}, evaluated
// exactly segment by segment on the sorted distinct |values|.
double lorentz_norm(const SampledFunction& g, const LorentzParams& params);

// sup_h h * lambda_g(h)^{1/p}, the weak-L^p (Marcinkiewicz) norm; exact for
// the piecewise-constant sampled function.
double weak_norm(const SampledFunction& g, double p);

// T_K(s) = sign(s) * min(|s|, K).
double truncate(double s, double K);

// Magnitude truncation of a vector: v * min(1, K/|v|).
std::array<double, 3> truncate_vector(const std::array<double, 3>& v, double K);
VectorSampledFunction truncate_field(const VectorSampledFunction& v, double K);

struct DistanceReport {
  double distance = 0.0;  // || g - T_K g ||_{N,inf} at the largest K
  // (K, remainder weak norm) for every K in the grid; non-increasing.
  std::vector<std::pair<double, double>> sequence;
};

// Truncation-remainder weak norms along an ascending K grid.
DistanceReport distance_to_bounded(const SampledFunction& g, int N,
                                   const std::vector<double>& K_grid);

// Volume of the unit ball in R^N.
double unit_ball_volume(int N);

// S_{N,p} = omega_N^{-1/N} * p / (N - p); requires 1 < p < N.
double sobolev_constant(int N, double p);

// eta / (2 * S_{N,2}); requires N >= 3 (S_{2,2} is singular — callers on 2D
// problems must supply delta, or K, explicitly).
double delta_threshold(double eta, int N);

// Smallest K in the grid with remainder weak-L^N norm <= delta; if none
// qualifies, the largest K is returned with certified = false.
TruncationLevel select_truncation_level(const SampledFunction& c_magnitude, int N,
                                        double delta, const std::vector<double>& K_grid);

// --- sampling helpers used by the CLI and the Lorentz oracles ---

// Uniform Cartesian cells over [-radius, radius]^2 whose centers lie inside
// the disk; sample points at cell centers (never at the origin for even n).
SampledFunction sample_disk_cartesian(const std::function<double(double, double)>& f,
                                      int n_per_axis, double radius = 1.0);

// Polar cells with geometrically refined radii in [r_inner, radius]; the
// sample point sits on each cell's outer radius so that cumulative weights
// match level-set areas of radially peaked fields.
SampledFunction sample_disk_polar(const std::function<double(double, double)>& f,
                                  int n_rings = 240, int n_theta = 64,
                                  double r_inner = 1e-6, double radius = 1.0);

// Uniform cell-center sampling of [lo,hi]^2.
SampledFunction sample_square(const std::function<double(double, double)>& f,
                              int n_per_axis, double lo = 0.0, double hi = 1.0);

}  // namespace splitcd
