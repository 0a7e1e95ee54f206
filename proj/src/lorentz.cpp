#include "splitcd/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace splitcd {

namespace {

// Sorted distinct magnitudes h_1 < ... < h_m together with the tail weights
// W_j = measure{ |g| >= h_j }. lambda_g is the right-continuous staircase
// lambda(h) = W_{j+1} for h in [h_j, h_{j+1}).
struct Layers {
  std::vector<double> h;  // distinct positive-or-zero magnitudes, ascending
  std::vector<double> W;  // W[j] = measure of { |g| >= h[j] }
};

Layers build_layers(const SampledFunction& g) {
  const std::size_t n = g.values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::fabs(g.values[i]);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return mag[a] < mag[b]; });

  Layers L;
  // sweep descending so tail weights accumulate exactly
  double tail = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t i = idx[k];
    if (!L.h.empty() && L.h.back() == mag[i]) {
      tail += g.weights[i];
      L.W.back() = tail;
    } else {
      tail += g.weights[i];
      L.h.push_back(mag[i]);
      L.W.push_back(tail);
    }
  }
  std::reverse(L.h.begin(), L.h.end());
  std::reverse(L.W.begin(), L.W.end());
  return L;
}

}  // namespace

void SampledFunction::validate() const {
  if (values.size() != weights.size())
    throw std::invalid_argument("SampledFunction: values/weights size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("SampledFunction: non-finite value at sample " + std::to_string(i));
    if (!(weights[i] >= 0.0))
      throw std::invalid_argument("SampledFunction: negative weight at sample " + std::to_string(i));
    sum += weights[i];
  }
  const double scale = std::max(std::fabs(sum), std::fabs(total_measure));
  if (std::fabs(sum - total_measure) > 1e-12 * std::max(scale, 1e-300))
    throw std::invalid_argument("SampledFunction: total_measure does not match weight sum");
}

SampledFunction VectorSampledFunction::magnitude() const {
  SampledFunction g;
  g.weights = weights;
  g.total_measure = total_measure;
  g.values.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    g.values[i] = std::sqrt(values[i][0] * values[i][0] + values[i][1] * values[i][1] +
                            values[i][2] * values[i][2]);
  return g;
}

double distribution_function(const SampledFunction& g, double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("distribution_function: h must be >= 0");
  double m = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i)
    if (std::fabs(g.values[i]) > h) m += g.weights[i];
  return m;
}

double lorentz_norm(const SampledFunction& g, const LorentzParams& params) {
  if (!(params.p > 1.0)) throw std::invalid_argument("lorentz_norm: requires p > 1");
  if (!(params.q > 1.0)) throw std::invalid_argument("lorentz_norm: requires q > 1");
  if (std::isinf(params.q))
    throw std::invalid_argument("lorentz_norm: q = inf not supported, use weak_norm");

  const Layers L = build_layers(g);
  if (L.h.empty()) return 0.0;

  // On (h_{j-1}, h_j) the distribution function equals W_j, so
  //   p * int lambda^{q/p} h^{q-1} dh = (p/q) * sum_j W_j^{q/p} (h_j^q - h_{j-1}^q).
  const double p = params.p, q = params.q;
  double acc = 0.0;
  double prev_hq = 0.0;
  for (std::size_t j = 0; j < L.h.size(); ++j) {
    const double hq = std::pow(L.h[j], q);
    if (L.W[j] > 0.0) acc += std::pow(L.W[j], q / p) * (hq - prev_hq);
    prev_hq = hq;
  }
  return std::pow(acc * p / q, 1.0 / q);
}

double weak_norm(const SampledFunction& g, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("weak_norm: requires p >= 1");
  const Layers L = build_layers(g);
  double best = 0.0;
  // sup of h^p lambda(h) is approached just below each distinct magnitude,
  // where lambda equals the tail weight W_j.
  for (std::size_t j = 0; j < L.h.size(); ++j)
    best = std::max(best, std::pow(L.h[j], p) * L.W[j]);
  return std::pow(best, 1.0 / p);
}

double truncate(double s, double K) {
  if (!(K > 0.0)) throw std::invalid_argument("truncate: requires K > 0");
  if (s > K) return K;
  if (s < -K) return -K;
  return s;
}

std::array<double, 3> truncate_vector(const std::array<double, 3>& v, double K) {
  if (!(K > 0.0)) throw std::invalid_argument("truncate_vector: requires K > 0");
  const double m = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (m <= K) return v;
  const double s = K / m;
  return {v[0] * s, v[1] * s, v[2] * s};
}

VectorSampledFunction truncate_field(const VectorSampledFunction& v, double K) {
  VectorSampledFunction out = v;
  for (auto& val : out.values) val = truncate_vector(val, K);
  return out;
}

DistanceReport distance_to_bounded(const SampledFunction& g, int N,
                                   const std::vector<double>& K_grid) {
  if (K_grid.empty()) throw std::invalid_argument("distance_to_bounded: empty K grid");
  if (!std::is_sorted(K_grid.begin(), K_grid.end()))
    throw std::invalid_argument("distance_to_bounded: K grid must be ascending");

  DistanceReport rep;
  SampledFunction rem;
  rem.weights = g.weights;
  rem.total_measure = g.total_measure;
  rem.values.resize(g.values.size());
  for (double K : K_grid) {
    for (std::size_t i = 0; i < g.values.size(); ++i)
      rem.values[i] = g.values[i] - truncate(g.values[i], K);
    rep.sequence.emplace_back(K, weak_norm(rem, static_cast<double>(N)));
  }
  rep.distance = rep.sequence.back().second;
  return rep;
}

double unit_ball_volume(int N) {
  if (N < 1) throw std::invalid_argument("unit_ball_volume: N >= 1");
  return std::pow(M_PI, N / 2.0) / std::tgamma(N / 2.0 + 1.0);
}

double sobolev_constant(int N, double p) {
  if (!(p > 1.0 && p < static_cast<double>(N)))
    throw std::invalid_argument("sobolev_constant: requires 1 < p < N");
  return std::pow(unit_ball_volume(N), -1.0 / N) * p / (N - p);
}

double delta_threshold(double eta, int N) {
  if (!(eta > 0.0)) throw std::invalid_argument("delta_threshold: requires eta > 0");
  if (N < 3)
    throw std::invalid_argument(
        "delta_threshold: undefined for N = 2 (S_{2,2} is singular); supply delta explicitly");
  return eta / (2.0 * sobolev_constant(N, 2.0));
}

TruncationLevel select_truncation_level(const SampledFunction& c_magnitude, int N,
                                        double delta, const std::vector<double>& K_grid) {
  if (K_grid.empty()) throw std::invalid_argument("select_truncation_level: empty K grid");
  if (!(delta >= 0.0)) throw std::invalid_argument("select_truncation_level: delta < 0");

  const DistanceReport rep = distance_to_bounded(c_magnitude, N, K_grid);
  for (const auto& [K, rem] : rep.sequence)
    if (rem <= delta) return {K, rem, true};
  return {rep.sequence.back().first, rep.sequence.back().second, false};
}

SampledFunction sample_disk_cartesian(const std::function<double(double, double)>& f,
                                      int n_per_axis, double radius) {
  if (n_per_axis < 2) throw std::invalid_argument("sample_disk_cartesian: n too small");
  SampledFunction g;
  const double h = 2.0 * radius / n_per_axis;
  const double cell = h * h;
  for (int i = 0; i < n_per_axis; ++i) {
    const double x = -radius + (i + 0.5) * h;
    for (int j = 0; j < n_per_axis; ++j) {
      const double y = -radius + (j + 0.5) * h;
      if (x * x + y * y >= radius * radius) continue;
      g.values.push_back(f(x, y));
      g.weights.push_back(cell);
    }
  }
  g.total_measure = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
  g.validate();
  return g;
}

SampledFunction sample_disk_polar(const std::function<double(double, double)>& f,
                                  int n_rings, int n_theta, double r_inner, double radius) {
  if (n_rings < 2 || n_theta < 4) throw std::invalid_argument("sample_disk_polar: grid too small");
  if (!(r_inner > 0.0 && r_inner < radius))
    throw std::invalid_argument("sample_disk_polar: need 0 < r_inner < radius");
  SampledFunction g;
  const double ratio = std::pow(radius / r_inner, 1.0 / n_rings);
  const double dth = 2.0 * M_PI / n_theta;
  double r_lo = r_inner;
  for (int k = 0; k < n_rings; ++k) {
    const double r_hi = (k + 1 == n_rings) ? radius : r_lo * ratio;
    const double ring_cell = 0.5 * (r_hi * r_hi - r_lo * r_lo) * dth;
    for (int j = 0; j < n_theta; ++j) {
      const double th = (j + 0.5) * dth;
      // sample on the outer edge: cumulative weight up to this ring then
      // equals the true area of { |x| <= r_hi } minus the untracked core
      g.values.push_back(f(r_hi * std::cos(th), r_hi * std::sin(th)));
      g.weights.push_back(ring_cell);
    }
    r_lo = r_hi;
  }
  g.total_measure = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
  g.validate();
  return g;
}

SampledFunction sample_square(const std::function<double(double, double)>& f,
                              int n_per_axis, double lo, double hi) {
  if (n_per_axis < 1 || !(hi > lo)) throw std::invalid_argument("sample_square: bad grid");
  SampledFunction g;
  const double h = (hi - lo) / n_per_axis;
  const double cell = h * h;
  for (int i = 0; i < n_per_axis; ++i)
    for (int j = 0; j < n_per_axis; ++j) {
      g.values.push_back(f(lo + (i + 0.5) * h, lo + (j + 0.5) * h));
      g.weights.push_back(cell);
    }
  g.total_measure = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
  g.validate();
  return g;
}

}  // namespace splitcd
