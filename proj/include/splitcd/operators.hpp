#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "splitcd/mesh.hpp"

// Semi-discrete operators on the tensor mesh: the second-order elliptic
// generator (centered differences, Dirichlet data folded into an affine
// injection), the first-order upwind divergence-form convection operator with
// inflow injection, and the numeric ellipticity/coercivity checks.

namespace splitcd {

struct Triplet {
  int row;
  int col;
  double value;
};

class SparseOperator {
 public:
  SparseOperator() = default;
  // duplicates are summed; exact zeros produced by cancellation are kept
  static SparseOperator from_triplets(int n, std::vector<Triplet> triplets);

  int size() const { return n_; }
  std::size_t nnz() const { return val_.size(); }

  // y = A x; safe for concurrent callers on a shared operator
  void apply(std::span<const double> x, std::span<double> y) const;

  SparseOperator plus(const SparseOperator& other) const;

  double entry(int row, int col) const;  // 0 when absent
  void for_each_entry(const std::function<void(int, int, double)>& fn) const;

  std::vector<double> to_dense() const;  // row-major n*n

  // coordinate format: "row col value" per line
  void write_coordinate_text(std::ostream& os) const;

 private:
  int n_ = 0;
  std::vector<std::int32_t> row_ptr_{0};
  std::vector<std::int32_t> col_;
  std::vector<double> val_;
};

// One known-value contribution to the affine right-hand side: at time t the
// row receives coeff * data(t, point).
struct BoundaryTerm {
  int row;
  Point point;
  double coeff;
  ScalarField data;
};

// Semi-discrete affine system u' = op u + injection(t) + source(t).
struct AffineSystem {
  SparseOperator op;
  std::vector<BoundaryTerm> boundary_terms;
  const Mesh* mesh = nullptr;
  bool boundary_time_dependent = false;

  std::function<double(double, const Point&)> source_fn;  // null => no source
  bool source_time_dependent = false;
  std::vector<double> source0;  // cached source at t = 0

  bool time_dependent() const { return boundary_time_dependent || source_time_dependent; }
  void injection(double t, std::span<double> out) const;  // boundary part only
  void source(double t, std::span<double> out) const;
  void affine_data(double t, std::span<double> out) const;  // injection + source

  // operators act on the same unknowns: sum linear parts, concatenate data
  static AffineSystem merge(const AffineSystem& a, const AffineSystem& b);
};

struct EllipticCoefficients {
  using MatrixEval = std::function<std::array<std::array<double, 3>, 3>(const Point&)>;
  MatrixEval a;        // symmetric at every queried node (checked at assembly)
  VectorField alpha;   // null => 0
  std::function<double(const Point&)> beta;  // null => 0

  static EllipticCoefficients isotropic(double nu);
};

// Generator of the diffusion subflow d_t v = div(a grad v) - alpha.grad v - beta v,
// Dirichlet values folded into the injection. Throws on asymmetric a.
AffineSystem assemble_elliptic(const Mesh& mesh, const EllipticCoefficients& coeffs,
                               const BoundaryData& b,
                               const std::function<double(double, const Point&)>& source = nullptr,
                               bool source_time_dependent = false);

enum class FaceVelocity {
  midpoint,      // evaluate c at the face midpoint
  node_average,  // average of c at the two adjacent node/boundary points
};

// Flux-form upwind discretization of d_t w = div(c w); inflow faces read the
// donor value from the inflow data, outflow faces take the nearest interior
// value.
AffineSystem assemble_upwind_divergence(const Mesh& mesh, const VectorField& velocity,
                                        const BoundaryData& b1,
                                        FaceVelocity policy = FaceVelocity::midpoint);

// min over nodes of the smallest eigenvalue of a(x); positive certifies
// strong ellipticity on the sample set.
double ellipticity_estimate(const EllipticCoefficients& coeffs, const Mesh& mesh);

// smallest eigenvalue of a symmetric 2x2/3x3 block (closed form)
double symmetric_min_eigenvalue(const std::array<std::array<double, 3>, 3>& m, int dim);

// || grad_h u ||^2 with zero ghost values (homogeneous-Dirichlet analog)
double discrete_gradient_sq(const GridField& u);

struct CoercivityReport {
  bool passed = false;
  double shift = 0.0;           // smallest passing candidate
  double required_shift = 0.0;  // max over samples of the shift that would be needed
  int samples = 0;
};

// Verifies <-Au, u> + s ||u||^2 >= (eta/2) ||grad_h u||^2 on random fields,
// searching s over ascending candidates. Failure is a report, not an error.
CoercivityReport coercivity_check(const SparseOperator& generator, const Mesh& mesh, double eta,
                                  const std::vector<double>& shift_candidates,
                                  int n_samples = 100, unsigned long long seed = 0x5eed);

}  // namespace splitcd
