#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

// Tensor-product equidistant meshes on boxes in 2D/3D. Nodes are strictly
// interior (Dirichlet boundary values carry no unknowns) and construction
// rejects any node that lands on a coordinate hyperplane x_i = 0, so fields
// like 1/|x| stay finite on the grid.

namespace splitcd {

using Point = std::array<double, 3>;
using VectorField = std::function<Point(const Point&)>;
using ScalarField = std::function<double(double t, const Point&)>;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int n = 0;        // interior node count
  double h = 0.0;   // (hi - lo) / (n + 1)

  double node(int i) const { return lo + (i + 1) * h; }      // i in [0, n)
  double face(int k) const { return lo + (k + 0.5) * h; }    // k in [0, n]
};

class Mesh {
 public:
  // bounds/counts beyond `dim` are ignored. Throws std::invalid_argument on
  // n < 3, inverted bounds, or a node hitting zero (message names axis+index).
  Mesh(int dim, const std::array<double, 2>& bounds0, int n0,
       const std::array<double, 2>& bounds1, int n1,
       const std::array<double, 2>& bounds2 = {0.0, 1.0}, int n2 = 3);

  int dim() const { return dim_; }
  const Axis& axis(int a) const { return ax_[a]; }
  std::size_t num_nodes() const { return total_; }

  // lexicographic flattening, axis 0 fastest
  std::size_t flatten(const std::array<int, 3>& idx) const {
    std::size_t s = idx[dim_ - 1];
    for (int a = dim_ - 2; a >= 0; --a) s = s * ax_[a].n + idx[a];
    return s;
  }
  std::array<int, 3> unflatten(std::size_t lin) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
      idx[a] = static_cast<int>(lin % ax_[a].n);
      lin /= ax_[a].n;
    }
    return idx;
  }
  Point node_point(std::size_t lin) const {
    const auto idx = unflatten(lin);
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) p[a] = ax_[a].node(idx[a]);
    return p;
  }

  double cell_volume() const;

 private:
  int dim_;
  std::array<Axis, 3> ax_;
  std::size_t total_;
};

struct GridField {
  const Mesh* mesh = nullptr;
  std::vector<double> v;

  explicit GridField(const Mesh& m) : mesh(&m), v(m.num_nodes(), 0.0) {}
  GridField() = default;
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
  std::size_t size() const { return v.size(); }
};

// A boundary face of the box: axis and side (0 = low end, 1 = high end).
struct BoundaryFace {
  int axis = 0;
  int side = 0;
  friend bool operator==(const BoundaryFace&, const BoundaryFace&) = default;
};

// Dirichlet data on the whole boundary plus (optionally distinct) inflow data
// on Gamma; by default the inflow data is the restriction of the Dirichlet
// data.
struct BoundaryData {
  ScalarField dirichlet;              // b(t, x)
  ScalarField inflow;                 // b1(t, x); empty => use dirichlet
  bool time_dependent = false;

  double eval_dirichlet(double t, const Point& x) const { return dirichlet(t, x); }
  double eval_inflow(double t, const Point& x) const {
    return inflow ? inflow(t, x) : dirichlet(t, x);
  }
  static BoundaryData homogeneous() {
    return {[](double, const Point&) { return 0.0; }, nullptr, false};
  }
};

// Faces where the convection characteristics of d_t w = div(c w) enter the
// domain, i.e. c . n_out > 0, decided at the face centers.
std::vector<BoundaryFace> classify_inflow(const Mesh& mesh, const VectorField& velocity,
                                          double t = 0.0);

// Cell-volume-weighted l2 norm.
double discrete_l2(const GridField& u);

// Pointwise sampling at nodes; throws std::runtime_error naming the node if
// the evaluation is non-finite.
GridField sample(const std::function<double(double, const Point&)>& f, const Mesh& mesh,
                 double t = 0.0);
GridField sample(const std::function<double(const Point&)>& f, const Mesh& mesh);

// Flat text snapshot: header "dim lo0 hi0 n0 ..." then one value per line.
void write_field_text(std::ostream& os, const GridField& u);
// Reads values for an existing mesh; throws if the header disagrees.
GridField read_field_text(std::istream& is, const Mesh& mesh);
std::string mesh_header(const Mesh& mesh);

}  // namespace splitcd
