#include "splitcd/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "splitcd/kernels.hpp"

namespace splitcd {

Mesh::Mesh(int dim, const std::array<double, 2>& b0, int n0, const std::array<double, 2>& b1,
           int n1, const std::array<double, 2>& b2, int n2)
    : dim_(dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("Mesh: dim must be 2 or 3");
  const std::array<std::array<double, 2>, 3> bounds{b0, b1, b2};
  const std::array<int, 3> counts{n0, n1, n2};
  total_ = 1;
  for (int a = 0; a < dim_; ++a) {
    const auto [lo, hi] = bounds[a];
    const int n = counts[a];
    if (n < 3) throw std::invalid_argument("Mesh: need at least 3 interior nodes per axis");
    if (!(lo < hi)) throw std::invalid_argument("Mesh: lower bound must be below upper bound");
    Axis ax{lo, hi, n, (hi - lo) / (n + 1)};
    for (int i = 0; i < n; ++i) {
      if (std::fabs(ax.node(i)) < 1e-12 * ax.h) {
        std::ostringstream msg;
        msg << "Mesh: node " << (i + 1) << " on axis " << a
            << " falls on the coordinate plane x = 0 (choose a different n)";
        throw std::invalid_argument(msg.str());
      }
    }
    ax_[a] = ax;
    total_ *= static_cast<std::size_t>(n);
  }
}

double Mesh::cell_volume() const {
  double vol = 1.0;
  for (int a = 0; a < dim_; ++a) vol *= ax_[a].h;
  return vol;
}

std::vector<BoundaryFace> classify_inflow(const Mesh& mesh, const VectorField& velocity,
                                          double /*t*/) {
  std::vector<BoundaryFace> inflow;
  for (int a = 0; a < mesh.dim(); ++a) {
    for (int side = 0; side < 2; ++side) {
      Point center{0.0, 0.0, 0.0};
      for (int b = 0; b < mesh.dim(); ++b) {
        const Axis& ax = mesh.axis(b);
        center[b] = (b == a) ? (side == 0 ? ax.lo : ax.hi) : 0.5 * (ax.lo + ax.hi);
      }
      const Point c = velocity(center);
      const double cn = (side == 0 ? -c[a] : c[a]);  // c . n_out
      if (cn > 0.0) inflow.push_back({a, side});
    }
  }
  return inflow;
}

double discrete_l2(const GridField& u) {
  const double s = kernels::sum_sq(u.v.data(), u.v.size());
  return std::sqrt(u.mesh->cell_volume() * s);
}

GridField sample(const std::function<double(double, const Point&)>& f, const Mesh& mesh,
                 double t) {
  GridField u(mesh);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Point p = mesh.node_point(i);
    const double val = f(t, p);
    if (!std::isfinite(val)) {
      std::ostringstream msg;
      msg << "sample: non-finite value at node (" << p[0] << ", " << p[1];
      if (mesh.dim() == 3) msg << ", " << p[2];
      msg << ")";
      throw std::runtime_error(msg.str());
    }
    u[i] = val;
  }
  return u;
}

GridField sample(const std::function<double(const Point&)>& f, const Mesh& mesh) {
  return sample([&](double, const Point& p) { return f(p); }, mesh, 0.0);
}

std::string mesh_header(const Mesh& mesh) {
  std::ostringstream os;
  os.precision(17);
  os << mesh.dim();
  for (int a = 0; a < mesh.dim(); ++a)
    os << ' ' << mesh.axis(a).lo << ' ' << mesh.axis(a).hi << ' ' << mesh.axis(a).n;
  return os.str();
}

void write_field_text(std::ostream& os, const GridField& u) {
  os << mesh_header(*u.mesh) << '\n';
  char buf[40];
  for (double x : u.v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    os << buf;
  }
}

GridField read_field_text(std::istream& is, const Mesh& mesh) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("field text: missing header");
  if (header != mesh_header(mesh))
    throw std::runtime_error("field text: header does not match the expected mesh");
  GridField u(mesh);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!(is >> u[i])) throw std::runtime_error("field text: truncated value list");
  return u;
}

}  // namespace splitcd
