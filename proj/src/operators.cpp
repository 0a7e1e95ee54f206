#include "splitcd/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "splitcd/kernels.hpp"

namespace splitcd {

SparseOperator SparseOperator::from_triplets(int n, std::vector<Triplet> t) {
  for (const Triplet& e : t) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
      throw std::invalid_argument("SparseOperator: triplet index out of range");
    if (!std::isfinite(e.value)) throw std::invalid_argument("SparseOperator: non-finite entry");
  }
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseOperator A;
  A.n_ = n;
  A.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < t.size();) {
    std::size_t j = i;
    double s = 0.0;
    while (j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col) s += t[j++].value;
    A.col_.push_back(t[i].col);
    A.val_.push_back(s);
    A.row_ptr_[t[i].row + 1]++;
    i = j;
  }
  for (int r = 0; r < n; ++r) A.row_ptr_[r + 1] += A.row_ptr_[r];
  return A;
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  kernels::spmv_csr(static_cast<std::size_t>(n_), row_ptr_.data(), col_.data(), val_.data(),
                    x.data(), y.data());
}

SparseOperator SparseOperator::plus(const SparseOperator& other) const {
  if (n_ != other.n_) throw std::invalid_argument("SparseOperator::plus: size mismatch");
  std::vector<Triplet> t;
  t.reserve(nnz() + other.nnz());
  for_each_entry([&](int r, int c, double v) { t.push_back({r, c, v}); });
  other.for_each_entry([&](int r, int c, double v) { t.push_back({r, c, v}); });
  return from_triplets(n_, std::move(t));
}

double SparseOperator::entry(int row, int col) const {
  for (std::int32_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
    if (col_[k] == col) return val_[k];
  return 0.0;
}

void SparseOperator::for_each_entry(const std::function<void(int, int, double)>& fn) const {
  for (int r = 0; r < n_; ++r)
    for (std::int32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) fn(r, col_[k], val_[k]);
}

std::vector<double> SparseOperator::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(n_) * n_, 0.0);
  for_each_entry([&](int r, int c, double v) { d[static_cast<std::size_t>(r) * n_ + c] += v; });
  return d;
}

void SparseOperator::write_coordinate_text(std::ostream& os) const {
  char buf[64];
  for_each_entry([&](int r, int c, double v) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r, c, v);
    os << buf;
  });
}

void AffineSystem::injection(double t, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const BoundaryTerm& term : boundary_terms) out[term.row] += term.coeff * term.data(t, term.point);
}

void AffineSystem::source(double t, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (!source_fn) return;
  if (!source_time_dependent) {
    std::copy(source0.begin(), source0.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = source_fn(t, mesh->node_point(i));
}

void AffineSystem::affine_data(double t, std::span<double> out) const {
  injection(t, out);
  if (!source_fn) return;
  if (!source_time_dependent) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += source0[i];
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += source_fn(t, mesh->node_point(i));
  }
}

AffineSystem AffineSystem::merge(const AffineSystem& a, const AffineSystem& b) {
  if (a.mesh != b.mesh) throw std::invalid_argument("AffineSystem::merge: different meshes");
  AffineSystem m;
  m.op = a.op.plus(b.op);
  m.boundary_terms = a.boundary_terms;
  m.boundary_terms.insert(m.boundary_terms.end(), b.boundary_terms.begin(), b.boundary_terms.end());
  m.mesh = a.mesh;
  m.boundary_time_dependent = a.boundary_time_dependent || b.boundary_time_dependent;
  if (a.source_fn && b.source_fn)
    throw std::invalid_argument("AffineSystem::merge: both systems carry a source");
  const AffineSystem& s = a.source_fn ? a : b;
  m.source_fn = s.source_fn;
  m.source_time_dependent = s.source_time_dependent;
  m.source0 = s.source0;
  return m;
}

EllipticCoefficients EllipticCoefficients::isotropic(double nu) {
  EllipticCoefficients c;
  c.a = [nu](const Point&) {
    std::array<std::array<double, 3>, 3> m{};
    m[0][0] = m[1][1] = m[2][2] = nu;
    return m;
  };
  return c;
}

namespace {

void attach_source(AffineSystem& sys, const Mesh& mesh,
                   const std::function<double(double, const Point&)>& source, bool time_dep) {
  if (!source) return;
  sys.source_fn = source;
  sys.source_time_dependent = time_dep;
  if (!time_dep) {
    sys.source0.resize(mesh.num_nodes());
    for (std::size_t i = 0; i < sys.source0.size(); ++i)
      sys.source0[i] = source(0.0, mesh.node_point(i));
  }
}

// neighbor lookup along one axis: interior column index, or a boundary point
struct Neighbor {
  bool interior;
  int col;      // valid when interior
  Point point;  // valid when boundary
};

}  // namespace

AffineSystem assemble_elliptic(const Mesh& mesh, const EllipticCoefficients& coeffs,
                               const BoundaryData& b,
                               const std::function<double(double, const Point&)>& source,
                               bool source_time_dependent) {
  const int dim = mesh.dim();
  const std::size_t n = mesh.num_nodes();
  std::vector<Triplet> trip;
  AffineSystem sys;
  sys.mesh = &mesh;
  sys.boundary_time_dependent = b.time_dependent;

  const ScalarField dirichlet = b.dirichlet;

  // moves idx one step along axis `a`; returns the interior column or the
  // boundary point the arm lands on
  auto neighbor = [&](std::array<int, 3> idx, int a, int step) -> Neighbor {
    idx[a] += step;
    if (idx[a] >= 0 && idx[a] < mesh.axis(a).n)
      return {true, static_cast<int>(mesh.flatten(idx)), {}};
    Point p{0.0, 0.0, 0.0};
    for (int ax = 0; ax < dim; ++ax) {
      if (ax == a)
        p[ax] = step < 0 ? mesh.axis(ax).lo : mesh.axis(ax).hi;
      else
        p[ax] = mesh.axis(ax).node(idx[ax]);
    }
    return {false, -1, p};
  };
  // diagonal (corner) neighbor for the mixed-derivative stencil
  auto corner = [&](std::array<int, 3> idx, int a, int sa, int bax, int sb) -> Neighbor {
    idx[a] += sa;
    idx[bax] += sb;
    const bool in_a = idx[a] >= 0 && idx[a] < mesh.axis(a).n;
    const bool in_b = idx[bax] >= 0 && idx[bax] < mesh.axis(bax).n;
    if (in_a && in_b) return {true, static_cast<int>(mesh.flatten(idx)), {}};
    Point p{0.0, 0.0, 0.0};
    for (int ax = 0; ax < dim; ++ax) {
      if (idx[ax] < 0)
        p[ax] = mesh.axis(ax).lo;
      else if (idx[ax] >= mesh.axis(ax).n)
        p[ax] = mesh.axis(ax).hi;
      else
        p[ax] = mesh.axis(ax).node(idx[ax]);
    }
    return {false, -1, p};
  };

  auto add = [&](int row, const Neighbor& nb, double coeff) {
    if (coeff == 0.0) return;
    if (nb.interior)
      trip.push_back({row, nb.col, coeff});
    else
      sys.boundary_terms.push_back({row, nb.point, coeff, dirichlet});
  };

  for (std::size_t lin = 0; lin < n; ++lin) {
    const auto idx = mesh.unflatten(lin);
    const Point x = mesh.node_point(lin);
    const int row = static_cast<int>(lin);

    const auto a_node = coeffs.a(x);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        if (a_node[i][j] != a_node[j][i]) {
          std::ostringstream msg;
          msg << "assemble_elliptic: a_ij asymmetric at node (" << x[0] << ", " << x[1];
          if (dim == 3) msg << ", " << x[2];
          msg << ")";
          throw std::invalid_argument(msg.str());
        }

    for (int a = 0; a < dim; ++a) {
      const double h = mesh.axis(a).h;

      // div(a_aa grad) part: face-midpoint coefficients
      Point xp = x, xm = x;
      xp[a] += 0.5 * h;
      xm[a] -= 0.5 * h;
      const double ap = coeffs.a(xp)[a][a];
      const double am = coeffs.a(xm)[a][a];
      add(row, {true, row, {}}, -(ap + am) / (h * h));
      add(row, neighbor(idx, a, +1), ap / (h * h));
      add(row, neighbor(idx, a, -1), am / (h * h));

      // mixed terms d_a (a_ab d_b u), b != a: centered-centered corner stencil
      for (int bx = 0; bx < dim; ++bx) {
        if (bx == a) continue;
        const double hb = mesh.axis(bx).h;
        for (int sa : {-1, +1}) {
          Point xa = x;
          xa[a] += sa * h;
          const double aab = coeffs.a(xa)[a][bx];
          if (aab == 0.0) continue;
          for (int sb : {-1, +1})
            add(row, corner(idx, a, sa, bx, sb), sa * sb * aab / (4.0 * h * hb));
        }
      }

      // -alpha . grad u, centered
      if (coeffs.alpha) {
        const double al = coeffs.alpha(x)[a];
        if (al != 0.0) {
          add(row, neighbor(idx, a, +1), -al / (2.0 * h));
          add(row, neighbor(idx, a, -1), al / (2.0 * h));
        }
      }
    }

    if (coeffs.beta) {
      const double be = coeffs.beta(x);
      if (be != 0.0) add(row, {true, row, {}}, -be);
    }
  }

  sys.op = SparseOperator::from_triplets(static_cast<int>(n), std::move(trip));
  attach_source(sys, mesh, source, source_time_dependent);
  return sys;
}

AffineSystem assemble_upwind_divergence(const Mesh& mesh, const VectorField& velocity,
                                        const BoundaryData& b1, FaceVelocity policy) {
  const int dim = mesh.dim();
  const std::size_t n = mesh.num_nodes();
  std::vector<Triplet> trip;
  AffineSystem sys;
  sys.mesh = &mesh;
  sys.boundary_time_dependent = b1.time_dependent;

  const ScalarField inflow = b1.inflow ? b1.inflow : b1.dirichlet;
  if (!inflow) throw std::invalid_argument("assemble_upwind_divergence: missing inflow data");

  for (std::size_t lin = 0; lin < n; ++lin) {
    const auto idx = mesh.unflatten(lin);
    const int row = static_cast<int>(lin);

    for (int a = 0; a < dim; ++a) {
      const Axis& ax = mesh.axis(a);
      const double h = ax.h;

      // the two faces bounding this node along axis a: k = idx[a] (lower)
      // and k = idx[a]+1 (upper); face k separates point k-1 from point k,
      // with points -1 and n standing for the boundary
      for (int up = 0; up < 2; ++up) {
        const int k = idx[a] + up;
        const double fsign = up ? +1.0 : -1.0;  // (F_{j+1} - F_j)/h

        Point left{0.0, 0.0, 0.0}, right{0.0, 0.0, 0.0};
        for (int axn = 0; axn < dim; ++axn) {
          const double coord = mesh.axis(axn).node(idx[axn]);
          left[axn] = right[axn] = coord;
        }
        left[a] = (k - 1 >= 0) ? ax.node(k - 1) : ax.lo;
        right[a] = (k < ax.n) ? ax.node(k) : ax.hi;

        double v;
        if (policy == FaceVelocity::midpoint) {
          Point face = left;
          face[a] = ax.face(k);
          v = velocity(face)[a];
        } else {
          v = 0.5 * (velocity(left)[a] + velocity(right)[a]);
        }
        if (v == 0.0) continue;

        // donor sits on the side the characteristic (speed -c) comes from
        const bool donor_right = v > 0.0;
        const int donor_idx = donor_right ? k : k - 1;
        const double coeff = fsign * v / h;
        if (donor_idx >= 0 && donor_idx < ax.n) {
          auto didx = idx;
          didx[a] = donor_idx;
          trip.push_back({row, static_cast<int>(mesh.flatten(didx)), coeff});
        } else {
          sys.boundary_terms.push_back({row, donor_right ? right : left, coeff, inflow});
        }
      }
    }
  }

  sys.op = SparseOperator::from_triplets(static_cast<int>(n), std::move(trip));
  return sys;
}

double symmetric_min_eigenvalue(const std::array<std::array<double, 3>, 3>& m, int dim) {
  if (dim == 2) {
    const double tr = m[0][0] + m[1][1];
    const double d = m[0][0] - m[1][1];
    return 0.5 * (tr - std::sqrt(d * d + 4.0 * m[0][1] * m[0][1]));
  }
  // 3x3: trigonometric closed form
  const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
  if (p1 == 0.0) return std::min({m[0][0], m[1][1], m[2][2]});
  const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
  const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                    (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  std::array<std::array<double, 3>, 3> B{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) B[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
  const double detB = B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) -
                      B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
                      B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0]);
  const double r = std::clamp(detB / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
}

double ellipticity_estimate(const EllipticCoefficients& coeffs, const Mesh& mesh) {
  double eta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    eta = std::min(eta, symmetric_min_eigenvalue(coeffs.a(mesh.node_point(i)), mesh.dim()));
  return eta;
}

double discrete_gradient_sq(const GridField& u) {
  const Mesh& mesh = *u.mesh;
  const int dim = mesh.dim();
  const double vol = mesh.cell_volume();
  double total = 0.0;
  for (std::size_t lin = 0; lin < u.size(); ++lin) {
    const auto idx = mesh.unflatten(lin);
    for (int a = 0; a < dim; ++a) {
      const double h = mesh.axis(a).h;
      // forward difference at the upper face; lower boundary face handled at i=0
      auto nidx = idx;
      nidx[a] += 1;
      const double up = (nidx[a] < mesh.axis(a).n) ? u[mesh.flatten(nidx)] : 0.0;
      double d = (up - u[lin]) / h;
      total += vol * d * d;
      if (idx[a] == 0) {
        d = u[lin] / h;  // ghost 0 at the lower wall
        total += vol * d * d;
      }
    }
  }
  return total;
}

CoercivityReport coercivity_check(const SparseOperator& generator, const Mesh& mesh, double eta,
                                  const std::vector<double>& shift_candidates, int n_samples,
                                  unsigned long long seed) {
  if (shift_candidates.empty() || !std::is_sorted(shift_candidates.begin(), shift_candidates.end()))
    throw std::invalid_argument("coercivity_check: need ascending shift candidates");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double vol = mesh.cell_volume();
  const std::size_t n = mesh.num_nodes();

  CoercivityReport rep;
  rep.samples = n_samples;
  double required = -std::numeric_limits<double>::infinity();
  GridField u(mesh);
  std::vector<double> Au(n);
  for (int s = 0; s < n_samples; ++s) {
    for (auto& x : u.v) x = gauss(rng);
    generator.apply(u.v, Au);
    const double quad = -vol * kernels::dot(Au.data(), u.v.data(), n);  // <-Au, u>
    const double nrm2 = vol * kernels::sum_sq(u.v.data(), n);
    const double grad2 = discrete_gradient_sq(u);
    // need quad + s*nrm2 >= (eta/2) grad2
    required = std::max(required, (0.5 * eta * grad2 - quad) / nrm2);
  }
  rep.required_shift = required;
  for (double cand : shift_candidates)
    if (cand >= required - 1e-10 * std::max(1.0, std::fabs(required))) {
      rep.passed = true;
      rep.shift = cand;
      return rep;
    }
  rep.passed = false;
  rep.shift = shift_candidates.back();
  return rep;
}

}  // namespace splitcd
