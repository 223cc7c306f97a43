#include "pixhom/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pixhom/errors.hpp"

namespace pixhom {

namespace {

using Matrix38 = Eigen::Matrix<double, 3, 8>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Vector8 = Eigen::Matrix<double, 8, 1>;

const double kGauss = 1.0 / std::sqrt(3.0);
constexpr std::array<std::array<int, 2>, 4> kCorner{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

// Local node order: (0,0), (1,0), (1,1), (0,1) in units of (hx, hy).
Matrix38 strain_displacement(double s, double t, double hx, double hy) {
  const std::array<double, 4> dns{-0.25 * (1 - t), 0.25 * (1 - t), 0.25 * (1 + t), -0.25 * (1 + t)};
  const std::array<double, 4> dnt{-0.25 * (1 - s), -0.25 * (1 + s), 0.25 * (1 + s), 0.25 * (1 - s)};
  Matrix38 b = Matrix38::Zero();
  for (int a = 0; a < 4; ++a) {
    const double dx = dns[a] * 2.0 / hx;
    const double dy = dnt[a] * 2.0 / hy;
    b(0, 2 * a) = dx;
    b(1, 2 * a + 1) = dy;
    b(2, 2 * a) = dy;
    b(2, 2 * a + 1) = dx;
  }
  return b;
}

std::array<double, 2> gauss_point(int q) {
  return {kCorner[q][0] ? kGauss : -kGauss, kCorner[q][1] ? kGauss : -kGauss};
}

using Matrix34 = Eigen::Matrix<double, 3, 4>;

// Strains of the internal modes (1 - s^2, 1 - t^2) in each displacement
// component. The modes vanish on the element boundary.
Matrix34 internal_strain_displacement(double s, double t, double hx, double hy) {
  Matrix34 b = Matrix34::Zero();
  const double dsx = -4.0 * s / hx;
  const double dty = -4.0 * t / hy;
  b(0, 0) = dsx;
  b(1, 3) = dty;
  b(2, 1) = dty;
  b(2, 2) = dsx;
  return b;
}

// Element quantities shared by every element of the uniform grid. With
// internal modes the 12x12 element matrix is condensed onto the 8 nodal
// displacements; `recover` maps nodal displacements to mode amplitudes.
struct ElementKernel {
  double hx;
  double hy;
  VoigtMatrix3 d;
  bool internal_modes;
  Matrix8 k;
  Eigen::Matrix<double, 4, 8> recover = Eigen::Matrix<double, 4, 8>::Zero();

  ElementKernel(double hx_, double hy_, const IsotropicModuli& m, ElementFormulation formulation)
      : hx(hx_), hy(hy_), d(hooke_matrix(m)), internal_modes(formulation == ElementFormulation::IncompatibleModes) {
    const double weight = gauss_weight();
    Matrix8 kcc = Matrix8::Zero();
    Eigen::Matrix<double, 8, 4> kci = Eigen::Matrix<double, 8, 4>::Zero();
    Eigen::Matrix4d kii = Eigen::Matrix4d::Zero();
    for (int q = 0; q < 4; ++q) {
      const auto [s, t] = gauss_point(q);
      const Matrix38 bc = strain_displacement(s, t, hx, hy);
      const Matrix34 bi = internal_strain_displacement(s, t, hx, hy);
      kcc += weight * bc.transpose() * d * bc;
      kci += weight * bc.transpose() * d * bi;
      kii += weight * bi.transpose() * d * bi;
    }
    if (internal_modes) {
      recover = -kii.ldlt().solve(kci.transpose());
      k = kcc + kci * recover;
    } else {
      k = kcc;
    }
  }

  double gauss_weight() const { return 0.25 * hx * hy; }

  Voigt3 strain(double s, double t, const Vector8& u) const {
    Voigt3 e = strain_displacement(s, t, hx, hy) * u;
    if (internal_modes) e += internal_strain_displacement(s, t, hx, hy) * (recover * u);
    return e;
  }

  Voigt3 stress(double s, double t, const Vector8& u) const { return d * strain(s, t, u); }

  Vector8 affine(const Quasiperiod& xi) const {
    Vector8 a;
    for (int n = 0; n < 4; ++n) {
      const double x = kCorner[n][0] * hx;
      const double y = kCorner[n][1] * hy;
      a(2 * n) = xi.xi11 * x + xi.xi12 * y;
      a(2 * n + 1) = xi.xi12 * x + xi.xi22 * y;
    }
    return a;
  }
};

int wrap(int i, int n) { return ((i % n) + n) % n; }

std::array<int, 4> element_nodes(int i, int j, int nx, int ny) {
  std::array<int, 4> nodes{};
  for (int n = 0; n < 4; ++n) nodes[n] = wrap(j + kCorner[n][1], ny) * nx + wrap(i + kCorner[n][0], nx);
  return nodes;
}

// Unknown numbering and element connectivity for the material part.
struct DofLayout {
  std::vector<int> node_dof;  // first dof of each node, -1 if inactive
  std::vector<std::array<int, 8>> element_dofs;
  std::vector<int> elements;  // material element indices, ascending
  int unknowns = 0;

  explicit DofLayout(const CellGeometry& g) {
    const int nx = g.nx();
    const int ny = g.ny();
    node_dof.assign(static_cast<std::size_t>(nx) * ny, -1);
    std::vector<std::uint8_t> used(node_dof.size(), 0);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!g.material(i, j)) continue;
        for (int node : element_nodes(i, j, nx, ny)) used[node] = 1;
      }
    }
    for (std::size_t n = 0; n < used.size(); ++n) {
      if (used[n]) {
        node_dof[n] = unknowns;
        unknowns += 2;
      }
    }
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!g.material(i, j)) continue;
        elements.push_back(g.index(i, j));
        std::array<int, 8> dofs{};
        const auto nodes = element_nodes(i, j, nx, ny);
        for (int n = 0; n < 4; ++n) {
          dofs[2 * n] = node_dof[nodes[n]];
          dofs[2 * n + 1] = node_dof[nodes[n]] + 1;
        }
        element_dofs.push_back(dofs);
      }
    }
  }
};

using Vec = Eigen::VectorXd;

void apply_operator(const DofLayout& layout, const Matrix8& k, const Vec& x, Vec& y) {
  y.setZero(layout.unknowns);
  Vector8 xe;
  for (const auto& dofs : layout.element_dofs) {
    for (int a = 0; a < 8; ++a) xe(a) = x(dofs[a]);
    const Vector8 ye = k * xe;
    for (int a = 0; a < 8; ++a) y(dofs[a]) += ye(a);
  }
}

// Removes the mean of each displacement component (the translation modes).
void project_mean_zero(Vec& x) {
  const Eigen::Index nodes = x.size() / 2;
  if (nodes == 0) return;
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (Eigen::Index n = 0; n < nodes; ++n) {
    mean_x += x(2 * n);
    mean_y += x(2 * n + 1);
  }
  mean_x /= static_cast<double>(nodes);
  mean_y /= static_cast<double>(nodes);
  for (Eigen::Index n = 0; n < nodes; ++n) {
    x(2 * n) -= mean_x;
    x(2 * n + 1) -= mean_y;
  }
}

SolverStats solve_pcg(const DofLayout& layout, const Matrix8& k, const Vec& b, double floor, const SolverOptions& opts,
                      Vec& x) {
  const int n = layout.unknowns;
  const long max_iterations = opts.max_iterations.value_or(20L * n);

  Vec diag = Vec::Zero(n);
  for (const auto& dofs : layout.element_dofs) {
    for (int a = 0; a < 8; ++a) diag(dofs[a]) += k(a, a);
  }
  const Vec inv_diag = diag.cwiseInverse();

  x.setZero(n);
  Vec r = b;
  project_mean_zero(r);
  const double b_norm = r.norm();
  const double target = std::max(opts.rel_tolerance * b_norm, floor);
  SolverStats stats;
  if (r.norm() <= target) return stats;

  Vec z = inv_diag.cwiseProduct(r);
  project_mean_zero(z);
  Vec p = z;
  Vec q(n);
  double rz = r.dot(z);
  double r_norm = r.norm();
  long it = 0;
  while (it < max_iterations) {
    ++it;
    apply_operator(layout, k, p, q);
    const double pq = p.dot(q);
    if (!(pq > 0.0)) throw SolverError("operator is not positive definite on the fluctuation space");
    const double alpha = rz / pq;
    x += alpha * p;
    r -= alpha * q;
    r_norm = r.norm();
    if (r_norm <= target) break;
    z = inv_diag.cwiseProduct(r);
    project_mean_zero(z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  project_mean_zero(x);
  stats.iterations = it;
  stats.relative_residual = b_norm > 0.0 ? r_norm / b_norm : 0.0;
  if (r_norm > target) {
    throw SolverError("conjugate gradient did not converge in " + std::to_string(max_iterations) +
                      " iterations (relative residual " + std::to_string(stats.relative_residual) + ")");
  }
  return stats;
}

SolverStats solve_dense(const DofLayout& layout, const Matrix8& k, const Vec& b, Vec& x) {
  const int n = layout.unknowns;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& dofs : layout.element_dofs) {
    for (int p = 0; p < 8; ++p) {
      for (int q = 0; q < 8; ++q) a(dofs[p], dofs[q]) += k(p, q);
    }
  }
  // Pin the first node, solve the reduced system, then re-center.
  const int m = n - 2;
  x.setZero(n);
  if (m > 0) {
    const Eigen::LLT<Eigen::MatrixXd> llt(a.bottomRightCorner(m, m));
    if (llt.info() != Eigen::Success) throw SolverError("stiffness is singular beyond the translation modes");
    x.tail(m) = llt.solve(b.tail(m));
  }
  project_mean_zero(x);
  SolverStats stats;
  stats.direct = true;
  Vec r = b - a * x;
  project_mean_zero(r);
  Vec bp = b;
  project_mean_zero(bp);
  stats.relative_residual = bp.norm() > 0.0 ? r.norm() / bp.norm() : 0.0;
  return stats;
}

void check_compatible(const CellSolution& sol, const CellGeometry& g) {
  if (sol.nx != g.nx() || sol.ny != g.ny()) throw std::invalid_argument("solution does not match geometry");
}

Vector8 element_displacement(const CellSolution& sol, const ElementKernel& kernel, int i, int j) {
  Vector8 u = kernel.affine(sol.quasiperiod);
  const auto nodes = element_nodes(i, j, sol.nx, sol.ny);
  for (int n = 0; n < 4; ++n) {
    u(2 * n) += sol.fluctuation[nodes[n]](0);
    u(2 * n + 1) += sol.fluctuation[nodes[n]](1);
  }
  return u;
}

double trace(const Voigt3& s) { return s(0) + s(1); }

}  // namespace

void SolverOptions::validate() const {
  if (!(rel_tolerance > 0.0 && rel_tolerance < 1.0)) throw std::invalid_argument("rel_tolerance must lie in (0, 1)");
  if (max_iterations && *max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
}

CellSolution solve_cell_problem(const CellGeometry& g, const IsotropicModuli& m, const Quasiperiod& xi,
                                const SolverOptions& opts) {
  opts.validate();
  if (!std::isfinite(xi.xi11) || !std::isfinite(xi.xi22) || !std::isfinite(xi.xi12)) {
    throw std::invalid_argument("quasiperiod must be finite");
  }
  const ElementKernel kernel(g.hx(), g.hy(), m, opts.element);
  const DofLayout layout(g);

  // The affine part xi x enters as a fixed load on every material element.
  const Vector8 fe = -(kernel.k * kernel.affine(xi));
  Vec b = Vec::Zero(layout.unknowns);
  for (const auto& dofs : layout.element_dofs) {
    for (int a = 0; a < 8; ++a) b(dofs[a]) += fe(a);
  }
  // Below this the assembled load is cancellation noise (e.g. full material).
  const double floor = 1e-14 * fe.norm() * std::sqrt(static_cast<double>(layout.elements.size()));

  Vec x;
  const SolverStats stats =
      opts.use_oracle ? solve_dense(layout, kernel.k, b, x) : solve_pcg(layout, kernel.k, b, floor, opts, x);

  CellSolution sol;
  sol.quasiperiod = xi;
  sol.moduli = m;
  sol.element = opts.element;
  sol.nx = g.nx();
  sol.ny = g.ny();
  sol.stats = stats;
  const std::size_t nodes = static_cast<std::size_t>(g.nx()) * g.ny();
  sol.fluctuation.assign(nodes, Eigen::Vector2d::Zero());
  sol.active.assign(nodes, 0);
  for (std::size_t n = 0; n < nodes; ++n) {
    const int dof = layout.node_dof[n];
    if (dof < 0) continue;
    sol.active[n] = 1;
    sol.fluctuation[n] = Eigen::Vector2d(x(dof), x(dof + 1));
  }

  GaussPointValues zero;
  zero.fill(Voigt3::Zero());
  sol.strain.assign(nodes, zero);
  sol.stress.assign(nodes, zero);
  double energy = 0.0;
  for (int e : layout.elements) {
    const int i = e % g.nx();
    const int j = e / g.nx();
    const Vector8 u = element_displacement(sol, kernel, i, j);
    for (int q = 0; q < 4; ++q) {
      const auto [s, t] = gauss_point(q);
      sol.strain[e][q] = kernel.strain(s, t, u);
      sol.stress[e][q] = kernel.d * sol.strain[e][q];
      energy += 0.5 * kernel.gauss_weight() * sol.strain[e][q].dot(sol.stress[e][q]);
    }
  }
  sol.energy = energy;
  return sol;
}

Voigt3 average_stress(const CellSolution& sol, const CellGeometry& g) {
  check_compatible(sol, g);
  Voigt3 sum = Voigt3::Zero();
  for (const auto& gp : sol.stress) {
    for (const auto& s : gp) sum += s;
  }
  // Each Gauss point carries weight hx hy / 4.
  return sum * (0.25 * g.hx() * g.hy() / g.area());
}

Voigt3 average_strain(const CellSolution& sol, const CellGeometry& g) {
  check_compatible(sol, g);
  Voigt3 sum = Voigt3::Zero();
  for (const auto& gp : sol.strain) {
    for (const auto& s : gp) sum += s;
  }
  return sum * (0.25 * g.hx() * g.hy() / g.area());
}

Voigt3 stress_at(const CellSolution& sol, const CellGeometry& g, int i, int j, double s, double t) {
  check_compatible(sol, g);
  i = wrap(i, g.nx());
  j = wrap(j, g.ny());
  if (!g.material(i, j)) throw std::invalid_argument("stress requested inside a hole element");
  const ElementKernel kernel(g.hx(), g.hy(), sol.moduli, sol.element);
  const Vector8 u = element_displacement(sol, kernel, i, j);
  return kernel.stress(s, t, u);
}

Voigt3 line_average_stress(const CellSolution& sol, const CellGeometry& g, Axis axis, int index) {
  check_compatible(sol, g);
  const bool horizontal = axis == Axis::Horizontal;
  const int count = horizontal ? g.ny() : g.nx();
  if (index < 0 || index >= count || !(horizontal ? g.row_is_material(index) : g.column_is_material(index))) {
    throw NotApplicableError("line not transversal");
  }
  const ElementKernel kernel(g.hx(), g.hy(), sol.moduli, sol.element);
  const int along = horizontal ? g.nx() : g.ny();
  Voigt3 sum = Voigt3::Zero();
  for (int k = 0; k < along; ++k) {
    const int i = horizontal ? k : index;
    const int j = horizontal ? index : k;
    const Vector8 u = element_displacement(sol, kernel, i, j);
    sum += horizontal ? kernel.stress(-kGauss, 0.0, u) + kernel.stress(kGauss, 0.0, u)
                      : kernel.stress(0.0, -kGauss, u) + kernel.stress(0.0, kGauss, u);
  }
  // Two equally weighted points per element of length l / along.
  return sum / (2.0 * along);
}

double trace_derivative_line_integral(const CellSolution& sol, const CellGeometry& g, Axis axis, int index,
                                      int anchor) {
  check_compatible(sol, g);
  const bool horizontal = axis == Axis::Horizontal;
  const int normal_count = horizontal ? g.ny() : g.nx();
  const int along = horizontal ? g.nx() : g.ny();
  auto full = [&](int k) {
    k = wrap(k, normal_count);
    return horizontal ? g.row_is_material(k) : g.column_is_material(k);
  };
  if (index < 0 || index >= normal_count || !full(index)) throw NotApplicableError("line not transversal");
  if (!full(index - 1) || !full(index + 1)) throw NotApplicableError("derivative stencil blocked");
  if (anchor < 0 || anchor >= along) throw std::invalid_argument("anchor index out of range");

  const double h = horizontal ? g.hx() : g.hy();          // element length along the line
  const double h_normal = horizontal ? g.hy() : g.hx();   // spacing between neighbouring mid-lines
  const double period = horizontal ? g.l1() : g.l2();
  const double start = (anchor + 0.5) * h;

  const ElementKernel kernel(g.hx(), g.hy(), sol.moduli, sol.element);
  auto trace_at = [&](int k, int normal, double local) {
    const int i = horizontal ? k : wrap(normal, g.nx());
    const int j = horizontal ? wrap(normal, g.ny()) : k;
    const double s = horizontal ? local : 0.0;
    const double t = horizontal ? 0.0 : local;
    const Vector8 u = element_displacement(sol, kernel, i, j);
    return trace(kernel.stress(s, t, u));
  };

  double sum = 0.0;
  auto integrate_segment = [&](int k, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (double offset : {-kGauss, kGauss}) {
      const double coord = mid + offset * half;
      const double local = 2.0 * (coord - k * h) / h - 1.0;
      double tangent = coord - start;
      if (tangent < 0.0) tangent += period;
      const double derivative = (trace_at(k, index + 1, local) - trace_at(k, index - 1, local)) / (2.0 * h_normal);
      sum += half * derivative * tangent;
    }
  };
  for (int k = 0; k < along; ++k) {
    const double a = k * h;
    const double b = (k + 1) * h;
    if (k == anchor) {
      integrate_segment(k, a, start);
      integrate_segment(k, start, b);
    } else {
      integrate_segment(k, a, b);
    }
  }
  return sum / period;
}

CellSolution linear_combination(std::span<const CellSolution* const> parts, std::span<const double> coeffs,
                                const CellGeometry& g) {
  if (parts.empty() || parts.size() != coeffs.size()) throw std::invalid_argument("mismatched combination inputs");
  const CellSolution& first = *parts.front();
  for (const auto* p : parts) {
    check_compatible(*p, g);
    if (!(p->moduli == first.moduli) || p->element != first.element) {
      throw std::invalid_argument("combined solutions must share moduli and element formulation");
    }
  }
  CellSolution out;
  out.moduli = first.moduli;
  out.element = first.element;
  out.nx = first.nx;
  out.ny = first.ny;
  out.active = first.active;
  const std::size_t n = first.fluctuation.size();
  out.fluctuation.assign(n, Eigen::Vector2d::Zero());
  GaussPointValues zero;
  zero.fill(Voigt3::Zero());
  out.strain.assign(n, zero);
  out.stress.assign(n, zero);
  Voigt3 xi = Voigt3::Zero();
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const CellSolution& p = *parts[k];
    const double c = coeffs[k];
    xi += c * p.quasiperiod.voigt();
    for (std::size_t e = 0; e < n; ++e) {
      out.fluctuation[e] += c * p.fluctuation[e];
      for (int q = 0; q < 4; ++q) {
        out.strain[e][q] += c * p.strain[e][q];
        out.stress[e][q] += c * p.stress[e][q];
      }
    }
    out.stats.iterations = std::max(out.stats.iterations, p.stats.iterations);
    out.stats.relative_residual = std::max(out.stats.relative_residual, p.stats.relative_residual);
    out.stats.direct = p.stats.direct;
  }
  out.quasiperiod = Quasiperiod::from_voigt(xi);
  double energy = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    for (int q = 0; q < 4; ++q) energy += out.strain[e][q].dot(out.stress[e][q]);
  }
  out.energy = 0.5 * 0.25 * g.hx() * g.hy() * energy;
  return out;
}

double energy_norm(const CellSolution& sol, const CellGeometry& g) {
  check_compatible(sol, g);
  return std::sqrt(std::max(0.0, 2.0 * sol.energy));
}

double relative_energy_difference(const CellSolution& a, const CellSolution& b, const CellGeometry& g) {
  check_compatible(a, g);
  check_compatible(b, g);
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t e = 0; e < a.strain.size(); ++e) {
    for (int q = 0; q < 4; ++q) {
      diff += (a.strain[e][q] - b.strain[e][q]).dot(a.stress[e][q] - b.stress[e][q]);
      ref += a.strain[e][q].dot(a.stress[e][q]);
    }
  }
  if (ref <= 0.0) return diff <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(std::max(0.0, diff) / ref);
}

double relative_stress_difference(const CellSolution& a, const CellSolution& b, const CellGeometry& g) {
  check_compatible(a, g);
  check_compatible(b, g);
  double diff = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t e = 0; e < a.stress.size(); ++e) {
    for (int q = 0; q < 4; ++q) {
      diff += (a.stress[e][q] - b.stress[e][q]).squaredNorm();
      na += a.stress[e][q].squaredNorm();
      nb += b.stress[e][q].squaredNorm();
    }
  }
  const double scale = 0.5 * (std::sqrt(na) + std::sqrt(nb));
  if (scale <= 0.0) return 0.0;
  return std::sqrt(diff) / scale;
}

}  // namespace pixhom
