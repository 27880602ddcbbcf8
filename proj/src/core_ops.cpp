#include "tikreg/core_ops.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace tikreg {

namespace {

void require_same_dim(const Vector& u, const Vector& v, const char* what) {
  if (u.size() != v.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()) + ")");
  }
}

}  // namespace

double inner(const Vector& u, const Vector& v) {
  require_same_dim(u, v, "inner");
  return u.dot(v);
}

double norm(const Vector& u) { return std::sqrt(u.dot(u)); }

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
  }
}

NonexpansiveOp NonexpansiveOp::identity() {
  return {[](const Vector& x) { return x; }, Json{{"kind", "identity"}}};
}

NonexpansiveOp NonexpansiveOp::constant(Vector c) {
  require_finite(c, "constant operator");
  Json desc{{"kind", "constant"}, {"c", to_json(c)}};
  return {[c = std::move(c)](const Vector&) { return c; }, std::move(desc)};
}

Vector AveragedOp::operator()(const Vector& x) const {
  if (direct) return direct(x);
  return (1.0 - alpha) * x + alpha * inner(x);
}

NonexpansiveOp AveragedOp::as_nonexpansive() const {
  // The composed descriptor of an averaged map already identifies it.
  if (alpha == 1.0 && !direct) return inner;
  const Json desc = inner.descriptor.contains("of")
                        ? inner.descriptor["of"]
                        : Json{{"kind", "averaged"}, {"alpha", alpha}, {"inner", inner.descriptor}};
  return {[self = *this](const Vector& x) { return self(x); }, desc};
}

CocoerciveOp CocoerciveOp::zero() {
  return {[](const Vector& x) { return Vector(Vector::Zero(x.size())); },
          std::numeric_limits<double>::infinity(), Json{{"kind", "zero"}}};
}

CocoerciveOp CocoerciveOp::affine_gradient(const Matrix& Q, const Vector& b) {
  if (Q.rows() != Q.cols() || Q.rows() != b.size()) {
    throw std::invalid_argument("affine_gradient: shape mismatch");
  }
  if (!Q.isApprox(Q.transpose(), 1e-12)) {
    throw std::invalid_argument("affine_gradient: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (lmin < -1e-12 * std::max(1.0, std::abs(lmax))) {
    throw std::invalid_argument("affine_gradient: Q is not positive semidefinite");
  }
  if (lmax <= 0.0) return zero();
  Json desc{{"kind", "affine_gradient"}, {"Q", to_json(Q)}, {"b", to_json(b)}};
  return {[Q, b](const Vector& x) { return Vector(Q * x - b); }, 1.0 / lmax, std::move(desc)};
}

ResolventOp ResolventOp::identity(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("resolvent: gamma must be positive");
  return {gamma, [](const Vector& x) { return x; },
          Json{{"kind", "identity_resolvent"}, {"gamma", gamma}}};
}

Vector project_affine_hyperplane(const Vector& a, double c, const Vector& v) {
  require_same_dim(a, v, "project_affine_hyperplane");
  const double aa = a.squaredNorm();
  if (aa == 0.0) throw std::invalid_argument("project_affine_hyperplane: a = 0");
  return v + ((c - a.dot(v)) / aa) * a;
}

Vector project_box(const Vector& lo, const Vector& hi, const Vector& v) {
  require_same_dim(lo, v, "project_box");
  require_same_dim(hi, v, "project_box");
  if ((lo.array() > hi.array()).any()) {
    throw std::invalid_argument("project_box: lo > hi");
  }
  return v.cwiseMax(lo).cwiseMin(hi);
}

Vector project_ball(const Vector& center, double radius, const Vector& v) {
  require_same_dim(center, v, "project_ball");
  if (!(radius > 0.0)) throw std::invalid_argument("project_ball: radius must be positive");
  const Vector d = v - center;
  const double dist = norm(d);
  if (dist <= radius) return v;
  return center + (radius / dist) * d;
}

Vector project_halfspace(const Vector& a, double c, const Vector& v) {
  require_same_dim(a, v, "project_halfspace");
  const double aa = a.squaredNorm();
  if (aa == 0.0) throw std::invalid_argument("project_halfspace: a = 0");
  const double excess = a.dot(v) - c;
  if (excess <= 0.0) return v;
  return v - (excess / aa) * a;
}

Vector soft_threshold(double gamma, const Vector& v) {
  if (!(gamma > 0.0)) throw std::invalid_argument("soft_threshold: gamma must be positive");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - gamma;
    out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
  }
  return out;
}

NonexpansiveOp hyperplane_projector(Vector a, double c) {
  if (a.squaredNorm() == 0.0) throw std::invalid_argument("hyperplane_projector: a = 0");
  Json desc{{"kind", "hyperplane"}, {"a", to_json(a)}, {"c", c}};
  return {[a = std::move(a), c](const Vector& v) { return project_affine_hyperplane(a, c, v); },
          std::move(desc)};
}

NonexpansiveOp box_projector(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || (lo.array() > hi.array()).any()) {
    throw std::invalid_argument("box_projector: malformed box");
  }
  Json desc{{"kind", "box"}, {"lo", to_json(lo)}, {"hi", to_json(hi)}};
  return {[lo = std::move(lo), hi = std::move(hi)](const Vector& v) { return project_box(lo, hi, v); },
          std::move(desc)};
}

NonexpansiveOp ball_projector(Vector center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball_projector: radius must be positive");
  Json desc{{"kind", "ball"}, {"center", to_json(center)}, {"radius", radius}};
  return {[center = std::move(center), radius](const Vector& v) {
            return project_ball(center, radius, v);
          },
          std::move(desc)};
}

NonexpansiveOp halfspace_projector(Vector a, double c) {
  if (a.squaredNorm() == 0.0) throw std::invalid_argument("halfspace_projector: a = 0");
  Json desc{{"kind", "halfspace"}, {"a", to_json(a)}, {"c", c}};
  return {[a = std::move(a), c](const Vector& v) { return project_halfspace(a, c, v); },
          std::move(desc)};
}

ResolventOp soft_threshold_resolvent(double gamma, double weight) {
  if (!(gamma > 0.0) || !(weight > 0.0)) {
    throw std::invalid_argument("soft_threshold_resolvent: gamma and weight must be positive");
  }
  const double t = gamma * weight;
  return {gamma, [t](const Vector& v) { return soft_threshold(t, v); },
          Json{{"kind", "l1"}, {"gamma", gamma}, {"weight", weight}}};
}

ResolventOp resolvent_affine(const Matrix& Q, const Vector& b, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("resolvent_affine: gamma must be positive");
  if (Q.rows() != Q.cols() || Q.rows() != b.size()) {
    throw std::invalid_argument("resolvent_affine: shape mismatch");
  }
  if (!Q.isApprox(Q.transpose(), 1e-12) && !(Q - Q.transpose()).isZero(1e-12)) {
    throw std::invalid_argument("resolvent_affine: Q must be symmetric");
  }
  const auto n = Q.rows();
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (lmin < -1e-12 * scale) {
      throw std::invalid_argument("resolvent_affine: Q is not positive semidefinite");
    }
  }
  const Matrix M = Matrix::Identity(n, n) + gamma * Q;
  auto llt = std::make_shared<const Eigen::LLT<Matrix>>(M);
  if (llt->info() != Eigen::Success) {
    throw std::invalid_argument("resolvent_affine: linear solve failed");
  }
  const Vector shift = gamma * b;
  Json desc{{"kind", "affine_resolvent"}, {"Q", to_json(Q)}, {"b", to_json(b)}, {"gamma", gamma}};
  return {gamma, [llt, shift](const Vector& v) { return Vector(llt->solve(v + shift)); },
          std::move(desc)};
}

NonexpansiveOp reflected(const ResolventOp& J) {
  return {[J](const Vector& x) { return Vector(2.0 * J(x) - x); },
          Json{{"kind", "reflected"}, {"resolvent", J.descriptor}}};
}

double fb_alpha(double delta, double gamma) {
  // 2 delta / (4 delta - gamma), written so that delta = inf gives 1/2.
  return 2.0 / (4.0 - gamma / delta);
}

AveragedOp compose_fb(const ResolventOp& J1, const CocoerciveOp& T2, double gamma) {
  if (!(gamma >= 0.0) || gamma > 2.0 * T2.delta) {
    throw std::invalid_argument("compose_fb: gamma must lie in [0, 2 delta]");
  }
  const double alpha = fb_alpha(T2.delta, gamma);
  NonexpansiveOp T{[J1, T2, gamma](const Vector& x) {
                     if (gamma == 0.0) return J1(x);
                     return J1(x - gamma * T2(x));
                   },
                   Json{{"kind", "forward_backward"},
                        {"J1", J1.descriptor},
                        {"T2", T2.descriptor},
                        {"gamma", gamma}}};
  // T itself is the composed map; expose it through the averaged decomposition
  // T = (1 - alpha) Id + alpha T', T' = (T - (1 - alpha) Id) / alpha.
  NonexpansiveOp T_prime{[T, alpha](const Vector& x) {
                           return Vector((T(x) - (1.0 - alpha) * x) / alpha);
                         },
                         Json{{"kind", "fb_inner"}, {"of", T.descriptor}}};
  return AveragedOp{alpha, std::move(T_prime), T.evaluate};
}

NonexpansiveOp compose_dr(const ResolventOp& J1, const ResolventOp& J2) {
  if (J1.gamma != J2.gamma) {
    throw std::invalid_argument("compose_dr: resolvents use different gamma");
  }
  const NonexpansiveOp R1 = reflected(J1);
  const NonexpansiveOp R2 = reflected(J2);
  return {[R1, R2](const Vector& x) { return R1(R2(x)); },
          Json{{"kind", "douglas_rachford"}, {"J1", J1.descriptor}, {"J2", J2.descriptor}}};
}

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("vector: expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw std::invalid_argument("vector: expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  require_finite(v, "vector");
  return v;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("matrix: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  if (!m.allFinite()) throw std::invalid_argument("matrix: non-finite entry");
  return m;
}

}  // namespace tikreg
