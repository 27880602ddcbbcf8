#pragma once

// Finite-dimensional Hilbert space arithmetic and the operator toolbox used to
// build the maps T, T1, T2 fed to the regularized iterations.
//
// All operators are immutable value types wrapping a shared evaluation
// function plus a JSON descriptor (kind + parameters) that identifies the
// concrete map, so experiments can be rebuilt from a config file.

#include <Eigen/Dense>
#include <json.hpp>

#include <functional>
#include <limits>
#include <string>

namespace tikreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Json = nlohmann::json;

/// Evaluation function of a single-valued operator on R^d.
using Map = std::function<Vector(const Vector&)>;

/// Slack added to every floating-point inequality check.
inline constexpr double kSlack = 1e-9;

double inner(const Vector& u, const Vector& v);
double norm(const Vector& u);

/// Throws std::invalid_argument when any coordinate is NaN or infinite.
void require_finite(const Vector& v, const char* what);

struct NonexpansiveOp {
  Map evaluate;
  Json descriptor;

  Vector operator()(const Vector& x) const { return evaluate(x); }

  static NonexpansiveOp identity();
  static NonexpansiveOp constant(Vector c);
};

/// T = (1 - alpha) Id + alpha T'.
struct AveragedOp {
  double alpha = 1.0;
  NonexpansiveOp inner;
  /// Optional closed form of the whole map; when set it is used for
  /// evaluation instead of the decomposition.
  Map direct;

  Vector operator()(const Vector& x) const;
  /// The same map viewed as a nonexpansive operator.
  NonexpansiveOp as_nonexpansive() const;
};

/// delta-cocoercive single-valued map B:
///   <x - y, B(x) - B(y)> >= delta * |B(x) - B(y)|^2.
/// The zero map is cocoercive for every delta and is stored with delta = +inf.
struct CocoerciveOp {
  Map evaluate;
  double delta = 1.0;
  Json descriptor;

  Vector operator()(const Vector& x) const { return evaluate(x); }

  static CocoerciveOp zero();
  /// x -> Q x - b for symmetric PSD Q; delta = 1 / lambda_max(Q).
  static CocoerciveOp affine_gradient(const Matrix& Q, const Vector& b);
};

/// Resolvent J_{gamma A} = (I + gamma A)^{-1} of a maximal monotone A.
struct ResolventOp {
  double gamma = 1.0;
  Map evaluate;
  Json descriptor;

  Vector operator()(const Vector& x) const { return evaluate(x); }

  /// Resolvent of A = 0.
  static ResolventOp identity(double gamma);
};

// Projections. Each throws std::invalid_argument on malformed region data.
Vector project_affine_hyperplane(const Vector& a, double c, const Vector& v);
Vector project_box(const Vector& lo, const Vector& hi, const Vector& v);
Vector project_ball(const Vector& center, double radius, const Vector& v);
/// Projection onto {x : <a, x> <= c}.
Vector project_halfspace(const Vector& a, double c, const Vector& v);

Vector soft_threshold(double gamma, const Vector& v);

NonexpansiveOp hyperplane_projector(Vector a, double c);
NonexpansiveOp box_projector(Vector lo, Vector hi);
NonexpansiveOp ball_projector(Vector center, double radius);
NonexpansiveOp halfspace_projector(Vector a, double c);

/// Resolvent of gamma * weight * d|.|_1, i.e. soft thresholding at gamma*weight.
ResolventOp soft_threshold_resolvent(double gamma, double weight = 1.0);

/// Resolvent of A(x) = Q x - b: solves (I + gamma Q) z = v + gamma b.
/// Throws std::invalid_argument if Q is not symmetric positive semidefinite.
ResolventOp resolvent_affine(const Matrix& Q, const Vector& b, double gamma);

/// R = 2 J - Id.
NonexpansiveOp reflected(const ResolventOp& J);

/// T = J1 o (Id - gamma T2), which is 2 delta / (4 delta - gamma)-averaged.
/// Accepts 0 <= gamma <= 2 delta (gamma = 0 leaves T = J1, firmly nonexpansive).
AveragedOp compose_fb(const ResolventOp& J1, const CocoerciveOp& T2, double gamma);

/// Averagedness constant of the forward-backward map.
double fb_alpha(double delta, double gamma);

/// T = R_{gamma T1} o R_{gamma T2}; both resolvents must share gamma.
NonexpansiveOp compose_dr(const ResolventOp& J1, const ResolventOp& J2);

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

}  // namespace tikreg
