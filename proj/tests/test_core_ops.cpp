#include <doctest.h>

#include "support.hpp"
#include "tikreg/core_ops.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace tikreg;
using testing_support::random_psd;
using testing_support::random_vector;
using testing_support::sample_firmly_nonexpansive;
using testing_support::sample_nonexpansive;
using testing_support::vec;

namespace {

// Brute-force nearest point of a 2D region given as a sampler over a grid.
template <class Gen>
Vector grid_argmin(const Vector& v, Gen&& gen) {
  Vector best;
  double best_d = std::numeric_limits<double>::infinity();
  gen([&](const Vector& x) {
    const double d = (x - v).norm();
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  });
  return best;
}

Vector hyperplane_grid_oracle(const Vector& a, double c, const Vector& v) {
  const Vector base = c * a / a.squaredNorm();
  const Vector dir = vec({-a[1], a[0]}) / a.norm();
  return grid_argmin(v, [&](auto&& visit) {
    for (int i = -50000; i <= 50000; ++i) visit(Vector(base + (i * 1e-4) * dir));
  });
}

double soft_threshold_grid_oracle(double gamma, double v) {
  double best_x = 0.0, best = std::numeric_limits<double>::infinity();
  for (int i = -500000; i <= 500000; ++i) {
    const double x = i * 1e-5;
    const double obj = 0.5 * (x - v) * (x - v) + gamma * std::abs(x);
    if (obj < best) {
      best = obj;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace

TEST_CASE("inner product and norm") {
  CHECK(inner(vec({1, 0}), vec({0, 1})) == 0.0);
  CHECK(inner(vec({1, 2}), vec({3, 4})) == 11.0);
  CHECK_THROWS_AS(inner(vec({1, 2}), vec({1, 2, 3})), std::invalid_argument);
  CHECK(norm(vec({3, 4})) == 5.0);
  CHECK(norm(Vector::Zero(4)) == 0.0);

  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const Vector u = random_vector(rng, 7, 5.0);
    CHECK(inner(u, u) == doctest::Approx(norm(u) * norm(u)).epsilon(1e-14));
    const double c = rng.uniform(-10.0, 10.0);
    CHECK(norm(c * u) == doctest::Approx(std::abs(c) * norm(u)).epsilon(1e-14));
  }
}

TEST_CASE("non-finite vectors are rejected") {
  Vector v = vec({1.0, std::numeric_limits<double>::quiet_NaN()});
  CHECK_THROWS_AS(require_finite(v, "v"), std::invalid_argument);
  v[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(require_finite(v, "v"), std::invalid_argument);
}

TEST_CASE("hyperplane projection against a grid oracle") {
  const Vector p = project_affine_hyperplane(vec({1, 0}), 1.0, vec({0, 0}));
  CHECK((p - vec({1, 0})).norm() < 1e-15);
  CHECK((hyperplane_grid_oracle(vec({1, 0}), 1.0, vec({0, 0})) - p).norm() < 1e-4);

  const Vector q = project_affine_hyperplane(vec({1, 1}), 0.0, vec({1, 1}));
  CHECK(q.norm() < 1e-15);
  CHECK((hyperplane_grid_oracle(vec({1, 1}), 0.0, vec({1, 1})) - q).norm() < 1e-4);

  const Vector on = vec({0.25, 0.75});
  CHECK((project_affine_hyperplane(vec({1, 1}), 1.0, on) - on).norm() < 1e-15);
  CHECK_THROWS_AS(project_affine_hyperplane(vec({0, 0}), 1.0, on), std::invalid_argument);

  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const Vector a = random_vector(rng, 2);
    const double c = rng.uniform(-1.0, 1.0);
    const Vector v = random_vector(rng, 2);
    const Vector x = project_affine_hyperplane(a, c, v);
    CHECK(inner(a, x) == doctest::Approx(c).epsilon(1e-12));
    CHECK((hyperplane_grid_oracle(a, c, v) - x).norm() < 1e-4);
  }
}

TEST_CASE("box, ball and halfspace projections") {
  const Vector lo = vec({0, 0}), hi = vec({1, 1});
  const Vector inside = vec({0.3, 0.6});
  CHECK((project_box(lo, hi, inside) - inside).norm() == 0.0);
  const Vector pb = project_box(lo, hi, vec({2, -1}));
  CHECK((pb - vec({1, 0})).norm() == 0.0);
  const Vector grid_box = grid_argmin(vec({2, -1}), [](auto&& visit) {
    for (int i = 0; i <= 1000; ++i)
      for (int j = 0; j <= 1000; ++j) visit(vec({i * 1e-3, j * 1e-3}));
  });
  CHECK((grid_box - pb).norm() < 2e-3);
  CHECK_THROWS_AS(project_box(hi, lo, inside), std::invalid_argument);

  const Vector pball = project_ball(vec({0, 0}), 1.0, vec({2, 0}));
  CHECK((pball - vec({1, 0})).norm() < 1e-15);
  const Vector grid_ball = grid_argmin(vec({2, 0}), [](auto&& visit) {
    for (int i = 0; i <= 1000; ++i)
      for (int j = 0; j < 3600; ++j) {
        const double r = i * 1e-3, th = j * 2.0 * std::numbers::pi / 3600.0;
        visit(vec({r * std::cos(th), r * std::sin(th)}));
      }
  });
  CHECK((grid_ball - pball).norm() < 2e-3);
  CHECK((project_ball(vec({0, 0}), 1.0, inside) - inside).norm() == 0.0);
  CHECK_THROWS_AS(project_ball(vec({0, 0}), 0.0, inside), std::invalid_argument);

  CHECK((project_halfspace(vec({1, 0}), 1.0, vec({3, 2})) - vec({1, 2})).norm() < 1e-15);
  CHECK((project_halfspace(vec({1, 0}), 1.0, vec({-3, 2})) - vec({-3, 2})).norm() == 0.0);
  CHECK_THROWS_AS(project_halfspace(vec({0, 0}), 1.0, inside), std::invalid_argument);
}

TEST_CASE("projections are idempotent") {
  Rng rng(3);
  const Vector a = random_vector(rng, 5), lo = -0.5 * Vector::Ones(5), hi = Vector::Ones(5);
  const NonexpansiveOp ops[] = {hyperplane_projector(a, 0.3), box_projector(lo, hi),
                                ball_projector(random_vector(rng, 5), 0.7), halfspace_projector(a, -0.2)};
  for (const auto& P : ops) {
    for (int t = 0; t < 1000; ++t) {
      const Vector v = random_vector(rng, 5, 4.0);
      const Vector pv = P(v);
      CHECK((P(pv) - pv).norm() <= 1e-12);
    }
  }
}

TEST_CASE("soft thresholding against a grid oracle") {
  CHECK(soft_threshold(1.0, vec({2}))[0] == 1.0);
  CHECK(soft_threshold(1.0, vec({0.5}))[0] == 0.0);
  CHECK(soft_threshold(1.0, vec({0}))[0] == 0.0);
  CHECK(soft_threshold(1.0, vec({-2.5}))[0] == -1.5);
  for (double v : {2.0, 0.5, 0.0, -1.7, 3.3}) {
    CHECK(std::abs(soft_threshold(1.0, vec({v}))[0] - soft_threshold_grid_oracle(1.0, v)) <= 2e-5);
  }
}

TEST_CASE("affine resolvent") {
  Rng rng(4);
  const Vector v = random_vector(rng, 3);
  const ResolventOp Jz = resolvent_affine(Matrix::Zero(3, 3), Vector::Zero(3), 0.7);
  CHECK((Jz(v) - v).norm() < 1e-15);

  const ResolventOp J1 = resolvent_affine(Matrix::Identity(1, 1), Vector::Zero(1), 1.0);
  CHECK(J1(vec({2}))[0] == doctest::Approx(1.0).epsilon(1e-15));

  for (int t = 0; t < 20; ++t) {
    const Matrix Q = random_psd(rng, 5, 1 + t % 5);
    const Vector b = random_vector(rng, 5);
    const double gamma = rng.uniform(0.1, 3.0);
    const ResolventOp J = resolvent_affine(Q, b, gamma);
    const Vector x = random_vector(rng, 5, 3.0);
    const Vector z = J(x);
    CHECK(((Matrix::Identity(5, 5) + gamma * Q) * z - (x + gamma * b)).norm() <= 1e-10);
  }

  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(resolvent_affine(bad, Vector::Zero(2), 1.0), std::invalid_argument);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(resolvent_affine(asym, Vector::Zero(2), 1.0), std::invalid_argument);
}

TEST_CASE("reflected resolvents") {
  Rng rng(5);
  const Vector x = random_vector(rng, 4);
  CHECK((reflected(ResolventOp::identity(1.0))(x) - x).norm() < 1e-15);

  const Vector c = random_vector(rng, 4);
  ResolventOp Jc{1.0, [c](const Vector&) { return c; }, Json{{"kind", "constant"}}};
  CHECK((reflected(Jc)(x) - (2.0 * c - x)).norm() < 1e-15);

  const NonexpansiveOp R = reflected(soft_threshold_resolvent(0.4));
  const auto st = sample_nonexpansive(R, 4, 10000, 6);
  CHECK(st.violations == 0);
}

TEST_CASE("forward-backward composition") {
  const ResolventOp J = soft_threshold_resolvent(0.5);
  const AveragedOp T0 = compose_fb(J, CocoerciveOp::zero(), 0.5);
  CHECK(T0.alpha == 0.5);
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_vector(rng, 5, 3.0);
    CHECK((T0(x) - J(x)).norm() < 1e-15);
  }

  const Matrix Q = random_psd(rng, 5, 5);
  const Vector b = random_vector(rng, 5);
  const CocoerciveOp T2 = CocoerciveOp::affine_gradient(Q, b);
  const AveragedOp Tb = compose_fb(soft_threshold_resolvent(2.0 * T2.delta), T2, 2.0 * T2.delta);
  CHECK(Tb.alpha == doctest::Approx(1.0));
  CHECK(fb_alpha(1.0, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(compose_fb(J, T2, 2.0 * T2.delta * 1.01), std::invalid_argument);
  CHECK_THROWS_AS(compose_fb(J, T2, -0.1), std::invalid_argument);

  const double gamma = T2.delta;
  const AveragedOp T = compose_fb(soft_threshold_resolvent(gamma, 0.3), T2, gamma);
  CHECK(T.alpha == doctest::Approx(2.0 / 3.0));
  CHECK(sample_nonexpansive(T, 5, 10000, 8).violations == 0);
  const NonexpansiveOp inner_op = T.inner;
  CHECK(sample_nonexpansive(inner_op, 5, 10000, 9).violations == 0);
  for (int t = 0; t < 1000; ++t) {
    const Vector x = random_vector(rng, 5, 3.0);
    const Vector lhs = T(x);
    const Vector rhs = (1.0 - T.alpha) * x + T.alpha * T.inner(x);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + x.norm()));
  }
}

TEST_CASE("cocoercivity of affine gradients") {
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const Matrix Q = random_psd(rng, 5, 1 + t % 5);
    const CocoerciveOp B = CocoerciveOp::affine_gradient(Q, random_vector(rng, 5));
    for (int s = 0; s < 1000; ++s) {
      const Vector x = random_vector(rng, 5, 3.0), y = random_vector(rng, 5, 3.0);
      const Vector d = B(x) - B(y);
      CHECK((x - y).dot(d) + kSlack >= B.delta * d.squaredNorm());
    }
  }
}

TEST_CASE("Douglas-Rachford composition") {
  Rng rng(11);
  const Vector x = random_vector(rng, 5);
  const NonexpansiveOp I = compose_dr(ResolventOp::identity(1.0), ResolventOp::identity(1.0));
  CHECK((I(x) - x).norm() < 1e-15);

  const ResolventOp J1 = soft_threshold_resolvent(0.8);
  const NonexpansiveOp R1 = reflected(J1);
  const NonexpansiveOp T1 = compose_dr(J1, ResolventOp::identity(0.8));
  for (int t = 0; t < 100; ++t) {
    const Vector y = random_vector(rng, 5, 3.0);
    CHECK((T1(y) - R1(y)).norm() < 1e-15);
  }
  CHECK_THROWS_AS(compose_dr(J1, ResolventOp::identity(1.0)), std::invalid_argument);

  const ResolventOp J2 = resolvent_affine(random_psd(rng, 5, 3), random_vector(rng, 5), 0.8);
  CHECK(sample_nonexpansive(compose_dr(J1, J2), 5, 10000, 12).violations == 0);
}

TEST_CASE("every operator of the toolbox is nonexpansive on sampled pairs") {
  Rng rng(13);
  const Eigen::Index dim = 5;
  const Vector a = random_vector(rng, dim);
  const Matrix Q = random_psd(rng, dim, 4);
  const Vector b = random_vector(rng, dim);
  const CocoerciveOp T2 = CocoerciveOp::affine_gradient(Q, b);
  const ResolventOp Jst = soft_threshold_resolvent(0.6, 1.5);
  const ResolventOp Jaff = resolvent_affine(Q, b, 0.6);

  const std::vector<NonexpansiveOp> ops = {
      NonexpansiveOp::identity(),
      NonexpansiveOp::constant(random_vector(rng, dim)),
      hyperplane_projector(a, 0.4),
      box_projector(-Vector::Ones(dim), 0.5 * Vector::Ones(dim)),
      ball_projector(random_vector(rng, dim), 1.3),
      halfspace_projector(a, -0.3),
      reflected(Jst),
      reflected(Jaff),
      compose_fb(Jst, T2, T2.delta).as_nonexpansive(),
      compose_fb(Jst, T2, 1.9 * T2.delta).inner,
      compose_dr(Jst, Jaff),
  };
  std::uint64_t seed = 100;
  for (const auto& op : ops) {
    const auto st = sample_nonexpansive(op, dim, 10000, seed++);
    CHECK(st.pairs == 10000);
    CHECK(st.violations == 0);
  }
  for (const ResolventOp& J : {Jst, Jaff, ResolventOp::identity(0.6)}) {
    CHECK(sample_firmly_nonexpansive(J, dim, 10000, seed++).violations == 0);
  }
}

TEST_CASE("json round trips") {
  const Vector v = vec({1.5, -2.0, 0.125});
  CHECK((vector_from_json(to_json(v)) - v).norm() == 0.0);
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  CHECK((matrix_from_json(to_json(m)) - m).norm() == 0.0);
  CHECK_THROWS(vector_from_json(Json::parse(R"(["x"])")));
  CHECK_THROWS(matrix_from_json(Json::parse(R"([[1, 2], [3]])")));
}
