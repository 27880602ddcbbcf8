#include "tikreg/iterations.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace tikreg {

namespace {

void check_start(const Vector& x0, std::uint64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("iteration: n_max must be >= 1");
  if (x0.size() == 0) throw std::invalid_argument("iteration: empty starting point");
  require_finite(x0, "starting point");
}

void check_iterate(const Vector& x, std::uint64_t n) {
  if (!x.allFinite()) {
    throw std::runtime_error("iteration: non-finite iterate at n = " + std::to_string(n));
  }
}

void check_beta(double b, std::uint64_t n) {
  if (!(b > 0.0 && b <= 1.0)) {
    throw std::invalid_argument("schedule: beta(" + std::to_string(n) + ") outside (0,1]");
  }
}

void check_lambda(double l, double upper, std::uint64_t n) {
  if (!(l > 0.0 && l <= upper)) {
    throw std::invalid_argument("schedule: lambda(" + std::to_string(n) + ") = " + format_double(l) +
                                " outside (0," + format_double(upper) + "]");
  }
}

}  // namespace

TkmStepper::TkmStepper(NonexpansiveOp T, Schedule s, Vector x0, double lambda_scale)
    : T_(std::move(T)), s_(std::move(s)), x_(std::move(x0)), lambda_scale_(lambda_scale) {
  require_finite(x_, "starting point");
}

const Vector& TkmStepper::step() {
  const double b = s_.beta(n_);
  const double l = lambda_scale_ * s_.lambda(n_);
  check_beta(b, n_);
  check_lambda(l, 1.0, n_);
  const Vector bx = b * x_;
  x_ = bx + l * (T_(bx) - bx);
  ++n_;
  check_iterate(x_, n_);
  return x_;
}

Trajectory run_tkm(const NonexpansiveOp& T, const Schedule& s, const Vector& x0, std::uint64_t n_max,
                   double lambda_scale) {
  check_start(x0, n_max);
  Trajectory traj;
  traj.scheme = "tkm";
  traj.schedule = s.to_json();
  traj.problem = T.descriptor;
  traj.x.reserve(n_max + 1);
  traj.x.push_back(x0);
  TkmStepper stepper(T, s, x0, lambda_scale);
  for (std::uint64_t n = 0; n < n_max; ++n) traj.x.push_back(stepper.step());
  return traj;
}

Trajectory run_tfb(const ResolventOp& J1, const CocoerciveOp& T2, double gamma, const Schedule& s,
                   const Vector& x0, std::uint64_t n_max) {
  check_start(x0, n_max);
  if (!(gamma >= 0.0) || gamma > 2.0 * T2.delta) {
    throw std::invalid_argument("run_tfb: gamma must lie in [0, 2 delta]");
  }
  // (4 delta - gamma) / (2 delta), finite also for delta = inf.
  const double lambda_upper = 2.0 - gamma / (2.0 * T2.delta);
  Trajectory traj;
  traj.scheme = "tfb";
  traj.schedule = s.to_json();
  traj.problem = Json{{"J1", J1.descriptor}, {"T2", T2.descriptor}, {"gamma", gamma}};
  traj.x.reserve(n_max + 1);
  traj.x.push_back(x0);
  Vector x = x0;
  for (std::uint64_t n = 0; n < n_max; ++n) {
    const double b = s.beta(n);
    const double l = s.lambda(n);
    check_beta(b, n);
    check_lambda(l, lambda_upper, n);
    const Vector bx = b * x;
    const Vector forward = gamma == 0.0 ? bx : Vector(bx - gamma * T2(bx));
    x = (1.0 - l) * bx + l * J1(forward);
    check_iterate(x, n + 1);
    traj.x.push_back(x);
  }
  return traj;
}

Trajectory run_tdr(const ResolventOp& J1, const ResolventOp& J2, const Schedule& s, const Vector& x0,
                   std::uint64_t n_max) {
  check_start(x0, n_max);
  if (J1.gamma != J2.gamma) throw std::invalid_argument("run_tdr: resolvents use different gamma");
  Trajectory traj;
  traj.scheme = "tdr";
  traj.schedule = s.to_json();
  traj.problem = Json{{"J1", J1.descriptor}, {"J2", J2.descriptor}};
  traj.x.reserve(n_max + 1);
  traj.y.reserve(n_max);
  traj.z.reserve(n_max);
  traj.x.push_back(x0);
  Vector x = x0;
  for (std::uint64_t n = 0; n < n_max; ++n) {
    const double b = s.beta(n);
    const double l = s.lambda(n);
    check_beta(b, n);
    check_lambda(l, 2.0, n);
    const Vector bx = b * x;
    Vector y = J2(bx);
    Vector z = J1(2.0 * y - bx);
    x = bx + l * (z - y);
    check_iterate(x, n + 1);
    traj.x.push_back(x);
    traj.y.push_back(std::move(y));
    traj.z.push_back(std::move(z));
  }
  return traj;
}

Trajectory run_km(const NonexpansiveOp& T, const RealSequence& lambda, const Vector& x0,
                  std::uint64_t n_max) {
  check_start(x0, n_max);
  Trajectory traj;
  traj.scheme = "km";
  traj.schedule = Json{{"lambda", lambda.to_json()}};
  traj.problem = T.descriptor;
  traj.x.reserve(n_max + 1);
  traj.x.push_back(x0);
  Vector x = x0;
  for (std::uint64_t n = 0; n < n_max; ++n) {
    const double l = lambda(n);
    check_lambda(l, 1.0, n);
    x = x + l * (T(x) - x);
    check_iterate(x, n + 1);
    traj.x.push_back(x);
  }
  return traj;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const NonexpansiveOp& T,
                          const CsvOptions& opts) {
  if (opts.thin < 1) throw std::invalid_argument("csv: thin stride must be >= 1");
  if (traj.x.empty()) return;
  const auto dim = traj.x.front().size();
  out << "n";
  if (opts.norms_only) {
    out << ",norm";
  } else {
    for (Eigen::Index i = 0; i < dim; ++i) out << ",x" << i;
  }
  out << ",step_residual,fix_residual\n";
  const std::uint64_t last = traj.n_max();
  for (std::uint64_t n = 0; n <= last; n += opts.thin) {
    const Vector& x = traj.x[n];
    out << n;
    if (opts.norms_only) {
      out << ',' << format_double(norm(x));
    } else {
      for (Eigen::Index i = 0; i < dim; ++i) out << ',' << format_double(x[i]);
    }
    out << ',';
    if (n < last) out << format_double(norm(traj.x[n + 1] - x));
    out << ',' << format_double(norm(T(x) - x)) << '\n';
  }
}

}  // namespace tikreg
