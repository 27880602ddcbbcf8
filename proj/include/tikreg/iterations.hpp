#pragma once

// Trajectories of the Tikhonov-regularized schemes
//
//   T-KM: x_{n+1} = b_n x_n + l_n (T(b_n x_n) - b_n x_n)
//   T-FB: x_{n+1} = (1 - l_n) b_n x_n + l_n J1(b_n x_n - g T2(b_n x_n))
//   T-DR: y_n = J2(b_n x_n), z_n = J1(2 y_n - b_n x_n), x_{n+1} = b_n x_n + l_n (z_n - y_n)
//
// and the plain Krasnoselskii-Mann baseline x_{n+1} = x_n + l_n (T(x_n) - x_n).

#include "tikreg/core_ops.hpp"
#include "tikreg/moduli.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tikreg {

struct Trajectory {
  std::vector<Vector> x;  // x_0 .. x_{n_max}
  std::vector<Vector> y;  // T-DR only: y_0 .. y_{n_max - 1}
  std::vector<Vector> z;  // T-DR only
  Json schedule;
  Json problem;
  std::string scheme;

  std::uint64_t n_max() const { return x.empty() ? 0 : x.size() - 1; }
  bool has_auxiliary() const { return !y.empty(); }
};

/// Streaming T-KM iteration; keeps only the current iterate.
class TkmStepper {
 public:
  TkmStepper(NonexpansiveOp T, Schedule s, Vector x0, double lambda_scale = 1.0);

  std::uint64_t n() const { return n_; }
  const Vector& x() const { return x_; }
  /// Advances to x_{n+1}. Throws std::runtime_error on a non-finite iterate.
  const Vector& step();

 private:
  NonexpansiveOp T_;
  Schedule s_;
  Vector x_;
  double lambda_scale_;
  std::uint64_t n_ = 0;
};

/// lambda_scale multiplies every lambda_n (the T-DR rewrite uses 1/2).
Trajectory run_tkm(const NonexpansiveOp& T, const Schedule& s, const Vector& x0, std::uint64_t n_max,
                   double lambda_scale = 1.0);

/// Requires 0 <= gamma <= 2 delta and lambda_n in (0, (4 delta - gamma)/(2 delta)].
Trajectory run_tfb(const ResolventOp& J1, const CocoerciveOp& T2, double gamma, const Schedule& s,
                   const Vector& x0, std::uint64_t n_max);

/// Requires lambda_n in (0, 2] and J1, J2 with the same gamma.
Trajectory run_tdr(const ResolventOp& J1, const ResolventOp& J2, const Schedule& s, const Vector& x0,
                   std::uint64_t n_max);

/// Plain KM with lambda_n in (0, 1].
Trajectory run_km(const NonexpansiveOp& T, const RealSequence& lambda, const Vector& x0,
                  std::uint64_t n_max);

struct CsvOptions {
  std::uint64_t thin = 1;
  bool norms_only = false;
};

/// Columns: n, x coordinates (or norm), step_residual |x_{n+1} - x_n|,
/// fix_residual |T(x_n) - x_n|. Floats use 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const NonexpansiveOp& T,
                          const CsvOptions& opts = {});

/// Shortest round-trip-safe decimal form with 17 significant digits.
std::string format_double(double v);

}  // namespace tikreg
