#include "tikreg/cli.hpp"

#include "tikreg/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tikreg {

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << contents;
}

}  // namespace

int cmd_run(const std::string& config_path, const RunOptions& opts, std::ostream& out,
            std::ostream& err) {
  Experiment e;
  try {
    e = load_experiment(read_json_file(config_path), opts.seed);
  } catch (const ConfigError& ex) {
    err << ex.what() << '\n';
    return kExitConfigError;
  }
  if (opts.thin < 1) {
    err << "--thin must be >= 1\n";
    return kExitConfigError;
  }

  RunOutcome res;
  try {
    res = run_experiment(e, opts.cap);
  } catch (const ConfigError& ex) {
    err << ex.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& ex) {
    err << "run failed: " << ex.what() << '\n';
    return kExitCheckFailed;
  }

  const std::filesystem::path dir(opts.out_dir);
  std::filesystem::create_directories(dir);
  std::ostringstream csv;
  write_trajectory_csv(csv, res.trajectory, e.problem.T, CsvOptions{opts.thin, opts.norms_only});
  write_file(dir / (e.name + ".csv"), csv.str());
  write_file(dir / (e.name + ".json"), res.report.dump(2) + "\n");

  for (const auto& c : res.checks) out << c.name << ": " << to_string(c.status) << '\n';
  out << "report: " << (dir / (e.name + ".json")).string() << '\n';
  return res.failed() ? kExitCheckFailed : kExitOk;
}

int cmd_rates(const std::string& config_path, std::uint64_t k, const std::string& f_spec,
              const BigInt& cap, std::ostream& out, std::ostream& err) {
  Experiment e;
  CounterexampleFn f;
  try {
    load_parameters(read_json_file(config_path), e);
    if (!e.moduli) throw ConfigError("config: no moduli");
    f = parse_f_spec(f_spec);
  } catch (const ConfigError& ex) {
    err << ex.what() << '\n';
    return kExitConfigError;
  }
  const QuantitativeModuli& m = *e.moduli;
  const BoundedNat kb(BigInt(k), cap);
  out << "k " << k << '\n';
  out << "G " << rate_G(m.N, m.B, m.L, kb).to_string() << '\n';
  out << "nu1 " << nu1(m, kb).to_string() << '\n';
  out << "nu2 " << nu2(m, kb).to_string() << '\n';
  out << "dr_gap_start " << dr_gap_start(m, kb).to_string() << '\n';
  out << "mu " << mu(m, kb, f).to_string() << '\n';
  out << "mu2 " << mu2(m, kb, f).to_string() << '\n';
  out << "mu3 " << mu3(m, kb, f).to_string() << '\n';
  out << "mu4 " << mu4(m, kb, f).to_string() << '\n';
  out << "mu5 " << mu5(m, kb, f).to_string() << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& config_path, std::uint64_t horizon, std::uint64_t k_max,
                 std::ostream& out, std::ostream& err) {
  Experiment e;
  try {
    load_parameters(read_json_file(config_path), e);
    if (!e.moduli) throw ConfigError("config: no moduli");
  } catch (const ConfigError& ex) {
    err << ex.what() << '\n';
    return kExitConfigError;
  }
  const ValidationReport rep = validate_q(e.schedule, *e.moduli, horizon, k_max, e.lambda_max);
  for (const auto& c : rep.conditions) {
    out << c.name << ": " << (c.passed() ? "pass" : "fail") << " (instances " << c.instances
        << ", unchecked " << c.unchecked << ")";
    if (!c.passed()) {
      const auto& v = c.violations.front();
      out << " first violation at k=" << v.k << " n=" << v.n << " lhs=" << format_double(v.lhs)
          << " rhs=" << format_double(v.rhs);
    }
    out << '\n';
  }
  return rep.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace tikreg
