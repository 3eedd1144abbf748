#include "bellviol/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "bellviol/correlation.hpp"
#include "bellviol/errors.hpp"
#include "bellviol/state_spec.hpp"
#include "bellviol/violation.hpp"

namespace bellviol {

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string vec_str(const RealVec3& v) {
  return "(" + fmt("%.6f", v[0]) + ", " + fmt("%.6f", v[1]) + ", " + fmt("%.6f", v[2]) + ")";
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

struct CliError {
  int code;
  std::string category;
  std::string message;
};

void add_optimizer_flags(CLI::App* cmd, OptimizerConfig& cfg, bool& serial) {
  cmd->add_option("--restarts", cfg.restarts, "Optimizer restarts")->capture_default_str();
  cmd->add_option("--grid", cfg.grid_points_per_angle, "Grid points per angle (0 = automatic)")
      ->capture_default_str();
  cmd->add_option("--local-tol", cfg.local_tol, "Local refinement tolerance")->capture_default_str();
  cmd->add_option("--max-iters", cfg.max_iters, "Iteration cap per local search")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_flag("--serial", serial, "Disable thread parallelism");
}

void print_settings(std::ostream& out, const ViolationResult& r) {
  if (r.argmax_settings) {
    const auto& s = *r.argmax_settings;
    for (int q = 0; q < s.n_qubits(); ++q) {
      const auto i = static_cast<std::size_t>(q);
      out << "  a" << q + 1 << " = " << vec_str(s.a[i]) << ", a" << q + 1 << "' = " << vec_str(s.a_prime[i]) << '\n';
    }
  }
}

void print_formula(std::ostream& out, const ViolationResult& r) {
  out << "formula value: " << fmt("%.6f", r.value) << '\n';
  for (std::size_t m = 0; m < r.argmax_b.size(); ++m) out << "  b" << m + 3 << " = " << vec_str(r.argmax_b[m]) << '\n';
  print_settings(out, r);
  out << "  evaluations: " << r.evaluations << ", converged: " << (r.converged ? "yes" : "no") << '\n';
}

void print_oracle(std::ostream& out, const ViolationResult& r) {
  out << "oracle value: " << fmt("%.6f", r.value) << '\n';
  print_settings(out, r);
  out << "  evaluations: " << r.evaluations << ", converged: " << (r.converged ? "yes" : "no") << '\n';
}

int cmd_violation(const std::string& state_text, const std::string& op_text, const std::string& method,
                  const OptimizerConfig& cfg, std::ostream& out) {
  const BellOperatorSpec spec = BellOperatorSpec::parse(op_text);
  const bool want_formula = method == "formula" || method == "both";
  const bool want_oracle = method == "oracle" || method == "both";
  if (want_formula && spec.kind != OperatorKind::recursive)
    throw IncompatibleError("no closed-form maximum for operator '" + spec.to_string() + "'; use --method oracle");
  const DensityMatrix rho = parse_state_spec(state_text);
  if (rho.n_qubits() != spec.n_qubits)
    throw IncompatibleError("state has " + std::to_string(rho.n_qubits()) + " qubits, operator acts on " +
                            std::to_string(spec.n_qubits));

  out << "state: " << state_text << '\n' << "operator: " << spec.to_string() << '\n';
  std::optional<ViolationResult> f, o;
  if (want_formula) {
    f = max_violation_formula(rho, spec, cfg);
    print_formula(out, *f);
  }
  if (want_oracle) {
    o = oracle_max_violation(rho, spec, cfg);
    print_oracle(out, *o);
  }
  if (f && o) out << "discrepancy: " << fmt("%.3e", std::abs(f->value - o->value)) << '\n';
  return kExitOk;
}

int cmd_scan(const std::string& family_text, const std::string& op_text, int points, const std::string& out_path,
             const OptimizerConfig& cfg, std::ostream& out) {
  const StateFamily family = parse_family(family_text);
  const BellOperatorSpec spec = BellOperatorSpec::parse(op_text);
  if (points < 2) throw ParseError("--points must be >= 2");
  if (spec.kind != OperatorKind::recursive)
    throw IncompatibleError("scan evaluates the closed-form maximum; operator must be recursive");
  const int family_qubits = family_state(family, 0.0).n_qubits();
  if (spec.n_qubits != family_qubits)
    throw IncompatibleError("family " + std::string(family_name(family)) + " has " + std::to_string(family_qubits) +
                            " qubits, operator acts on " + std::to_string(spec.n_qubits));

  std::ofstream csv(out_path);
  if (!csv) throw std::ios_base::failure("cannot write " + out_path);
  const auto xs = unit_grid(points);
  const auto result = sweep(family, spec, cfg, xs);
  csv << "x,f\n";
  for (const auto& p : result) csv << fmt("%.10g", p.x) << ',' << fmt("%.10g", p.value) << '\n';
  csv.close();
  if (!csv) throw std::ios_base::failure("write failed for " + out_path);

  const auto cross = family_crossings(family, spec, cfg, result);
  out << "wrote " << result.size() << " points to " << out_path << '\n';
  out << "crossings:";
  if (cross.empty()) out << " none";
  for (std::size_t i = 0; i < cross.size(); ++i) out << (i ? ", " : " ") << fmt("%.4f", cross[i]);
  out << '\n';
  return kExitOk;
}

void write_tensor(std::ostream& os, const CorrelationTensor& t) {
  const int n = t.n_qubits();
  char buf[64];
  for (std::size_t f = 0; f < t.size(); ++f) {
    for (int q = 0; q < n; ++q) os << ((f >> (2 * (n - 1 - q))) & 3U) << ' ';
    const double v = t[f] == 0.0 ? 0.0 : t[f];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.17g", std::ldexp(t[0], n));
  os << "# check: 2^N * T(0,...,0) = " << buf << '\n';
}

int cmd_tensor(const std::string& state_text, const std::string& out_path, const OptimizerConfig& cfg,
               std::ostream& out) {
  const DensityMatrix rho = parse_state_spec(state_text);
  const CorrelationTensor t = correlation_tensor(rho, cfg.exec);
  if (out_path.empty() || out_path == "-") {
    write_tensor(out, t);
    return kExitOk;
  }
  std::ofstream os(out_path);
  if (!os) throw std::ios_base::failure("cannot write " + out_path);
  write_tensor(os, t);
  os.close();
  if (!os) throw std::ios_base::failure("write failed for " + out_path);
  return kExitOk;
}

int cmd_audit(int n, int samples, std::uint64_t seed, double budget, double separable_margin,
              const OptimizerConfig& base, std::ostream& out, std::ostream& err) {
  if (n != 3 && n != 4) throw ValidationError("parameter", "audit supports n = 3 or 4");
  if (samples < 1) throw ValidationError("parameter", "samples must be >= 1");
  OptimizerConfig cfg = base;
  std::vector<long> ks;
  if (n == 3) {
    ks = {1, 2, 3};
  } else {
    ks = {12};
  }
  double max_gap = 0.0;
  double max_separable = 0.0;
  for (int i = 0; i < samples; ++i) {
    const DensityMatrix rho = random_mixed_state(n, stream_seed(seed, 2 * static_cast<std::uint64_t>(i)));
    const DensityMatrix sep =
        random_separable_state(n, 1 + i % 3, stream_seed(seed, 2 * static_cast<std::uint64_t>(i) + 1));
    for (long k : ks) {
      const auto spec = BellOperatorSpec::recursive(n, k);
      cfg.seed = stream_seed(seed, 1000003ULL * static_cast<std::uint64_t>(i) + static_cast<std::uint64_t>(k));
      const double fv = max_violation_formula(rho, spec, cfg).value;
      const double ov = oracle_max_violation(rho, spec, cfg).value;
      max_gap = std::max(max_gap, std::abs(fv - ov));
      max_separable = std::max(max_separable, oracle_max_violation(sep, spec, cfg).value);
    }
  }
  const bool gap_ok = max_gap <= budget;
  const bool sep_ok = max_separable <= 1.0 + separable_margin;
  out << "audit: n=" << n << " samples=" << samples << " seed=" << seed << " restarts=" << cfg.restarts << '\n';
  out << "max formula-oracle discrepancy: " << fmt("%.3e", max_gap) << " (budget " << fmt("%g", budget) << ") "
      << (gap_ok ? "PASS" : "FAIL") << '\n';
  out << "max separable-state value: " << fmt("%.6f", max_separable) << " (bound "
      << fmt("%.6g", 1.0 + separable_margin) << ") " << (sep_ok ? "PASS" : "FAIL") << '\n';
  out << "result: " << (gap_ok && sep_ok ? "PASS" : "FAIL") << '\n';
  if (gap_ok && sep_ok) return kExitOk;
  err << "error:audit: " << (gap_ok ? "separable-state bound exceeded" : "formula-oracle discrepancy over budget") << '\n';
  return kExitAudit;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-qubit Bell operators: correlation tensors and maximal violations"};
  app.require_subcommand(1);

  OptimizerConfig cfg;
  bool serial = false;
  std::string state_text, op_text, method = "formula", family_text, out_path;
  int points = 101;
  int audit_n = 3, samples = 50;
  double budget = 1e-3, separable_margin = 1e-4;

  auto* violation = app.add_subcommand("violation", "Maximal mean value of one operator on one state");
  violation->add_option("--state", state_text, "State spec")->required();
  violation->add_option("--operator", op_text, "Operator spec")->required();
  violation->add_option("--method", method, "formula, oracle or both")
      ->check(CLI::IsMember({"formula", "oracle", "both"}))
      ->capture_default_str();
  add_optimizer_flags(violation, cfg, serial);

  auto* scan = app.add_subcommand("scan", "Sweep a state family over x in [0, 1] and write CSV");
  scan->add_option("--family", family_text, "w-ghz-mix or w4-white-noise")->required();
  scan->add_option("--operator", op_text, "Recursive operator spec")->required();
  scan->add_option("--points", points, "Number of sweep points")->capture_default_str();
  scan->add_option("--out", out_path, "CSV output path")->required();
  add_optimizer_flags(scan, cfg, serial);

  auto* tensor = app.add_subcommand("tensor", "Dump the Pauli correlation tensor");
  tensor->add_option("--state", state_text, "State spec")->required();
  tensor->add_option("--out", out_path, "Output path (default stdout)");
  add_optimizer_flags(tensor, cfg, serial);

  auto* audit = app.add_subcommand("audit", "Formula-vs-oracle agreement and separable-bound suites");
  audit->add_option("--n", audit_n, "Qubit count (3 or 4)")->capture_default_str();
  audit->add_option("--samples", samples, "Random states per suite")->capture_default_str();
  audit->add_option("--budget", budget, "Allowed formula-oracle discrepancy")->capture_default_str();
  audit->add_option("--separable-margin", separable_margin, "Allowed excess over 1 on separable states")
      ->capture_default_str();
  add_optimizer_flags(audit, cfg, serial);
  audit->get_option("--restarts")->default_val(32);

  std::vector<const char*> argv{"bellviol"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error:parse: " << e.what() << '\n';
    return kExitParse;
  }

  cfg.exec = serial ? Execution::serial : Execution::parallel;
  try {
    cfg.check();
    if (violation->parsed()) return cmd_violation(state_text, op_text, method, cfg, out);
    if (scan->parsed()) return cmd_scan(family_text, op_text, points, out_path, cfg, out);
    if (tensor->parsed()) return cmd_tensor(state_text, out_path, cfg, out);
    if (audit->parsed()) return cmd_audit(audit_n, samples, cfg.seed, budget, separable_margin, cfg, out, err);
  } catch (const ParseError& e) {
    err << "error:parse: " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "error:validation: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IncompatibleError& e) {
    err << "error:incompatible: " << e.what() << '\n';
    return kExitIncompatible;
  } catch (const std::ios_base::failure& e) {
    err << "error:io: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error:validation: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitParse;
}

}  // namespace bellviol
