#pragma once

// Batch job specifications: strict JSON in, deterministic JSON/CSV reports
// out. Rationals cross this boundary as exact strings ("3", "p/q", "0.5");
// floating-point numbers appear only in outputs. Unknown fields are rejected
// so that typos fail loudly instead of silently changing a run.

#include <chrono>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dforge/arith.hpp"
#include "dforge/builtins.hpp"
#include "dforge/error.hpp"
#include "dforge/independence.hpp"
#include "dforge/kernel.hpp"
#include "dforge/series.hpp"

namespace dforge {

using nlohmann::json;

struct JobSpec {
  std::string command;
  json raw;  // echoed into the report
  std::map<std::string, ArithFunc> functions;
  Kernel kernel;
  json params;
  std::string out_report;
  std::string out_csv;
};

struct RunReport {
  json report;
  int exit_code = 0;   // 0 ok, 2 negative verdict; errors are thrown
  std::string csv;     // empty when the command has no tabular output
};

namespace jobdetail {

inline void check_fields(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(Errc::parse_error, where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (allowed.find(key) == allowed.end())
      fail(Errc::parse_error, "unknown field '" + key + "' in " + where);
  }
}

inline const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(Errc::parse_error, where + " requires field '" + key + "'");
  return *it;
}

inline Rational rational_field(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (!v.is_string())
    fail(Errc::bad_rational, where + " must be an exact rational string like \"3/4\"");
  return Rational::from_string(v.get<std::string>());
}

inline uint64_t uint_field(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    fail(Errc::parse_error, where + " must be a nonnegative integer");
  return v.get<uint64_t>();
}

inline std::complex<double> complex_field(const json& v, const std::string& where) {
  if (v.is_string() || v.is_number_integer()) {
    return {rational_field(v, where).to_double(), 0.0};
  }
  if (v.is_object()) {
    check_fields(v, where, {"re", "im"});
    double re = rational_field(require(v, "re", where), where + ".re").to_double();
    double im = v.contains("im") ? rational_field(v["im"], where + ".im").to_double() : 0.0;
    return {re, im};
  }
  fail(Errc::parse_error, where + " must be a rational string or {re, im} object");
}

inline ArithFunc parse_function_def(const std::string& name, const json& def) {
  if (def.is_string()) {
    return lookup_builtin(def.get<std::string>());
  }
  if (def.is_object()) {
    check_fields(def, "functions." + name, {"kind", "values", "growth_k"});
    std::string kind = require(def, "kind", "functions." + name).get<std::string>();
    if (kind != "table")
      fail(Errc::parse_error, "functions." + name + ".kind must be \"table\"");
    const json& vals = require(def, "values", "functions." + name);
    if (!vals.is_array()) fail(Errc::parse_error, "functions." + name + ".values must be an array");
    std::vector<GaussRational> values;
    for (const auto& v : vals)
      values.emplace_back(rational_field(v, "functions." + name + ".values[]"));
    double growth_k = def.contains("growth_k") ? def["growth_k"].get<double>() : 0.0;
    return make_table_func(name, std::move(values), growth_k);
  }
  fail(Errc::parse_error, "functions." + name + " must be a builtin name or a table object");
}

inline Kernel parse_kernel(const json& spec) {
  check_fields(spec, "kernel", {"kind", "beta", "lambda", "c"});
  std::string kind = require(spec, "kind", "kernel").get<std::string>();
  if (kind == "classical") return classical_kernel();
  if (kind == "power") {
    double beta = require(spec, "beta", "kernel").get<double>();
    return power_kernel(beta);
  }
  if (kind == "linear") return linear_kernel();
  if (kind == "table") {
    const json& lam = require(spec, "lambda", "kernel");
    if (!lam.is_array() || lam.size() < 2)
      fail(Errc::parse_error, "kernel.lambda must be an array of at least 2 values");
    std::vector<double> values;
    for (const auto& v : lam) values.push_back(v.get<double>());
    double c = require(spec, "c", "kernel").get<double>();
    return table_kernel(std::move(values), c);
  }
  fail(Errc::parse_error, "kernel.kind must be one of classical, power, linear, table");
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace jobdetail

inline const std::set<std::string>& known_commands() {
  static const std::set<std::string> cmds = {"eval",  "convolve", "inverse", "derive", "peel",
                                             "rank",  "equiv",    "probe",   "residual"};
  return cmds;
}

inline JobSpec parse_job(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  jobdetail::check_fields(doc, "job", {"command", "functions", "kernel", "params", "output"});
  JobSpec spec;
  spec.raw = doc;
  spec.command = jobdetail::require(doc, "command", "job").get<std::string>();
  if (known_commands().find(spec.command) == known_commands().end())
    fail(Errc::parse_error, "unknown command '" + spec.command + "'");
  if (doc.contains("functions")) {
    if (!doc["functions"].is_object()) fail(Errc::parse_error, "functions must be an object");
    for (const auto& [name, def] : doc["functions"].items())
      spec.functions.emplace(name, jobdetail::parse_function_def(name, def));
  }
  spec.kernel = doc.contains("kernel") ? jobdetail::parse_kernel(doc["kernel"]) : classical_kernel();
  spec.params = doc.contains("params") ? doc["params"] : json::object();
  if (doc.contains("output")) {
    jobdetail::check_fields(doc["output"], "output", {"report", "csv"});
    if (doc["output"].contains("report")) spec.out_report = doc["output"]["report"].get<std::string>();
    if (doc["output"].contains("csv")) spec.out_csv = doc["output"]["csv"].get<std::string>();
  }
  return spec;
}

namespace jobdetail {

inline ArithFunc resolve_function(const JobSpec& spec, const std::string& name) {
  auto it = spec.functions.find(name);
  if (it != spec.functions.end()) return it->second;
  return lookup_builtin(name);  // throws UnknownFunction for strangers
}

inline ArithFunc single_function(const JobSpec& spec, const std::string& key) {
  if (spec.params.contains(key)) return resolve_function(spec, spec.params[key].get<std::string>());
  if (spec.functions.size() == 1) return spec.functions.begin()->second;
  fail(Errc::parse_error,
       "params." + key + " is required when the job defines several functions");
}

inline json series_value_json(const SeriesValue& v) {
  return json{{"re_value", v.value.real()},
              {"im_value", v.value.imag()},
              {"tail_bound", v.tail_bound},
              {"n_truncation", v.truncation_N},
              {"abscissa", v.abscissa_kprime}};
}

}  // namespace jobdetail

// Executes a parsed job. Throwing errors signal "could not run" (CLI exit 1);
// a returned exit_code of 2 means the computation ran and produced a negative
// verdict (rank deficit, nonempty exceptional set, residual above its bound).
inline RunReport run_job(const JobSpec& spec, int threads = 1, bool deterministic = false) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  if (deterministic) threads = 1;
  EvalOptions opts;
  opts.threads = threads;

  uint64_t audit_horizon = 10000;
  if (spec.params.contains("audit_horizon"))
    audit_horizon = jobdetail::uint_field(spec.params["audit_horizon"], "params.audit_horizon");

  json results;
  json certificates;
  std::string csv;
  int exit_code = 0;

  auto record_function_cert = [&](const ArithFunc& f) {
    certificates["functions"][f.name()] = {
        {"growth_k", f.growth_k()},
        {"constant", f.growth_audit().constant},
        {"horizon", f.growth_audit().horizon},
    };
  };
  certificates["kernel"] = {
      {"kind", spec.kernel.kind_name()},
      {"decay_c", spec.kernel.decay_c()},
      {"audit_horizon", spec.kernel.audit_horizon()},
      {"monoid_morphism", spec.kernel.is_monoid_morphism()},
  };

  const std::string& cmd = spec.command;
  if (cmd == "eval") {
    jobdetail::check_fields(spec.params, "params", {"function", "z", "N", "tol", "audit_horizon"});
    ArithFunc f = jobdetail::single_function(spec, "function");
    const json& zlist = jobdetail::require(spec.params, "z", "params");
    if (!zlist.is_array() || zlist.empty()) fail(Errc::parse_error, "params.z must be a nonempty array");
    std::vector<std::complex<double>> zs;
    for (const auto& zv : zlist) zs.push_back(jobdetail::complex_field(zv, "params.z[]"));
    if (!f.growth_audited()) audit_growth(f, audit_horizon, zs);
    record_function_cert(f);
    csv = "n_truncation,re_z,im_z,re_value,im_value,tail_bound\n";
    results["rows"] = json::array();
    for (const auto& z : zs) {
      SeriesValue v;
      if (spec.params.contains("tol")) {
        double tol = jobdetail::rational_field(spec.params["tol"], "params.tol").to_double();
        v = evaluate_to_tolerance(f, spec.kernel, z, tol, opts);
      } else if (spec.params.contains("N")) {
        v = evaluate(f, spec.kernel, z, jobdetail::uint_field(spec.params["N"], "params.N"), opts);
      } else {
        fail(Errc::parse_error, "eval needs params.N or params.tol");
      }
      json row = jobdetail::series_value_json(v);
      row["re_z"] = z.real();
      row["im_z"] = z.imag();
      results["rows"].push_back(row);
      csv += std::to_string(v.truncation_N) + "," + jobdetail::format_double(z.real()) + "," +
             jobdetail::format_double(z.imag()) + "," + jobdetail::format_double(v.value.real()) +
             "," + jobdetail::format_double(v.value.imag()) + "," +
             jobdetail::format_double(v.tail_bound) + "\n";
    }
  } else if (cmd == "convolve" || cmd == "inverse" || cmd == "derive") {
    ArithFunc target;
    if (cmd == "convolve") {
      jobdetail::check_fields(spec.params, "params", {"lhs", "rhs", "n_max", "audit_horizon"});
      ArithFunc lhs = jobdetail::resolve_function(
          spec, jobdetail::require(spec.params, "lhs", "params").get<std::string>());
      ArithFunc rhs = jobdetail::resolve_function(
          spec, jobdetail::require(spec.params, "rhs", "params").get<std::string>());
      target = convolve(lhs, rhs);
    } else if (cmd == "inverse") {
      jobdetail::check_fields(spec.params, "params", {"function", "n_max", "audit_horizon"});
      target = dirichlet_inverse(jobdetail::single_function(spec, "function"));
    } else {
      jobdetail::check_fields(spec.params, "params", {"function", "j", "n_max", "audit_horizon"});
      uint64_t j = jobdetail::uint_field(jobdetail::require(spec.params, "j", "params"), "params.j");
      target = derivative(jobdetail::single_function(spec, "function"), static_cast<uint32_t>(j));
    }
    uint64_t n_max =
        jobdetail::uint_field(jobdetail::require(spec.params, "n_max", "params"), "params.n_max");
    if (n_max < 1) fail(Errc::precondition, "params.n_max must be >= 1");
    results["name"] = target.name();
    results["values"] = json::array();
    csv = "n,value\n";
    for (uint64_t n = 1; n <= n_max; ++n) {
      std::string v = target.value(n).to_string();
      results["values"].push_back(json{{"n", n}, {"value", v}});
      csv += std::to_string(n) + ",\"" + v + "\"\n";
    }
  } else if (cmd == "peel") {
    jobdetail::check_fields(spec.params, "params",
                            {"function", "n_max", "schedule", "integer_mode", "tolerance",
                             "oracle_N", "audit_horizon"});
    ArithFunc f = jobdetail::single_function(spec, "function");
    uint64_t n_max =
        jobdetail::uint_field(jobdetail::require(spec.params, "n_max", "params"), "params.n_max");
    if (!f.growth_audited()) audit_growth(f, audit_horizon);
    record_function_cert(f);
    GrowthCert cert{f.growth_audit().constant, f.growth_k()};
    PeelOptions popts;
    if (spec.params.contains("integer_mode")) popts.integer_mode = spec.params["integer_mode"].get<bool>();
    if (spec.params.contains("tolerance"))
      popts.tolerance = jobdetail::rational_field(spec.params["tolerance"], "params.tolerance").to_double();
    uint64_t oracle_N = 64;
    if (spec.params.contains("oracle_N"))
      oracle_N = jobdetail::uint_field(spec.params["oracle_N"], "params.oracle_N");
    oracle_N = std::max(oracle_N, 4 * n_max);
    PeelReport rep;
    if (spec.kernel.kind() == KernelKind::classical) {
      std::vector<uint64_t> schedule = default_peel_schedule();
      if (spec.params.contains("schedule")) {
        schedule.clear();
        for (const auto& xv : spec.params["schedule"])
          schedule.push_back(jobdetail::uint_field(xv, "params.schedule[]"));
      }
      auto oracle = [&](uint64_t x) {
        GaussRational acc;
        for (uint64_t n = 1; n <= oracle_N; ++n) {
          PolyCoeff v = f.value(n);
          if (v.is_zero()) continue;
          Rational nx(BigInt(1), BigInt::pow(BigInt(static_cast<long long>(n)), x));
          acc += v.scalar() * GaussRational(nx);
        }
        return acc;
      };
      auto oracle_tail = [&](uint64_t x) {
        return tail_bound(cert.C, cert.k, 1.0, 1.0, static_cast<double>(x), oracle_N);
      };
      rep = peel(oracle, spec.kernel, n_max, schedule, cert, popts, oracle_tail);
    } else {
      std::vector<double> schedule;
      if (spec.params.contains("schedule")) {
        for (const auto& xv : spec.params["schedule"]) schedule.push_back(xv.get<double>());
      } else {
        for (uint64_t x : default_peel_schedule()) schedule.push_back(static_cast<double>(x));
      }
      auto oracle = [&](double x) {
        std::complex<double> acc(0.0, 0.0);
        for (uint64_t n = 1; n <= oracle_N; ++n)
          acc += f.value_at(n, {x, 0.0}) * spec.kernel.eval(n, {x, 0.0});
        return acc;
      };
      rep = peel(oracle, spec.kernel, n_max, schedule, cert, popts);
    }
    results["rows"] = json::array();
    csv = "n,recovered_re,recovered_im,error_majorant,rounded_integer\n";
    for (const auto& row : rep.rows) {
      json r{{"n", row.n},
             {"recovered_re", row.recovered.real()},
             {"recovered_im", row.recovered.imag()},
             {"error_majorant", row.majorant},
             {"x_used", row.x_used}};
      std::string rounded;
      if (row.rounded) {
        rounded = std::to_string(row.rounded->first);
        if (row.rounded->second != 0) rounded += (row.rounded->second > 0 ? "+" : "") +
                                                 std::to_string(row.rounded->second) + "*i";
        r["rounded"] = rounded;
      }
      results["rows"].push_back(r);
      csv += std::to_string(row.n) + "," + jobdetail::format_double(row.recovered.real()) + "," +
             jobdetail::format_double(row.recovered.imag()) + "," +
             jobdetail::format_double(row.majorant) + "," + rounded + "\n";
    }
  } else if (cmd == "rank") {
    jobdetail::check_fields(spec.params, "params", {"functions", "mode", "m", "D", "N", "audit_horizon"});
    const json& fl = jobdetail::require(spec.params, "functions", "params");
    if (!fl.is_array() || fl.empty()) fail(Errc::parse_error, "params.functions must be a nonempty array");
    std::vector<ArithFunc> funcs;
    for (const auto& nv : fl) funcs.push_back(jobdetail::resolve_function(spec, nv.get<std::string>()));
    uint64_t N = jobdetail::uint_field(jobdetail::require(spec.params, "N", "params"), "params.N");
    std::string mode = spec.params.contains("mode") ? spec.params["mode"].get<std::string>() : "linear";
    IndependenceReport rep;
    CoeffMatrix matrix;
    if (mode == "linear") {
      uint64_t m = spec.params.contains("m") ? jobdetail::uint_field(spec.params["m"], "params.m") : 0;
      matrix = coefficient_matrix(funcs, static_cast<uint32_t>(m), N);
      rep = rank_exact(matrix, static_cast<int>(funcs.size() * (m + 1)));
    } else if (mode == "algebraic") {
      uint64_t D = jobdetail::uint_field(jobdetail::require(spec.params, "D", "params"), "params.D");
      std::vector<ArithFunc> family = monomial_family(funcs, static_cast<uint32_t>(D));
      if (N < family.size())
        fail(Errc::precondition, "params.N must be at least the monomial family size " +
                                     std::to_string(family.size()));
      matrix = coefficient_matrix(family, 0, N);
      rep = rank_exact(matrix, static_cast<int>(family.size()));
    } else {
      fail(Errc::parse_error, "params.mode must be \"linear\" or \"algebraic\"");
    }
    int numeric = rank_numeric(matrix);
    results["rank"] = rep.rank;
    results["expected"] = rep.expected;
    results["horizon"] = rep.horizon_N;
    results["verdict"] = rep.verdict();
    results["pivot_columns"] = rep.pivot_columns;
    results["rank_numeric"] = numeric;
    results["numeric_agrees"] = numeric == rep.rank;
    results["row_labels"] = json::array();
    for (const auto& lab : rep.row_labels)
      results["row_labels"].push_back(json{{"function", lab.func_name}, {"derivative_order", lab.derivative_order}});
    if (!rep.certified) exit_code = 2;
  } else if (cmd == "equiv") {
    jobdetail::check_fields(spec.params, "params", {"lhs", "rhs", "P", "J", "audit_horizon"});
    ArithFunc lhs = jobdetail::resolve_function(
        spec, jobdetail::require(spec.params, "lhs", "params").get<std::string>());
    ArithFunc rhs = jobdetail::resolve_function(
        spec, jobdetail::require(spec.params, "rhs", "params").get<std::string>());
    uint64_t P = jobdetail::uint_field(jobdetail::require(spec.params, "P", "params"), "params.P");
    uint64_t J = jobdetail::uint_field(jobdetail::require(spec.params, "J", "params"), "params.J");
    EquivalenceVerdict v = equivalent(lhs, rhs, P, static_cast<uint32_t>(J));
    results["exceptional_primes"] = v.exceptional_primes;
    results["horizon_p"] = v.horizon_p;
    results["horizon_j"] = v.horizon_j;
    if (!v.exceptional_primes.empty()) exit_code = 2;
  } else if (cmd == "probe") {
    jobdetail::check_fields(spec.params, "params", {"function", "grid", "tol", "audit_horizon"});
    ArithFunc f = jobdetail::single_function(spec, "function");
    if (!f.growth_audited()) audit_growth(f, audit_horizon);
    record_function_cert(f);
    std::vector<double> grid;
    if (spec.params.contains("grid")) {
      for (const auto& xv : spec.params["grid"]) grid.push_back(xv.get<double>());
    }
    double tol = 1e-9;
    if (spec.params.contains("tol"))
      tol = jobdetail::rational_field(spec.params["tol"], "params.tol").to_double();
    Kernel kernel = spec.kernel;
    auto target = [&](double x) {
      return evaluate_to_tolerance(f, kernel, {x, 0.0}, tol, opts).value;
    };
    DecayProbeReport rep = decay_probe(target, grid);
    results["slope_estimate"] = rep.slope_estimate;
    results["verdict"] = decay_verdict_name(rep.verdict);
    results["overflow_seen"] = rep.overflow_seen;
    results["max_fit_residual"] = rep.max_fit_residual;
    results["samples"] = json::array();
    for (const auto& [x, y] : rep.samples) results["samples"].push_back(json::array({x, y}));
  } else if (cmd == "residual") {
    jobdetail::check_fields(spec.params, "params", {"lhs", "rhs", "z", "tol", "audit_horizon"});
    ArithFunc lhs = jobdetail::resolve_function(
        spec, jobdetail::require(spec.params, "lhs", "params").get<std::string>());
    ArithFunc rhs = jobdetail::resolve_function(
        spec, jobdetail::require(spec.params, "rhs", "params").get<std::string>());
    std::complex<double> z =
        jobdetail::complex_field(jobdetail::require(spec.params, "z", "params"), "params.z");
    double tol =
        jobdetail::rational_field(jobdetail::require(spec.params, "tol", "params"), "params.tol")
            .to_double();
    ResidualResult r = homomorphism_residual(lhs, rhs, spec.kernel, z, tol, opts, audit_horizon);
    record_function_cert(lhs);
    record_function_cert(rhs);
    results["residual"] = r.residual;
    results["bound"] = r.bound;
    results["within_bound"] = r.residual <= r.bound;
    results["f_product"] = jobdetail::series_value_json(r.f_product);
    results["f_lhs"] = jobdetail::series_value_json(r.f_lhs);
    results["f_rhs"] = jobdetail::series_value_json(r.f_rhs);
    if (r.residual > r.bound) exit_code = 2;
  }

  auto t1 = clock::now();
  RunReport out;
  out.report = json{{"job", spec.raw},
                    {"results", results},
                    {"certificates", certificates},
                    {"exit_code", exit_code},
                    {"wall_time_ms",
                     std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()}};
  out.exit_code = exit_code;
  out.csv = csv;
  return out;
}

}  // namespace dforge
