#include "hardy/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "hardy/green_ball.hpp"
#include "hardy/probes.hpp"
#include "hardy/radial_solver.hpp"
#include "hardy/report.hpp"
#include "hardy/verifier.hpp"

#ifndef HARDY_VERSION
#define HARDY_VERSION "0.0.0"
#endif

namespace hardy {

const char* tool_version() { return HARDY_VERSION; }

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, fmt::format("{}: '{}' is not a number", what, token));
  }
}

RadialFunction table_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, fmt::format("cannot open source table '{}'", path));
  std::vector<double> r;
  std::vector<double> f;
  for (std::string line; std::getline(in, line);) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0;
    double b = 0.0;
    if (!(row >> a >> b)) throw Error(ErrorKind::ConfigError, fmt::format("bad table row '{}' in '{}'", line, path));
    if (!r.empty() && !(a > r.back())) {
      throw Error(ErrorKind::ConfigError, fmt::format("table radii must increase strictly in '{}'", path));
    }
    r.push_back(a);
    f.push_back(b);
  }
  if (r.size() < 2) throw Error(ErrorKind::ConfigError, fmt::format("table '{}' needs at least two rows", path));
  const double support = r.back();
  return RadialFunction::from_values(
             [r, f](double x) {
               if (x <= r.front()) return f.front();
               const auto it = std::upper_bound(r.begin(), r.end(), x);
               if (it == r.end()) return f.back();
               const std::size_t j = static_cast<std::size_t>(it - r.begin());
               const double w = (x - r[j - 1]) / (r[j] - r[j - 1]);
               return (1.0 - w) * f[j - 1] + w * f[j];
             },
             support)
      .with_breakpoints(r);
}

}  // namespace

RadialFunction parse_source(const std::string& spec, const HardyParams& p) {
  const auto colon = spec.find(':');
  const std::string name = trim(spec.substr(0, colon));
  const std::string arg = colon == std::string::npos ? std::string{} : trim(spec.substr(colon + 1));
  if (name == "zero") return RadialFunction::zero();
  if (name == "const") return RadialFunction::constant(arg.empty() ? 1.0 : to_real(arg, "const"));
  if (name == "power" || name == "abspower") {
    if (arg.empty()) throw Error(ErrorKind::ConfigError, fmt::format("{} needs an exponent", name));
    const double e = to_real(arg, name.c_str()) + (name == "power" ? p.tau_minus() - 2.0 : 0.0);
    return RadialFunction::from_generic([e](auto r) {
      using std::pow;
      return pow(r, e);
    });
  }
  if (name == "sin") {
    const double w = arg.empty() ? 1.0 : to_real(arg, "sin");
    return RadialFunction::from_generic([w](auto r) {
      using std::sin;
      return sin(w * r);
    });
  }
  if (name == "table") return table_source(arg);
  throw Error(ErrorKind::UnknownKind,
              fmt::format("unknown source '{}'; expected zero, const, power, abspower, sin or table", spec));
}

std::vector<double> parse_mu_list(const std::string& spec, int dim) {
  const double mu0 = -0.25 * (dim - 2) * (dim - 2);
  std::vector<double> out;
  auto add = [&](double v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto& token : split(spec, ',')) {
    if (token == "grid") {
      for (double v : default_mu_grid(dim)) add(v);
    } else if (token.starts_with("mu0")) {
      add(mu0 + (token.size() > 3 ? to_real(token.substr(3), "mu") : 0.0));
    } else {
      add(to_real(token, "mu"));
    }
  }
  if (out.empty()) throw Error(ErrorKind::ConfigError, "empty mu list");
  return out;
}

std::vector<double> parse_real_list(const std::string& spec) {
  std::vector<double> out;
  for (const auto& token : split(spec, ',')) out.push_back(to_real(token, "list"));
  if (out.empty()) throw Error(ErrorKind::ConfigError, "empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  for (const auto& token : split(spec, ',')) {
    const double v = to_real(token, "integer list");
    if (v != std::round(v)) throw Error(ErrorKind::ConfigError, fmt::format("'{}' is not an integer", token));
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw Error(ErrorKind::ConfigError, "empty list");
  return out;
}

namespace {

struct RunConfig {
  std::vector<std::string> dim{"3"};
  std::vector<std::string> mu{"2"};
  double radius = 1.0;
  std::string source = "const";
  double k = 0.0;
  double x0 = 0.5;
  int n_max = 256;
  double a0 = 1.0;
  std::vector<std::string> eps{"1e-2", "1e-3", "1e-4"};
  double r_max = 1.0;
  double r_min = 1e-12;
  int samples = 1000;
  std::uint64_t seed = 20240611;
  std::vector<std::string> test_functions{"all"};
  bool finite_difference = false;
  double tol = 1e-6;
  double eigen_tol = 5e-3;
  double ratio_tol = 1e-3;
  int points = 20;
  std::string output = "-";
  std::string format = "csv";
};

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

struct Resolved {
  std::vector<int> dims;
  std::vector<std::vector<double>> mus;  // per dimension
};

Resolved resolve(const RunConfig& cfg) {
  Resolved r;
  r.dims = parse_int_list(join(cfg.dim));
  for (int d : r.dims) {
    if (d < 2) throw Error(ErrorKind::InvalidDimension, fmt::format("dimension {} is below 2", d));
    r.mus.push_back(parse_mu_list(join(cfg.mu), d));
  }
  return r;
}

std::string real_list(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : ",") + fmt::format("{}", x);
  return out;
}

std::vector<std::pair<std::string, std::string>> config_pairs(const RunConfig& cfg, const Resolved& r) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string dims;
  for (int d : r.dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
  out.emplace_back("dim", dims);
  for (std::size_t i = 0; i < r.dims.size(); ++i) {
    out.emplace_back(r.dims.size() == 1 ? "mu" : fmt::format("mu[dim={}]", r.dims[i]), real_list(r.mus[i]));
  }
  out.emplace_back("radius", fmt::format("{}", cfg.radius));
  out.emplace_back("source", cfg.source);
  out.emplace_back("k", fmt::format("{}", cfg.k));
  out.emplace_back("x0", fmt::format("{}", cfg.x0));
  out.emplace_back("nmax", std::to_string(cfg.n_max));
  out.emplace_back("a0", fmt::format("{}", cfg.a0));
  out.emplace_back("eps", real_list(parse_real_list(join(cfg.eps))));
  out.emplace_back("rmax", fmt::format("{}", cfg.r_max));
  out.emplace_back("rmin", fmt::format("{}", cfg.r_min));
  out.emplace_back("samples", std::to_string(cfg.samples));
  out.emplace_back("seed", std::to_string(cfg.seed));
  out.emplace_back("xi", join(cfg.test_functions));
  out.emplace_back("fd", cfg.finite_difference ? "true" : "false");
  out.emplace_back("tol", fmt::format("{}", cfg.tol));
  out.emplace_back("eigen-tol", fmt::format("{}", cfg.eigen_tol));
  out.emplace_back("ratio-tol", fmt::format("{}", cfg.ratio_tol));
  out.emplace_back("points", std::to_string(cfg.points));
  return out;
}

HardyParams single_params(const Resolved& r) {
  if (r.dims.size() != 1 || r.mus.front().size() != 1) {
    throw Error(ErrorKind::ConfigError, "this command takes a single dimension and a single mu");
  }
  return derive_params(r.dims.front(), r.mus.front().front());
}

struct Outcome {
  Report report;
  int code = 0;
};

void mark(Outcome& o, int code, std::string message) {
  o.code = std::max(o.code, code);
  o.report.status = o.code == 0 ? "pass" : "violation";
  o.report.messages.push_back(std::move(message));
}

std::vector<TestFunction> library(const RunConfig& cfg) {
  auto all = default_library(cfg.radius);
  const auto names = split(join(cfg.test_functions), ',');
  if (names.size() == 1 && names.front() == "all") return all;
  std::vector<TestFunction> out;
  for (const auto& n : names) {
    const auto kind = parse_bump_kind(n);
    const auto it = std::find_if(all.begin(), all.end(), [&](const TestFunction& t) { return t.name == to_string(kind); });
    out.push_back(it != all.end() ? *it : bump_library(kind, cfg.radius));
  }
  return out;
}

Outcome cmd_verify(const RunConfig& cfg, const Resolved& r, int workers) {
  Outcome o;
  o.report.columns = {{"dim", CellType::Integer, ""},
                      {"mu", CellType::Real, ""},
                      {"regime", CellType::Text, ""},
                      {"identity", CellType::Text, "fundamental or green"},
                      {"test_function", CellType::Text, ""},
                      {"lhs", CellType::Real, "int u L*xi dmu"},
                      {"rhs", CellType::Real, "c_mu xi(0)"},
                      {"abs_residual", CellType::Real, ""},
                      {"rel_residual", CellType::Real, ""},
                      {"budget", CellType::Real, "quadrature error budget"},
                      {"within", CellType::Boolean, "rel_residual <= tol"}};
  std::vector<HardyParams> params;
  for (std::size_t i = 0; i < r.dims.size(); ++i) {
    for (double mu : r.mus[i]) params.push_back(derive_params(r.dims[i], mu));
  }
  const auto lib = library(cfg);
  VerifySpec spec;
  spec.finite_difference = cfg.finite_difference;
  spec.rel_tol = cfg.tol;
  const auto rows = ordered_map(params.size(), workers, [&](std::size_t i) {
    std::vector<std::pair<std::string, IdentityResidual>> out;
    for (const auto& xi : lib) {
      out.emplace_back("fundamental", verify_fundamental_identity(params[i], xi, spec));
      out.emplace_back("green", verify_green_identity(params[i], cfg.radius, xi, spec));
    }
    return out;
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      const auto& [identity, res] = rows[i][j];
      const auto& xi = lib[j / 2];
      const bool ok = res.within(spec);
      worst = std::max(worst, res.rel_residual);
      o.report.add_row({static_cast<long long>(p.dim()), p.mu(), std::string(to_string(p.regime())), identity, xi.name,
                        res.lhs, res.rhs, res.abs_residual, res.rel_residual, res.quadrature_error_budget, ok});
      if (res.violation(spec)) {
        mark(o, 1, fmt::format("{} identity violated for N={}, mu={}, {}: relative residual {:.3e} > {:.1e}", identity,
                               p.dim(), p.mu(), xi.name, res.rel_residual, spec.rel_tol));
      }
    }
  }
  o.report.note("rows", static_cast<long long>(o.report.rows.size()));
  o.report.note("max_rel_residual", worst);
  return o;
}

Outcome cmd_solve(const RunConfig& cfg, const Resolved& r) {
  Outcome o;
  o.report.columns = {{"r", CellType::Real, ""}, {"u", CellType::Real, ""}, {"u_over_phi", CellType::Real, "u / Phi_mu"}};
  const auto p = single_params(r);
  const auto f = parse_source(cfg.source, p);
  RadialSolution sol;
  try {
    sol = solve_radial_bvp(p, 0, f, cfg.radius, cfg.k);
  } catch (const NoSolutionError& e) {
    const auto& fit = e.fit();
    o.report.note("no_solution", true);
    o.report.note("divergence_model", std::string(to_string(fit.model)));
    o.report.note("divergence_rate", fit.rate);
    o.report.note("partial_sum", fit.partial_sum);
    o.report.note("closest_approach", fit.closest_approach);
    o.report.note("singular_endpoint", std::string(fit.at_origin ? "origin" : "boundary"));
    mark(o, 1, fmt::format("no solution for N={}, mu={}, f={}: {}", p.dim(), p.mu(), cfg.source, e.what()));
    return o;
  }
  if (cfg.points < 1) throw Error(ErrorKind::ConfigError, "points must be positive");
  for (int i = 1; i <= cfg.points; ++i) {
    const double x = cfg.radius * i / cfg.points;
    const double u = sol.profile(x);
    o.report.add_row({x, u, u / phi(p, x)});
  }
  const auto cls = classify_solution(p, sol, f);
  VerifySpec spec;
  spec.rel_tol = cfg.tol;
  const auto weak = verify_weak_solution(p, sol, f, cfg.k, default_library(cfg.radius), spec);
  double worst = 0.0;
  for (const auto& w : weak) {
    worst = std::max(worst, w.rel_residual);
    if (w.violation(spec)) {
      mark(o, 1, fmt::format("weak formulation violated for N={}, mu={}, {}: relative residual {:.3e}", p.dim(), p.mu(),
                             w.label, w.rel_residual));
    }
  }
  o.report.note("k", cfg.k);
  o.report.note("k_hat", cls.k_hat);
  o.report.note("k_error", cls.k_error);
  o.report.note("decomposition_residual", cls.decomposition_residual);
  o.report.note("ode_residual", sol.residual_norm);
  o.report.note("weak_max_rel_residual", worst);
  return o;
}

Outcome cmd_blowup(const RunConfig& cfg, const Resolved& r) {
  Outcome o;
  o.report.columns = {{"n", CellType::Integer, "inner radius 1/n"}, {"u_n_x0", CellType::Real, "u_n(x0)"}};
  const auto p = single_params(r);
  const auto f = parse_source(cfg.source, p);
  ExhaustionSeries s;
  try {
    s = nonexistence_probe(p, f, cfg.x0, cfg.n_max, cfg.radius);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ProbeFailure) throw;
    mark(o, 1, e.what());
    return o;
  }
  for (std::size_t i = 0; i < s.n.size(); ++i) o.report.add_row({static_cast<long long>(s.n[i]), s.values[i]});
  o.report.note("divergent_source", s.divergent_source);
  o.report.note("best_model", std::string(to_string(s.growth.best.model)));
  for (const auto& fit : s.growth.fits) {
    const std::string m = to_string(fit.model);
    o.report.note(m + "_offset", fit.offset);
    o.report.note(m + "_coefficient", fit.coefficient);
    o.report.note(m + "_exponent", fit.exponent);
    o.report.note(m + "_r_squared", fit.r_squared);
    o.report.note(m + "_aic", fit.aic);
  }
  o.report.note("limit", s.limit.value);
  o.report.note("limit_error", s.limit.error);
  return o;
}

Outcome cmd_eigen(const RunConfig& cfg, const Resolved& r, int workers) {
  Outcome o;
  o.report.columns = {{"eps", CellType::Real, "inner radius"},
                      {"lambda1", CellType::Real, ""},
                      {"oracle", CellType::Real, "((N-2)^2/4 + pi^2/ln^2 eps)/a0"},
                      {"rel_error", CellType::Real, ""}};
  if (r.dims.size() != 1) throw Error(ErrorKind::ConfigError, "probe eigen takes a single dimension");
  const int dim = r.dims.front();
  const auto eps = parse_real_list(join(cfg.eps));
  const auto lambda = ordered_map(eps.size(), workers, [&](std::size_t i) {
    return eigen_scan(dim, cfg.a0, std::span<const double>(&eps[i], 1)).lambda1.front();
  });
  const double hardy = 0.25 * (dim - 2) * (dim - 2) / cfg.a0;
  bool decreasing = true;
  bool above = true;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double L = std::log(eps[i]);
    const double oracle = (0.25 * (dim - 2) * (dim - 2) + std::numbers::pi * std::numbers::pi / (L * L)) / cfg.a0;
    const double err = std::abs(lambda[i] / oracle - 1.0);
    o.report.add_row({eps[i], lambda[i], oracle, err});
    if (err > cfg.eigen_tol) mark(o, 1, fmt::format("lambda1 at eps={} off the oracle by {:.3e}", eps[i], err));
    if (!(lambda[i] > hardy)) above = false;
    if (i > 0 && (eps[i] < eps[i - 1]) != (lambda[i] < lambda[i - 1])) decreasing = false;
  }
  o.report.note("hardy_constant", hardy);
  o.report.note("strictly_decreasing", decreasing);
  o.report.note("above_hardy", above);
  if (!decreasing) mark(o, 1, "lambda1 is not monotone in eps");
  if (!above) mark(o, 1, "lambda1 reached the Hardy constant");
  return o;
}

Outcome cmd_oscillation(const RunConfig& cfg, const Resolved& r) {
  Outcome o;
  o.report.columns = {{"index", CellType::Integer, "zero number, from the outside"},
                      {"radius", CellType::Real, ""},
                      {"ratio", CellType::Real, "previous radius / radius"},
                      {"rel_error", CellType::Real, "ratio vs exp(pi/sqrt(mu0-mu))"}};
  if (r.dims.size() != 1 || r.mus.front().size() != 1) {
    throw Error(ErrorKind::ConfigError, "probe oscillation takes a single dimension and a single mu");
  }
  const auto rep = sub_hardy_probe(r.dims.front(), r.mus.front().front(), cfg.r_max, cfg.r_min);
  for (std::size_t i = 0; i < rep.zero_locations.size(); ++i) {
    Cell ratio;
    Cell err;
    if (i > 0) {
      const double q = rep.consecutive_ratios[i - 1];
      ratio = q;
      err = std::abs(q / rep.predicted_ratio - 1.0);
      if (i + 1 >= 8 && std::get<double>(err) > cfg.ratio_tol) {
        mark(o, 1, fmt::format("ratio at zero {} off by {:.3e}", i + 1, std::get<double>(err)));
      }
    }
    o.report.add_row({static_cast<long long>(i + 1), rep.zero_locations[i], ratio, err});
  }
  o.report.note("predicted_ratio", rep.predicted_ratio);
  o.report.note("zeros", static_cast<long long>(rep.zero_locations.size()));
  if (rep.zero_locations.size() < 8) mark(o, 1, "fewer than 8 zeros in (rmin, rmax)");
  return o;
}

Outcome cmd_green(const RunConfig& cfg, const Resolved& r, int workers) {
  Outcome o;
  o.report.columns = {{"mu", CellType::Real, ""},
                      {"index", CellType::Integer, ""},
                      {"r_x", CellType::Real, ""},
                      {"r_y", CellType::Real, ""},
                      {"distance", CellType::Real, ""},
                      {"cos_angle", CellType::Real, ""},
                      {"kernel", CellType::Real, "Lebesgue kernel"},
                      {"upper", CellType::Real, "envelope"},
                      {"lower", CellType::Real, "envelope"},
                      {"kernel_over_upper", CellType::Real, ""},
                      {"kernel_over_lower", CellType::Real, ""}};
  if (r.dims.size() != 1) throw Error(ErrorKind::ConfigError, "green takes a single dimension");
  const int dim = r.dims.front();
  const auto& mus = r.mus.front();
  BoundOptions opts;
  opts.seed = cfg.seed;
  const auto reports = ordered_map(mus.size(), workers, [&](std::size_t i) {
    GreenKernelSeries gk(derive_params(dim, mus[i]), cfg.radius);
    return check_kernel_bounds(gk, cfg.samples, opts);
  });
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const auto& rep = reports[i];
    for (std::size_t j = 0; j < rep.samples.size(); ++j) {
      const auto& s = rep.samples[j];
      const double rx = s.x.norm();
      const double ry = s.y.norm();
      o.report.add_row({mus[i], static_cast<long long>(j), rx, ry, (s.x - s.y).norm(), s.x.dot(s.y) / (rx * ry),
                        s.kernel, s.upper, s.lower, s.kernel / s.upper, s.kernel / s.lower});
    }
    const std::string key = fmt::format("mu={}:", mus[i]);
    o.report.note(key + "fitted_upper_c", rep.fitted_upper_c);
    o.report.note(key + "fitted_lower_c", rep.fitted_lower_c);
    o.report.note(key + "lower_checked", rep.lower_checked);
    o.report.note(key + "violations", static_cast<long long>(rep.violations));
    o.report.note(key + "nonpositive", static_cast<long long>(rep.nonpositive));
    if (rep.violations > 0 || rep.nonpositive > 0) {
      mark(o, 1, fmt::format("kernel envelope violated for N={}, mu={}: {} violations, {} nonpositive", dim, mus[i],
                             rep.violations, rep.nonpositive));
    }
  }
  return o;
}

Outcome cmd_selftest(int workers) {
  using std::numbers::pi;
  Outcome o;
  o.report.columns = {{"check", CellType::Text, ""},     {"value", CellType::Real, ""},
                      {"reference", CellType::Real, ""}, {"abs_error", CellType::Real, ""},
                      {"tolerance", CellType::Real, ""}, {"pass", CellType::Boolean, ""}};
  struct Check {
    std::string name;
    double value;
    double reference;
    double tolerance;
  };
  using Task = std::function<Check()>;
  const std::vector<Task> tasks{
      [] {
        auto p = derive_params(3, 2.0);
        auto res = verify_fundamental_identity(p, bump_library(BumpKind::Quartic, 1.0));
        return Check{"fundamental N=3 mu=2 radial pairing", res.lhs / p.sphere_area(), 3.0, 1e-8};
      },
      [] {
        auto p = derive_params(3, -0.25);
        auto res = verify_fundamental_identity(p, bump_library(BumpKind::Quartic, 1.0));
        return Check{"fundamental N=3 mu=mu0 log branch", res.lhs / p.sphere_area(), 1.0, 1e-8};
      },
      [] {
        auto res = verify_green_identity(derive_params(2, 1.0), 1.0, bump_library(BumpKind::Quartic, 1.0));
        return Check{"green N=2 mu=1 relative residual", res.rel_residual, 0.0, 1e-6};
      },
      [] {
        auto sol = solve_radial_bvp(derive_params(3, 2.0), 0, RadialFunction::constant(1.0), 1.0, 0.0);
        double err = 0.0;
        for (int i = 1; i <= 200; ++i) {
          const double r = i / 200.0;
          err = std::max(err, std::abs(sol.profile(r) - (r - r * r) / 4));
        }
        return Check{"solve N=3 mu=2 f=1 sup error", err, 0.0, 1e-9};
      },
      [] {
        const double eps = 1e-2;
        const double lam = eigen_scan(3, 1.0, std::span<const double>(&eps, 1)).lambda1.front();
        const double L = std::log(eps);
        const double oracle = 0.25 + pi * pi / (L * L);
        return Check{"eigen N=3 eps=1e-2 relative", lam / oracle, 1.0, 5e-3};
      },
      [] {
        auto rep = sub_hardy_probe(3, -1.25, 1.0, 1e-6);
        return Check{"oscillation N=3 mu=-1.25 ratio", rep.consecutive_ratios.back(), std::exp(pi), 1e-3 * std::exp(pi)};
      },
      [] {
        GreenKernelSeries gk(derive_params(3, 0.0), 1.0);
        Eigen::VectorXd x(3);
        Eigen::VectorXd y(3);
        x << 0.3, 0.1, -0.2;
        y << -0.1, 0.4, 0.25;
        return Check{"kernel N=3 mu=0 vs image charge", gk.evaluate(x, y).value, gk.classical(x, y), 1e-6};
      },
      [] {
        auto p = derive_params(3, 2.0);
        auto s = nonexistence_probe(p, parse_source("power:0", p), 0.5, 64);
        const bool log = s.growth.best.model == GrowthModel::Log;
        return Check{"blowup at the threshold, log fit r^2", log ? s.growth.best.r_squared : 0.0, 1.0, 1e-3};
      },
  };
  const auto checks = ordered_map(tasks.size(), workers, [&](std::size_t i) { return tasks[i](); });
  for (const auto& c : checks) {
    const double err = std::abs(c.value - c.reference);
    const bool pass = err <= c.tolerance;
    o.report.add_row({c.name, c.value, c.reference, err, c.tolerance, pass});
    if (!pass) mark(o, 1, fmt::format("selftest failed: {}", c.name));
  }
  return o;
}

void emit(const Report& report, const RunConfig& cfg, std::ostream& out) {
  auto write = [&](std::ostream& os, bool json) { json ? write_json(report, os) : write_csv(report, os); };
  if (cfg.output == "-") {
    if (cfg.format == "both") throw Error(ErrorKind::ConfigError, "format 'both' needs an output path");
    write(out, cfg.format == "json");
    return;
  }
  auto open = [](const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::ConfigError, fmt::format("cannot write '{}'", path));
    return os;
  };
  if (cfg.format == "both") {
    auto csv = open(cfg.output);
    write(csv, false);
    const auto dot = cfg.output.find_last_of('.');
    const auto slash = cfg.output.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    auto json = open((has_ext ? cfg.output.substr(0, dot) : cfg.output) + ".json");
    write(json, true);
  } else {
    auto os = open(cfg.output);
    write(os, cfg.format == "json");
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Hardy-Leray operator -Delta + mu/|x|^2: identity checks, radial solves, probes", "hardy"};
  app.set_version_flag("--version", tool_version());
  app.set_config("--config", "", "flat key=value file; command-line flags override it");
  app.require_subcommand(1);

  app.add_option("--dim", cfg.dim, "dimension N, or a comma list for verify")->delimiter(',');
  app.add_option("--mu", cfg.mu, "mu values: numbers, mu0, mu0+x, grid")->delimiter(',');
  app.add_option("--radius,-R", cfg.radius, "ball radius");
  app.add_option("--f,--source", cfg.source, "zero | const[:c] | power:e | abspower:e | sin:w | table:path");
  app.add_option("--k", cfg.k, "singularity coefficient");
  app.add_option("--x0", cfg.x0, "probe radius for blowup");
  app.add_option("--nmax", cfg.n_max, "largest exhaustion index");
  app.add_option("--a0", cfg.a0, "potential coefficient for eigen");
  app.add_option("--eps", cfg.eps, "inner radii for eigen")->delimiter(',');
  app.add_option("--rmax", cfg.r_max, "outer radius for oscillation");
  app.add_option("--rmin", cfg.r_min, "inner radius for oscillation");
  app.add_option("--samples", cfg.samples, "kernel pairs per mu");
  app.add_option("--seed", cfg.seed, "sampling seed");
  app.add_option("--xi", cfg.test_functions, "test functions for verify, or all")->delimiter(',');
  app.add_flag("--fd", cfg.finite_difference, "finite-difference dual operator in verify");
  app.add_option("--tol", cfg.tol, "relative residual tolerance");
  app.add_option("--eigen-tol", cfg.eigen_tol, "relative tolerance against the eigenvalue oracle");
  app.add_option("--ratio-tol", cfg.ratio_tol, "relative tolerance for zero ratios");
  app.add_option("--points", cfg.points, "table points for solve");
  app.add_option("--output,-o", cfg.output, "output path, - for stdout");
  app.add_option("--format", cfg.format, "csv | json | both")->check(CLI::IsMember({"csv", "json", "both"}));

  auto* verify = app.add_subcommand("verify", "fundamental and Green identity residuals")->fallthrough();
  auto* solve = app.add_subcommand("solve", "radial solve with classification")->fallthrough();
  auto* probe = app.add_subcommand("probe", "eigen | oscillation | blowup")->fallthrough();
  probe->require_subcommand(1);
  auto* eigen = probe->add_subcommand("eigen", "principal eigenvalue on thin-holed annuli")->fallthrough();
  auto* oscillation = probe->add_subcommand("oscillation", "zeros below the Hardy constant")->fallthrough();
  auto* blowup = probe->add_subcommand("blowup", "exhaustion series on annuli")->fallthrough();
  auto* green = app.add_subcommand("green", "kernel sampling against the envelopes")->fallthrough();
  auto* selftest = app.add_subcommand("selftest", "quick oracle battery")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const int workers = worker_count();
    const Resolved r = resolve(cfg);
    Outcome o;
    std::string command;
    if (verify->parsed()) {
      command = "verify";
      o = cmd_verify(cfg, r, workers);
    } else if (solve->parsed()) {
      command = "solve";
      o = cmd_solve(cfg, r);
    } else if (eigen->parsed()) {
      command = "probe eigen";
      o = cmd_eigen(cfg, r, workers);
    } else if (oscillation->parsed()) {
      command = "probe oscillation";
      o = cmd_oscillation(cfg, r);
    } else if (blowup->parsed()) {
      command = "probe blowup";
      o = cmd_blowup(cfg, r);
    } else if (green->parsed()) {
      command = "green";
      o = cmd_green(cfg, r, workers);
    } else if (selftest->parsed()) {
      command = "selftest";
      o = cmd_selftest(workers);
    }
    o.report.tool_version = tool_version();
    o.report.command = command;
    o.report.config = config_pairs(cfg, r);
    emit(o.report, cfg, out);
    for (const auto& m : o.report.messages) err << m << '\n';
    return o.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace hardy
