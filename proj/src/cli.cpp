#include "skel/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <regex>
#include <sstream>

#include "skel/eigensolve.hpp"
#include "skel/errors.hpp"
#include "skel/quadrature.hpp"
#include "skel/rankone.hpp"
#include "skel/scissor.hpp"
#include "skel/skeleton.hpp"

namespace skel::cli {

namespace {

constexpr double kPi = std::numbers::pi;
using json = nlohmann::json;

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double parse_number(std::string_view text, const char* what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ContractError(std::string("cannot parse ") + what + " '" + s + "'");
  }
  if (used != s.size()) throw ContractError(std::string("cannot parse ") + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

Check make_check(std::string name, double expected, double tol, const std::function<double()>& measure) {
  Check c{std::move(name), expected, std::numeric_limits<double>::quiet_NaN(), tol, false};
  try {
    c.measured = measure();
    c.pass = std::abs(c.measured - expected) <= tol;
  } catch (const std::exception&) {
    c.pass = false;
  }
  return c;
}

// Opens --out or falls back to the given stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ContractError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::vector<SectorLabel> sectors_or_all(const RunConfig& cfg) {
  return cfg.sectors.empty() ? scissor::all_sectors() : cfg.sectors;
}

std::vector<double> thetas_of(const RunConfig& cfg) {
  return scissor::theta_grid(cfg.theta_min, cfg.theta_max, cfg.theta_steps);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto checks = verify_checks(cfg);
  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& c : checks) {
      rows.push_back({{"name", c.name}, {"expected", c.expected}, {"measured", c.measured}, {"tol", c.tol}, {"pass", c.pass}});
    }
    *sink << json{{"checks", rows}, {"pass", all}}.dump(2) << "\n";
  } else {
    *sink << "name,expected,measured,tol,pass\n";
    for (const auto& c : checks) {
      *sink << fmt("%s,%.10g,%.10g,%.1e,%s\n", c.name.c_str(), c.expected, c.measured, c.tol, c.pass ? "pass" : "FAIL");
    }
  }
  for (const auto& c : checks) {
    if (!c.pass) err << "verify: " << c.name << " failed (expected " << c.expected << ", measured " << c.measured << ")\n";
  }
  return all ? kSuccess : kVerifyFailed;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const auto rule = quadrature::halfline_rule(cfg.n_nodes, cfg.map_scale);
  constexpr int kShown = 5;
  Sink sink(cfg.out, out);
  json rows = json::array();
  if (cfg.format != "json") *sink << "theta_rad,alpha,beta,rank,eigenvalue,above_edge\n";
  for (double t : thetas_of(cfg)) {
    for (const SectorLabel h : sectors_or_all(cfg)) {
      const SectorLabel s = scissor::skeleton_sector(h);
      const auto values = eigensolve::eigvalsh(skeleton::build_sector(Angle{t}, s.alpha, s.beta, rule).op.matrix);
      for (int r = 0; r < kShown && r < values.size(); ++r) {
        const double v = values[values.size() - 1 - r];
        const bool above = v > kernels::kEssentialEdge + cfg.margin;
        if (cfg.format == "json") {
          rows.push_back({{"theta_rad", t}, {"alpha", h.alpha}, {"beta", h.beta}, {"rank", r}, {"eigenvalue", v},
                          {"above_edge", above}});
        } else {
          *sink << fmt("%.7f,%+d,%+d,%d,%.10f,%d\n", t, h.alpha, h.beta, r, v, above ? 1 : 0);
        }
      }
    }
  }
  if (cfg.format == "json") *sink << json{{"rows", rows}}.dump(2) << "\n";
  return kSuccess;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.theta_min < 0.5 * kPi) throw ContractError("sweep: theta range must lie in [pi/2, pi)");
  const auto rule = quadrature::halfline_rule(cfg.n_nodes, cfg.map_scale);
  const auto table = scissor::sweep(thetas_of(cfg), sectors_or_all(cfg), rule, cfg.margin);
  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"theta_rad", r.theta}, {"alpha", r.sector.alpha}, {"beta", r.sector.beta}, {"index", r.index},
                      {"k", r.k}, {"energy", r.energy}, {"refine_err", r.refinement_error}});
    }
    *sink << json{{"rows", rows}}.dump(2) << "\n";
  } else {
    *sink << "theta_rad,alpha,beta,index,k,energy,refine_err\n";
    for (const auto& r : table.rows) {
      *sink << fmt("%.7f,%+d,%+d,%d,%.6f,%.6f,%.3e\n", r.theta, r.sector.alpha, r.sector.beta, r.index, r.k, r.energy,
                   r.refinement_error);
    }
  }
  return kSuccess;
}

int cmd_critical_angle(const RunConfig& cfg, std::ostream& out) {
  const auto rule = quadrature::halfline_rule(cfg.n_nodes, cfg.map_scale);
  const auto res = scissor::critical_angle(rule, cfg.theta_min, cfg.theta_max);
  const double dev = std::abs(res.theta_c - 2.0 * kPi / 3.0);
  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    *sink << json{{"theta_c", res.theta_c}, {"abs_dev", dev}, {"evaluations", res.evaluations}}.dump(2) << "\n";
  } else {
    *sink << "theta_c,abs_dev,evaluations\n" << fmt("%.10f,%.3e,%d\n", res.theta_c, dev, res.evaluations);
  }
  return kSuccess;
}

int cmd_general(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto rule = quadrature::fullline_rule(cfg.n_nodes, cfg.map_scale);
  const WireAngles angles{cfg.theta_min, cfg.theta23, cfg.theta13};
  const auto res = skeleton::zero_crossings(angles, cfg.lambda, rule, cfg.k_min, cfg.k_max, cfg.k_steps);
  if (cfg.lambda < 0.0) err << "general: lambda < 0 lies outside the range where the skeleton reduction is proven\n";
  for (const auto& u : res.unresolved) err << fmt("general: unresolved interval k in [%.6f, %.6f]\n", u.k_lo, u.k_hi);
  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    json rows = json::array();
    for (const auto& c : res.crossings) rows.push_back({{"k", c.k}, {"energy", c.energy}, {"multiplicity", c.multiplicity}});
    json unresolved = json::array();
    for (const auto& u : res.unresolved) unresolved.push_back({{"k_lo", u.k_lo}, {"k_hi", u.k_hi}});
    *sink << json{{"crossings", rows}, {"unresolved", unresolved}}.dump(2) << "\n";
  } else {
    *sink << "k,energy,multiplicity\n";
    for (const auto& c : res.crossings) *sink << fmt("%.8f,%.6f,%d\n", c.k, c.energy, c.multiplicity);
  }
  return kSuccess;
}

int cmd_reconstruct(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SectorLabel h = cfg.sectors.empty() ? SectorLabel{+1, +1} : cfg.sectors.front();
  const SectorLabel s = scissor::skeleton_sector(h);
  const Angle theta{cfg.theta_min};
  const auto rule = quadrature::halfline_rule(cfg.n_nodes, cfg.map_scale);
  const auto states = skeleton::bound_states(skeleton::build_sector(theta, s.alpha, s.beta, rule), cfg.margin);
  if (cfg.state_index >= static_cast<int>(states.size())) {
    throw NumericalError(fmt("reconstruct: sector (%+d,%+d) has %zu bound state(s) at this angle", h.alpha, h.beta,
                             states.size()));
  }
  const auto& st = states[static_cast<std::size_t>(cfg.state_index)];
  const GridSpec spec{-cfg.extent, cfg.extent, cfg.points, -cfg.extent, cfg.extent, cfg.points};
  const auto grid = scissor::reconstruct(theta, h, st.k, st.phi, rule, spec);
  const auto sym = scissor::symmetry_error(grid);
  std::size_t degraded = 0;
  for (char d : grid.degraded) degraded += d ? 1 : 0;
  err << fmt("reconstruct: k=%.8f parity defects x->-x %.2e, y->-y %.2e; %zu point(s) near a wire\n", st.k,
             sym.x_reflection, sym.y_reflection, degraded);

  Sink sink(cfg.out, out);
  if (cfg.format == "json") {
    json pts = json::array();
    for (std::size_t iy = 0; iy < grid.ys.size(); ++iy) {
      for (std::size_t ix = 0; ix < grid.xs.size(); ++ix) {
        pts.push_back({{"x", grid.xs[ix]}, {"y", grid.ys[iy]}, {"psi", grid.at(ix, iy)},
                       {"degraded", grid.degraded[iy * grid.xs.size() + ix] != 0}});
      }
    }
    *sink << json{{"theta_rad", grid.theta}, {"alpha", h.alpha}, {"beta", h.beta}, {"k", grid.k},
                  {"symmetry", {{"x_reflection", sym.x_reflection}, {"y_reflection", sym.y_reflection}}},
                  {"points", pts}}
                 .dump(2)
          << "\n";
  } else {
    *sink << "x,y,psi\n";
    for (std::size_t iy = 0; iy < grid.ys.size(); ++iy) {
      for (std::size_t ix = 0; ix < grid.xs.size(); ++ix) {
        *sink << fmt("%.6f,%.6f,%.10e\n", grid.xs[ix] + 0.0, grid.ys[iy] + 0.0, grid.at(ix, iy) + 0.0);
      }
    }
  }
  return kSuccess;
}

}  // namespace

void RunConfig::validate() const {
  if (n_nodes < 16 || n_nodes > quadrature::kMaxNodes) throw ContractError("n-nodes must lie in [16, 4096]");
  if (!(map_scale > 0.0)) throw ContractError("map-scale must be positive");
  if (!(margin > 0.0)) throw ContractError("margin must be positive");
  if (!(theta_min > 0.0) || !(theta_max < kPi) || theta_min > theta_max) {
    throw ContractError("theta range must satisfy 0 < min <= max < pi");
  }
  if (theta_steps < 1) throw ContractError("theta range needs at least one step");
  if (!(lambda >= -1.0)) throw ContractError("lambda must be >= -1");
  if (!(k_min > kernels::kEssentialEdge) || !(k_max > k_min) || k_steps < 1) {
    throw ContractError("k range must satisfy 2^{-1/2} < k_min < k_max with at least one step");
  }
  if (state_index < 0) throw ContractError("index must be non-negative");
  if (!(extent > 0.0) || points < 1) throw ContractError("grid needs a positive extent and at least one point");
  if (format != "csv" && format != "json") throw ContractError("format must be csv or json");
}

double parse_angle(std::string_view text) {
  static const std::regex pattern(R"(^\s*([-+]?[0-9]*\.?[0-9]*(?:[eE][-+]?[0-9]+)?)\s*(\*?\s*pi)?\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
  const std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, pattern) || (m[1].length() == 0 && !m[2].matched)) {
    throw ContractError("cannot parse angle '" + s + "'");
  }
  std::string lead = m[1].str();
  double v = 1.0;
  if (lead == "+" || lead == "-") {
    v = lead == "-" ? -1.0 : 1.0;
  } else if (!lead.empty()) {
    v = parse_number(lead, "angle");
  }
  if (m[2].matched) v *= kPi;
  if (m[3].matched) {
    const double d = parse_number(m[3].str(), "angle");
    if (d == 0.0) throw ContractError("angle divides by zero");
    v /= d;
  }
  return v;
}

SectorLabel parse_sector(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ContractError("sector must look like a,b");
  auto one = [](std::string p) {
    if (p == "+" || p == "+1" || p == "1") return +1;
    if (p == "-" || p == "-1") return -1;
    throw ContractError("sector labels must be +1 or -1, got '" + p + "'");
  };
  return SectorLabel::make(one(parts[0]), one(parts[1]));
}

std::vector<Check> verify_checks(const RunConfig& cfg) {
  const auto half = quadrature::halfline_rule(cfg.n_nodes, cfg.map_scale);
  const auto full = quadrature::fullline_rule(cfg.n_nodes, cfg.map_scale);
  std::vector<Check> out;

  out.push_back(make_check("exact_pair_I_top", 1.0, 1e-6, [&] {
    return eigensolve::eigvalsh(skeleton::build_sector(Angle{0.5 * kPi}, +1, +1, half).op.matrix).maxCoeff();
  }));
  out.push_back(make_check("exact_pair_I_rayleigh", 1.0, 1e-6, [&] {
    const auto op = skeleton::build_sector(Angle{0.5 * kPi}, +1, +1, half);
    return skeleton::apply_exact_vector(op.op, [](double p) { return std::sqrt(2.0 / kPi) / (p * p + 1.0); }).rayleigh;
  }));
  out.push_back(make_check("exact_pair_II_top", std::numbers::sqrt2, 1e-6, [&] {
    const Angle th{2.0 * kPi / 3.0};
    const auto t0 = quadrature::diag_multiplication([](double p) { return kernels::t0(1.0, p); }, half);
    const auto kp = quadrature::nystrom([&](double p, double q) { return kernels::t_parity(th, +1, p, q); }, half);
    return eigensolve::eigvalsh(quadrature::combine(t0, kp, 2.0).matrix).maxCoeff();
  }));
  out.push_back(make_check("exact_pair_III_lowest", -1.0, 1e-5, [&] {
    return scissor::tilde_lowest(Angle{2.0 * kPi / 3.0}, half);
  }));
  out.push_back(make_check("exact_pair_III_norm", (6.0 - std::sqrt(3.0) * kPi) / 18.0, 1e-5, [&] {
    // Even extension to the full line doubles the half-line integral.
    return 2.0 * half.integrate([](double p) {
      const double psi = 1.0 / (p * (2.0 * p * p + 3.0));
      return kernels::threshold_gap(p) * psi * psi;
    });
  }));
  for (const auto& [label, frac] : std::vector<std::pair<std::string, double>>{
           {"pi/3", 1.0 / 3.0}, {"pi/2", 0.5}, {"2pi/3", 2.0 / 3.0}, {"3pi/4", 0.75}}) {
    const Angle th = Angle::from_pi_fraction(frac);
    const double tr = rankone::trace_formulas(th).tr_total;
    out.push_back(make_check("trace_T(" + label + ")", tr, 1e-4 * tr, [&] {
      double sum = 0.0;
      for (int sign : {+1, -1}) {
        sum += eigensolve::trace(
            quadrature::nystrom([&](double p, double q) { return kernels::t_parity(th, sign, p, q); }, half).matrix);
      }
      return sum;
    }));
    const double hs = 1.0 / std::sqrt(2.0 * kPi * std::sin(th.radians));
    out.push_back(make_check("hs_norm_T(" + label + ")", hs, 1e-3 * hs, [&] {
      return eigensolve::frobenius(
          quadrature::nystrom([&](double p, double q) { return kernels::t_theta(th, 1.0, p, q); }, full).matrix);
    }));
  }
  out.push_back(make_check("tilde_hs_norm", 1.01327, 1e-2, [&] {
    return eigensolve::frobenius(skeleton::build_tilde(Angle{2.0 * kPi / 3.0}, half).matrix);
  }));
  const double fh_ref = -kPi / (2.0 * (6.0 - std::sqrt(3.0) * kPi));
  out.push_back(make_check("fh_derivative", fh_ref, 1e-3 * std::abs(fh_ref),
                           [&] { return scissor::fh_derivative(half).value; }));
  out.push_back(make_check("fh_finite_difference", fh_ref, 1e-2 * std::abs(fh_ref),
                           [&] { return scissor::fh_finite_difference(half); }));
  out.push_back(make_check("critical_angle", 2.0 * kPi / 3.0, 1e-3, [&] { return scissor::critical_angle(half).theta_c; }));
  out.push_back(make_check("mcguire_general_skeleton", std::numbers::sqrt2, 1e-5, [&] {
    const double eq = 2.0 * kPi / 3.0;
    const auto rule = quadrature::fullline_rule(std::max(16, cfg.n_nodes / 2), cfg.map_scale);
    const auto res = skeleton::zero_crossings(WireAngles{eq, eq, eq}, -1.0, rule, 1.35, 1.5, 3);
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& c : res.crossings) {
      if (!(std::abs(c.k - std::numbers::sqrt2) >= std::abs(best - std::numbers::sqrt2))) best = c.k;
    }
    return best;
  }));
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skeleton-method bound states of crossing leaky wires"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string theta, theta_range, theta23, theta13, k_range;
  std::vector<std::string> sectors;

  app.set_config("--config", "", "flat key = value file; command-line flags win");
  app.add_option("--n-nodes", cfg.n_nodes, "quadrature nodes");
  app.add_option("--map-scale", cfg.map_scale, "scale L of the algebraic map");
  app.add_option("--margin", cfg.margin, "distance above 2^{-1/2} required of a bound state");
  app.add_option("--theta", theta, "single angle, radians or like 2pi/3");
  app.add_option("--theta-range", theta_range, "a:b:steps");
  app.add_option("--sector", sectors, "alpha,beta labels of H, e.g. +,-")->allow_extra_args(false);
  app.add_option("--lambda", cfg.lambda, "third-wire coupling for general (0 drops the wire)");
  app.add_option("--theta23", theta23, "angle between wires 2 and 3 (general)");
  app.add_option("--theta13", theta13, "angle between wires 1 and 3 (general)");
  app.add_option("--k-range", k_range, "lo:hi:steps for general");
  app.add_option("--index", cfg.state_index, "bound state to reconstruct, 0 = deepest");
  app.add_option("--extent", cfg.extent, "reconstruct grid half-width");
  app.add_option("--points", cfg.points, "reconstruct grid points per axis");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--out", cfg.out, "output path (default stdout)");

  const std::vector<std::pair<const char*, const char*>> subcommands{
      {"verify", "run the oracle suite"},
      {"spectrum", "top sector-operator eigenvalues"},
      {"sweep", "bound states over an angle grid"},
      {"critical-angle", "angle where the weighted odd operator reaches -1"},
      {"general", "zero crossings of the three-wire skeleton"},
      {"reconstruct", "wavefunction of one bound state on a grid"}};
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "general") cfg.theta_min = cfg.theta_max = 2.0 * kPi / 3.0;
    if (cmd == "reconstruct") cfg.theta_min = cfg.theta_max = 0.5 * kPi;
    if (!theta_range.empty()) {
      const auto parts = split(theta_range, ':');
      if (parts.size() != 3) throw ContractError("theta-range must be a:b:steps");
      cfg.theta_min = parse_angle(parts[0]);
      cfg.theta_max = parse_angle(parts[1]);
      cfg.theta_steps = static_cast<int>(parse_number(parts[2], "steps"));
    }
    if (!theta.empty()) {
      cfg.theta_min = cfg.theta_max = parse_angle(theta);
      cfg.theta_steps = 1;
    }
    if (!theta23.empty()) cfg.theta23 = parse_angle(theta23);
    if (!theta13.empty()) cfg.theta13 = parse_angle(theta13);
    if (!k_range.empty()) {
      const auto parts = split(k_range, ':');
      if (parts.size() != 3) throw ContractError("k-range must be lo:hi:steps");
      cfg.k_min = parse_number(parts[0], "k");
      cfg.k_max = parse_number(parts[1], "k");
      cfg.k_steps = static_cast<int>(parse_number(parts[2], "steps"));
    }
    for (const auto& s : sectors) cfg.sectors.push_back(parse_sector(s));
    cfg.validate();

    if (cmd == "verify") return cmd_verify(cfg, out, err);
    if (cmd == "spectrum") return cmd_spectrum(cfg, out);
    if (cmd == "sweep") return cmd_sweep(cfg, out);
    if (cmd == "critical-angle") return cmd_critical_angle(cfg, out);
    if (cmd == "general") return cmd_general(cfg, out, err);
    return cmd_reconstruct(cfg, out, err);
  } catch (const ContractError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace skel::cli
