// hypercycle: command-line front end.
//
// Exit codes: 0 ok, 2 configuration or domain error, 3 degenerate parameter (k1 = 0),
// 4 normal-form cross-check discrepancy, 5 gate failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypercycle/acceptance.hpp"
#include "hypercycle/coords.hpp"
#include "hypercycle/crosscheck.hpp"
#include "hypercycle/curve.hpp"
#include "hypercycle/model.hpp"
#include "hypercycle/normalform.hpp"
#include "json.hpp"

namespace hc = hypercycle;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kDegenerate = 3, kDiscrepancy = 4, kGate = 5 };

struct Config {
  std::vector<double> k{1.0, 1.0, 1.0, 1.0};
  std::vector<double> x0;
  std::vector<double> z0;
  std::vector<double> k1_values;
  std::optional<std::size_t> iters;
  std::optional<std::size_t> burn;
  double tol = hc::kDefaultTol;
  std::string format;  // empty: per-subcommand default
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  int modes = hc::kDefaultModes;
  bool gate = false;
  bool only = false;
  bool show_steps = false;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const hc::Vec4& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json complex_json(const hc::Complex& c) { return {{"re", num(c.real())}, {"im", num(c.imag())}, {"modulus", num(std::abs(c))}}; }

json exact_json(const hc::ExactComplex& c) { return {{"re", hc::to_string(c.re())}, {"im", hc::to_string(c.im())}}; }

std::string csv_vec(const hc::Vec4& v) { return g17(v[0]) + "," + g17(v[1]) + "," + g17(v[2]) + "," + g17(v[3]); }

std::string params_tag(const hc::Params& p) { return csv_vec(p.k()); }

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw hc::PreconditionViolation("cannot open output file " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

hc::Params params_of(const Config& c) {
  if (c.k.size() != 4) throw hc::ParameterError("--k needs four values");
  return hc::Params({c.k[0], c.k[1], c.k[2], c.k[3]});
}

bool json_format(const Config& c, bool default_json) {
  if (c.format.empty()) return default_json;
  return c.format == "json";
}

// ---------------------------------------------------------------- fixed-points

struct Segment {
  std::string name;
  std::size_t a, b;  // coordinates that may be nonzero
};

int run_fixed_points(const Config& cfg) {
  const hc::Params p = params_of(cfg);
  json j;
  j["k"] = vec(p.k());
  j["M1"] = p.m1() ? num(*p.m1()) : json(nullptr);
  j["M2"] = num(p.m2());
  j["k1_star"] = num(p.k1_star());

  int code = kOk;
  std::string message;
  json interior;
  try {
    const hc::SimplexPoint x = hc::interior_fixed_point(p);
    const auto cert = hc::is_fixed_point(x, p, cfg.tol);
    interior = {{"status", "inside"}, {"P", vec(x.coords())}, {"fixed", cert.fixed},
                {"residual", num(cert.direct_defect)}};
  } catch (const hc::DegenerateParameter&) {
    message = "k1 = 0: P has merged with the corner Q = (0,0,0,1); the edge (a,0,0,1-a), 0 <= a <= 1, is an "
              "additional segment of fixed points";
    interior = {{"status", "degenerate"}, {"P", nullptr}, {"note", message}};
    code = kDegenerate;
  } catch (const hc::OutsideSimplex& e) {
    interior = {{"status", "outside"}, {"P", vec(e.coordinates)}, {"note", e.what()}};
  }
  j["interior"] = interior;

  json vertices = json::array();
  for (std::size_t m = 0; m < 4; ++m) {
    const auto cert = hc::is_fixed_point(hc::vertex(m), p, cfg.tol);
    vertices.push_back({{"name", "e" + std::to_string(m + 1)}, {"x", vec(hc::vertex(m).coords())}, {"fixed", cert.fixed}});
  }
  j["vertices"] = vertices;

  // An edge e_a--e_b is a segment of fixed points when k_i x_i x_{i-1} vanishes along it.
  const std::vector<Segment> edges{{"x1-x2", 0, 1}, {"x2-x3", 1, 2}, {"x3-x4", 2, 3},
                                   {"x1-x4", 0, 3}, {"x1-x3", 0, 2}, {"x2-x4", 1, 3}};
  json segments = json::array();
  for (const auto& e : edges) {
    bool fixed = true;
    for (double a : {0.25, 0.5, 0.75}) {
      hc::Vec4 x{0, 0, 0, 0};
      x[e.a] = a;
      x[e.b] = 1.0 - a;
      fixed = fixed && hc::is_fixed_point(hc::SimplexPoint(x), p, cfg.tol).fixed;
    }
    segments.push_back({{"edge", e.name}, {"fixed", fixed}});
  }
  j["segments"] = segments;

  Output out(cfg.out);
  if (json_format(cfg, true)) {
    out.os() << j.dump(2) << "\n";
  } else {
    out.os() << "# schema=1\n# k=" << params_tag(p) << "\nkind,name,x1,x2,x3,x4,fixed\n";
    if (interior["status"] != "degenerate") {
      hc::Vec4 x{};
      for (std::size_t i = 0; i < 4; ++i) x[i] = interior["P"][i].get<double>();
      out.os() << "interior,P," << csv_vec(x) << "," << (interior["status"] == "inside" ? "true" : "outside") << "\n";
    }
    for (std::size_t m = 0; m < 4; ++m) {
      out.os() << "vertex,e" << m + 1 << "," << csv_vec(hc::vertex(m).coords()) << ","
               << (vertices[m]["fixed"].get<bool>() ? "true" : "false") << "\n";
    }
    for (const auto& s : segments) {
      out.os() << "segment," << s["edge"].get<std::string>() << ",,,,," << (s["fixed"].get<bool>() ? "true" : "false")
               << "\n";
    }
  }
  if (!message.empty()) std::cerr << message << "\n";
  return code;
}

// ---------------------------------------------------------------- spectrum

int run_spectrum(const Config& cfg) {
  const hc::Params p = params_of(cfg);
  json j;
  j["k"] = vec(p.k());
  json vertices = json::array();
  for (std::size_t m = 0; m < 4; ++m) {
    const auto ev = hc::eigenvalues(hc::jacobian(hc::vertex(m), p));
    json e = json::array();
    for (const auto& v : ev) e.push_back(complex_json(v));
    vertices.push_back({{"name", "e" + std::to_string(m + 1)}, {"eigenvalues", e}});
  }

  int code = kOk;
  std::string message;
  try {
    const hc::SpectrumReport closed = hc::closed_form_spectrum(p);
    const hc::SimplexPoint x = hc::interior_fixed_point(p);
    const hc::SpectrumReport numeric = hc::numeric_spectrum(x, p);
    json cf = json::array(), nu = json::array();
    for (const auto& v : closed.eigenvalues) cf.push_back(complex_json(v));
    for (const auto& v : numeric.eigenvalues) nu.push_back(complex_json(v));
    j["P"] = vec(x.coords());
    j["delta"] = num(p.delta());
    j["closed_form"] = cf;
    j["closed_form_transversal_index"] = 0;
    j["numeric"] = nu;
    j["numeric_transversal_index"] = numeric.transversal_index ? json(*numeric.transversal_index) : json(nullptr);
    j["max_deviation"] = num(hc::matched_distance(closed.eigenvalues, numeric.eigenvalues));
  } catch (const hc::DegenerateParameter& e) {
    message = std::string(e.what()) + " (k1 <= 0: P is not an interior fixed point)";
    j["P"] = nullptr;
    j["note"] = message;
    code = kDegenerate;
  }
  j["vertices"] = vertices;

  Output out(cfg.out);
  if (json_format(cfg, true)) {
    out.os() << j.dump(2) << "\n";
  } else {
    out.os() << "# schema=1\n# k=" << params_tag(p) << "\npoint,source,index,re,im,modulus\n";
    auto rows = [&](const std::string& point, const std::string& source, const json& list) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        out.os() << point << "," << source << "," << i << "," << g17(list[i]["re"].get<double>()) << ","
                 << g17(list[i]["im"].get<double>()) << "," << g17(list[i]["modulus"].get<double>()) << "\n";
      }
    };
    if (code == kOk) {
      rows("P", "closed_form", j["closed_form"]);
      rows("P", "numeric", j["numeric"]);
    }
    for (const auto& v : vertices) rows(v["name"].get<std::string>(), "numeric", v["eigenvalues"]);
  }
  if (!message.empty()) std::cerr << message << "\n";
  return code;
}

// ---------------------------------------------------------------- simulate

int run_simulate(const Config& cfg) {
  const hc::Params p = params_of(cfg);
  hc::Vec4 x0{0.4, 0.3, 0.2, 0.1};
  if (!cfg.x0.empty()) {
    if (cfg.x0.size() != 4) throw hc::PreconditionViolation("--x0 needs four values");
    x0 = {cfg.x0[0], cfg.x0[1], cfg.x0[2], cfg.x0[3]};
  }
  const hc::SimplexPoint start(x0, cfg.tol);
  const std::size_t n = cfg.iters.value_or(1000);
  const std::size_t burn = cfg.burn.value_or(0);
  const auto orbit = hc::iterate(start, p, n, burn);

  Output out(cfg.out);
  const hc::Vec4 q = hc::corner_q().coords();
  if (json_format(cfg, false)) {
    json j;
    j["schema"] = 1;
    j["k"] = vec(p.k());
    j["x0"] = vec(x0);
    j["burn"] = burn;
    j["iters"] = n;
    j["seed"] = cfg.seed.value_or(0);
    json states = json::array();
    for (const auto& s : orbit) states.push_back(vec(s.coords()));
    j["states"] = states;
    if (!orbit.empty()) j["final_distance_to_Q"] = num(hc::max_abs_diff(orbit.back().coords(), q));
    out.os() << j.dump(2) << "\n";
  } else {
    out.os() << "# schema=1\n# k=" << params_tag(p) << " x0=" << csv_vec(x0) << " burn=" << burn << " iters=" << n
             << " seed=" << cfg.seed.value_or(0) << "\nstep,x1,x2,x3,x4,phi\n";
    for (std::size_t j = 0; j < orbit.size(); ++j) {
      out.os() << burn + j + 1 << "," << csv_vec(orbit[j].coords()) << "," << g17(hc::flux(orbit[j], p)) << "\n";
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- normal-form

void transcript(std::ostream& os, const hc::NormalFormDerivation& d, const hc::CrossCheckReport& r) {
  os << "== leading-order field g in (z1, z3, z4), degrees 1..3\n";
  for (std::size_t c = 0; c < 3; ++c) os << "g" << c + 1 << " = " << d.g[c].with_labels(hc::reduced_labels()).str() << "\n";
  os << "\n== eigenvectors: columns of C\n";
  for (std::size_t r0 = 0; r0 < 3; ++r0) {
    os << "  ";
    for (std::size_t c = 0; c < 3; ++c) os << d.eigen.c(r0, c).str() << (c < 2 ? "  " : "\n");
  }
  os << "C^-1\n";
  for (std::size_t r0 = 0; r0 < 3; ++r0) {
    os << "  ";
    for (std::size_t c = 0; c < 3; ++c) os << d.eigen.cinv(r0, c).str() << (c < 2 ? "  " : "\n");
  }
  os << "spectrum of Dg(0): " << d.eigen.spectrum[0].str() << ", " << d.eigen.spectrum[1].str() << ", "
     << d.eigen.spectrum[2].str() << "\n";
  os << "\n== g1 = C^-1 g(C zeta)\n";
  for (std::size_t c = 0; c < 3; ++c) os << "g1_" << c + 1 << " = " << d.g1[c].str() << "\n";
  os << "\n== quadratic kill coefficients (h = zeta + h~)\n";
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t k = 0; k < 6; ++k) os << hc::QuadraticKill::name(t, k) << " = " << d.kill.table[t][k].str() << "\n";
  }
  os << "\n== g2 after the quadratic change, resonant cubic terms\n";
  os << "alpha1 (xi^2 xibar in component 1) = " << d.result.alpha1.str() << "\n";
  os << "mirror (xi xibar^2 in component 2) = " << d.result.alpha1_mirror.str() << "\n";
  os << "nu (xi xibar eta in component 3)   = " << d.result.nu_resonant.str() << "\n";
  os << "quadratic part of g2: "
     << ((d.result.g2[0].homogeneous_part(2).is_zero() && d.result.g2[1].homogeneous_part(2).is_zero() &&
          d.result.g2[2].homogeneous_part(2).is_zero())
             ? "zero"
             : "NONZERO")
     << "\n";
  os << "\n== verdict\n";
  os << "weak stability order " << d.verdict.order << ", weakly stable: " << (d.verdict.weakly_stable ? "yes" : "no")
     << ", invariant-curve theorem applies: " << (d.verdict.theorem_applies ? "yes" : "no") << "\n";
  os << d.verdict.note << "\n";
  os << "\n== cross-check against reference values: " << r.checks << " checks, " << r.mismatches.size()
     << " mismatches\n";
  for (const auto& m : r.mismatches) os << "MISMATCH " << m.item << ": expected " << m.expected << ", computed " << m.computed << "\n";
}

int run_normal_form(const Config& cfg) {
  const hc::NormalFormDerivation d = hc::derive_normal_form();
  const hc::CrossCheckReport r = hc::cross_check(d);
  Output out(cfg.out);

  const bool text = cfg.show_steps && cfg.format.empty();
  if (text) {
    transcript(out.os(), d, r);
  } else if (json_format(cfg, true)) {
    json j;
    j["alpha1"] = exact_json(d.result.alpha1);
    j["alpha1_mirror"] = exact_json(d.result.alpha1_mirror);
    j["nu_resonant"] = exact_json(d.result.nu_resonant);
    j["spectrum"] = json::array(
        {exact_json(d.eigen.spectrum[0]), exact_json(d.eigen.spectrum[1]), exact_json(d.eigen.spectrum[2])});
    json kill;
    for (std::size_t t = 0; t < 3; ++t) {
      for (std::size_t k = 0; k < 6; ++k) kill[hc::QuadraticKill::name(t, k)] = exact_json(d.kill.table[t][k]);
    }
    j["kill_table"] = kill;
    j["verdict"] = {{"order", d.verdict.order},
                    {"weakly_stable", d.verdict.weakly_stable},
                    {"spectrum_hypothesis", d.verdict.spectrum_hypothesis},
                    {"theorem_applies", d.verdict.theorem_applies},
                    {"epsilon", "delta = k1/(1 + k1(1 + M2))"},
                    {"note", d.verdict.note}};
    json mism = json::array();
    for (const auto& m : r.mismatches) mism.push_back({{"item", m.item}, {"expected", m.expected}, {"computed", m.computed}});
    j["cross_check"] = {{"checks", r.checks}, {"mismatches", mism}};
    if (cfg.show_steps) {
      std::ostringstream os;
      transcript(os, d, r);
      json lines = json::array();
      std::string line;
      std::istringstream is(os.str());
      while (std::getline(is, line)) lines.push_back(line);
      j["transcript"] = lines;
    }
    out.os() << j.dump(2) << "\n";
  } else {
    out.os() << "# schema=1\nitem,re,im\n";
    auto row = [&](const std::string& name, const hc::ExactComplex& c) {
      out.os() << name << "," << hc::to_string(c.re()) << "," << hc::to_string(c.im()) << "\n";
    };
    row("alpha1", d.result.alpha1);
    row("alpha1_mirror", d.result.alpha1_mirror);
    row("nu_resonant", d.result.nu_resonant);
    for (std::size_t t = 0; t < 3; ++t) {
      for (std::size_t k = 0; k < 6; ++k) row(hc::QuadraticKill::name(t, k), d.kill.table[t][k]);
    }
  }
  if (!r.ok()) {
    std::cerr << "cross-check found " << r.mismatches.size() << " mismatches\n";
    return kDiscrepancy;
  }
  return kOk;
}

// ---------------------------------------------------------------- curve

json estimate_json(const hc::CurveEstimate& e) {
  json j{{"k1", num(e.k1)},
         {"delta", num(e.delta)},
         {"radius_mean", num(e.radius_mean)},
         {"radius_std", num(e.radius_std)},
         {"rotation", num(e.rotation)},
         {"rms_distance", num(e.rms_distance)},
         {"classification", hc::to_string(e.classification)},
         {"fixed_point_threshold", num(e.threshold)},
         {"dispersion_threshold", num(hc::kCurveDispersion)}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

int run_curve(const Config& cfg) {
  const hc::Params p = params_of(cfg);
  const double delta = hc::positive_delta(p);
  hc::ReducedState z0 = hc::default_start(p);
  if (!cfg.z0.empty()) {
    if (cfg.z0.size() != 3) throw hc::PreconditionViolation("--z0 needs three values (z1, z3, z4)");
    z0 = {{cfg.z0[0], cfg.z0[1], cfg.z0[2]}};
  } else if (cfg.seed) {
    z0 = hc::random_start(p, *cfg.seed);
  }
  const std::size_t burn = cfg.burn.value_or(hc::default_burn(delta));
  const std::size_t n = cfg.iters.value_or(hc::kDefaultSamples);
  const hc::OrbitSample o = hc::attract_orbit(p, z0, burn, n, cfg.seed.value_or(0));
  const hc::CurveEstimate e = hc::estimate_curve(o);

  json j;
  j["schema"] = 1;
  j["k"] = vec(p.k());
  j["seed"] = cfg.seed.value_or(0);
  j["z0"] = json::array({num(z0.z[0]), num(z0.z[1]), num(z0.z[2])});
  j["burn"] = burn;
  j["n"] = n;
  j["estimate"] = estimate_json(e);

  int code = kOk;
  std::optional<hc::FourierCurve> curve;
  if (e.classification == hc::Classification::closed_curve) {
    try {
      curve = hc::refine_curve(p, o, cfg.modes);
    } catch (const hc::NoConvergence& err) {
      j["refinement"] = {{"converged", false}, {"best_residual", num(err.best_residual)}, {"error", err.what()}};
      std::cerr << err.what() << " (best residual " << g17(err.best_residual) << ")\n";
      code = kConfig;
    }
  } else {
    j["refinement"] = {{"converged", false}, {"note", "orbit not classified closed_curve; refinement skipped"}};
  }
  if (curve) {
    json modes = json::array();
    for (std::size_t c = 0; c < 3; ++c) {
      json list = json::array();
      for (std::size_t m = 0; m < curve->modes[c].size(); ++m) {
        list.push_back(json::array({m, num(curve->modes[c][m].real()), num(curve->modes[c][m].imag())}));
      }
      modes.push_back(list);
    }
    j["refinement"] = {{"converged", true},
                       {"rho", num(curve->rho)},
                       {"residual", num(curve->residual)},
                       {"grid", curve->grid},
                       {"iterations", curve->iterations},
                       {"radius", num(hc::curve_radius(*curve))},
                       {"coordinates", json::array({"z1", "z3", "z4"})},
                       {"modes", modes}};
  }

  Output out(cfg.out);
  if (json_format(cfg, true)) {
    out.os() << j.dump(2) << "\n";
  } else {
    out.os() << "# schema=1\n# k=" << params_tag(p) << " seed=" << cfg.seed.value_or(0) << " burn=" << burn
             << " n=" << n << "\n# classification=" << hc::to_string(e.classification)
             << " radius_mean=" << g17(e.radius_mean) << " rotation=" << g17(e.rotation);
    if (curve) out.os() << " rho=" << g17(curve->rho) << " residual=" << g17(curve->residual);
    out.os() << "\ncoordinate,index,re,im\n";
    if (curve) {
      const char* names[3] = {"z1", "z3", "z4"};
      for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t m = 0; m < curve->modes[c].size(); ++m) {
          out.os() << names[c] << "," << m << "," << g17(curve->modes[c][m].real()) << ","
                   << g17(curve->modes[c][m].imag()) << "\n";
        }
      }
    }
  }
  return code;
}

// ---------------------------------------------------------------- sweep

std::string csv_row(const hc::CurveEstimate& e) {
  return g17(e.k1) + "," + g17(e.delta) + "," + g17(e.radius_mean) + "," + g17(e.radius_std) + "," + g17(e.rotation) +
         "," + hc::to_string(e.classification);
}

int run_sweep(const Config& cfg) {
  const hc::Params base = params_of(cfg);
  const std::vector<double> grid = cfg.k1_values.empty() ? hc::default_sweep_grid() : cfg.k1_values;
  const hc::SweepOptions opt{cfg.burn, cfg.iters.value_or(hc::kDefaultSamples), cfg.jobs};

  std::vector<hc::CurveEstimate> est;
  std::optional<hc::ScalingFit> fit;
  if (cfg.only) {
    est = hc::sweep_estimates(base, grid, opt);
  } else {
    hc::check_sweep_grid(grid);
    est = hc::sweep_estimates(base, grid, opt);
    fit = hc::fit_scaling(est);
  }

  json summary;
  summary["schema"] = 1;
  summary["k2_k4"] = json::array({num(base[1]), num(base[2]), num(base[3])});
  summary["seed"] = cfg.seed.value_or(0);
  summary["burn"] = cfg.burn ? json(*cfg.burn) : json("max(1e5, ceil(100/delta), ceil(20/delta^2))");
  summary["n"] = opt.n;
  json rows = json::array();
  for (const auto& e : est) rows.push_back(estimate_json(e));
  summary["points"] = rows;
  if (fit) {
    json excluded = json::array();
    for (const auto& e : est) {
      if (e.classification != hc::Classification::closed_curve) excluded.push_back(num(e.k1));
    }
    summary["fit"] = {{"regressor", "log delta"},
                      {"slope", num(fit->slope)},
                      {"intercept", num(fit->intercept)},
                      {"r_squared", num(fit->r_squared)},
                      {"points", fit->points},
                      {"excluded_k1", excluded}};
  }

  const bool as_json = json_format(cfg, false);
  {
    Output out(cfg.out);
    if (as_json) {
      out.os() << summary.dump(2) << "\n";
    } else {
      out.os() << "# schema=1\n# seed=" << cfg.seed.value_or(0) << " k2,k3,k4=" << g17(base[1]) << "," << g17(base[2])
               << "," << g17(base[3]) << " n=" << opt.n
               << " burn=" << (cfg.burn ? std::to_string(*cfg.burn) : std::string("auto"))
               << " fixed_point_threshold=" << g17(hc::kFixedPointThreshold)
               << " dispersion_threshold=" << g17(hc::kCurveDispersion) << "\n";
      out.os() << "k1,delta,radius_mean,radius_std,rotation,classification\n";
      for (const auto& e : est) out.os() << csv_row(e) << "\n";
    }
  }
  // A CSV written to a file gets its JSON summary next to it.
  if (!as_json && !cfg.out.empty()) {
    std::string path = cfg.out;
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) path.resize(dot);
    Output side(path + ".json");
    side.os() << summary.dump(2) << "\n";
  }

  if (cfg.gate && fit && !(fit->slope >= 0.4 && fit->slope <= 0.6)) {
    std::cerr << "gate: slope " << g17(fit->slope) << " outside [0.4, 0.6]\n";
    return kGate;
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

int run_verify(const Config& cfg) {
  const auto verdicts = hc::acceptance::run_all(cfg.jobs);
  Output out(cfg.out);
  int failed = 0;
  for (const auto& v : verdicts) failed += v.passed ? 0 : 1;
  if (json_format(cfg, false)) {
    json list = json::array();
    for (const auto& v : verdicts) {
      list.push_back({{"criterion", v.id},
                      {"title", v.title},
                      {"passed", v.passed},
                      {"detail", v.detail},
                      {"seconds", num(v.seconds)},
                      {"budget_seconds", v.budget > 0.0 ? num(v.budget) : json(nullptr)}});
    }
    out.os() << json{{"criteria", list}, {"passed", verdicts.size() - failed}, {"total", verdicts.size()}}.dump(2) << "\n";
  } else {
    for (const auto& v : verdicts) out.os() << v.line() << "\n";
    out.os() << verdicts.size() - failed << "/" << verdicts.size() << " criteria passed\n";
  }
  return failed == 0 ? kOk : kGate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypercycle map with a shifting coefficient k1: fixed points, spectra, normal form, invariant curves"};
  app.require_subcommand(1);
  Config cfg;

  auto add_params = [&](CLI::App* sc) {
    sc->add_option("--k", cfg.k, "rate coefficients k1,k2,k3,k4")->delimiter(',')->expected(4);
    sc->add_option("--tol", cfg.tol, "validity tolerance")->check(CLI::PositiveNumber);
    sc->add_option("--out", cfg.out, "output path (default stdout)");
    sc->add_option("--seed", cfg.seed, "random seed, echoed in output headers");
  };
  auto add_format = [&](CLI::App* sc, const std::string& fallback) {
    sc->add_option("--format", cfg.format, "csv or json (default " + fallback + ")")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* fixed = app.add_subcommand("fixed-points", "interior fixed point, vertices and fixed boundary segments");
  add_params(fixed);
  add_format(fixed, "json");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues at P (closed form and numeric) and at the vertices");
  add_params(spectrum);
  add_format(spectrum, "json");

  auto* simulate = app.add_subcommand("simulate", "iterate the map in the simplex");
  add_params(simulate);
  add_format(simulate, "csv");
  simulate->add_option("--x0", cfg.x0, "initial point x1,x2,x3,x4 (default 0.4,0.3,0.2,0.1)")->delimiter(',')->expected(4);
  simulate->add_option("--iters", cfg.iters, "recorded iterates (default 1000)");
  simulate->add_option("--burn", cfg.burn, "discarded iterates (default 0)");

  auto* nf = app.add_subcommand("normal-form", "exact cubic normal form at the Neimark-Sacker point");
  nf->add_option("--out", cfg.out, "output path (default stdout)");
  add_format(nf, "json");
  nf->add_flag("--show-steps", cfg.show_steps, "full derivation transcript (text unless --format json)");

  auto* curve = app.add_subcommand("curve", "attracting invariant curve for one k1 > 0");
  add_params(curve);
  add_format(curve, "json");
  curve->add_option("--z0", cfg.z0, "reduced start z1,z3,z4 (default (0.5 sqrt(delta), 0, 0))")->delimiter(',')->expected(3);
  curve->add_option("--iters", cfg.iters, "recorded states (default 10000)");
  curve->add_option("--burn", cfg.burn, "discarded states (default max(1e5, 100/delta, 20/delta^2))");
  curve->add_option("--modes", cfg.modes, "Fourier modes for the refinement")->check(CLI::Range(8, 512));

  auto* sweep = app.add_subcommand("sweep", "radius law over a k1 grid");
  add_params(sweep);
  add_format(sweep, "csv");
  sweep->add_option("--k1", cfg.k1_values, "k1 grid (default 0.001,0.002,0.005,0.01,0.02,0.05,0.1)")->delimiter(',');
  sweep->add_option("--iters", cfg.iters, "recorded states per point (default 10000)");
  sweep->add_option("--burn", cfg.burn, "discarded states per point (default auto)");
  sweep->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  sweep->add_flag("--gate", cfg.gate, "exit 5 unless the fitted slope is in [0.4, 0.6]");
  sweep->add_flag("--only", cfg.only, "estimates only, no fit");

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--out", cfg.out, "output path (default stdout)");
  verify->add_option("--jobs", cfg.jobs, "worker threads for the sweep criterion")->check(CLI::Range(1u, 256u));
  add_format(verify, "text lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*fixed) return run_fixed_points(cfg);
    if (*spectrum) return run_spectrum(cfg);
    if (*simulate) return run_simulate(cfg);
    if (*nf) return run_normal_form(cfg);
    if (*curve) return run_curve(cfg);
    if (*sweep) return run_sweep(cfg);
    if (*verify) return run_verify(cfg);
  } catch (const hc::DegenerateParameter& e) {
    std::cerr << "degenerate parameter: " << e.what() << "\n";
    return kDegenerate;
  } catch (const hc::SingularTransform& e) {
    std::cerr << "degenerate parameter: " << e.what() << "\n";
    return kDegenerate;
  } catch (const hc::Discrepancy& e) {
    std::cerr << "discrepancy: " << e.what() << "\n";
    return kDiscrepancy;
  } catch (const hc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
