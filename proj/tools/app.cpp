#include "app.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "restrict4/newton.hpp"
#include "restrict4/polynomial.hpp"

namespace restrict4::app {
namespace {

Polynomial require_poly(const RunConfig& c) {
  if (c.poly.empty()) throw DomainError("--poly is required");
  return parse_polynomial(c.poly);
}

HeightSearchOptions height_options(const RunConfig& c) {
  HeightSearchOptions o;
  o.starts = c.starts;
  o.iters = c.iters;
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

DecayFitOptions decay_options(const RunConfig& c) {
  DecayFitOptions o;
  o.mag_min = c.xi_min;
  o.mag_max = c.xi_max;
  o.n_mags = c.n_mags;
  o.n_dirs = c.n_dirs;
  o.seed = c.seed;
  o.quadrature.max_evaluations = c.budget;
  o.quadrature.threads = c.threads;
  return o;
}

KnappOptions knapp_options(const RunConfig& c) {
  KnappOptions o;
  o.threads = c.threads;
  return o;
}

Json document(const char* command, const RunConfig& c, Json result) {
  return Json{{"schema", kSchemaVersion},
              {"command", command},
              {"config", config_json(c)},
              {"result", std::move(result)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// CSV body behind a comment line carrying the schema and resolved config.
std::string csv(const RunConfig& c, const std::string& body) {
  return "# " + std::string(kSchemaVersion) + " " + config_json(c).dump() + "\n" + body;
}

/// Every direction decays at least as fast as |xi|^{-1/h}, up to 0.15.
bool decay_conforms(const DecayFit& fit, const Rational& beta) {
  for (const auto& d : fit.per_direction) {
    if (d.valid && d.slope > -beta.to_double() + 0.15) return false;
  }
  return true;
}

Json decay_verdict_json(const DecayFit& fit, const Rational& h) {
  const Rational beta = h.reciprocal();
  Json j = decay_json(fit);
  j["worst_slope"] = real(-fit.fitted_exponent);
  j["h"] = to_json(h);
  j["inverse_h"] = to_json(beta);
  j["inverse_h_value"] = real(beta.to_double());
  const bool ok = !fit.partial && decay_conforms(fit, beta);
  j["verdict"] = fit.partial ? "partial" : ok ? "conforms" : "too_slow";
  return j;
}

std::string file_tag(const Rational& p) {
  std::string s = p.str();
  for (char& ch : s) {
    if (ch == '/') ch = '_';
  }
  return s;
}

/// Phi in adapted coordinates, with its distance data.
struct Adapted {
  Polynomial phi;
  HeightResult height;
};

Adapted adapt(const RunConfig& c, const Polynomial& phi) {
  Adapted a{phi, height_search(phi, height_options(c))};
  a.phi = a.height.adapted;
  return a;
}

std::vector<double> scales(const RunConfig& c) {
  return geometric_scales(c.delta_max, c.delta_min, c.n_scales);
}

void write_files(const CommandOutput& o, const std::string& dir) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : o.files) {
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    if (!f) throw Error("cannot write " + name + " in " + dir);
    f << contents;
  }
}

void add_common(CLI::App* cmd, RunConfig& c, bool& json) {
  cmd->add_option("--poly", c.poly, "Graph function Phi(x1, x2, x3), e.g. \"x1^2+x2^2+x3^4\"");
  cmd->add_option("--out", c.output_dir, "Directory for JSON/CSV output files");
  cmd->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
  cmd->add_flag("--json", json, "Print the JSON document instead of a summary");
  cmd->add_option("--bump-radius", c.bump_radius, "Support radius r of the bump psi")
      ->capture_default_str();
  cmd->add_option("--budget", c.budget, "Maximum integrand evaluations per |J| sample")
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--starts", c.starts, "Height search multistart count")->capture_default_str();
  cmd->add_option("--iters", c.iters, "Height search refinement sweeps")->capture_default_str();
}

void add_decay(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--xi-min", c.xi_min, "Smallest |xi|")->capture_default_str();
  cmd->add_option("--xi-max", c.xi_max, "Largest |xi|")->capture_default_str();
  cmd->add_option("--mags", c.n_mags, "Number of magnitudes (geometric grid)")->capture_default_str();
  cmd->add_option("--dirs", c.n_dirs, "Number of directions (first is the normal)")
      ->capture_default_str();
}

void add_knapp(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--delta-min", c.delta_min, "Smallest Knapp scale")->capture_default_str();
  cmd->add_option("--delta-max", c.delta_max, "Largest Knapp scale")->capture_default_str();
  cmd->add_option("--scales", c.n_scales, "Number of Knapp scales")->capture_default_str();
  cmd->add_option("--cap", c.cap_constant, "Normal half-width factor c of the frequency box")
      ->capture_default_str();
}

}  // namespace

Json config_json(const RunConfig& c) {
  Json j;
  j["poly"] = c.poly;
  j["bump_radius"] = real(c.bump_radius);
  j["seed"] = c.seed;
  j["budget"] = c.budget;
  j["xi_min"] = real(c.xi_min);
  j["xi_max"] = real(c.xi_max);
  j["n_mags"] = c.n_mags;
  j["n_dirs"] = c.n_dirs;
  j["starts"] = c.starts;
  j["iters"] = c.iters;
  j["h_override"] = c.h_override ? Json(*c.h_override) : Json(nullptr);
  j["p"] = c.p ? Json(*c.p) : Json(nullptr);
  j["delta_min"] = real(c.delta_min);
  j["delta_max"] = real(c.delta_max);
  j["n_scales"] = c.n_scales;
  j["cap_constant"] = real(c.cap_constant);
  j["output_dir"] = c.output_dir;
  return j;
}

CommandOutput cmd_parse(const RunConfig& c) {
  const Polynomial p = require_poly(c);
  CommandOutput o;
  Json r{{"input", c.poly},
         {"canonical", to_string(p)},
         {"degree", p.degree()},
         {"terms", p.size()}};
  o.json = document("parse", c, r);
  o.summary.push_back(to_string(p));
  o.files.emplace_back("parse.json", dump(o.json));
  return o;
}

CommandOutput cmd_newton(const RunConfig& c) {
  const Polynomial p = require_poly(c);
  Warnings warnings;
  const NewtonPolyhedron np = build_polyhedron(support(p, &warnings));
  DistanceResult dist = distance(np);
  dist.warnings.insert(dist.warnings.begin(), warnings.begin(), warnings.end());
  CommandOutput o;
  o.json = document("newton", c, polyhedron_json(np, dist));
  o.summary.push_back("distance " + dist.d.str());
  o.summary.push_back("principal face dimension " + std::to_string(dist.principal_face_dim));
  for (const auto& w : dist.warnings) o.summary.push_back("warning: " + w);
  o.files.emplace_back("newton.json", dump(o.json));
  return o;
}

CommandOutput cmd_height(const RunConfig& c) {
  const HeightResult h = height_search(require_poly(c), height_options(c));
  CommandOutput o;
  o.json = document("height", c, height_json(h));
  o.summary.push_back("h " + h.h.str() + (h.certified ? "" : " (lower bound, not certified)"));
  o.summary.push_back("d in original coordinates " + h.d_original.str());
  o.files.emplace_back("height.json", dump(o.json));
  return o;
}

CommandOutput cmd_exponents(const RunConfig& c) {
  ExponentReport e;
  Json r;
  Json height = nullptr;
  if (c.h_override) {
    e = critical_p(Rational::parse(*c.h_override));
    r["d_original"] = nullptr;
    r["h"] = to_json(e.h);
    r["certified"] = nullptr;
    r["rotation"] = nullptr;
  } else {
    const HeightResult h = height_search(require_poly(c), height_options(c));
    e = critical_p(h.h, h.adapted_distance.d);
    height = height_json(h);
    r["d_original"] = height["d_original"];
    r["h"] = height["h"];
    r["certified"] = height["certified"];
    r["rotation"] = height["rotation"];
  }
  const Json exps = exponents_json(e);
  for (const auto& [key, value] : exps.items()) {
    if (!r.contains(key)) r[key] = value;
  }
  r["height_search"] = height;
  CommandOutput o;
  o.json = document("exponents", c, r);
  o.summary.push_back("h " + e.h.str() + ", beta " + e.beta.str() + ", p* " + e.p_star.str() +
                      ", q* " + e.q_star.str());
  o.files.emplace_back("exponents.json", dump(o.json));
  return o;
}

CommandOutput cmd_decay(const RunConfig& c) {
  const Polynomial phi = require_poly(c);
  const HeightResult h = height_search(phi, height_options(c));
  const DecayFit fit = decay_fit(SurfacePatch(phi, c.bump_radius), decay_options(c));
  CommandOutput o;
  o.exit_code = fit.partial ? 4 : 0;
  o.json = document("decay", c, decay_verdict_json(fit, h.h));
  o.summary.push_back("fitted decay exponent " + real_text(fit.fitted_exponent) + " +- " +
                      real_text(fit.fit_stderr) + " (worst direction " +
                      std::to_string(fit.worst_direction) + ")");
  o.summary.push_back("1/h " + h.h.reciprocal().str() + ", verdict " +
                      o.json["result"]["verdict"].get<std::string>());
  if (fit.partial) o.summary.push_back("partial: quadrature budget exceeded for some samples");
  o.files.emplace_back("decay.json", dump(o.json));
  o.files.emplace_back("decay_samples.csv", csv(c, decay_csv(fit)));
  return o;
}

CommandOutput cmd_knapp(const RunConfig& c) {
  const Adapted a = adapt(c, require_poly(c));
  const Rational p = c.p ? Rational::parse(*c.p) : critical_p(a.height.h).p_star;
  const KnappFamily fam = knapp_family(a.phi, a.height.adapted_distance, scales(c), c.cap_constant);
  const KnappReport r = knapp_scan(SurfacePatch(a.phi, c.bump_radius), fam, p, knapp_options(c));
  CommandOutput o;
  Json result = knapp_json(r);
  result["family"] = knapp_family_json(fam);
  o.json = document("knapp", c, result);
  o.summary.push_back("p " + p.str() + ": fitted slope " + real_text(r.fitted_slope) +
                      ", predicted " + real_text(r.predicted_slope) + ", verdict " +
                      std::string(to_string(r.verdict)));
  o.files.emplace_back("knapp_" + file_tag(p) + ".json", dump(o.json));
  o.files.emplace_back("knapp_" + file_tag(p) + ".csv", csv(c, knapp_csv(r)));
  return o;
}

VerifyReport verify(const RunConfig& c) {
  const Polynomial phi = require_poly(c);
  VerifyReport v;

  v.convex = check_convex(phi, c.bump_radius, 9).convex;
  if (!v.convex) v.warnings.push_back("convexity check failed");
  v.finite_line_type = check_finite_line_type(phi, 16).finite;
  if (!v.finite_line_type) v.warnings.push_back("finite line type check failed");

  const Adapted a = adapt(c, phi);
  if (!a.height.certified) {
    v.warnings.push_back("height search did not reach a certified adapted system; h is a lower bound");
  }
  v.exponents = critical_p(a.height.h, a.height.adapted_distance.d);

  v.decay = decay_fit(SurfacePatch(phi, c.bump_radius), decay_options(c));
  v.decay_ok = !v.decay.partial && decay_conforms(v.decay, v.exponents.beta);

  const Rational step(1, 10);
  std::vector<Rational> ps;
  for (const Rational& p : {v.exponents.p_star - step, v.exponents.p_star, v.exponents.p_star + step}) {
    if (p > Rational(1) && p <= Rational(2)) {
      ps.push_back(p);
    } else {
      v.warnings.push_back("Knapp scan skipped at p = " + p.str() + " (outside (1, 2])");
    }
  }
  if (!ps.empty()) {
    const KnappFamily fam =
        knapp_family(a.phi, a.height.adapted_distance, scales(c), c.cap_constant);
    v.warnings.insert(v.warnings.end(), fam.warnings.begin(), fam.warnings.end());
    v.knapp = knapp_scan(SurfacePatch(a.phi, c.bump_radius), fam, ps, knapp_options(c));
  }
  v.knapp_ok = v.knapp.size() == 3 && v.knapp[0].verdict == Verdict::bounded &&
               v.knapp[1].verdict == Verdict::critical &&
               v.knapp[2].verdict == Verdict::divergent;
  v.pass = v.decay_ok && v.knapp_ok;
  return v;
}

Json verify_json(const VerifyReport& r) {
  Json knapp = Json::array();
  for (const auto& k : r.knapp) knapp.push_back(knapp_json(k));
  Json j;
  j["pass"] = r.pass;
  j["decay_ok"] = r.decay_ok;
  j["knapp_ok"] = r.knapp_ok;
  j["convex"] = r.convex;
  j["finite_line_type"] = r.finite_line_type;
  j["exponents"] = exponents_json(r.exponents);
  j["decay"] = decay_verdict_json(r.decay, r.exponents.h);
  j["knapp"] = knapp;
  Json w = Json::array();
  for (const auto& s : r.warnings) w.push_back(s);
  j["warnings"] = w;
  return j;
}

CommandOutput cmd_verify(const RunConfig& c) {
  const VerifyReport v = verify(c);
  CommandOutput o;
  o.exit_code = v.decay.partial ? 4 : 0;
  o.json = document("verify", c, verify_json(v));
  o.summary.push_back(std::string("pass ") + (v.pass ? "true" : "false"));
  o.summary.push_back("p* " + v.exponents.p_star.str() + ", h " + v.exponents.h.str());
  o.summary.push_back("decay exponent " + real_text(v.decay.fitted_exponent) + " vs 1/h " +
                      real_text(v.exponents.beta.to_double()));
  for (const auto& k : v.knapp) {
    o.summary.push_back("knapp p " + k.p.str() + ": " + std::string(to_string(k.verdict)) +
                        " (slope " + real_text(k.fitted_slope) + ", predicted " +
                        real_text(k.predicted_slope) + ")");
  }
  for (const auto& w : v.warnings) o.summary.push_back("warning: " + w);
  o.files.emplace_back("verify.json", dump(o.json));
  o.files.emplace_back("decay_samples.csv", csv(c, decay_csv(v.decay)));
  for (const auto& k : v.knapp) {
    o.files.emplace_back("knapp_" + file_tag(k.p) + ".csv", csv(c, knapp_csv(k)));
  }
  return o;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Newton polyhedra, oscillatory decay and restriction exponents for x4 = Phi(x1, x2, x3)",
               "restrict4"};
  cli.require_subcommand(1);
  RunConfig c;
  bool json = false;

  using Handler = CommandOutput (*)(const RunConfig&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler h) {
    CLI::App* cmd = cli.add_subcommand(name, help);
    add_common(cmd, c, json);
    commands.emplace_back(cmd, h);
    return cmd;
  };
  add("parse", "Parse Phi and print its canonical form", cmd_parse);
  add("newton", "Newton polyhedron, distance and principal face", cmd_newton);
  add("height", "Height by search over rotations", cmd_height);
  add("exponents", "Decay rate and critical restriction exponents", cmd_exponents)
      ->add_option("--h-override", c.h_override, "Use this height instead of searching");
  add_decay(add("decay", "Fit the decay of the Fourier transform of the surface measure", cmd_decay), c);
  CLI::App* knapp = add("knapp", "Knapp-type scan at one exponent p", cmd_knapp);
  knapp->add_option("--p", c.p, "Exponent p as a rational, e.g. 10/7 (default p*)");
  add_knapp(knapp, c);
  CLI::App* verify_cmd = add("verify", "Run the whole pipeline and report pass/fail", cmd_verify);
  add_decay(verify_cmd, c);
  add_knapp(verify_cmd, c);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e, out, err);
  }

  Handler handler = nullptr;
  for (const auto& [cmd, h] : commands) {
    if (cmd->parsed()) handler = h;
  }
  try {
    const CommandOutput o = handler(c);
    write_files(o, c.output_dir);
    if (json) {
      out << dump(o.json);
    } else {
      for (const auto& line : o.summary) out << line << '\n';
    }
    return o.exit_code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateInput& e) {
    err << "degenerate input: " << e.what() << '\n';
    return 3;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace restrict4::app
