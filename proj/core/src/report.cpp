#include "restrict4/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace restrict4 {

std::string real_text(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(real_text(v).c_str(), nullptr);
}

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const Exponent& k) {
  Json a = Json::array();
  for (int e : k) a.push_back(e);
  return a;
}

namespace {

Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_json(r));
  return a;
}

Json strings(const Warnings& w) {
  Json a = Json::array();
  for (const auto& s : w) a.push_back(s);
  return a;
}

}  // namespace

Json polyhedron_json(const NewtonPolyhedron& np, const DistanceResult& dist) {
  Json j;
  j["nvars"] = np.nvars;
  Json support = Json::array();
  for (const auto& k : np.source.points) support.push_back(to_json(k));
  j["support"] = support;
  Json vertices = Json::array();
  for (const auto& v : np.vertices) vertices.push_back(to_json(v));
  j["vertices"] = vertices;
  Json facets = Json::array();
  for (const auto& f : np.facets) {
    facets.push_back(Json{{"normal", rationals(f.normal)}, {"offset", to_json(f.offset)}});
  }
  j["facets"] = facets;
  j["distance"] = to_json(dist.d);
  j["principal_face_dim"] = dist.principal_face_dim;
  Json face_vertices = Json::array();
  for (const auto& v : dist.principal_face_vertices) face_vertices.push_back(to_json(v));
  j["principal_face"] = Json{{"dimension", dist.principal_face_dim},
                             {"vertices", face_vertices},
                             {"active_facets", dist.active_facets},
                             {"attaining_normal", rationals(dist.attaining_normal)},
                             {"attaining_offset", to_json(dist.attaining_offset)}};
  j["warnings"] = strings(dist.warnings);
  return j;
}

Json height_json(const HeightResult& h) {
  Json trace = Json::array();
  for (const auto& t : h.trace) {
    trace.push_back(Json{{"start", t.start},
                         {"rotation_vector", {real(t.rotation_vector[0]), real(t.rotation_vector[1]),
                                              real(t.rotation_vector[2])}},
                         {"d", to_json(t.d)},
                         {"pruned_terms", t.pruned_terms}});
  }
  Json matrix = Json::array();
  const auto& m = h.maximizer.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(real(m(r, c)));
    matrix.push_back(row);
  }
  Json j;
  j["h"] = to_json(h.h);
  j["d_original"] = to_json(h.d_original);
  j["certified"] = h.certified;
  j["rotation"] = matrix;
  j["adapted_phi"] = to_string(h.adapted);
  j["adapted_principal_face_dimension"] = h.adapted_distance.principal_face_dim;
  j["trace"] = trace;
  return j;
}

Json exponents_json(const ExponentReport& e) {
  return Json{{"h", to_json(e.h)},         {"d", to_json(e.d)},
              {"beta", to_json(e.beta)},   {"p_star", to_json(e.p_star)},
              {"q_star", to_json(e.q_star)}, {"q_lower", to_json(e.q_lower)},
              {"m", e.m}};
}

Json decay_json(const DecayFit& fit) {
  Json dirs = Json::array();
  for (std::size_t d = 0; d < fit.directions.size(); ++d) {
    const auto& u = fit.directions[d];
    const auto& f = fit.per_direction[d];
    dirs.push_back(Json{{"index", d},
                        {"direction", {real(u[0]), real(u[1]), real(u[2]), real(u[3])}},
                        {"slope", f.valid ? real(f.slope) : Json(nullptr)},
                        {"slope_stderr", f.valid ? real(f.slope_stderr) : Json(nullptr)},
                        {"points", f.points}});
  }
  Json mags = Json::array();
  for (double m : fit.magnitudes) mags.push_back(real(m));
  Json j;
  j["fitted_exponent"] = real(fit.fitted_exponent);
  j["fit_stderr"] = real(fit.fit_stderr);
  j["worst_direction"] = fit.worst_direction;
  j["partial"] = fit.partial;
  j["magnitudes"] = mags;
  j["directions"] = dirs;
  j["warnings"] = strings(fit.warnings);
  return j;
}

Json knapp_family_json(const KnappFamily& fam) {
  Json scales = Json::array();
  for (double s : fam.scales) scales.push_back(real(s));
  return Json{{"weights", rationals(fam.weights)},
              {"d", to_json(fam.d)},
              {"cap_constant", real(fam.cap_constant)},
              {"c_phi", real(fam.c_phi)},
              {"scales", scales},
              {"warnings", strings(fam.warnings)}};
}

Json knapp_json(const KnappReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back(Json{{"delta", real(s.delta)},
                           {"lhs", real(s.lhs)},
                           {"rhs", real(s.rhs)},
                           {"ratio", real(s.ratio)},
                           {"predicted_exponent", real(s.predicted_exponent)}});
  }
  return Json{{"p", to_json(r.p)},
              {"fitted_slope", real(r.fitted_slope)},
              {"slope_stderr", real(r.slope_stderr)},
              {"predicted_slope", real(r.predicted_slope)},
              {"verdict", std::string(to_string(r.verdict))},
              {"crossing_p", to_json(r.crossing_p)},
              {"plancherel_rel_error", real(r.plancherel_rel_error)},
              {"samples", samples},
              {"warnings", strings(r.warnings)}};
}

std::string decay_csv(const DecayFit& fit) {
  std::ostringstream out;
  out << "dir_index,xi1,xi2,xi3,xi4,abs_xi,re_J,im_J,abs_J,panels_per_axis,converged\n";
  for (const auto& s : fit.samples) {
    out << s.dir_index;
    for (double x : s.xi) out << ',' << real_text(x);
    out << ',' << real_text(s.abs_xi) << ',' << real_text(s.j.real()) << ','
        << real_text(s.j.imag()) << ',' << real_text(std::abs(s.j)) << ',' << s.panels[0] << 'x'
        << s.panels[1] << 'x' << s.panels[2] << ',' << (s.converged ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string knapp_csv(const KnappReport& r) {
  std::ostringstream out;
  out << "delta,lhs,rhs,ratio,predicted_exponent\n";
  for (const auto& s : r.samples) {
    out << real_text(s.delta) << ',' << real_text(s.lhs) << ',' << real_text(s.rhs) << ','
        << real_text(s.ratio) << ',' << real_text(s.predicted_exponent) << '\n';
  }
  return out.str();
}

}  // namespace restrict4
