#include "toepdecomp/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "toepdecomp/error.hpp"

namespace toepdecomp::io {

namespace {

void write(const json& j, bool pretty, int depth, std::string& out) {
  const std::string pad = pretty ? std::string(2 * (depth + 1), ' ') : "";
  const std::string close_pad = pretty ? std::string(2 * depth, ' ') : "";
  const char* nl = pretty ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + json(it.key()).dump() + (pretty ? ": " : ":");
        write(it.value(), pretty, depth + 1, out);
      }
      out += nl + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short numeric arrays such as [re, im] stay on one line
      const bool compact = !pretty || (j.size() <= 2 && j.front().is_number());
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += compact && pretty ? ", " : ",";
        if (!compact) out += nl + pad;
        first = false;
        write(v, pretty, depth + 1, out);
      }
      if (!compact) out += nl + close_pad;
      out += "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorKind::InvalidInput, "complex values must be [re, im] pairs, got " + j.dump());
}

std::vector<Complex> complex_list_from_json(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains(field)) {
    throw Error(ErrorKind::InvalidInput, "missing field \"" + field + "\"");
  }
  const json& list = j.at(field);
  if (!list.is_array()) throw Error(ErrorKind::InvalidInput, "\"" + field + "\" must be an array");
  std::vector<Complex> out;
  out.reserve(list.size());
  for (const auto& v : list) out.push_back(complex_from_json(v));
  return out;
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const SpectralAtom& atom) {
  return {{"rho", atom.rho}, {"epsilon", to_json(atom.epsilon)}, {"x", atom.x}};
}

json to_json(const CandidateResult& result, bool verbose) {
  const auto& cand = result.candidate;
  json j = {{"l", cand.l},
            {"c0", cand.c0},
            {"m", cand.m},
            {"n_minus", cand.n_minus},
            {"n_plus", cand.n_plus},
            {"status", to_string(cand.status)}};
  if (!cand.detail.empty()) j["detail"] = cand.detail;
  if (result.decomposition) {
    const auto& dec = *result.decomposition;
    json atoms = json::array();
    int positive = 0, negative = 0;
    for (const auto& a : dec.atoms) {
      atoms.push_back(to_json(a));
      positive += a.rho > 0;
      negative += a.rho < 0;
    }
    json d = {{"atoms", atoms},
              {"residual", dec.residual},
              {"inertia",
               {{"positive", positive},
                {"negative", negative},
                {"expected_positive", cand.n_plus},
                {"expected_negative", cand.n_minus},
                {"verified", dec.inertia_verified}}}};
    if (verbose) {
      json coeffs = json::array();
      for (const auto& a : dec.resolvent) coeffs.push_back(to_json(a));
      d["resolvent"] = coeffs;
      d["rho_residue"] = dec.rho_residue;
    }
    j["decomposition"] = d;
  }
  return j;
}

json to_json(const DecomposeAllResult& result, bool verbose) {
  json clusters = json::array();
  for (std::size_t l = 0; l < result.spectrum.distinct.size(); ++l) {
    clusters.push_back({{"l", static_cast<int>(l) + 1},
                        {"chi", result.spectrum.distinct[l].value},
                        {"multiplicity", result.spectrum.distinct[l].multiplicity}});
  }
  json candidates = json::array();
  for (const auto& r : result.results) candidates.push_back(to_json(r, verbose));
  json j = {{"clusters", clusters},
            {"candidates", candidates},
            {"admissible", result.admissible_count()}};
  if (verbose) {
    j["eigenvalues"] = result.spectrum.raw;
    j["cluster_tol"] = result.spectrum.cluster_tol;
  }
  return j;
}

json to_json(const UnimodularityReport& report) {
  return {{"self_reciprocal", report.self_reciprocal},
          {"sigma_matrix_order", report.sigma_matrix_order},
          {"leading_minor_dets", report.leading_minor_dets},
          {"sigma_eigenvalues", report.sigma_eigenvalues},
          {"sigma_rank", report.sigma_rank},
          {"verdict", to_string(report.verdict)},
          {"details", report.details}};
}

json to_json(const oracle::PlantedInstance& inst) {
  json c = json::array();
  for (const auto& v : inst.c.values()) c.push_back(to_json(v));
  json atoms = json::array();
  for (const auto& a : inst.atoms) atoms.push_back(to_json(a));
  return {{"c", c}, {"c0", inst.c0}, {"n", inst.n}, {"atoms", atoms}};
}

std::string dump(const json& j, bool pretty) {
  std::string out;
  write(j, pretty, 0, out);
  return out;
}

}  // namespace toepdecomp::io
