#include "toepdecomp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "toepdecomp/error.hpp"
#include "toepdecomp/json_io.hpp"
#include "toepdecomp/oracle.hpp"

namespace toepdecomp::cli {

using nlohmann::json;

namespace {

std::optional<double> env_double(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, std::string(name) + " is not a number: " + raw);
  }
}

void read_tolerance(const json& tol, const char* key, double& slot) {
  if (!tol.contains(key)) return;
  if (!tol[key].is_number()) {
    throw Error(ErrorKind::InvalidInput, std::string("tol.") + key + " must be a number");
  }
  slot = tol[key].get<double>();
}

CommandOutput failure(const std::string& kind, const std::string& message) {
  return {error_document(kind, message), kExitError};
}

template <typename Body>
CommandOutput guarded(Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return failure(std::string(to_string(e.kind())), e.what());
  } catch (const json::exception& e) {
    return failure("InvalidInput", e.what());
  }
}

// Expected atom lists are compared after ordering both sides by argument.
double atom_mismatch(std::vector<SpectralAtom> expected, const std::vector<SpectralAtom>& got) {
  if (expected.size() != got.size()) return std::numeric_limits<double>::infinity();
  std::sort(expected.begin(), expected.end(),
            [](const auto& a, const auto& b) { return node_position(a.epsilon) < node_position(b.epsilon); });
  double worst = 0.0;
  for (std::size_t j = 0; j < got.size(); ++j) {
    worst = std::max({worst, std::abs(expected[j].rho - got[j].rho),
                      std::abs(expected[j].epsilon - got[j].epsilon)});
  }
  return worst;
}

struct ExpectedDecomposition {
  double c0;
  std::vector<SpectralAtom> atoms;
};

struct DemoCase {
  std::string name;
  std::vector<Complex> c;
  std::vector<ExpectedDecomposition> admissible;
  std::vector<std::pair<double, CandidateStatus>> rejected;
};

SpectralAtom atom(double rho, Complex eps) { return {rho, eps, node_position(eps)}; }

std::vector<DemoCase> demo_cases() {
  using std::numbers::pi;
  const Complex i{0.0, 1.0};
  auto e = [](double t) { return std::polar(1.0, t); };
  std::vector<DemoCase> cases;
  cases.push_back({"three nodes from (0, 0, 1)",
                   {0.0, 0.0, 1.0},
                   {{1.0, {atom(1.0 / 3, 1.0), atom(1.0 / 3, -e(pi / 3)), atom(1.0 / 3, e(2 * pi / 3))}},
                    {-1.0,
                     {atom(-1.0 / 3, -1.0), atom(-1.0 / 3, e(pi / 3)), atom(-1.0 / 3, -e(2 * pi / 3))}}},
                   {{0.0, CandidateStatus::PrincipalRankMismatch}}});
  cases.push_back({"mixed signs from (1, 0, 1)",
                   {1.0, 0.0, 1.0},
                   {{0.0, {atom(0.5, 1.0), atom(-0.5, -1.0)}},
                    {2.0, {atom(1.0, 1.0), atom(0.5, i), atom(0.5, -i)}},
                    {-2.0, {atom(-1.0, -1.0), atom(-0.5, i), atom(-0.5, -i)}}},
                   {}});
  return cases;
}

json demo_block(const DemoCase& dc, const JobConfig& cfg, bool& all_match) {
  const AmplitudeVector c(dc.c);
  const auto result = decompose_all(c, Mode::all(), cfg.tol);
  json input = json::array();
  for (const auto& v : dc.c) input.push_back(io::to_json(v));
  json rows = json::array();
  auto find = [&](double c0) -> const CandidateResult* {
    for (const auto& r : result.results)
      if (std::abs(r.candidate.c0 - c0) <= cfg.tol.residual * (1.0 + std::abs(c0))) return &r;
    return nullptr;
  };
  for (const auto& want : dc.admissible) {
    const CandidateResult* got = find(want.c0);
    json row = {{"c0", want.c0}, {"expected_status", "Admissible"}};
    json expected_atoms = json::array();
    for (const auto& a : want.atoms) expected_atoms.push_back(io::to_json(a));
    row["expected_atoms"] = expected_atoms;
    bool ok = got != nullptr && got->decomposition.has_value();
    if (got) row["computed_status"] = to_string(got->candidate.status);
    if (ok) {
      json atoms = json::array();
      for (const auto& a : got->decomposition->atoms) atoms.push_back(io::to_json(a));
      row["computed_atoms"] = atoms;
      const double err = atom_mismatch(want.atoms, got->decomposition->atoms);
      row["max_error"] = err;
      ok = err <= cfg.tol.residual;
    }
    row["match"] = ok;
    all_match = all_match && ok;
    rows.push_back(row);
  }
  for (const auto& [c0, status] : dc.rejected) {
    const CandidateResult* got = find(c0);
    const bool ok = got != nullptr && got->candidate.status == status;
    json row = {{"c0", c0}, {"expected_status", to_string(status)}, {"match", ok}};
    if (got) row["computed_status"] = to_string(got->candidate.status);
    all_match = all_match && ok;
    rows.push_back(row);
  }
  const int expected_count = static_cast<int>(dc.admissible.size());
  all_match = all_match && result.admissible_count() == expected_count;
  return {{"name", dc.name},
          {"c", input},
          {"expected_admissible", expected_count},
          {"computed_admissible", result.admissible_count()},
          {"table", rows}};
}

// Repeated-root resolvent: c_0 = d0, c_1 = (d0 + i d1) e^{i phi},
// c_2 = (d0 + 2i d1) e^{2i phi}.
json repeated_root_block(const JobConfig& cfg, bool& all_match) {
  const double d0 = 1.0, d1 = 1.0, phi = 0.3;
  const Complex i{0.0, 1.0};
  const Complex c1 = (d0 + i * d1) * std::polar(1.0, phi);
  const Complex c2 = (d0 + 2.0 * i * d1) * std::polar(1.0, 2 * phi);
  const HermitianToeplitz full({d0, c1, c2});
  const Polynomial resolvent = resolvent_from_linear_system(full, 2);
  const std::vector<Complex> expected{std::polar(1.0, 2 * phi), -2.0 * std::polar(1.0, phi), 1.0};
  double coeff_err = 0.0;
  json computed = json::array(), wanted = json::array();
  for (int l = 0; l <= 2; ++l) {
    coeff_err = std::max(coeff_err, std::abs(resolvent[l] - expected[l]));
    computed.push_back(io::to_json(resolvent[l]));
    wanted.push_back(io::to_json(expected[l]));
  }
  const auto lemma = unimodularity_check(resolvent, LemmaTolerances{cfg.tol.root, cfg.tol.rank});

  const AmplitudeVector c({c1, c2});
  const auto result = decompose_all(c, Mode::all(), cfg.tol);
  const CandidateResult* shift = nullptr;
  for (const auto& r : result.results)
    if (std::abs(r.candidate.c0 - d0) <= 1e-8) shift = &r;
  const bool no_diagonal = shift != nullptr && !shift->decomposition &&
                           shift->candidate.status == CandidateStatus::LemmaFailedRepeated;
  const bool ok = coeff_err <= cfg.tol.residual && lemma.sigma_rank == 1 &&
                  lemma.verdict == RootVerdict::RepeatedRoots && no_diagonal;
  all_match = all_match && ok;
  return {{"name", "repeated resolvent root"},
          {"parameters", {{"delta0", d0}, {"delta1", d1}, {"phi", phi}}},
          {"c", json::array({io::to_json(c1), io::to_json(c2)})},
          {"expected_resolvent", wanted},
          {"computed_resolvent", computed},
          {"resolvent_error", coeff_err},
          {"expected_sigma_rank", 1},
          {"computed_sigma_rank", lemma.sigma_rank},
          {"expected_verdict", "RepeatedRoots"},
          {"computed_verdict", to_string(lemma.verdict)},
          {"shift_status", shift ? to_string(shift->candidate.status) : "missing"},
          {"diagonal_decomposition", shift != nullptr && shift->decomposition.has_value()},
          {"match", ok}};
}

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json read_input(const std::string& path, std::istream& in) {
  std::string text;
  if (path == "-") {
    text = read_all(in);
  } else {
    std::ifstream file(path);
    if (!file) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
    text = read_all(file);
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

std::vector<oracle::Sign> parse_signs(const std::string& text, int m, std::uint64_t seed) {
  if (text == "mixed") {
    oracle::SplitMix64 rng(seed ^ 0x5deece66dULL);
    return oracle::mixed_signs(m, rng);
  }
  std::vector<oracle::Sign> signs;
  for (char ch : text) {
    if (ch == '+') signs.push_back(oracle::Sign::Plus);
    else if (ch == '-') signs.push_back(oracle::Sign::Minus);
    else throw Error(ErrorKind::InvalidInput, "signs must be '+'/'-' characters or \"mixed\"");
  }
  return signs;
}

}  // namespace

void Overrides::apply(JobConfig& cfg) const {
  if (cluster) cfg.tol.cluster = *cluster;
  if (rank) cfg.tol.rank = *rank;
  if (root) cfg.tol.root = *root;
  if (residual) cfg.tol.residual = *residual;
  if (mode) cfg.mode = *mode;
  cfg.verbose = cfg.verbose || verbose;
}

Overrides overrides_from_env() {
  Overrides ov;
  ov.cluster = env_double("TOEPDECOMP_TOL_CLUSTER");
  ov.rank = env_double("TOEPDECOMP_TOL_RANK");
  ov.root = env_double("TOEPDECOMP_TOL_ROOT");
  ov.residual = env_double("TOEPDECOMP_TOL_RESIDUAL");
  if (const char* m = std::getenv("TOEPDECOMP_MODE"); m && *m) ov.mode = parse_mode(m);
  return ov;
}

Mode parse_mode(const std::string& text, std::optional<int> index) {
  if (text == "all") return Mode::all();
  if (text == "classical-min" || text == "min") return Mode::classical_min();
  if (text == "classical-max" || text == "max") return Mode::classical_max();
  std::string digits;
  if (text.rfind("index:", 0) == 0) {
    digits = text.substr(6);
  } else if (text == "index") {
    if (!index) throw Error(ErrorKind::InvalidInput, "mode \"index\" needs an index l");
    return Mode::at(*index);
  } else {
    digits = text;
  }
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    throw Error(ErrorKind::InvalidInput, "unknown mode \"" + text + "\"");
  }
  return Mode::at(std::stoi(digits));
}

std::string mode_name(Mode mode) {
  switch (mode.kind) {
    case Mode::Kind::All: return "all";
    case Mode::Kind::ClassicalMin: return "classical-min";
    case Mode::Kind::ClassicalMax: return "classical-max";
    case Mode::Kind::Index: return "index:" + std::to_string(mode.index);
  }
  return "all";
}

json error_document(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

JobConfig resolve_config(const json& input, const Overrides& overrides) {
  JobConfig cfg;
  if (input.is_object()) {
    if (input.contains("tol")) {
      const json& tol = input["tol"];
      if (!tol.is_object()) throw Error(ErrorKind::InvalidInput, "\"tol\" must be an object");
      read_tolerance(tol, "cluster", cfg.tol.cluster);
      read_tolerance(tol, "rank", cfg.tol.rank);
      read_tolerance(tol, "root", cfg.tol.root);
      read_tolerance(tol, "residual", cfg.tol.residual);
    }
    if (input.contains("c0_mode")) {
      std::optional<int> l;
      if (input.contains("l")) l = input["l"].get<int>();
      cfg.mode = parse_mode(input["c0_mode"].get<std::string>(), l);
    } else if (input.contains("l")) {
      cfg.mode = Mode::at(input["l"].get<int>());
    }
  }
  overrides.apply(cfg);
  if (!cfg.tol.valid()) throw Error(ErrorKind::InvalidInput, "all tolerances must be > 0");
  return cfg;
}

CommandOutput cmd_decompose(const json& input, const JobConfig& cfg) {
  return guarded([&]() -> CommandOutput {
    const AmplitudeVector c(io::complex_list_from_json(input, "c"));
    const auto result = decompose_all(c, cfg.mode, cfg.tol);
    json doc = {{"n", c.size()}, {"mode", mode_name(cfg.mode)}};
    doc.update(io::to_json(result, cfg.verbose));
    return {doc, result.admissible_count() > 0 ? kExitSuccess : kExitNoResult};
  });
}

CommandOutput cmd_check_roots(const json& input, const JobConfig& cfg) {
  return guarded([&]() -> CommandOutput {
    const auto raw = io::complex_list_from_json(input, "coeffs");
    if (raw.empty()) throw Error(ErrorKind::InvalidInput, "coefficient list is empty");
    const Polynomial p(raw);
    const auto report = unimodularity_check(p, LemmaTolerances{cfg.tol.root, cfg.tol.rank});
    json coeffs = json::array();
    for (const auto& a : p.coeffs()) coeffs.push_back(io::to_json(a));
    json doc = {{"degree", p.degree()}, {"monic_coeffs", coeffs}};
    doc.update(io::to_json(report));
    if (p.degree() == 2 || p.degree() == 3) doc["closed_form_region"] = low_degree_region_check(p);
    if (report.verdict == RootVerdict::AllUnimodularDistinct) {
      json roots = json::array();
      for (const auto& z : polynomial_roots(p, cfg.tol.root)) {
        roots.push_back({{"root", io::to_json(z)}, {"x", node_position(z)}});
      }
      doc["roots"] = roots;
    } else if (report.verdict == RootVerdict::RepeatedRoots) {
      json reduced = json::array();
      for (const auto& a : square_free_part(p, cfg.tol.root).coeffs()) reduced.push_back(io::to_json(a));
      doc["square_free_part"] = reduced;
    }
    return {doc, report.verdict == RootVerdict::AllUnimodularDistinct ? kExitSuccess : kExitNoResult};
  });
}

CommandOutput cmd_demo(const JobConfig& cfg) {
  return guarded([&]() -> CommandOutput {
    bool all_match = true;
    json blocks = json::array();
    for (const auto& dc : demo_cases()) blocks.push_back(demo_block(dc, cfg, all_match));
    blocks.push_back(repeated_root_block(cfg, all_match));
    return {{{"examples", blocks}, {"all_match", all_match}}, all_match ? kExitSuccess : kExitError};
  });
}

int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Signed exponential-sum decompositions of Hermitian Toeplitz data"};
  app.require_subcommand(1);

  Overrides flags;
  std::string input_path = "-";
  std::string mode_text;
  bool pretty = false;
  auto common = [&](CLI::App* sub, bool with_input) {
    sub->add_option("--mode", mode_text, "all | classical-min | classical-max | index:L");
    sub->add_option("--tol-rank", flags.rank, "relative rank tolerance");
    sub->add_option("--tol-root", flags.root, "root / coefficient tolerance");
    sub->add_option("--tol-residual", flags.residual, "reconstruction tolerance");
    sub->add_option("--tol-cluster", flags.cluster, "eigenvalue clustering tolerance");
    sub->add_flag("--pretty", pretty, "indent the JSON output");
    sub->add_flag("--verbose", flags.verbose, "include intermediate quantities");
    if (with_input) sub->add_option("--input", input_path, "input JSON file, - for stdin");
  };
  CLI::App* decompose = app.add_subcommand("decompose", "all admissible decompositions of c_1..c_n");
  common(decompose, true);
  CLI::App* check = app.add_subcommand("check-roots", "unimodularity report for a polynomial");
  common(check, true);
  CLI::App* demo = app.add_subcommand("demo", "worked examples with expected values");
  common(demo, false);

  CLI::App* synth = app.add_subcommand("synth", "emit a planted instance as a fixture file");
  int m = 2, n = 4;
  std::uint64_t seed = 1;
  std::string signs_text = "mixed";
  double min_sep = oracle::kDefaultMinSeparation;
  std::string output_path = "-";
  synth->add_option("--m", m, "number of atoms")->required();
  synth->add_option("--n", n, "number of data values c_1..c_n")->required();
  synth->add_option("--seed", seed, "splitmix64 seed");
  synth->add_option("--signs", signs_text, "'+'/'-' per atom, or \"mixed\"");
  synth->add_option("--min-sep", min_sep, "minimum node separation in radians");
  synth->add_option("--output", output_path, "output file, - for stdout");
  synth->add_flag("--pretty", pretty, "indent the JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << io::dump(error_document("InvalidInput", e.what()), pretty) << "\n";
    return kExitError;
  }

  CommandOutput result;
  try {
    Overrides ov = overrides_from_env();
    if (flags.cluster) ov.cluster = flags.cluster;
    if (flags.rank) ov.rank = flags.rank;
    if (flags.root) ov.root = flags.root;
    if (flags.residual) ov.residual = flags.residual;
    if (!mode_text.empty()) ov.mode = parse_mode(mode_text);
    ov.verbose = flags.verbose;

    if (*decompose || *check) {
      const json input = read_input(input_path, in);
      const JobConfig cfg = resolve_config(input, ov);
      result = *decompose ? cmd_decompose(input, cfg) : cmd_check_roots(input, cfg);
    } else if (*demo) {
      result = cmd_demo(resolve_config(json::object(), ov));
    } else {
      const auto signs = parse_signs(signs_text, m, seed);
      const auto inst = oracle::synthesize_instance(m, n, signs, seed, min_sep);
      json doc = io::to_json(inst);
      doc["seed"] = seed;
      doc["generator"] = "splitmix64";
      doc["min_separation"] = min_sep;
      if (output_path != "-") {
        std::ofstream file(output_path);
        if (!file) throw Error(ErrorKind::InvalidInput, "cannot write " + output_path);
        file << io::dump(doc, pretty) << "\n";
        result = {{{"written", output_path}}, kExitSuccess};
      } else {
        result = {doc, kExitSuccess};
      }
    }
  } catch (const Error& e) {
    result = failure(std::string(to_string(e.kind())), e.what());
  } catch (const json::exception& e) {
    result = failure("InvalidInput", e.what());
  }
  if (result.exit_code == kExitError && result.doc.contains("error")) {
    err << "error: " << result.doc["error"]["message"].get<std::string>() << "\n";
  }
  out << io::dump(result.doc, pretty) << "\n";
  return result.exit_code;
}

}  // namespace toepdecomp::cli
