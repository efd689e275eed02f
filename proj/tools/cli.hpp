// cli.hpp
// Command-line front end. `run` is separate from main so tests can drive it in-process.

#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <oamqi/bell.hpp>
#include <oamqi/io.hpp>
#include <oamqi/soba.hpp>
#include <oamqi/tomography.hpp>

#include "schema.hpp"

namespace oamqi::cli {

using io::json;

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kGuard = 3 };

inline constexpr const char* kConfigEnv = "OAMQI_CONFIG";

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline json error_object(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

inline double to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw ValidationError(what + " is not valid JSON");
  }
}

inline json read_json_file(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + what + " '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), what + " '" + path + "'");
}

// "uniform", "gaussian:<sigma>", or a JSON spectrum object.
inline json spectrum_json(const std::string& text) {
  if (text == "uniform") return {{"kind", "uniform"}};
  if (text.rfind("gaussian:", 0) == 0) {
    const std::string rest = text.substr(9);
    std::size_t used = 0;
    double sigma = 0.0;
    try {
      sigma = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) throw ValidationError("bad gaussian width '" + rest + "'");
    return {{"kind", "gaussian"}, {"sigma", sigma}};
  }
  if (!text.empty() && text.front() == '{') return parse_json_text(text, "spectrum");
  throw ValidationError("spectrum must be 'uniform', 'gaussian:<sigma>' or a JSON object");
}

inline PhotonState input_state(const std::string& text, Truncation k) {
  auto s = io::photon_state_from_json(parse_json_text(text, "state"), k);
  if (!(s.norm() > 0.0)) throw ValidationError("state has zero norm");
  s.normalize();
  return s;
}

inline Circuit named_circuit(const std::string& name) {
  if (name == "sorter") return build_sorter();
  if (name == "s2_setup") return build_s2_setup();
  if (name == "s3_setup") return build_s3_setup();
  if (name == "soba") return build_soba();
  std::ifstream probe(name);
  if (!probe) throw ValidationError("unknown circuit '" + name + "' (built-ins: sorter, s2_setup, s3_setup, soba)");
  return io::circuit_from_json(read_json_file(name, "circuit file"));
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline std::string csv_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

inline void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(child, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), rows);
  } else {
    rows.emplace_back(prefix, csv_value(v));
  }
}

// Registers options whose values may also come from the config file, and echoes them back.
class Binder {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key, T& var, const std::string& desc) {
    CLI::Option* opt = app->add_option(flag, var, desc)->capture_default_str();
    merge_.push_back([opt, key, &var](const json& cfg) {
      if (opt->count() > 0 || !cfg.contains(key) || cfg.at(key).is_null()) return;
      const json& v = cfg.at(key);
      if constexpr (std::is_same_v<T, std::string>)
        var = v.is_string() ? v.get<std::string>() : v.dump();
      else
        var = v.get<T>();
    });
    echo_.push_back([key, &var](json& out) { out[key] = var; });
    return opt;
  }

  void merge(const json& cfg) const {
    try {
      for (const auto& f : merge_) f(cfg);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("config value has the wrong type: ") + e.what());
    }
  }

  json echo() const {
    json out = json::object();
    for (const auto& f : echo_) f(out);
    return out;
  }

 private:
  std::vector<std::function<void(const json&)>> merge_;
  std::vector<std::function<void(json&)>> echo_;
};

struct Globals {
  int K = kDefaultTruncation;
  std::string spectrum = "uniform";
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string format = "json";
};

struct Params {
  std::string state;
  std::string circuit = "sorter";
  int spp_sign = -1;
  double theta = 0.0, theta2 = 45.0, chi = 22.5, chi2 = 67.5;
  std::uint64_t rounds = 10000;
  std::string message = "00";
  std::string source = "vortex";
  std::string label = "psi+";
};

inline const std::string kDefaultState = R"({"coeffs":[[0,1],[1,1]]})";

inline json sampling_json(const SamplingSpec& s) { return {{"shots", s.shots}, {"seed", s.seed}, {"prng", kPrngName}}; }

inline json ports_with_counts(const std::vector<PathLabel>& names, const std::vector<double>& probs,
                              std::optional<SamplingSpec> sampling, std::uint64_t stream, json& report) {
  json ports = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) ports[names[i]] = probs[i];
  if (sampling) {
    Rng rng(derive_seed(sampling->seed, stream));
    const auto counts = sample_multinomial(probs, sampling->shots, rng);
    json c = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) c[names[i]] = counts[i];
    report["counts"] = std::move(c);
    report["sampling"] = sampling_json(*sampling);
  }
  return ports;
}

// ---- commands ----------------------------------------------------------------

inline json cmd_sorter(const Params& p, Truncation k, std::optional<SamplingSpec> sampling) {
  const Circuit c = named_circuit(p.circuit);
  const auto in = input_state(p.state.empty() ? kDefaultState : p.state, k);
  const auto out = c.apply(in);
  json r;
  r["circuit"] = c.name();
  r["input"] = io::to_json(in);
  r["ports"] = ports_with_counts(c.detector_paths(), detect_all(c, out), sampling, 0, r);
  return r;
}

inline json cmd_tomography(const Params& p, Truncation k, std::optional<SamplingSpec> sampling) {
  if (p.spp_sign != 1 && p.spp_sign != -1) throw ValidationError("--spp-sign must be +1 or -1");
  const auto sign = p.spp_sign > 0 ? SppSign::Plus : SppSign::Minus;
  const auto in = input_state(p.state.empty() ? kDefaultState : p.state, k);
  std::array<PortIntensities, 3> I = {measure_s0_s1(in), measure_s2(in, sign), measure_s3(in, sign)};
  json r;
  if (sampling) {
    for (std::size_t i = 0; i < 3; ++i) {
      Rng rng(derive_seed(sampling->seed, i));
      const std::array<double, 2> probs = {I[i].I1, I[i].I2};
      const auto counts = sample_multinomial(probs, sampling->shots, rng);
      const double n = static_cast<double>(sampling->shots);
      I[i] = {counts[0] / n, counts[1] / n};
    }
    r["sampling"] = sampling_json(*sampling);
  }
  const StokesVector sv{I[0].I1 + I[0].I2, I[0].I1 - I[0].I2, I[1].I2 - I[1].I1, I[2].I1 - I[2].I2};
  const auto q = reconstruct(sv);
  r["input"] = io::to_json(in);
  r["s0"] = sv.s0;
  r["s1"] = sv.s1;
  r["s2"] = sv.s2;
  r["s3"] = sv.s3;
  json rho = json::array();
  for (int i = 0; i < 2; ++i) {
    json row = json::array();
    for (int j = 0; j < 2; ++j) row.push_back({q(i, j).real(), q(i, j).imag()});
    rho.push_back(std::move(row));
  }
  r["rho"] = std::move(rho);
  r["clipped"] = q.clipped;
  r["eigenvalues"] = q.eigenvalues();
  r["spp_sign"] = p.spp_sign;
  static const std::array<const char*, 3> setups = {"s0_s1", "s2", "s3"};
  for (std::size_t i = 0; i < 3; ++i) r["intensities"][setups[i]] = {{"I1", I[i].I1}, {"I2", I[i].I2}};
  if (const auto qubit = single_pair_qubit(in)) r["fidelity"] = fidelity(q, (*qubit)[0], (*qubit)[1]);
  return r;
}

inline SourceSpec vortex_spec(const SpectrumModel& spectrum) { return {1, spectrum, PolarizationMode::ProductHH}; }

inline json cmd_bell(const Params& p, const SpectrumModel& spectrum, std::optional<SamplingSpec> sampling) {
  const auto spec = vortex_spec(spectrum);
  const auto res = chsh(spdc(spec), to_radians(p.theta), to_radians(p.theta2), to_radians(p.chi), to_radians(p.chi2), sampling);
  static const std::array<const char*, 4> names = {"theta_chi", "theta_chi2", "theta2_chi", "theta2_chi2"};
  json r;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& t = res.tables[i];
    json c = {{"D13", t.p13}, {"D14", t.p14}, {"D23", t.p23}, {"D24", t.p24}};
    c["C"] = t.p13 + t.p14 > 0.0 ? json(t.normalized_coincidence()) : json(nullptr);
    if (t.sampled) c["counts"] = t.counts;
    r["C"][names[i]] = std::move(c);
    r["E"][names[i]] = res.E[i];
  }
  r["B"] = res.B;
  if (res.sigma_B) r["sigma_B"] = *res.sigma_B;
  if (sampling) r["sampling"] = sampling_json(*sampling);
  r["spectrum_symmetric"] = spectrum_is_symmetric(spec);
  return r;
}

inline json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json cmd_ekert(const Params& p, const SpectrumModel& spectrum, const Globals& g) {
  if (!g.seed_given) throw ValidationError("ekert needs --seed");
  if (p.rounds < 1) throw ValidationError("--rounds must be at least 1");
  const auto res = ekert_run(spdc(vortex_spec(spectrum)), p.rounds, g.seed);
  return {{"key_a", res.key_a},
          {"key_b", res.key_b},
          {"key_length", res.key_a.size()},
          {"qber", nullable(res.qber)},
          {"chsh_estimate", nullable(res.chsh_estimate)},
          {"chsh_sigma", nullable(res.chsh_sigma)},
          {"chsh_rounds", res.chsh_rounds},
          {"rounds", res.rounds},
          {"seed", res.seed},
          {"prng", kPrngName}};
}

inline json cmd_soba(const Params& p, Truncation k, std::optional<SamplingSpec> sampling) {
  const std::string text = p.state.empty() ? "psi+" : p.state;
  PhotonState in(k);
  if (!text.empty() && (text.front() == '{' || text.front() == '['))
    in = input_state(text, k);
  else
    in = prepare_single_photon_bell(spin_orbit_bell_from_string(text), k);
  const auto probs = soba_route(in);
  json r;
  r["input"] = io::to_json(in);
  const std::vector<PathLabel> names(soba_ports::all.begin(), soba_ports::all.end());
  r["distribution"] = ports_with_counts(names, {probs.begin(), probs.end()}, sampling, 0, r);
  for (std::size_t i = 0; i < 4; ++i) r["detector_labels"][names[i]] = to_string(soba_label(i));
  return r;
}

inline json cmd_densecode(const Params& p, std::optional<SamplingSpec> sampling) {
  const auto msg = polarization_bell_from_bits(p.message);
  const auto res = dense_coding_roundtrip(msg, sampling);
  json r;
  r["sent"] = to_bits(msg);
  r["sent_state"] = to_string(msg);
  for (auto b : kPolarizationBells) r["decoded_distribution"][to_bits(b)] = res.decoded_distribution[static_cast<std::size_t>(b)];
  r["accuracy"] = res.accuracy;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r["outcome_pairs"][soba_ports::all[i]][soba_ports::all[j]] = res.outcome_pairs[i][j];
  if (sampling) r["sampling"] = sampling_json(*sampling);
  return r;
}

inline json cmd_state(const Params& p, const SpectrumModel& spectrum) {
  json r;
  auto two_photon = [&](const TwoPhotonState& s, int pump_order, PolarizationMode mode) {
    const SourceSpec spec{pump_order, spectrum, mode};
    const auto [lo, hi] = source_support(pump_order, spec.truncation());
    const auto t = parity_marginals(s);
    r["source_spec"] = io::to_json(spec);
    r["state"] = io::to_json(s);
    r["norm"] = s.norm();
    r["parity_marginals"] = {{"EE", t.ee}, {"EO", t.eo}, {"OE", t.oe}, {"OO", t.oo}};
    r["out_of_band_weight"] = spectrum.out_of_band_weight(lo, hi);
    r["spectrum_symmetric"] = spectrum_is_symmetric(spec);
  };
  if (p.source == "vortex") {
    two_photon(spdc({1, spectrum, PolarizationMode::ProductHH}), 1, PolarizationMode::ProductHH);
  } else if (p.source == "gaussian") {
    two_photon(spdc({0, spectrum, PolarizationMode::ProductHH}), 0, PolarizationMode::ProductHH);
  } else if (p.source == "hyper") {
    two_photon(hyper_source(spectrum), 1, PolarizationMode::BellPhiPlus);
  } else if (p.source == "hybrid") {
    two_photon(hybrid_two_photon(spdc({1, spectrum, PolarizationMode::ProductHH})), 1, PolarizationMode::ProductHH);
  } else if (p.source == "bell") {
    const auto s = prepare_single_photon_bell(spin_orbit_bell_from_string(p.label), spectrum.truncation());
    const auto [e, o] = parity_weights(s);
    r["state"] = io::to_json(s);
    r["norm"] = s.norm();
    r["parity_weights"] = {{"E", e}, {"O", o}};
  } else {
    throw ValidationError("unknown source '" + p.source + "' (vortex, gaussian, hyper, hybrid, bell)");
  }
  r["source"] = p.source;
  return r;
}

inline void emit(std::ostream& out, const std::string& command, const json& report, const std::string& format) {
  if (format == "json") {
    out << report.dump(2) << '\n';
    return;
  }
  const std::string config = csv_field(report.at("config").dump());
  if (command == "tomography") {
    out << "setup,port,intensity,config\r\n";
    for (const auto& [setup, ports] : report.at("intensities").items())
      for (const auto& [port, v] : ports.items()) out << setup << ',' << port << ',' << v.dump() << ',' << config << "\r\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  json body = report;
  body.erase("config");
  flatten(body, "", rows);
  out << "field,value,config\r\n";
  for (const auto& [f, v] : rows) out << csv_field(f) << ',' << csv_field(v) << ',' << config << "\r\n";
}

}  // namespace detail

// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Even/odd OAM qubit simulator", "oamqi-cli"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  Globals g;
  Binder global;
  std::string config_path;
  bool print_schema = false;
  std::string print_circuit;
  global.add(&app, "-K,--truncation", "K", g.K, "OAM truncation bound |m| <= K");
  global.add(&app, "--spectrum", "spectrum", g.spectrum, "uniform | gaussian:<sigma> | JSON spectrum object");
  global.add(&app, "--shots", "shots", g.shots, "shots per setting (0 = analytic)");
  CLI::Option* seed_opt = global.add(&app, "--seed", "seed", g.seed, "PRNG seed (required when shots > 0)");
  global.add(&app, "--format", "format", g.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", config_path, std::string("JSON config file (default from $") + kConfigEnv + ")");
  app.add_flag("--schema", print_schema, "print the report JSON schema and exit");
  app.add_option("--print-circuit", print_circuit, "print a circuit (sorter, s2_setup, s3_setup, soba or a file) as JSON and exit");

  Params p;
  std::map<std::string, Binder> binders;
  auto sub = [&](const std::string& name, const std::string& desc) { return app.add_subcommand(name, desc); };

  auto* sorter = sub("sorter", "route a state through the even/odd sorter or another circuit");
  binders["sorter"].add(sorter, "--state", "state", p.state, "input state JSON");
  binders["sorter"].add(sorter, "--circuit", "circuit", p.circuit, "built-in circuit name or circuit JSON file");

  auto* tomo = sub("tomography", "Stokes parameters and density matrix of the parity qubit");
  binders["tomography"].add(tomo, "--state", "state", p.state, "input state JSON");
  binders["tomography"].add(tomo, "--spp-sign", "spp_sign", p.spp_sign, "spiral phase plate sign (-1 on odd arm, +1 on even arm)");

  auto* bell = sub("bell", "coincidences, correlations and the CHSH value");
  binders["bell"].add(bell, "--theta", "theta", p.theta, "Alice angle (degrees)");
  binders["bell"].add(bell, "--theta2", "theta2", p.theta2, "Alice second angle (degrees)");
  binders["bell"].add(bell, "--chi", "chi", p.chi, "Bob angle (degrees)");
  binders["bell"].add(bell, "--chi2", "chi2", p.chi2, "Bob second angle (degrees)");

  auto* ekert = sub("ekert", "entanglement-based key distribution run");
  binders["ekert"].add(ekert, "--rounds", "rounds", p.rounds, "number of rounds");

  auto* soba = sub("soba", "spin-orbit Bell state analyzer detector distribution");
  binders["soba"].add(soba, "--state", "state", p.state, "psi+ | psi- | phi+ | phi- | state JSON");

  auto* dense = sub("densecode", "hyperentanglement-assisted dense coding round trip");
  binders["densecode"].add(dense, "--message", "message", p.message, "two-bit message 00 | 01 | 10 | 11");

  auto* state = sub("state", "print a source state");
  binders["state"].add(state, "--source", "source", p.source, "vortex | gaussian | hyper | hybrid | bell");
  binders["state"].add(state, "--label", "label", p.label, "spin-orbit Bell label for --source bell");

  auto fail = [&](const std::string& code, const std::string& msg, int exit_code) {
    out << error_object(code, msg).dump(2) << '\n';
    err << "error: " << msg << '\n';
    return exit_code;
  };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kValidation);
  }

  try {
    if (print_schema) {
      out << kReportSchema << '\n';
      return kOk;
    }
    if (!print_circuit.empty()) {
      out << io::to_json(named_circuit(print_circuit)).dump(2) << '\n';
      return kOk;
    }
    const auto subs = app.get_subcommands();
    if (subs.empty()) return fail("usage", "no command given (sorter, tomography, bell, ekert, soba, densecode, state)", kValidation);
    const std::string command = subs.front()->get_name();

    if (config_path.empty())
      if (const char* env = std::getenv(kConfigEnv); env && *env) config_path = env;
    json cfg = json::object();
    if (!config_path.empty()) {
      cfg = read_json_file(config_path, "config file");
      if (!cfg.is_object()) throw ValidationError("config file must hold a JSON object");
    }
    global.merge(cfg);
    if (cfg.contains("params")) binders[command].merge(cfg.at("params"));
    g.seed_given = seed_opt->count() > 0 || (cfg.contains("seed") && !cfg.at("seed").is_null());
    if (g.format != "json" && g.format != "csv") throw ValidationError("format must be json or csv");
    if (g.K < 1) throw ValidationError("K must be at least 1");
    if (g.shots > 0 && !g.seed_given) throw ValidationError("--seed is required when --shots > 0");

    const Truncation k{g.K};
    const json spectrum_spec = spectrum_json(g.spectrum);
    const SpectrumModel spectrum = io::spectrum_from_json(spectrum_spec, k);
    std::optional<SamplingSpec> sampling;
    if (g.shots > 0) sampling = SamplingSpec{g.shots, g.seed};

    json report;
    if (command == "sorter") report = cmd_sorter(p, k, sampling);
    else if (command == "tomography") report = cmd_tomography(p, k, sampling);
    else if (command == "bell") report = cmd_bell(p, spectrum, sampling);
    else if (command == "ekert") report = cmd_ekert(p, spectrum, g);
    else if (command == "soba") report = cmd_soba(p, k, sampling);
    else if (command == "densecode") report = cmd_densecode(p, sampling);
    else report = cmd_state(p, spectrum);

    report["command"] = command;
    report["config"] = {{"K", g.K},
                        {"spectrum", spectrum_spec},
                        {"shots", g.shots},
                        {"seed", g.seed_given ? json(g.seed) : json(nullptr)},
                        {"format", g.format},
                        {"params", binders[command].echo()}};
    emit(out, command, report, g.format);
    return kOk;
  } catch (const GuardError& e) {
    return fail("guard", e.what(), kGuard);
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), kValidation);
  } catch (const io::FormatError& e) {
    return fail("validation", e.what(), kValidation);
  } catch (const std::invalid_argument& e) {
    return fail("validation", e.what(), kValidation);
  } catch (const std::domain_error& e) {
    return fail("validation", e.what(), kValidation);
  } catch (const std::out_of_range& e) {
    return fail("validation", e.what(), kValidation);
  } catch (const json::exception& e) {
    return fail("validation", e.what(), kValidation);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kInternal);
  }
}

}  // namespace oamqi::cli
