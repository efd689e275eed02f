// io.hpp
// JSON forms of states, spectra, source specs and circuits.

#pragma once

#include <json.hpp>

#include "sources.hpp"

namespace oamqi::io {

using nlohmann::json;

class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline json mode_json(const ModeKey& k) { return {{"path", k.path}, {"pol", to_string(k.pol)}, {"m", k.m}}; }

// Accepts an integer or a string holding one (e.g. "0", "-3").
inline int parse_oam(const json& j) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::size_t used = 0;
    int m = 0;
    try {
      m = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw FormatError("OAM index '" + s + "' is not an integer");
    return m;
  }
  throw FormatError("OAM index must be an integer");
}

inline ModeKey parse_mode(const json& j) {
  if (!j.is_object()) throw FormatError("mode record must be an object");
  return {j.value("path", ports::in), polarization_from_string(j.value("pol", std::string("H"))), parse_oam(j.at("m"))};
}

inline complex parse_complex(const json& re, const json* im) {
  if (!re.is_number()) throw FormatError("amplitude must be numeric");
  if (im && !im->is_number()) throw FormatError("amplitude must be numeric");
  return {re.get<double>(), im ? im->get<double>() : 0.0};
}

inline json to_json(const PhotonState& s) {
  json arr = json::array();
  for (const auto& [k, a] : s.amplitudes()) {
    json rec = mode_json(k);
    rec["re"] = a.real();
    rec["im"] = a.imag();
    arr.push_back(std::move(rec));
  }
  return arr;
}

inline json to_json(const TwoPhotonState& s) {
  json arr = json::array();
  for (const auto& [k, a] : s.amplitudes())
    arr.push_back({{"photon1", mode_json(k.first)}, {"photon2", mode_json(k.second)}, {"re", a.real()}, {"im", a.imag()}});
  return arr;
}

// Either the record array produced by to_json, or {"coeffs": [[m, re(, im)], ...], "pol": "H", "path": "in"}.
inline PhotonState photon_state_from_json(const json& j, Truncation k) {
  PhotonState s(k);
  try {
    if (j.is_array()) {
      for (const auto& rec : j) s.add(parse_mode(rec), parse_complex(rec.at("re"), rec.contains("im") ? &rec.at("im") : nullptr));
    } else if (j.is_object() && j.contains("coeffs")) {
      const auto pol = polarization_from_string(j.value("pol", std::string("H")));
      const auto path = j.value("path", ports::in);
      for (const auto& c : j.at("coeffs")) {
        if (!c.is_array() || c.size() < 2 || c.size() > 3) throw FormatError("coefficient entries are [m, re] or [m, re, im]");
        s.add({path, pol, parse_oam(c[0])}, parse_complex(c[1], c.size() == 3 ? &c[2] : nullptr));
      }
    } else {
      throw FormatError("state must be a record array or an object with 'coeffs'");
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed state: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(e.what());
  }
  return s;
}

inline json to_json(const SpectrumModel& sp) {
  json j;
  std::visit(
      [&](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, SpectrumModel::Uniform>) {
          j["kind"] = "uniform";
        } else if constexpr (std::is_same_v<T, SpectrumModel::Gaussian>) {
          j["kind"] = "gaussian";
          j["sigma"] = kind.sigma;
        } else {
          j["kind"] = "explicit";
          json c = json::array();
          for (const auto& [m, v] : kind.coeffs) c.push_back({m, v.real(), v.imag()});
          j["coeffs"] = std::move(c);
        }
      },
      sp.kind());
  return j;
}

inline SpectrumModel spectrum_from_json(const json& j, Truncation k) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "uniform") return SpectrumModel::uniform(k);
    if (kind == "gaussian") return SpectrumModel::gaussian(j.at("sigma").get<double>(), k);
    if (kind == "explicit") {
      std::vector<std::pair<int, complex>> c;
      for (const auto& e : j.at("coeffs")) {
        if (!e.is_array() || e.size() < 2 || e.size() > 3) throw FormatError("coefficient entries are [m, re] or [m, re, im]");
        c.emplace_back(parse_oam(e[0]), parse_complex(e[1], e.size() == 3 ? &e[2] : nullptr));
      }
      return SpectrumModel::explicit_coeffs(std::move(c), k);
    }
    throw FormatError("unknown spectrum kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed spectrum: ") + e.what());
  }
}

inline const char* to_string(PolarizationMode m) { return m == PolarizationMode::ProductHH ? "ProductHH" : "BellPhiPlus"; }

inline json to_json(const SourceSpec& s) {
  return {{"pump_order", s.pump_order},
          {"spectrum", to_json(s.spectrum)},
          {"polarization_mode", to_string(s.polarization_mode)},
          {"truncation", s.truncation().bound()}};
}

inline SourceSpec source_spec_from_json(const json& j) {
  try {
    const Truncation k{j.value("truncation", kDefaultTruncation)};
    SourceSpec s;
    s.pump_order = j.value("pump_order", 1);
    if (s.pump_order != 0 && s.pump_order != 1) throw FormatError("pump_order must be 0 or 1");
    s.spectrum = j.contains("spectrum") ? spectrum_from_json(j.at("spectrum"), k) : SpectrumModel::uniform(k);
    const auto mode = j.value("polarization_mode", std::string("ProductHH"));
    if (mode == "ProductHH")
      s.polarization_mode = PolarizationMode::ProductHH;
    else if (mode == "BellPhiPlus")
      s.polarization_mode = PolarizationMode::BellPhiPlus;
    else
      throw FormatError("unknown polarization_mode '" + mode + "'");
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed source spec: ") + e.what());
  }
}

inline json to_json(const Element& e) {
  json params = json::object();
  std::visit(
      [&](const auto& el) {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) params["theta"] = el.theta;
        if constexpr (std::is_same_v<T, DovePrism>) params["alpha"] = el.alpha;
        if constexpr (std::is_same_v<T, SpiralPhasePlate>) params["order"] = el.order;
        if constexpr (std::is_same_v<T, HalfWavePlate>) params["angle"] = el.angle;
        if constexpr (std::is_same_v<T, PhaseDelay>) params["phi"] = el.phi;
      },
      e.kind());
  return {{"kind", kind_name(e.kind())}, {"params", params}, {"in", e.in_paths()}, {"out", e.out_paths()}};
}

inline Element element_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    auto in = j.at("in").get<std::vector<PathLabel>>();
    auto out = j.at("out").get<std::vector<PathLabel>>();
    auto num = [&](const char* key) { return params.at(key).get<double>(); };
    ElementKind k;
    if (kind == "beam_splitter")
      k = params.contains("t") ? BeamSplitter::from_transmission(num("t")) : BeamSplitter{num("theta")};
    else if (kind == "polarizing_bs")
      k = PolarizingBS{};
    else if (kind == "dove_prism")
      k = DovePrism{num("alpha")};
    else if (kind == "spiral_phase_plate")
      k = SpiralPhasePlate{params.at("order").get<int>()};
    else if (kind == "half_wave_plate")
      k = HalfWavePlate{num("angle")};
    else if (kind == "phase_delay")
      k = PhaseDelay{num("phi")};
    else if (kind == "mirror")
      k = Mirror{};
    else if (kind == "image_inversion")
      k = ImageInversion{};
    else
      throw FormatError("unknown element kind '" + kind + "'");
    return Element{std::move(k), std::move(in), std::move(out)};
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed element: ") + e.what());
  }
}

inline json to_json(const Circuit& c) {
  json el = json::array();
  for (const auto& e : c.elements()) el.push_back(to_json(e));
  return {{"name", c.name()}, {"input", c.input_path()}, {"detectors", c.detector_paths()}, {"elements", el}};
}

inline Circuit circuit_from_json(const json& j) {
  try {
    std::vector<Element> el;
    for (const auto& e : j.at("elements")) el.push_back(element_from_json(e));
    return Circuit{j.value("name", std::string("custom")), j.value("input", ports::in), std::move(el),
                   j.at("detectors").get<std::vector<PathLabel>>()};
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed circuit: ") + e.what());
  }
}

}  // namespace oamqi::io
