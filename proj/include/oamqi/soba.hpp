// soba.hpp
// Spin-orbit Bell state analyzer, hyperentanglement-assisted Bell analysis and dense coding.

#pragma once

#include <optional>

#include "sampling.hpp"
#include "sources.hpp"

namespace oamqi {

namespace soba_ports {
inline const PathLabel D1 = "D1";
inline const PathLabel D2 = "D2";
inline const PathLabel D3 = "D3";
inline const PathLabel D4 = "D4";
inline const std::array<PathLabel, 4> all = {D1, D2, D3, D4};
}  // namespace soba_ports

// Sorter, then: even port -> HWP(45deg) -> PBS2; odd port -> PBS1.
// Reflected (V) outputs: PBS2 passes SPP(+1) (E->O) and meets PBS1's output on BS1 -> D1/D2.
// Transmitted (H) outputs: PBS1 passes SPP(-1) (O->E) and meets PBS2's output on BS2 -> D3/D4.
inline Circuit build_soba() {
  const double pi = std::numbers::pi;
  using Paths = std::vector<PathLabel>;
  auto el = sorter_elements();
  el.emplace_back(HalfWavePlate{pi / 4}, Paths{ports::even}, Paths{"soba.port2.hwp"});
  el.emplace_back(PolarizingBS{}, Paths{"soba.port2.hwp", "soba.pbs2.vac"}, Paths{"soba.port5", "soba.pbs2.r"});
  el.emplace_back(PolarizingBS{}, Paths{ports::odd, "soba.pbs1.vac"}, Paths{"soba.pbs1.t", "soba.port4"});
  el.emplace_back(SpiralPhasePlate{+1}, Paths{"soba.pbs2.r"}, Paths{"soba.port3"});
  el.emplace_back(SpiralPhasePlate{-1}, Paths{"soba.pbs1.t"}, Paths{"soba.port6"});
  el.emplace_back(BeamSplitter{pi / 4}, Paths{"soba.port3", "soba.port4"}, Paths{soba_ports::D1, soba_ports::D2});
  el.emplace_back(BeamSplitter{pi / 4}, Paths{"soba.port6", "soba.port5"}, Paths{soba_ports::D3, soba_ports::D4});
  return Circuit{"soba", ports::in, std::move(el), {soba_ports::D1, soba_ports::D2, soba_ports::D3, soba_ports::D4}};
}

// Detector that each spin-orbit Bell state is routed to.
inline std::size_t soba_detector(SpinOrbitBell b) {
  switch (b) {
    case SpinOrbitBell::PsiPlus: return 0;
    case SpinOrbitBell::PsiMinus: return 1;
    case SpinOrbitBell::PhiMinus: return 2;
    case SpinOrbitBell::PhiPlus: return 3;
  }
  return 0;
}

inline SpinOrbitBell soba_label(std::size_t detector) {
  static constexpr std::array<SpinOrbitBell, 4> labels = {SpinOrbitBell::PsiPlus, SpinOrbitBell::PsiMinus,
                                                          SpinOrbitBell::PhiMinus, SpinOrbitBell::PhiPlus};
  return labels.at(detector);
}

namespace detail {
inline bool in_spin_orbit_space(const ModeKey& k) {
  return k.path == ports::in && (k.m == kEvenRep || k.m == kOddRep);
}
}  // namespace detail

inline void require_spin_orbit_domain(const PhotonState& s) {
  double outside = 0.0;
  for (const auto& [key, a] : s.amplitudes())
    if (!detail::in_spin_orbit_space(key)) outside += std::norm(a);
  if (outside > kNormTolerance)
    throw std::invalid_argument("SOBA input has support outside the canonical spin-orbit qubit space");
}

inline std::array<double, 4> soba_route(const PhotonState& s) {
  require_spin_orbit_domain(s);
  const auto out = build_soba().apply(s);
  std::array<double, 4> p{};
  for (std::size_t i = 0; i < 4; ++i) p[i] = detect(out, soba_ports::all[i]);
  return p;
}

// Polarization Bell states carrying two classical bits.
enum class PolarizationBell { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

inline constexpr std::array<PolarizationBell, 4> kPolarizationBells = {
    PolarizationBell::PsiPlus, PolarizationBell::PsiMinus, PolarizationBell::PhiPlus, PolarizationBell::PhiMinus};

inline std::string to_bits(PolarizationBell b) {
  static constexpr std::array<const char*, 4> bits = {"00", "01", "10", "11"};
  return bits[static_cast<std::size_t>(b)];
}

inline PolarizationBell polarization_bell_from_bits(const std::string& bits) {
  for (auto b : kPolarizationBells)
    if (to_bits(b) == bits) return b;
  throw std::invalid_argument("message must be one of 00, 01, 10, 11 (got '" + bits + "')");
}

inline std::string to_string(PolarizationBell b) {
  static constexpr std::array<const char*, 4> names = {"Psi+", "Psi-", "Phi+", "Phi-"};
  return names[static_cast<std::size_t>(b)];
}

// Photon-1 polarization unitary taking Phi+ to the labelled state: I, X, XZ, Z.
inline TwoPhotonState encode_polarization_bell(const TwoPhotonState& s, PolarizationBell label) {
  const double pi = std::numbers::pi;
  const Element x{HalfWavePlate{pi / 4}, {ports::in}, {ports::in}};
  const Element z{HalfWavePlate{0.0}, {ports::in}, {ports::in}};
  switch (label) {
    case PolarizationBell::PhiPlus: return s;
    case PolarizationBell::PhiMinus: return apply(z, s, Slot::First);
    case PolarizationBell::PsiPlus: return apply(x, s, Slot::First);
    case PolarizationBell::PsiMinus: return apply(z, apply(x, s, Slot::First), Slot::First);
  }
  return s;
}

// Same letter -> Psi family (sign = product of signs); mixed -> Phi family
// (equal signs -> Phi+, opposite -> Phi-).
inline PolarizationBell hbsa_decode(SpinOrbitBell r1, SpinOrbitBell r2) {
  auto is_psi = [](SpinOrbitBell b) { return b == SpinOrbitBell::PsiPlus || b == SpinOrbitBell::PsiMinus; };
  auto plus = [](SpinOrbitBell b) { return b == SpinOrbitBell::PsiPlus || b == SpinOrbitBell::PhiPlus; };
  const bool same_sign = plus(r1) == plus(r2);
  if (is_psi(r1) == is_psi(r2)) return same_sign ? PolarizationBell::PsiPlus : PolarizationBell::PsiMinus;
  return same_sign ? PolarizationBell::PhiPlus : PolarizationBell::PhiMinus;
}

// Shared hyperentangled pair with canonical parity representatives (E -> 0, O -> 1).
inline TwoPhotonState dense_coding_resource() { return hyper_source(SpectrumModel::uniform(Truncation{1})); }

// Joint SOBA detector probabilities [photon-1 detector][photon-2 detector].
inline std::array<std::array<double, 4>, 4> hbsa_outcomes(const TwoPhotonState& s) {
  for (const auto& [key, a] : s.amplitudes()) {
    if (!detail::in_spin_orbit_space(key.first) || !detail::in_spin_orbit_space(key.second))
      if (std::norm(a) > kNormTolerance)
        throw std::invalid_argument("HBSA input has support outside the canonical spin-orbit qubit space");
  }
  const Circuit soba = build_soba();
  const auto out = soba.apply(s, Slot::Both);
  std::array<std::array<double, 4>, 4> p{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) p[i][j] = coincidence(out, soba_ports::all[i], soba_ports::all[j]);
  return p;
}

struct DenseCodingResult {
  PolarizationBell sent = PolarizationBell::PsiPlus;
  std::array<double, 4> decoded_distribution{};        // indexed by PolarizationBell
  std::array<std::array<double, 4>, 4> outcome_pairs{};  // detector pair probabilities or frequencies
  double accuracy = 0.0;
  std::optional<SamplingSpec> sampled;
};

inline DenseCodingResult dense_coding_roundtrip(PolarizationBell message, std::optional<SamplingSpec> sampling = std::nullopt) {
  const auto encoded = encode_polarization_bell(dense_coding_resource(), message);
  const auto exact = hbsa_outcomes(encoded);
  DenseCodingResult r;
  r.sent = message;
  if (sampling && sampling->shots > 0) {
    r.sampled = sampling;
    std::array<double, 16> flat{};
    for (std::size_t i = 0; i < 16; ++i) flat[i] = exact[i / 4][i % 4];
    Rng rng(derive_seed(sampling->seed, 0));
    const auto counts = sample_multinomial(flat, sampling->shots, rng);
    const auto shots = static_cast<double>(sampling->shots);
    std::array<std::uint64_t, 4> decoded{};
    for (std::size_t i = 0; i < 16; ++i) {
      r.outcome_pairs[i / 4][i % 4] = static_cast<double>(counts[i]) / shots;
      decoded[static_cast<std::size_t>(hbsa_decode(soba_label(i / 4), soba_label(i % 4)))] += counts[i];
    }
    for (std::size_t b = 0; b < 4; ++b) r.decoded_distribution[b] = static_cast<double>(decoded[b]) / shots;
  } else {
    r.outcome_pairs = exact;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        r.decoded_distribution[static_cast<std::size_t>(hbsa_decode(soba_label(i), soba_label(j)))] += r.outcome_pairs[i][j];
  }
  r.accuracy = r.decoded_distribution[static_cast<std::size_t>(message)];
  return r;
}

}  // namespace oamqi
