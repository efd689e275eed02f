// sources.hpp
// SPDC pair sources, hyperentangled and hybrid states, and single-photon spin-orbit Bell states.

#pragma once

#include <string_view>

#include "elements.hpp"

namespace oamqi {

enum class PolarizationMode { ProductHH, BellPhiPlus };

struct SourceSpec {
  int pump_order = 1;  // 0 = Gaussian pump, 1 = vortex of order one
  SpectrumModel spectrum;
  PolarizationMode polarization_mode = PolarizationMode::ProductHH;

  Truncation truncation() const { return spectrum.truncation(); }
};

// Range of photon-1 OAM for which both photons stay inside |m| <= K.
inline std::pair<int, int> source_support(int pump_order, Truncation k) {
  const int K = k.bound();
  if (pump_order == 0) return {-K, K};
  if (pump_order == 1) return {1 - K, K};
  throw std::invalid_argument("pump_order must be 0 or 1");
}

// Realized photon-1 coefficients. For the vortex pump, Uniform/Gaussian spectra are
// symmetrized under m <-> 1-m so that |c_2k| = |c_{1-2k}| with zero relative phase.
inline std::map<int, complex> realized_coefficients(const SourceSpec& spec) {
  const auto [lo, hi] = source_support(spec.pump_order, spec.truncation());
  auto c = spec.spectrum.realize(lo, hi);
  if (spec.pump_order == 1 && !spec.spectrum.is_explicit()) {
    std::map<int, complex> sym;
    for (const auto& [m, v] : c) {
      const auto partner = c.find(1 - m);
      const double w = std::norm(v) + (partner == c.end() ? 0.0 : std::norm(partner->second));
      sym[m] = std::sqrt(w / 2);
    }
    return sym;
  }
  return c;
}

// True when the spectrum satisfies the pairing symmetry of the pump
// (c_m = c_{1-m} for the vortex pump, c_m = c_{-m} for the Gaussian pump) within tol.
inline bool spectrum_is_symmetric(const SourceSpec& spec, double tol = 1e-12) {
  const auto c = realized_coefficients(spec);
  const int sum = spec.pump_order;
  for (const auto& [m, v] : c) {
    const auto it = c.find(sum - m);
    const complex partner = it == c.end() ? complex{} : it->second;
    if (std::abs(v - partner) > tol) return false;
  }
  return true;
}

inline TwoPhotonState spdc(const SourceSpec& spec) {
  const Truncation k = spec.truncation();
  const auto coeffs = realized_coefficients(spec);
  TwoPhotonState s(k);
  const double r = 1.0 / std::sqrt(2.0);
  for (const auto& [m, c] : coeffs) {
    if (c == complex{}) continue;
    const int m2 = spec.pump_order - m;
    auto put = [&](Polarization p, complex amp) {
      s.add({ModeKey{ports::in, p, m}, ModeKey{ports::in, p, m2}}, amp);
    };
    if (spec.polarization_mode == PolarizationMode::ProductHH) {
      put(Polarization::H, c);
    } else {
      put(Polarization::H, r * c);
      put(Polarization::V, r * c);
    }
  }
  s.normalize();
  return s;
}

// (HH + VV)/sqrt2 (x) vortex-pump OAM state.
inline TwoPhotonState hyper_source(const SpectrumModel& spectrum) {
  return spdc(SourceSpec{1, spectrum, PolarizationMode::BellPhiPlus});
}

// OAM-controlled polarization NOT with parity flip on the control, as a mode permutation:
// (E,H) fixed, (O,H,m)->(E,V,m-1), (E,V,m)->(O,V,m+1), (O,V,m)->(O,H,m).
inline ModeKey oc_p_map(const ModeKey& k) {
  const bool even = parity(k.m) == Parity::Even;
  if (k.pol == Polarization::H) return even ? k : ModeKey{k.path, Polarization::V, k.m - 1};
  return even ? ModeKey{k.path, Polarization::V, k.m + 1} : ModeKey{k.path, Polarization::H, k.m};
}

namespace detail {

template <class Map>
PhotonState permute(const PhotonState& s, Map&& f) {
  PhotonState out(s.truncation());
  for (const auto& [key, a] : s.amplitudes()) {
    const ModeKey img = f(key);
    if (!s.truncation().contains(img.m)) throw GuardError("gate would move amplitude outside the band");
    out.add(img, a);
  }
  return out;
}

template <class Map>
TwoPhotonState permute(const TwoPhotonState& s, Slot slot, Map&& f) {
  TwoPhotonState out(s.truncation());
  for (const auto& [key, a] : s.amplitudes()) {
    JointKey img = key;
    if (slot != Slot::Second) img.first = f(key.first);
    if (slot != Slot::First) img.second = f(key.second);
    if (!s.truncation().contains(img.first.m) || !s.truncation().contains(img.second.m))
      throw GuardError("gate would move amplitude outside the band");
    out.add(img, a);
  }
  return out;
}

}  // namespace detail

inline PhotonState oc_p_gate(const PhotonState& s) { return detail::permute(s, oc_p_map); }
inline TwoPhotonState oc_p_gate(const TwoPhotonState& s, Slot slot) { return detail::permute(s, slot, oc_p_map); }

// Polarization-controlled OAM NOT: V components pass a spiral phase plate of order +1.
inline ModeKey pc_o_map(const ModeKey& k) {
  return k.pol == Polarization::V ? ModeKey{k.path, k.pol, k.m + 1} : k;
}
inline PhotonState pc_o_gate(const PhotonState& s) { return detail::permute(s, pc_o_map); }
inline TwoPhotonState pc_o_gate(const TwoPhotonState& s, Slot slot) { return detail::permute(s, slot, pc_o_map); }

// Applies the modified oC_p gate to photon 1 of a vortex-pump |HH> pair.
inline TwoPhotonState hybrid_two_photon(const TwoPhotonState& s) {
  for (const auto& [key, a] : s.amplitudes()) {
    if (key.first.pol != Polarization::H || key.second.pol != Polarization::H)
      throw std::invalid_argument("hybrid_two_photon expects a product |H>|H> polarization state");
    if (key.first.m + key.second.m != 1)
      throw std::invalid_argument("hybrid_two_photon expects a vortex-pump (m1 + m2 = 1) state");
  }
  return oc_p_gate(s, Slot::First);
}

enum class SpinOrbitBell { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

inline constexpr std::array<SpinOrbitBell, 4> kSpinOrbitBells = {SpinOrbitBell::PsiPlus, SpinOrbitBell::PsiMinus,
                                                                  SpinOrbitBell::PhiPlus, SpinOrbitBell::PhiMinus};

inline constexpr int kEvenRep = 0;
inline constexpr int kOddRep = 1;

inline std::string to_string(SpinOrbitBell b) {
  switch (b) {
    case SpinOrbitBell::PsiPlus: return "psi+";
    case SpinOrbitBell::PsiMinus: return "psi-";
    case SpinOrbitBell::PhiPlus: return "phi+";
    case SpinOrbitBell::PhiMinus: return "phi-";
  }
  return "?";
}

inline SpinOrbitBell spin_orbit_bell_from_string(std::string_view s) {
  if (s == "psi+" || s == "ψ+") return SpinOrbitBell::PsiPlus;
  if (s == "psi-" || s == "ψ-" || s == "ψ−") return SpinOrbitBell::PsiMinus;
  if (s == "phi+" || s == "φ+") return SpinOrbitBell::PhiPlus;
  if (s == "phi-" || s == "φ-" || s == "φ−") return SpinOrbitBell::PhiMinus;
  throw std::invalid_argument("unknown spin-orbit Bell label '" + std::string(s) + "'");
}

// psi+- = (|E,H> +- |O,V>)/sqrt2, phi+- = (|O,H> +- |E,V>)/sqrt2, with E -> m=0 and O -> m=1.
inline PhotonState prepare_single_photon_bell(SpinOrbitBell label, Truncation k = Truncation{1},
                                              const PathLabel& path = ports::in) {
  const double r = 1.0 / std::sqrt(2.0);
  PhotonState s(k);
  const auto H = Polarization::H, V = Polarization::V;
  switch (label) {
    case SpinOrbitBell::PsiPlus:
      s.add({path, H, kEvenRep}, r);
      s.add({path, V, kOddRep}, r);
      break;
    case SpinOrbitBell::PsiMinus:
      s.add({path, H, kEvenRep}, r);
      s.add({path, V, kOddRep}, -r);
      break;
    case SpinOrbitBell::PhiPlus:
      s.add({path, H, kOddRep}, r);
      s.add({path, V, kEvenRep}, r);
      break;
    case SpinOrbitBell::PhiMinus:
      s.add({path, H, kOddRep}, r);
      s.add({path, V, kEvenRep}, -r);
      break;
  }
  return s;
}

// psi+ from the vortex-pump pair: herald photon 2 in |O,H>, then HWP(22.5 deg) and pC_o on photon 1.
inline PhotonState prepare_psi_plus_from_pair(const TwoPhotonState& pair) {
  PhotonState heralded = postselect(pair, Slot::Second, Parity::Odd, Polarization::H);
  const Element hwp{HalfWavePlate{std::numbers::pi / 8}, {ports::in}, {ports::in}};
  return pc_o_gate(apply(hwp, heralded));
}

}  // namespace oamqi
