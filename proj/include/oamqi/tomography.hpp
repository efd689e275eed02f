// tomography.hpp
// Stokes measurements of the even/odd parity qubit and linear state reconstruction.

#pragma once

#include <array>
#include <numbers>
#include <optional>

#include "elements.hpp"

namespace oamqi {

struct StokesVector {
  double s0 = 1.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double bloch_length() const { return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3); }
};

// Two-port intensity pair and the Stokes component(s) derived from it.
struct PortIntensities {
  double I1 = 0.0;
  double I2 = 0.0;
};

struct S0S1 : PortIntensities {
  double s0 = 0.0, s1 = 0.0;
};
struct StokesComponent : PortIntensities {
  double value = 0.0;
};

// Sign of the spiral phase plate that converts the two sorter outputs to a common
// parity: -1 sits on the odd arm (2k+1 -> 2k), +1 on the even arm (2k -> 2k+1).
// Both pair c_2k with c_2k+1.
enum class SppSign { Minus = -1, Plus = +1 };

namespace tomo_ports {
inline const PathLabel I1 = "port_I1";
inline const PathLabel I2 = "port_I2";
}  // namespace tomo_ports

namespace detail {

inline Circuit diagonal_setup(std::string name, SppSign sign, bool phase_delay) {
  const double pi = std::numbers::pi;
  auto el = sorter_elements();
  PathLabel even = ports::even, odd = ports::odd;
  if (sign == SppSign::Minus) {
    el.emplace_back(SpiralPhasePlate{-1}, std::vector<PathLabel>{odd}, std::vector<PathLabel>{"odd.spp"});
    odd = "odd.spp";
  } else {
    el.emplace_back(SpiralPhasePlate{+1}, std::vector<PathLabel>{even}, std::vector<PathLabel>{"even.spp"});
    even = "even.spp";
  }
  if (phase_delay) {
    el.emplace_back(PhaseDelay{pi / 2}, std::vector<PathLabel>{odd}, std::vector<PathLabel>{"odd.pd"});
    odd = "odd.pd";
  }
  // First output carries i(c_2k + c_2k+1)/sqrt2, second (c_2k+1 - c_2k)/sqrt2 (without the delay).
  el.emplace_back(BeamSplitter{pi / 4}, std::vector<PathLabel>{even, odd},
                  std::vector<PathLabel>{tomo_ports::I2, tomo_ports::I1});
  return Circuit{std::move(name), ports::in, std::move(el), {tomo_ports::I1, tomo_ports::I2}};
}

inline void require_on_input(const PhotonState& s) {
  for (const auto& [key, a] : s.amplitudes())
    if (key.path != ports::in && std::abs(a) > 0)
      throw std::invalid_argument("tomography input must live on path '" + ports::in + "'");
}

}  // namespace detail

inline Circuit build_s2_setup(SppSign sign = SppSign::Minus) { return detail::diagonal_setup("s2_setup", sign, false); }
inline Circuit build_s3_setup(SppSign sign = SppSign::Minus) { return detail::diagonal_setup("s3_setup", sign, true); }

inline S0S1 measure_s0_s1(const PhotonState& s) {
  detail::require_on_input(s);
  const auto out = build_sorter().apply(s);
  S0S1 r;
  r.I1 = detect(out, ports::even);
  r.I2 = detect(out, ports::odd);
  r.s0 = r.I1 + r.I2;
  r.s1 = r.I1 - r.I2;
  return r;
}

inline StokesComponent measure_s2(const PhotonState& s, SppSign sign = SppSign::Minus) {
  detail::require_on_input(s);
  const auto out = build_s2_setup(sign).apply(widened(s, 1));
  StokesComponent r;
  r.I1 = detect(out, tomo_ports::I1);
  r.I2 = detect(out, tomo_ports::I2);
  r.value = r.I2 - r.I1;
  return r;
}

// With the pi/2 delay the port difference I1 - I2 equals <sigma_y> of the parity qubit.
inline StokesComponent measure_s3(const PhotonState& s, SppSign sign = SppSign::Minus) {
  detail::require_on_input(s);
  const auto out = build_s3_setup(sign).apply(widened(s, 1));
  StokesComponent r;
  r.I1 = detect(out, tomo_ports::I1);
  r.I2 = detect(out, tomo_ports::I2);
  r.value = r.I1 - r.I2;
  return r;
}

inline StokesVector measure_stokes(const PhotonState& s, SppSign sign = SppSign::Minus) {
  const auto a = measure_s0_s1(s);
  return {a.s0, a.s1, measure_s2(s, sign).value, measure_s3(s, sign).value};
}

// 2x2 density matrix in the {E, O} basis, E -> (1, 0).
struct QubitDensity {
  std::array<std::array<complex, 2>, 2> rho{};
  bool clipped = false;  // reconstruction was non-physical and was projected back onto the Bloch ball

  complex operator()(int i, int j) const { return rho[i][j]; }
  complex trace() const { return rho[0][0] + rho[1][1]; }
  std::array<double, 2> eigenvalues() const {
    const double a = rho[0][0].real(), d = rho[1][1].real();
    const double off = std::abs(rho[0][1]);
    const double mean = (a + d) / 2, half = std::sqrt((a - d) * (a - d) / 4 + off * off);
    return {mean - half, mean + half};
  }
};

inline constexpr double kNonPhysicalTolerance = 1e-6;

// rho = (s0 I + s1 sz + s2 sx + s3 sy) / 2
inline QubitDensity reconstruct(StokesVector sv) {
  QubitDensity q;
  const double len = sv.bloch_length();
  if ((sv.s0 - len) / 2 < -kNonPhysicalTolerance) {
    const double scale = sv.s0 > 0 ? sv.s0 / len : 0.0;
    sv.s1 *= scale;
    sv.s2 *= scale;
    sv.s3 *= scale;
    q.clipped = true;
  }
  q.rho[0][0] = (sv.s0 + sv.s1) / 2;
  q.rho[1][1] = (sv.s0 - sv.s1) / 2;
  q.rho[0][1] = complex{sv.s2, -sv.s3} / 2.0;
  q.rho[1][0] = complex{sv.s2, sv.s3} / 2.0;
  return q;
}

// <psi|rho|psi> for a qubit psi = (a, b) in the {E, O} basis.
inline double fidelity(const QubitDensity& q, complex a, complex b) {
  const complex v = std::conj(a) * (q(0, 0) * a + q(0, 1) * b) + std::conj(b) * (q(1, 0) * a + q(1, 1) * b);
  return v.real();
}

// Parity qubit of a state supported on a single (2k, 2k+1) pair; nullopt otherwise.
inline std::optional<std::array<complex, 2>> single_pair_qubit(const PhotonState& s) {
  std::optional<int> k;
  std::optional<ModeKey> first;
  std::array<complex, 2> q{};
  for (const auto& [key, a] : s.amplitudes()) {
    if (std::abs(a) < kPruneThreshold) continue;
    if (!first) first = key;
    if (key.pol != first->pol || key.path != first->path) return std::nullopt;
    const int base = key.m - (parity(key.m) == Parity::Odd ? 1 : 0);
    if (k && *k != base) return std::nullopt;
    k = base;
    q[parity(key.m) == Parity::Even ? 0 : 1] += a;
  }
  if (!k) return std::nullopt;
  return q;
}

}  // namespace oamqi
