// Helpers shared by the unit suites and the acceptance runner.

#pragma once

#include <oamqi/dense_oracle.hpp>
#include <oamqi/oamqi.hpp>

namespace oamqi::testing {

inline complex random_complex(Rng& rng) { return {2 * rng.uniform() - 1, 2 * rng.uniform() - 1}; }

// Random normalized state over the given paths, both polarizations unless h_only.
inline PhotonState random_state(Rng& rng, Truncation k, const std::vector<PathLabel>& paths, bool h_only = false) {
  PhotonState s(k);
  for (const auto& p : paths)
    for (auto pol : {Polarization::H, Polarization::V}) {
      if (h_only && pol == Polarization::V) continue;
      for (int m = -k.bound(); m <= k.bound(); ++m) s.add({p, pol, m}, random_complex(rng));
    }
  s.normalize();
  return s;
}

// Random parity qubit (a, b) placed on the pair (2k, 2k+1) inside the band.
struct EmbeddedQubit {
  complex a, b;
  int even_m;
  PhotonState state;
};

inline EmbeddedQubit random_embedded_qubit(Rng& rng, Truncation k) {
  std::vector<int> evens;
  for (int m = -k.bound(); m + 1 <= k.bound(); ++m)
    if (parity(m) == Parity::Even) evens.push_back(m);
  const int e = evens[rng.below(evens.size())];
  complex a = random_complex(rng), b = random_complex(rng);
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  a /= n;
  b /= n;
  PhotonState s(k);
  s.add({ports::in, Polarization::H, e}, a);
  s.add({ports::in, Polarization::H, e + 1}, b);
  return {a, b, e, s};
}

// Random circuit over fresh and existing paths. Vacuum inputs get fresh names.
inline Circuit random_circuit(Rng& rng, std::size_t n_elements) {
  const double pi = std::numbers::pi;
  std::vector<PathLabel> live{ports::in};
  int fresh = 0;
  auto new_path = [&] { return "p" + std::to_string(fresh++); };
  auto take = [&] {
    const std::size_t i = rng.below(live.size());
    PathLabel p = live[i];
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
    return p;
  };
  std::vector<Element> el;
  for (std::size_t n = 0; n < n_elements; ++n) {
    const std::size_t kind = rng.below(8);
    if (kind < 2) {
      PathLabel a = take();
      PathLabel b = (!live.empty() && rng.uniform() < 0.5) ? take() : new_path();
      ElementKind k = kind == 0 ? ElementKind{BeamSplitter{rng.uniform() * pi / 2}} : ElementKind{PolarizingBS{}};
      PathLabel o1 = new_path(), o2 = new_path();
      el.emplace_back(k, std::vector<PathLabel>{a, b}, std::vector<PathLabel>{o1, o2});
      live.push_back(o1);
      live.push_back(o2);
      continue;
    }
    ElementKind k;
    switch (kind) {
      case 2: k = DovePrism{2 * pi * rng.uniform()}; break;
      case 3: k = SpiralPhasePlate{static_cast<int>(rng.below(5)) - 2}; break;
      case 4: k = HalfWavePlate{pi * rng.uniform()}; break;
      case 5: k = PhaseDelay{2 * pi * rng.uniform()}; break;
      case 6: k = Mirror{}; break;
      default: k = ImageInversion{}; break;
    }
    PathLabel a = take();
    PathLabel o = rng.uniform() < 0.5 ? a : new_path();
    el.emplace_back(k, std::vector<PathLabel>{a}, std::vector<PathLabel>{o});
    live.push_back(o);
  }
  return Circuit{"random", ports::in, std::move(el), live};
}

// Largest per-amplitude difference between two states over the union of their keys.
template <class State>
double max_amplitude_diff(const State& a, const State& b) {
  double d = 0.0;
  for (const auto& [key, v] : a.amplitudes()) d = std::max(d, std::abs(v - b.amplitude(key)));
  for (const auto& [key, v] : b.amplitudes()) d = std::max(d, std::abs(v - a.amplitude(key)));
  return d;
}

// Direct evaluation of the Stokes formulas on the coefficients (no circuits).
inline StokesVector stokes_formula(const PhotonState& s) {
  std::map<int, complex> c;
  for (const auto& [key, a] : s.amplitudes()) c[key.m] += a;
  StokesVector sv{0, 0, 0, 0};
  for (const auto& [m, a] : c) {
    sv.s0 += std::norm(a);
    sv.s1 += parity(m) == Parity::Even ? std::norm(a) : -std::norm(a);
    if (parity(m) == Parity::Even && c.count(m + 1)) {
      const complex e = a, o = c.at(m + 1);
      sv.s2 += 2 * (e * std::conj(o)).real();
      sv.s3 += (complex{0, 1} * (e * std::conj(o) - std::conj(e) * o)).real();
    }
  }
  return sv;
}

// <Psi| P_theta (x) P_chi |Psi> written out over the (2k, 1-2k) blocks of each photon:
// Alice's first port is cos(theta)|2k> + sin(theta)|1-2k>, Bob's is sin(chi)|2k> + cos(chi)|1-2k>.
inline std::array<double, 4> joint_projection_formula(const TwoPhotonState& s, double theta, double chi) {
  std::map<std::pair<int, int>, complex> psi;
  for (const auto& [key, a] : s.amplitudes()) psi[{key.first.m, key.second.m}] += a;
  auto at = [&](int m1, int m2) {
    auto it = psi.find({m1, m2});
    return it == psi.end() ? complex{} : it->second;
  };
  const int K = s.truncation().bound();
  const std::array<std::array<double, 2>, 2> alice = {{{std::cos(theta), std::sin(theta)}, {std::sin(theta), -std::cos(theta)}}};
  const std::array<std::array<double, 2>, 2> bob = {{{std::sin(chi), std::cos(chi)}, {std::cos(chi), -std::sin(chi)}}};
  std::array<double, 4> p{};
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) {
      const std::array<int, 2> a_modes = {2 * k1, 1 - 2 * k1}, b_modes = {2 * k2, 1 - 2 * k2};
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          complex amp{};
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) amp += alice[x][i] * bob[y][j] * at(a_modes[i], b_modes[j]);
          p[2 * x + y] += std::norm(amp);
        }
    }
  return p;
}

}  // namespace oamqi::testing
