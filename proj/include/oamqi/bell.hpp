// bell.hpp
// General linear even/odd projections, two-photon coincidences, CHSH and an E91 run.

#pragma once

#include <optional>
#include <string>

#include "sampling.hpp"
#include "sources.hpp"
#include "tomography.hpp"

namespace oamqi {

enum class ProjectionVariant { TunableBS, PolarizationAssisted };

// Which odd mode the analyzer interferes with the even mode |2k>:
// Shift pairs it with |2k+1> (SPP on the odd arm), Reflection with |1-2k>
// (image inversion then SPP(+1)), matching the partner structure of the vortex-pump pair.
enum class OamPairing { Shift, Reflection };

struct ProjectionSetting {
  double angle = 0.0;  // radians
  ProjectionVariant variant = ProjectionVariant::TunableBS;
  OamPairing pairing = OamPairing::Shift;
  // Axis the angle is measured from. With Odd, the first port projects onto
  // cos(angle)|O> + sin(angle)|E>.
  Parity reference = Parity::Even;

  double circuit_angle() const {
    return reference == Parity::Even ? angle : std::numbers::pi / 2 - angle;
  }
};

namespace proj_ports {
inline const PathLabel first = "D_theta";
inline const PathLabel second = "D_theta_perp";
}  // namespace proj_ports

// First port: cos(t) c_even + sin(t) c_odd; second port: sin(t) c_even - cos(t) c_odd (up to phases).
inline Circuit build_projection(const ProjectionSetting& setting) {
  const double pi = std::numbers::pi;
  const double t = setting.circuit_angle();
  auto el = sorter_elements();
  using Paths = std::vector<PathLabel>;
  if (setting.pairing == OamPairing::Shift) {
    el.emplace_back(SpiralPhasePlate{-1}, Paths{ports::odd}, Paths{"odd.conv"});
  } else {
    el.emplace_back(ImageInversion{}, Paths{ports::odd}, Paths{"odd.inv"});
    el.emplace_back(SpiralPhasePlate{+1}, Paths{"odd.inv"}, Paths{"odd.conv"});
  }
  if (setting.variant == ProjectionVariant::TunableBS) {
    el.emplace_back(BeamSplitter{t}, Paths{ports::even, "odd.conv"}, Paths{proj_ports::first, proj_ports::second});
  } else {
    el.emplace_back(HalfWavePlate{pi / 4}, Paths{"odd.conv"}, Paths{"odd.v"});
    el.emplace_back(PolarizingBS{}, Paths{ports::even, "odd.v"}, Paths{"merged", "merge.dark"});
    el.emplace_back(HalfWavePlate{t / 2}, Paths{"merged"}, Paths{"merged.hwp"});
    el.emplace_back(PolarizingBS{}, Paths{"merged.hwp", "split.vac"}, Paths{proj_ports::first, proj_ports::second});
  }
  return Circuit{"projection", ports::in, std::move(el), {proj_ports::first, proj_ports::second}};
}

inline PortIntensities project_single(const PhotonState& s, const ProjectionSetting& setting) {
  for (const auto& [key, a] : s.amplitudes()) {
    if (key.path != ports::in) throw std::invalid_argument("projection input must live on path 'in'");
    if (setting.variant == ProjectionVariant::PolarizationAssisted && key.pol != Polarization::H && std::abs(a) > 0)
      throw std::invalid_argument("polarization-assisted projection needs horizontally polarized input");
  }
  const auto out = build_projection(setting).apply(widened(s, 1));
  return {detect(out, proj_ports::first), detect(out, proj_ports::second)};
}

// Alice measures from the even axis, Bob from the odd axis; both pair |2k> with |1-2k>.
inline std::pair<ProjectionSetting, ProjectionSetting> bell_analyzers(double theta, double chi) {
  return {ProjectionSetting{theta, ProjectionVariant::TunableBS, OamPairing::Reflection, Parity::Even},
          ProjectionSetting{chi, ProjectionVariant::TunableBS, OamPairing::Reflection, Parity::Odd}};
}

// Joint detector statistics: D1/D2 are Alice's (theta, theta_perp), D3/D4 Bob's (chi, chi_perp).
struct CoincidenceTable {
  double p13 = 0.0, p14 = 0.0, p23 = 0.0, p24 = 0.0;
  std::optional<SamplingSpec> sampled;
  std::array<std::uint64_t, 4> counts{};

  std::array<double, 4> as_array() const { return {p13, p14, p23, p24}; }
  double total() const { return p13 + p14 + p23 + p24; }

  // Coincidence normalized by Alice's first-port rate: P(D3 | D1).
  double normalized_coincidence() const {
    const double a = p13 + p14;
    if (a <= 0.0) throw std::domain_error("Alice's first port never fires");
    return p13 / a;
  }

  double correlation() const {
    const double n = total();
    if (!(n > 1e-12)) throw std::domain_error("degenerate coincidence denominator");
    return (p13 + p24 - p14 - p23) / n;
  }
};

inline CoincidenceTable coincidence(const TwoPhotonState& s, const ProjectionSetting& alice, const ProjectionSetting& bob) {
  const auto after = build_projection(bob).apply(build_projection(alice).apply(s, Slot::First), Slot::Second);
  CoincidenceTable t;
  t.p13 = coincidence(after, proj_ports::first, proj_ports::first);
  t.p14 = coincidence(after, proj_ports::first, proj_ports::second);
  t.p23 = coincidence(after, proj_ports::second, proj_ports::first);
  t.p24 = coincidence(after, proj_ports::second, proj_ports::second);
  return t;
}

inline CoincidenceTable coincidence(const TwoPhotonState& s, double theta, double chi) {
  const auto [a, b] = bell_analyzers(theta, chi);
  return coincidence(s, a, b);
}

inline CoincidenceTable sample_table(const CoincidenceTable& exact, SamplingSpec spec, std::uint64_t stream) {
  Rng rng(derive_seed(spec.seed, stream));
  const auto probs = exact.as_array();
  const auto counts = sample_multinomial(probs, spec.shots, rng);
  CoincidenceTable t;
  t.sampled = spec;
  const double n = static_cast<double>(spec.shots);
  for (std::size_t i = 0; i < 4; ++i) t.counts[i] = counts[i];
  t.p13 = counts[0] / n;
  t.p14 = counts[1] / n;
  t.p23 = counts[2] / n;
  t.p24 = counts[3] / n;
  return t;
}

struct CHSHResult {
  // Setting pairs in order (theta,chi), (theta,chi'), (theta',chi), (theta',chi').
  std::array<CoincidenceTable, 4> tables;
  std::array<double, 4> E{};
  double B = 0.0;
  std::optional<double> sigma_B;  // multinomial propagation, sampled mode only
};

inline double chsh_combination(const std::array<double, 4>& E) { return std::abs(E[0] - E[1] + E[2] + E[3]); }

// Standard error of the combination when each E is estimated from n_i multinomial shots.
inline double chsh_sigma(const std::array<double, 4>& E, const std::array<std::uint64_t, 4>& n) {
  double var = 0.0;
  for (std::size_t i = 0; i < 4; ++i) var += (1.0 - E[i] * E[i]) / static_cast<double>(n[i]);
  return std::sqrt(var);
}

inline CHSHResult chsh(const TwoPhotonState& s, double theta, double theta2, double chi, double chi2,
                       std::optional<SamplingSpec> sampling = std::nullopt) {
  if (!s.is_normalized()) throw std::invalid_argument("chsh requires a normalized state");
  const std::array<std::pair<double, double>, 4> settings = {
      {{theta, chi}, {theta, chi2}, {theta2, chi}, {theta2, chi2}}};
  CHSHResult r;
  for (std::size_t i = 0; i < 4; ++i) {
    r.tables[i] = coincidence(s, settings[i].first, settings[i].second);
    if (sampling && sampling->shots > 0) r.tables[i] = sample_table(r.tables[i], *sampling, i);
    r.E[i] = r.tables[i].correlation();
  }
  r.B = chsh_combination(r.E);
  if (sampling && sampling->shots > 0) r.sigma_B = chsh_sigma(r.E, {sampling->shots, sampling->shots, sampling->shots, sampling->shots});
  return r;
}

// ---- E91 -----------------------------------------------------------------

inline constexpr std::array<double, 3> kEkertAlice = {0.0, std::numbers::pi / 8, std::numbers::pi / 4};
inline constexpr std::array<double, 3> kEkertBob = {std::numbers::pi / 8, std::numbers::pi / 4, 3 * std::numbers::pi / 8};

struct EkertOptions {
  // (alice index, bob index) used for every round instead of random choice.
  std::optional<std::pair<std::size_t, std::size_t>> forced_bases;
};

struct EkertResult {
  std::string key_a, key_b;
  std::optional<double> qber;
  std::optional<double> chsh_estimate;
  std::optional<double> chsh_sigma;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  std::array<std::uint64_t, 4> chsh_rounds{};
};

namespace detail {
// Position of an (alice, bob) basis pair in the CHSH combination, or -1.
inline int chsh_slot(std::size_t a, std::size_t b) {
  if (a == 0 && b == 0) return 0;  // (theta, chi)
  if (a == 0 && b == 2) return 1;  // (theta, chi')
  if (a == 2 && b == 0) return 2;  // (theta', chi)
  if (a == 2 && b == 2) return 3;  // (theta', chi')
  return -1;
}
inline bool matched(std::size_t a, std::size_t b) { return kEkertAlice[a] == kEkertBob[b]; }
}  // namespace detail

// Outcome mapping: Alice D1 -> 0, D2 -> 1. Bob's D3 is his odd-side port (raw bit 1);
// on matched bases he flips, so D3 -> 0 and D4 -> 1.
inline EkertResult ekert_run(const TwoPhotonState& s, std::uint64_t rounds, std::uint64_t seed, const EkertOptions& opts = {}) {
  if (rounds < 1) throw std::invalid_argument("ekert_run needs at least one round");
  std::array<std::array<std::array<double, 4>, 3>, 3> probs{};
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) probs[a][b] = coincidence(s, kEkertAlice[a], kEkertBob[b]).as_array();

  EkertResult r;
  r.rounds = rounds;
  r.seed = seed;
  std::array<std::array<std::uint64_t, 4>, 4> chsh_counts{};
  std::uint64_t errors = 0;
  for (std::uint64_t i = 0; i < rounds; ++i) {
    Rng rng(derive_seed(seed, i));
    std::size_t a = rng.below(3), b = rng.below(3);
    if (opts.forced_bases) std::tie(a, b) = *opts.forced_bases;
    if (a > 2 || b > 2) throw std::invalid_argument("forced basis index out of range");
    const std::size_t outcome = sample_categorical(probs[a][b], rng.uniform());
    if (detail::matched(a, b)) {
      const char bit_a = outcome < 2 ? '0' : '1';
      const char bit_b = (outcome == 0 || outcome == 2) ? '0' : '1';
      r.key_a.push_back(bit_a);
      r.key_b.push_back(bit_b);
      if (bit_a != bit_b) ++errors;
    } else if (const int slot = detail::chsh_slot(a, b); slot >= 0) {
      ++chsh_counts[slot][outcome];
    }
  }
  if (!r.key_a.empty()) r.qber = static_cast<double>(errors) / static_cast<double>(r.key_a.size());

  std::array<double, 4> E{};
  bool complete = true;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& c = chsh_counts[k];
    const std::uint64_t n = c[0] + c[1] + c[2] + c[3];
    r.chsh_rounds[k] = n;
    if (n == 0) {
      complete = false;
      continue;
    }
    E[k] = (static_cast<double>(c[0] + c[3]) - static_cast<double>(c[1] + c[2])) / static_cast<double>(n);
  }
  if (complete) {
    r.chsh_estimate = chsh_combination(E);
    r.chsh_sigma = chsh_sigma(E, r.chsh_rounds);
  }
  return r;
}

}  // namespace oamqi
