// elements.hpp
// Linear optical elements as exact mode maps, and circuits composed from them.

#pragma once

#include <algorithm>
#include <array>
#include <numbers>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hilbert.hpp"

namespace oamqi {

inline constexpr complex kI{0.0, 1.0};
inline constexpr double kWrapGuardWeight = 1e-9;

// Two-port splitter: transmitted amplitude cos(theta), reflected amplitude i*sin(theta).
struct BeamSplitter {
  double theta = std::numbers::pi / 4;
  static BeamSplitter from_transmission(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("beam splitter transmission must lie in [0,1]");
    return {std::acos(t)};
  }
  double transmission() const { return std::cos(theta); }
};
// Transmits H, reflects V with a factor i.
struct PolarizingBS {};
// |m> -> exp(i m alpha)|m>.
struct DovePrism {
  double alpha = 0.0;
};
// |m> -> |m + order>, cyclic at the band edge.
struct SpiralPhasePlate {
  int order = 1;
};
struct HalfWavePlate {
  double angle = 0.0;
};
struct PhaseDelay {
  double phi = 0.0;
};
// Identity on modes; common reflection phases are dropped.
struct Mirror {};
// Image-flipping reflection, |m> -> |-m>.
struct ImageInversion {};

using ElementKind = std::variant<BeamSplitter, PolarizingBS, DovePrism, SpiralPhasePlate, HalfWavePlate,
                                 PhaseDelay, Mirror, ImageInversion>;

inline bool is_two_port(const ElementKind& k) {
  return std::holds_alternative<BeamSplitter>(k) || std::holds_alternative<PolarizingBS>(k);
}

inline std::string kind_name(const ElementKind& k) {
  static constexpr std::array<const char*, 8> names = {
      "beam_splitter", "polarizing_bs", "dove_prism",  "spiral_phase_plate",
      "half_wave_plate", "phase_delay", "mirror",      "image_inversion"};
  return names[k.index()];
}

enum class Slot { First, Second, Both };

struct ApplyOptions {
  bool wrap_guard = true;
  double prune = kPruneThreshold;
};

class Element {
 public:
  Element(ElementKind kind, std::vector<PathLabel> in, std::vector<PathLabel> out)
      : kind_(std::move(kind)), in_(std::move(in)), out_(std::move(out)) {
    const std::size_t ports = is_two_port(kind_) ? 2 : 1;
    if (in_.size() != ports || out_.size() != ports)
      throw std::invalid_argument(kind_name(kind_) + " needs " + std::to_string(ports) + " input and output paths");
    if (ports == 2 && (in_[0] == in_[1] || out_[0] == out_[1]))
      throw std::invalid_argument(kind_name(kind_) + " ports must be distinct");
    check_unitary();
  }

  const ElementKind& kind() const noexcept { return kind_; }
  const std::vector<PathLabel>& in_paths() const noexcept { return in_; }
  const std::vector<PathLabel>& out_paths() const noexcept { return out_; }

  bool acts_on(const PathLabel& p) const { return std::find(in_.begin(), in_.end(), p) != in_.end(); }

  // Emits the image of amp*|key> (key on one of the input paths) as (key, amplitude) pairs.
  // Out-of-band OAM indices are emitted unwrapped; the caller owns the band policy.
  template <class Emit>
  void act(const ModeKey& key, complex amp, Emit&& emit) const {
    const std::size_t port = key.path == in_[0] ? 0 : 1;
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, BeamSplitter>) {
            emit(ModeKey{out_[port], key.pol, key.m}, std::cos(e.theta) * amp);
            emit(ModeKey{out_[1 - port], key.pol, key.m}, kI * std::sin(e.theta) * amp);
          } else if constexpr (std::is_same_v<T, PolarizingBS>) {
            if (key.pol == Polarization::H)
              emit(ModeKey{out_[port], key.pol, key.m}, amp);
            else
              emit(ModeKey{out_[1 - port], key.pol, key.m}, kI * amp);
          } else if constexpr (std::is_same_v<T, DovePrism>) {
            emit(ModeKey{out_[0], key.pol, key.m}, std::polar(1.0, key.m * e.alpha) * amp);
          } else if constexpr (std::is_same_v<T, SpiralPhasePlate>) {
            emit(ModeKey{out_[0], key.pol, key.m + e.order}, amp);
          } else if constexpr (std::is_same_v<T, HalfWavePlate>) {
            const double c = std::cos(2 * e.angle), s = std::sin(2 * e.angle);
            if (key.pol == Polarization::H) {
              emit(ModeKey{out_[0], Polarization::H, key.m}, c * amp);
              emit(ModeKey{out_[0], Polarization::V, key.m}, s * amp);
            } else {
              emit(ModeKey{out_[0], Polarization::H, key.m}, s * amp);
              emit(ModeKey{out_[0], Polarization::V, key.m}, -c * amp);
            }
          } else if constexpr (std::is_same_v<T, PhaseDelay>) {
            emit(ModeKey{out_[0], key.pol, key.m}, std::polar(1.0, e.phi) * amp);
          } else if constexpr (std::is_same_v<T, Mirror>) {
            emit(ModeKey{out_[0], key.pol, key.m}, amp);
          } else {
            static_assert(std::is_same_v<T, ImageInversion>);
            emit(ModeKey{out_[0], key.pol, -key.m}, amp);
          }
        },
        kind_);
  }

 private:
  // Gram matrix of the images of (in path x pol x m in {0,1}) must be the identity.
  void check_unitary() const {
    std::vector<std::map<ModeKey, complex>> images;
    for (const auto& p : in_)
      for (auto pol : {Polarization::H, Polarization::V})
        for (int m : {0, 1}) {
          std::map<ModeKey, complex> img;
          act(ModeKey{p, pol, m}, 1.0, [&](const ModeKey& k, complex a) { img[k] += a; });
          images.push_back(std::move(img));
        }
    for (std::size_t i = 0; i < images.size(); ++i)
      for (std::size_t j = 0; j < images.size(); ++j) {
        complex g{};
        for (const auto& [k, a] : images[i])
          if (auto it = images[j].find(k); it != images[j].end()) g += std::conj(a) * it->second;
        const double expect = i == j ? 1.0 : 0.0;
        if (!(std::abs(g - expect) <= 1e-12))
          throw std::invalid_argument(kind_name(kind_) + " is not unitary for the given parameters");
      }
  }

  ElementKind kind_;
  std::vector<PathLabel> in_;
  std::vector<PathLabel> out_;
};

namespace detail {

// Maps a single-photon key through an element, folding the band edge.
template <class Emit>
void map_key(const Element& e, const ModeKey& key, complex amp, Truncation k, double& wrapped, Emit&& emit) {
  e.act(key, amp, [&](const ModeKey& out, complex a) {
    if (k.contains(out.m)) {
      emit(out, a);
    } else {
      wrapped += std::norm(a);
      emit(ModeKey{out.path, out.pol, k.wrap(out.m)}, a);
    }
  });
}

inline void check_wrap(double wrapped, const ApplyOptions& opts) {
  if (opts.wrap_guard && wrapped > kWrapGuardWeight)
    throw GuardError("spiral phase plate moved weight " + std::to_string(wrapped) + " across the band edge");
}

}  // namespace detail

inline PhotonState apply(const Element& e, const PhotonState& s, const ApplyOptions& opts = {}) {
  PhotonState::map_type out;
  double wrapped = 0.0;
  for (const auto& [key, a] : s.amplitudes()) {
    if (!e.acts_on(key.path)) {
      out[key] += a;
      continue;
    }
    detail::map_key(e, key, a, s.truncation(), wrapped, [&](const ModeKey& k, complex v) { out[k] += v; });
  }
  detail::check_wrap(wrapped, opts);
  PhotonState r(s.truncation(), std::move(out));
  if (opts.prune > 0) r.prune(opts.prune);
  return r;
}

inline TwoPhotonState apply(const Element& e, const TwoPhotonState& s, Slot slot, const ApplyOptions& opts = {}) {
  if (slot == Slot::Both) {
    ApplyOptions keep = opts;
    keep.prune = 0;
    return apply(e, apply(e, s, Slot::First, keep), Slot::Second, opts);
  }
  TwoPhotonState::map_type out;
  double wrapped = 0.0;
  const Truncation k = s.truncation();
  for (const auto& [key, a] : s.amplitudes()) {
    const ModeKey& target = slot == Slot::First ? key.first : key.second;
    if (!e.acts_on(target.path)) {
      out[key] += a;
      continue;
    }
    detail::map_key(e, target, a, k, wrapped, [&](const ModeKey& mk, complex v) {
      out[slot == Slot::First ? JointKey{mk, key.second} : JointKey{key.first, mk}] += v;
    });
  }
  detail::check_wrap(wrapped, opts);
  TwoPhotonState r(k, std::move(out));
  if (opts.prune > 0) r.prune(opts.prune);
  return r;
}

// Ordered element placements from one input path to a set of detector paths.
class Circuit {
 public:
  Circuit(std::string name, PathLabel input, std::vector<Element> elements, std::vector<PathLabel> detectors)
      : name_(std::move(name)), input_(std::move(input)), elements_(std::move(elements)), detectors_(std::move(detectors)) {
    validate();
  }

  const std::string& name() const noexcept { return name_; }
  const PathLabel& input_path() const noexcept { return input_; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  const std::vector<PathLabel>& detector_paths() const noexcept { return detectors_; }

  // Every path label the circuit touches, in sorted order.
  std::vector<PathLabel> paths() const {
    std::set<PathLabel> all{input_};
    for (const auto& e : elements_) {
      all.insert(e.in_paths().begin(), e.in_paths().end());
      all.insert(e.out_paths().begin(), e.out_paths().end());
    }
    return {all.begin(), all.end()};
  }

  PhotonState apply(const PhotonState& s, const ApplyOptions& opts = {}) const {
    PhotonState cur = s;
    for (const auto& e : elements_) cur = oamqi::apply(e, cur, opts);
    return cur;
  }

  TwoPhotonState apply(const TwoPhotonState& s, Slot slot, const ApplyOptions& opts = {}) const {
    TwoPhotonState cur = s;
    for (const auto& e : elements_) cur = oamqi::apply(e, cur, slot, opts);
    return cur;
  }

 private:
  // Each path is produced once and consumed at most once; single-port elements may act in place.
  void validate() const {
    std::set<PathLabel> live{input_}, consumed;
    for (const auto& e : elements_) {
      const bool in_place = !is_two_port(e.kind()) && e.in_paths()[0] == e.out_paths()[0];
      for (const auto& p : e.in_paths()) {
        if (consumed.count(p)) throw std::invalid_argument("circuit " + name_ + ": path '" + p + "' is consumed twice");
        live.erase(p);
        if (!in_place) consumed.insert(p);
      }
      for (const auto& p : e.out_paths()) {
        if (!in_place && (live.count(p) || consumed.count(p)))
          throw std::invalid_argument("circuit " + name_ + ": path '" + p + "' is produced twice");
        live.insert(p);
      }
    }
    std::set<PathLabel> seen;
    for (const auto& d : detectors_) {
      if (!live.count(d)) throw std::invalid_argument("circuit " + name_ + ": detector path '" + d + "' is not an output");
      if (!seen.insert(d).second) throw std::invalid_argument("circuit " + name_ + ": duplicate detector '" + d + "'");
    }
  }

  std::string name_;
  PathLabel input_;
  std::vector<Element> elements_;
  std::vector<PathLabel> detectors_;
};

inline double detect(const PhotonState& s, const PathLabel& path) {
  double p = 0.0;
  for (const auto& [key, a] : s.amplitudes())
    if (key.path == path) p += std::norm(a);
  return p;
}

// Marginal detection probability of one photon of a pair.
inline double detect(const TwoPhotonState& s, Slot slot, const PathLabel& path) {
  if (slot == Slot::Both) throw std::invalid_argument("marginal detection needs a single slot");
  double p = 0.0;
  for (const auto& [key, a] : s.amplitudes())
    if ((slot == Slot::First ? key.first : key.second).path == path) p += std::norm(a);
  return p;
}

inline double coincidence(const TwoPhotonState& s, const PathLabel& path1, const PathLabel& path2) {
  double p = 0.0;
  for (const auto& [key, a] : s.amplitudes())
    if (key.first.path == path1 && key.second.path == path2) p += std::norm(a);
  return p;
}

inline std::vector<double> detect_all(const Circuit& c, const PhotonState& out) {
  std::vector<double> p;
  for (const auto& d : c.detector_paths()) p.push_back(detect(out, d));
  return p;
}

// Amplitudes conditioned on one photon being found in (path set, parity, polarization).
inline PhotonState postselect(const TwoPhotonState& s, Slot slot, Parity par, Polarization pol) {
  if (slot == Slot::Both) throw std::invalid_argument("post-selection needs a single slot");
  PhotonState out(s.truncation());
  for (const auto& [key, a] : s.amplitudes()) {
    const auto& heralded = slot == Slot::First ? key.first : key.second;
    const auto& kept = slot == Slot::First ? key.second : key.first;
    if (parity(heralded.m) == par && heralded.pol == pol) out.add(kept, a);
  }
  if (out.norm_squared() == 0.0) throw std::domain_error("post-selection outcome has zero probability");
  out.normalize();
  return out;
}

// ---- built-in circuits ----------------------------------------------------

namespace ports {
inline const PathLabel in = "in";
inline const PathLabel even = "even_port";
inline const PathLabel odd = "odd_port";
}  // namespace ports

// Mach-Zehnder with a dove prism at pi in the reflected arm: even OAM exits even_port
// (with a factor i), odd OAM exits odd_port.
inline std::vector<Element> sorter_elements(const PathLabel& input = ports::in, const std::string& prefix = "sorter.",
                                            const PathLabel& even_out = ports::even, const PathLabel& odd_out = ports::odd) {
  const double pi = std::numbers::pi;
  return {
      Element{BeamSplitter{pi / 4}, {input, prefix + "vac"}, {prefix + "arm_t", prefix + "arm_r"}},
      Element{DovePrism{0.0}, {prefix + "arm_t"}, {prefix + "arm_t.dp"}},
      Element{DovePrism{pi}, {prefix + "arm_r"}, {prefix + "arm_r.dp"}},
      Element{BeamSplitter{pi / 4}, {prefix + "arm_t.dp", prefix + "arm_r.dp"}, {odd_out, even_out}},
  };
}

inline Circuit build_sorter() {
  return Circuit{"sorter", ports::in, sorter_elements(), {ports::even, ports::odd}};
}

}  // namespace oamqi
