// hilbert.hpp
// Truncated OAM x polarization x path mode space and sparse photon states.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace oamqi {

using complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kPruneThreshold = 1e-15;
inline constexpr double kUnnormalizedTolerance = 1e-9;
inline constexpr int kDefaultTruncation = 8;

// Raised when a guarded operation would corrupt the truncated band.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Parity { Even, Odd };
enum class Polarization { H, V };

inline constexpr Parity parity(int m) noexcept {
  return (m % 2 == 0) ? Parity::Even : Parity::Odd;
}

inline constexpr Parity flip(Parity p) noexcept {
  return p == Parity::Even ? Parity::Odd : Parity::Even;
}

inline const char* to_string(Parity p) { return p == Parity::Even ? "E" : "O"; }
inline const char* to_string(Polarization p) { return p == Polarization::H ? "H" : "V"; }

inline Polarization polarization_from_string(const std::string& s) {
  if (s == "H" || s == "h") return Polarization::H;
  if (s == "V" || s == "v") return Polarization::V;
  throw std::invalid_argument("unknown polarization '" + s + "'");
}

// Band |m| <= K on which every state lives.
class Truncation {
 public:
  constexpr Truncation() = default;
  explicit Truncation(int bound) : bound_(bound) {
    if (bound < 1) throw std::invalid_argument("truncation bound K must be >= 1");
  }
  constexpr int bound() const noexcept { return bound_; }
  constexpr bool contains(int m) const noexcept { return m >= -bound_ && m <= bound_; }
  constexpr int size() const noexcept { return 2 * bound_ + 1; }
  // Cyclic wrap of an out-of-band index back into [-K, K].
  constexpr int wrap(int m) const noexcept {
    const int n = size();
    int r = (m + bound_) % n;
    if (r < 0) r += n;
    return r - bound_;
  }
  friend constexpr bool operator==(Truncation, Truncation) = default;

 private:
  int bound_ = kDefaultTruncation;
};

using PathLabel = std::string;

struct ModeKey {
  PathLabel path;
  Polarization pol = Polarization::H;
  int m = 0;

  friend bool operator==(const ModeKey&, const ModeKey&) = default;
  friend bool operator<(const ModeKey& a, const ModeKey& b) {
    return std::tie(a.path, a.pol, a.m) < std::tie(b.path, b.pol, b.m);
  }
};

using JointKey = std::pair<ModeKey, ModeKey>;

namespace detail {

template <class Key>
class SparseState {
 public:
  using map_type = std::map<Key, complex>;

  SparseState() = default;
  explicit SparseState(Truncation k) : truncation_(k) {}
  SparseState(Truncation k, map_type amps) : truncation_(k), amplitudes_(std::move(amps)) {
    for (const auto& [key, a] : amplitudes_) check_key(key);
  }

  Truncation truncation() const noexcept { return truncation_; }
  const map_type& amplitudes() const noexcept { return amplitudes_; }
  bool empty() const noexcept { return amplitudes_.empty(); }
  std::size_t size() const noexcept { return amplitudes_.size(); }

  complex amplitude(const Key& key) const {
    auto it = amplitudes_.find(key);
    return it == amplitudes_.end() ? complex{} : it->second;
  }

  void add(const Key& key, complex a) {
    check_key(key);
    amplitudes_[key] += a;
  }

  double norm_squared() const {
    double n = 0.0;
    for (const auto& [key, a] : amplitudes_) n += std::norm(a);
    return n;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  bool is_normalized(double tol = kUnnormalizedTolerance) const {
    return std::abs(norm() - 1.0) <= tol;
  }

  void normalize() {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize the zero state");
    for (auto& [key, a] : amplitudes_) a /= n;
  }

  void prune(double threshold = kPruneThreshold) {
    std::erase_if(amplitudes_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
  }

  complex inner_product(const SparseState& other) const {
    if (truncation_ != other.truncation_)
      throw std::invalid_argument("inner product between states of different truncation");
    complex acc{};
    // Merge walk over both ordered maps.
    auto a = amplitudes_.begin();
    auto b = other.amplitudes_.begin();
    while (a != amplitudes_.end() && b != other.amplitudes_.end()) {
      if (a->first < b->first) {
        ++a;
      } else if (b->first < a->first) {
        ++b;
      } else {
        acc += std::conj(a->second) * b->second;
        ++a;
        ++b;
      }
    }
    return acc;
  }

 private:
  void check_key(const ModeKey& k) const {
    if (!truncation_.contains(k.m))
      throw std::out_of_range("OAM index " + std::to_string(k.m) + " outside band K=" +
                              std::to_string(truncation_.bound()));
  }
  void check_key(const JointKey& k) const {
    check_key(k.first);
    check_key(k.second);
  }

  Truncation truncation_;
  map_type amplitudes_;
};

}  // namespace detail

class PhotonState : public detail::SparseState<ModeKey> {
 public:
  using SparseState::SparseState;

  static PhotonState basis(Truncation k, int m, Polarization pol = Polarization::H,
                           const PathLabel& path = "in") {
    PhotonState s(k);
    s.add({path, pol, m}, 1.0);
    return s;
  }
};

class TwoPhotonState : public detail::SparseState<JointKey> {
 public:
  using SparseState::SparseState;
};

inline PhotonState normalized(PhotonState s) {
  s.normalize();
  return s;
}
inline TwoPhotonState normalized(TwoPhotonState s) {
  s.normalize();
  return s;
}

// Same amplitudes in a band grown by `extra`, so measurement optics with a fixed
// OAM shift never push in-band weight across the edge.
template <class State>
State widened(const State& s, int extra) {
  return State(Truncation{s.truncation().bound() + extra}, s.amplitudes());
}

inline complex inner_product(const PhotonState& a, const PhotonState& b) { return a.inner_product(b); }
inline complex inner_product(const TwoPhotonState& a, const TwoPhotonState& b) { return a.inner_product(b); }

// Probabilities of the four joint parity classes, summed over paths and polarizations.
struct ParityTable {
  double ee = 0.0, eo = 0.0, oe = 0.0, oo = 0.0;

  double& at(Parity p1, Parity p2) {
    if (p1 == Parity::Even) return p2 == Parity::Even ? ee : eo;
    return p2 == Parity::Even ? oe : oo;
  }
  double at(Parity p1, Parity p2) const { return const_cast<ParityTable*>(this)->at(p1, p2); }
  double total() const { return ee + eo + oe + oo; }
};

inline ParityTable parity_marginals(const TwoPhotonState& s) {
  if (!s.is_normalized())
    throw std::invalid_argument("parity_marginals requires a normalized state");
  ParityTable t;
  for (const auto& [key, a] : s.amplitudes())
    t.at(parity(key.first.m), parity(key.second.m)) += std::norm(a);
  return t;
}

// Single-photon parity weights (even, odd).
inline std::pair<double, double> parity_weights(const PhotonState& s) {
  double e = 0.0, o = 0.0;
  for (const auto& [key, a] : s.amplitudes()) (parity(key.m) == Parity::Even ? e : o) += std::norm(a);
  return {e, o};
}

// Coefficient family c_m feeding the SPDC sources.
class SpectrumModel {
 public:
  struct Uniform {};
  struct Gaussian {
    double sigma = 1.0;
  };
  struct Explicit {
    std::vector<std::pair<int, complex>> coeffs;
  };
  using Kind = std::variant<Uniform, Gaussian, Explicit>;

  SpectrumModel() = default;
  SpectrumModel(Kind kind, Truncation k) : kind_(std::move(kind)), truncation_(k) {
    if (auto* g = std::get_if<Gaussian>(&kind_); g && !(g->sigma > 0.0))
      throw std::invalid_argument("Gaussian spectrum needs sigma > 0");
    if (auto* e = std::get_if<Explicit>(&kind_); e && e->coeffs.empty())
      throw std::invalid_argument("explicit spectrum has no coefficients");
  }

  static SpectrumModel uniform(Truncation k) { return {Uniform{}, k}; }
  static SpectrumModel gaussian(double sigma, Truncation k) { return {Gaussian{sigma}, k}; }
  static SpectrumModel explicit_coeffs(std::vector<std::pair<int, complex>> c, Truncation k) {
    return {Explicit{std::move(c)}, k};
  }

  const Kind& kind() const noexcept { return kind_; }
  Truncation truncation() const noexcept { return truncation_; }
  bool is_explicit() const noexcept { return std::holds_alternative<Explicit>(kind_); }

  // Coefficients on [lo, hi], normalized so that sum |c_m|^2 = 1.
  // Explicit entries outside [lo, hi] are an error.
  std::map<int, complex> realize(int lo, int hi) const {
    if (lo > hi) throw std::invalid_argument("empty spectrum support");
    std::map<int, complex> c;
    if (std::holds_alternative<Uniform>(kind_)) {
      for (int m = lo; m <= hi; ++m) c[m] = 1.0;
    } else if (auto* g = std::get_if<Gaussian>(&kind_)) {
      for (int m = lo; m <= hi; ++m) c[m] = std::sqrt(gaussian_weight(m, g->sigma));
    } else {
      for (const auto& [m, v] : std::get<Explicit>(kind_).coeffs) {
        if (m < lo || m > hi)
          throw GuardError("explicit spectrum entry m=" + std::to_string(m) +
                           " touches the band edge (support must lie in [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "])");
        c[m] += v;
      }
    }
    double n = 0.0;
    for (const auto& [m, v] : c) n += std::norm(v);
    if (n == 0.0) throw std::invalid_argument("spectrum has zero weight");
    n = std::sqrt(n);
    for (auto& [m, v] : c) v /= n;
    return c;
  }

  // Weight of the untruncated family lying outside [lo, hi]. Uniform and Explicit
  // spectra are defined on the band, so only Gaussian reports a nonzero value.
  double out_of_band_weight(int lo, int hi) const {
    auto* g = std::get_if<Gaussian>(&kind_);
    if (!g) return 0.0;
    double inside = 0.0, total = 0.0;
    const int reach = std::max(hi, -lo) + static_cast<int>(std::ceil(40.0 * g->sigma)) + 1;
    for (int m = -reach; m <= reach; ++m) {
      const double w = gaussian_weight(m, g->sigma);
      total += w;
      if (m >= lo && m <= hi) inside += w;
    }
    return (total - inside) / total;
  }

 private:
  static double gaussian_weight(int m, double sigma) {
    const double x = m / sigma;
    return std::exp(-x * x);
  }

  Kind kind_ = Uniform{};
  Truncation truncation_;
};

}  // namespace oamqi
