// dense_oracle.hpp
// Dense-matrix reference for circuit action. Element matrices are written out
// from their parameters here, independently of Element::act, so that agreement
// between the two routes is a real check.

#pragma once

#include <Eigen/Dense>

#include "elements.hpp"

namespace oamqi {

inline constexpr std::size_t kMaxDenseDimension = std::size_t{1} << 14;

class DenseBasis {
 public:
  DenseBasis(std::vector<PathLabel> paths, Truncation k) : paths_(std::move(paths)), k_(k) {
    std::sort(paths_.begin(), paths_.end());
    paths_.erase(std::unique(paths_.begin(), paths_.end()), paths_.end());
    if (dimension() > kMaxDenseDimension)
      throw std::length_error("dense dimension " + std::to_string(dimension()) + " exceeds 2^14");
  }

  std::size_t dimension() const noexcept { return paths_.size() * 2 * static_cast<std::size_t>(k_.size()); }
  Truncation truncation() const noexcept { return k_; }
  const std::vector<PathLabel>& paths() const noexcept { return paths_; }

  Eigen::Index index(const PathLabel& path, Polarization pol, int m) const {
    auto it = std::lower_bound(paths_.begin(), paths_.end(), path);
    if (it == paths_.end() || *it != path) throw std::out_of_range("path '" + path + "' not in dense basis");
    const auto p = static_cast<Eigen::Index>(it - paths_.begin());
    const auto q = pol == Polarization::H ? 0 : 1;
    return (p * 2 + q) * k_.size() + (m + k_.bound());
  }
  Eigen::Index index(const ModeKey& key) const { return index(key.path, key.pol, key.m); }

  ModeKey key(Eigen::Index i) const {
    const auto n = static_cast<Eigen::Index>(k_.size());
    const int m = static_cast<int>(i % n) - k_.bound();
    const auto pq = i / n;
    return {paths_[static_cast<std::size_t>(pq / 2)], pq % 2 == 0 ? Polarization::H : Polarization::V, m};
  }

 private:
  std::vector<PathLabel> paths_;
  Truncation k_;
};

inline Eigen::MatrixXcd element_matrix(const Element& e, const DenseBasis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  const int K = basis.truncation().bound();
  const auto& in = e.in_paths();
  const auto& out = e.out_paths();
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(dim, dim);

  std::set<PathLabel> touched(in.begin(), in.end());
  touched.insert(out.begin(), out.end());
  for (const auto& p : basis.paths())
    if (!touched.count(p))
      for (auto pol : {Polarization::H, Polarization::V})
        for (int m = -K; m <= K; ++m) U(basis.index(p, pol, m), basis.index(p, pol, m)) = 1.0;

  // Output paths that are not also inputs carry vacuum in a valid circuit; route
  // them back onto the freed input paths so U stays unitary on the whole space.
  std::vector<PathLabel> fresh_out, freed_in;
  for (const auto& p : out)
    if (std::find(in.begin(), in.end(), p) == in.end()) fresh_out.push_back(p);
  for (const auto& p : in)
    if (std::find(out.begin(), out.end(), p) == out.end()) freed_in.push_back(p);
  for (std::size_t i = 0; i < fresh_out.size(); ++i)
    for (auto pol : {Polarization::H, Polarization::V})
      for (int m = -K; m <= K; ++m) U(basis.index(freed_in[i], pol, m), basis.index(fresh_out[i], pol, m)) = 1.0;

  auto set = [&](const PathLabel& to, Polarization pt, int mt, const PathLabel& from, Polarization pf, int mf, complex v) {
    U(basis.index(to, pt, mt), basis.index(from, pf, mf)) += v;
  };
  const auto H = Polarization::H, V = Polarization::V;

  std::visit(
      [&](const auto& el) {
        using T = std::decay_t<decltype(el)>;
        for (int m = -K; m <= K; ++m) {
          if constexpr (std::is_same_v<T, BeamSplitter>) {
            const complex t = std::cos(el.theta), r = complex{0, std::sin(el.theta)};
            for (auto pol : {H, V})
              for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 2; ++i) set(out[i], pol, m, in[j], pol, m, i == j ? t : r);
          } else if constexpr (std::is_same_v<T, PolarizingBS>) {
            for (int j = 0; j < 2; ++j) {
              set(out[j], H, m, in[j], H, m, 1.0);
              set(out[1 - j], V, m, in[j], V, m, complex{0, 1});
            }
          } else if constexpr (std::is_same_v<T, DovePrism>) {
            const complex ph = std::exp(complex{0, m * el.alpha});
            for (auto pol : {H, V}) set(out[0], pol, m, in[0], pol, m, ph);
          } else if constexpr (std::is_same_v<T, SpiralPhasePlate>) {
            const int shifted = basis.truncation().wrap(m + el.order);
            for (auto pol : {H, V}) set(out[0], pol, shifted, in[0], pol, m, 1.0);
          } else if constexpr (std::is_same_v<T, HalfWavePlate>) {
            const double c = std::cos(2 * el.angle), s = std::sin(2 * el.angle);
            set(out[0], H, m, in[0], H, m, c);
            set(out[0], V, m, in[0], H, m, s);
            set(out[0], H, m, in[0], V, m, s);
            set(out[0], V, m, in[0], V, m, -c);
          } else if constexpr (std::is_same_v<T, PhaseDelay>) {
            const complex ph = std::exp(complex{0, el.phi});
            for (auto pol : {H, V}) set(out[0], pol, m, in[0], pol, m, ph);
          } else if constexpr (std::is_same_v<T, Mirror>) {
            for (auto pol : {H, V}) set(out[0], pol, m, in[0], pol, m, 1.0);
          } else {
            for (auto pol : {H, V}) set(out[0], pol, -m, in[0], pol, m, 1.0);
          }
        }
      },
      e.kind());
  return U;
}

inline Eigen::MatrixXcd circuit_matrix(const Circuit& c, const DenseBasis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& e : c.elements()) U = element_matrix(e, basis) * U;
  return U;
}

inline Eigen::VectorXcd to_dense(const PhotonState& s, const DenseBasis& basis) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
  for (const auto& [key, a] : s.amplitudes()) v(basis.index(key)) = a;
  return v;
}

inline PhotonState from_dense(const Eigen::VectorXcd& v, const DenseBasis& basis) {
  PhotonState s(basis.truncation());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != complex{}) s.add(basis.key(i), v(i));
  return s;
}

inline DenseBasis basis_for(const Circuit& c, const std::vector<PathLabel>& extra, Truncation k) {
  auto paths = c.paths();
  paths.insert(paths.end(), extra.begin(), extra.end());
  return DenseBasis{std::move(paths), k};
}

inline PhotonState dense_apply(const Circuit& c, const PhotonState& s) {
  std::vector<PathLabel> extra;
  for (const auto& [key, a] : s.amplitudes()) extra.push_back(key.path);
  const DenseBasis basis = basis_for(c, extra, s.truncation());
  return from_dense(circuit_matrix(c, basis) * to_dense(s, basis), basis);
}

inline TwoPhotonState dense_apply(const Circuit& c, const TwoPhotonState& s, Slot slot) {
  std::vector<PathLabel> extra;
  for (const auto& [key, a] : s.amplitudes()) {
    extra.push_back(key.first.path);
    extra.push_back(key.second.path);
  }
  const DenseBasis basis = basis_for(c, extra, s.truncation());
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, a] : s.amplitudes()) psi(basis.index(key.first), basis.index(key.second)) = a;
  const Eigen::MatrixXcd U = circuit_matrix(c, basis);
  if (slot != Slot::Second) psi = U * psi;
  if (slot != Slot::First) psi = psi * U.transpose();
  TwoPhotonState out(s.truncation());
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      if (psi(i, j) != complex{}) out.add({basis.key(i), basis.key(j)}, psi(i, j));
  return out;
}

// Largest |(U^dagger U - I)_ij|.
inline double unitarity_defect(const Eigen::MatrixXcd& U) {
  const Eigen::MatrixXcd G = U.adjoint() * U - Eigen::MatrixXcd::Identity(U.rows(), U.cols());
  return G.cwiseAbs().maxCoeff();
}

}  // namespace oamqi
