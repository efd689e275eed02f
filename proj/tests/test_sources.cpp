#include <gtest/gtest.h>

#include "support.hpp"

using namespace oamqi;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

SourceSpec vortex(const SpectrumModel& s, PolarizationMode mode = PolarizationMode::ProductHH) { return {1, s, mode}; }

}  // namespace

TEST(Spdc, VortexUniformParityMarginals) {
  const auto t = parity_marginals(spdc(vortex(SpectrumModel::uniform(Truncation{3}))));
  EXPECT_NEAR(t.eo, 0.5, 1e-12);
  EXPECT_NEAR(t.oe, 0.5, 1e-12);
  EXPECT_NEAR(t.ee + t.oo, 0.0, 1e-12);
}

TEST(Spdc, GaussianPumpAntiCorrelatesOam) {
  for (const auto& sp : {SpectrumModel::uniform(Truncation{4}), SpectrumModel::gaussian(1.2, Truncation{4})}) {
    const auto s = spdc({0, sp, PolarizationMode::ProductHH});
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    for (const auto& [key, a] : s.amplitudes()) EXPECT_EQ(key.first.m, -key.second.m);
  }
}

TEST(Spdc, SingleTermExplicit) {
  const auto s = spdc(vortex(SpectrumModel::explicit_coeffs({{0, 1.0}}, Truncation{2})));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(std::abs(s.amplitude({{"in", Polarization::H, 0}, {"in", Polarization::H, 1}})), 1.0, 1e-15);
}

TEST(Spdc, OamConservation) {
  for (int K = 1; K <= 6; ++K)
    for (int pump : {0, 1})
      for (const auto& sp : {SpectrumModel::uniform(Truncation{K}), SpectrumModel::gaussian(0.8 * K, Truncation{K})}) {
        const auto s = spdc({pump, sp, PolarizationMode::BellPhiPlus});
        for (const auto& [key, a] : s.amplitudes()) EXPECT_EQ(key.first.m + key.second.m, pump);
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
      }
}

TEST(Spdc, EqualParityWeightsForSymmetricSpectra) {
  for (int K = 1; K <= 6; ++K)
    for (const auto& sp : {SpectrumModel::uniform(Truncation{K}), SpectrumModel::gaussian(1.3, Truncation{K})}) {
      const auto spec = vortex(sp);
      ASSERT_TRUE(spectrum_is_symmetric(spec));
      double even = 0.0, odd = 0.0;
      for (const auto& [m, c] : realized_coefficients(spec)) (parity(m) == Parity::Even ? even : odd) += std::norm(c);
      EXPECT_NEAR(even, 0.5, 1e-12);
      EXPECT_NEAR(odd, 0.5, 1e-12);
    }
}

TEST(Spdc, ExplicitSpectrumIsNotSymmetrized) {
  const auto spec = vortex(SpectrumModel::explicit_coeffs({{0, 1.0}, {1, 0.5}}, Truncation{2}));
  EXPECT_FALSE(spectrum_is_symmetric(spec));
  EXPECT_NEAR(std::norm(realized_coefficients(spec).at(0)), 0.8, 1e-12);
}

TEST(Spdc, ExplicitSupportOutsideBandIsGuarded) {
  EXPECT_THROW(spdc(vortex(SpectrumModel::explicit_coeffs({{-2, 1.0}}, Truncation{2}))), GuardError);
  EXPECT_THROW(spdc({0, SpectrumModel::explicit_coeffs({{3, 1.0}}, Truncation{2}), PolarizationMode::ProductHH}), GuardError);
  EXPECT_THROW(spdc({2, SpectrumModel::uniform(Truncation{2}), PolarizationMode::ProductHH}), std::invalid_argument);
}

TEST(HyperSource, PolarizationMaximallyEntangled) {
  for (const auto& sp : {SpectrumModel::uniform(Truncation{3}), SpectrumModel::gaussian(2.0, Truncation{3})}) {
    const auto s = hyper_source(sp);
    double hh = 0.0, vv = 0.0, other = 0.0;
    for (const auto& [key, a] : s.amplitudes()) {
      if (key.first.pol == Polarization::H && key.second.pol == Polarization::H) hh += std::norm(a);
      else if (key.first.pol == Polarization::V && key.second.pol == Polarization::V) vv += std::norm(a);
      else other += std::norm(a);
    }
    EXPECT_NEAR(hh, 0.5, 1e-12);
    EXPECT_NEAR(vv, 0.5, 1e-12);
    EXPECT_EQ(other, 0.0);
    const auto t = parity_marginals(s);
    EXPECT_NEAR(t.eo, 0.5, 1e-12);
    EXPECT_NEAR(t.oe, 0.5, 1e-12);
  }
}

TEST(HyperSource, SingleTerm) {
  const auto s = hyper_source(SpectrumModel::explicit_coeffs({{0, 1.0}}, Truncation{1}));
  TwoPhotonState want(Truncation{1});
  want.add({{"in", Polarization::H, 0}, {"in", Polarization::H, 1}}, r2);
  want.add({{"in", Polarization::V, 0}, {"in", Polarization::V, 1}}, r2);
  EXPECT_NEAR(std::abs(inner_product(want, s)), 1.0, 1e-12);
}

TEST(OcP, PermutationExamples) {
  const Truncation k{2};
  const auto oh = oc_p_gate(PhotonState::basis(k, 1, Polarization::H));
  EXPECT_EQ(oh.amplitude({"in", Polarization::V, 0}), complex{1.0});
  const auto eh = oc_p_gate(PhotonState::basis(k, 0, Polarization::H));
  EXPECT_EQ(eh.amplitude({"in", Polarization::H, 0}), complex{1.0});
  const auto ev = oc_p_gate(PhotonState::basis(k, 0, Polarization::V));
  EXPECT_EQ(ev.amplitude({"in", Polarization::V, 1}), complex{1.0});
  const auto ov = oc_p_gate(PhotonState::basis(k, 1, Polarization::V));
  EXPECT_EQ(ov.amplitude({"in", Polarization::H, 1}), complex{1.0});
}

TEST(OcP, UnitaryOnParityQubitLevel) {
  // 4x4 matrix over (E,H), (O,H), (E,V), (O,V) on canonical representatives.
  const std::array<ModeKey, 4> basis = {ModeKey{"in", Polarization::H, 0}, ModeKey{"in", Polarization::H, 1},
                                        ModeKey{"in", Polarization::V, 0}, ModeKey{"in", Polarization::V, 1}};
  std::array<std::array<complex, 4>, 4> U{};
  for (int j = 0; j < 4; ++j) {
    PhotonState s(Truncation{2});
    s.add(basis[j], 1.0);
    const auto out = oc_p_gate(s);
    for (int i = 0; i < 4; ++i) U[i][j] = out.amplitude(basis[i]);
  }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      complex g{};
      for (int i = 0; i < 4; ++i) g += std::conj(U[i][a]) * U[i][b];
      EXPECT_NEAR(std::abs(g - complex{a == b ? 1.0 : 0.0}), 0.0, 1e-15);
    }
}

TEST(OcP, ModeLevelPermutationIsInjective) {
  const Truncation k{4};
  std::set<ModeKey> images;
  std::size_t count = 0;
  for (auto pol : {Polarization::H, Polarization::V})
    for (int m = -3; m <= 3; ++m) {
      images.insert(oc_p_map({"in", pol, m}));
      ++count;
    }
  EXPECT_EQ(images.size(), count);
}

TEST(PcO, Examples) {
  const Truncation k{2};
  EXPECT_EQ(pc_o_gate(PhotonState::basis(k, 0, Polarization::V)).amplitude({"in", Polarization::V, 1}), complex{1.0});
  EXPECT_EQ(pc_o_gate(PhotonState::basis(k, 0, Polarization::H)).amplitude({"in", Polarization::H, 0}), complex{1.0});
  const Element hwp{HalfWavePlate{std::numbers::pi / 8}, {"in"}, {"in"}};
  const auto psi = pc_o_gate(apply(hwp, PhotonState::basis(k, 0)));
  EXPECT_NEAR(std::abs(inner_product(prepare_single_photon_bell(SpinOrbitBell::PsiPlus, k), psi)), 1.0, 1e-12);
  EXPECT_THROW(pc_o_gate(PhotonState::basis(k, 2, Polarization::V)), GuardError);
}

TEST(PcO, SquareFlipsParityTwice) {
  Rng rng(9);
  const Truncation k{4};
  PhotonState s(k);
  for (auto pol : {Polarization::H, Polarization::V})
    for (int m = -2; m <= 2; ++m) s.add({"in", pol, m}, oamqi::testing::random_complex(rng));
  s.normalize();
  const auto twice = pc_o_gate(pc_o_gate(s));
  std::map<std::pair<Polarization, Parity>, double> before, after;
  for (const auto& [key, a] : s.amplitudes()) before[{key.pol, parity(key.m)}] += std::norm(a);
  for (const auto& [key, a] : twice.amplitudes()) after[{key.pol, parity(key.m)}] += std::norm(a);
  for (const auto& [cls, w] : before) EXPECT_NEAR(after[cls], w, 1e-12);
}

TEST(Hybrid, ParityAndPolarizationTable) {
  for (int K = 1; K <= 4; ++K) {
    const auto h = hybrid_two_photon(spdc(vortex(SpectrumModel::uniform(Truncation{K}))));
    double even1 = 0.0, h2 = 0.0, h1o2 = 0.0, v1e2 = 0.0;
    for (const auto& [key, a] : h.amplitudes()) {
      const double w = std::norm(a);
      if (parity(key.first.m) == Parity::Even) even1 += w;
      if (key.second.pol == Polarization::H) h2 += w;
      if (key.first.pol == Polarization::H && parity(key.second.m) == Parity::Odd) h1o2 += w;
      if (key.first.pol == Polarization::V && parity(key.second.m) == Parity::Even) v1e2 += w;
    }
    EXPECT_NEAR(even1, 1.0, 1e-12);
    EXPECT_NEAR(h2, 1.0, 1e-12);
    EXPECT_NEAR(h1o2, 0.5, 1e-12);
    EXPECT_NEAR(v1e2, 0.5, 1e-12);
  }
}

TEST(Hybrid, SingleTermKeepsHOBranch) {
  const auto h = hybrid_two_photon(spdc(vortex(SpectrumModel::explicit_coeffs({{0, 1.0}}, Truncation{1}))));
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h.amplitude({{"in", Polarization::H, 0}, {"in", Polarization::H, 1}}), complex{1.0});
}

TEST(Hybrid, RejectsWrongDomain) {
  EXPECT_THROW(hybrid_two_photon(hyper_source(SpectrumModel::uniform(Truncation{2}))), std::invalid_argument);
  EXPECT_THROW(hybrid_two_photon(spdc({0, SpectrumModel::uniform(Truncation{2}), PolarizationMode::ProductHH})),
               std::invalid_argument);
}

TEST(SpinOrbitBell, Definitions) {
  const auto psi = prepare_single_photon_bell(SpinOrbitBell::PsiPlus);
  EXPECT_NEAR(psi.amplitude({"in", Polarization::H, 0}).real(), r2, 1e-15);
  EXPECT_NEAR(psi.amplitude({"in", Polarization::V, 1}).real(), r2, 1e-15);
  const auto phi = prepare_single_photon_bell(SpinOrbitBell::PhiMinus);
  EXPECT_NEAR(phi.amplitude({"in", Polarization::H, 1}).real(), r2, 1e-15);
  EXPECT_NEAR(phi.amplitude({"in", Polarization::V, 0}).real(), -r2, 1e-15);
}

TEST(SpinOrbitBell, OrthonormalBasis) {
  for (auto a : kSpinOrbitBells)
    for (auto b : kSpinOrbitBells) {
      const double ip = std::abs(inner_product(prepare_single_photon_bell(a), prepare_single_photon_bell(b)));
      EXPECT_NEAR(ip, a == b ? 1.0 : 0.0, 1e-12);
    }
  EXPECT_EQ(spin_orbit_bell_from_string("phi-"), SpinOrbitBell::PhiMinus);
  EXPECT_THROW(spin_orbit_bell_from_string("chi+"), std::invalid_argument);
}

TEST(SpinOrbitBell, HeraldedPreparation) {
  const auto pair = spdc(vortex(SpectrumModel::uniform(Truncation{1})));
  const auto psi = prepare_psi_plus_from_pair(pair);
  EXPECT_NEAR(std::abs(inner_product(prepare_single_photon_bell(SpinOrbitBell::PsiPlus), psi)), 1.0, 1e-12);
}
