#include <gtest/gtest.h>

#include "support.hpp"

using namespace oamqi;
using oamqi::testing::max_amplitude_diff;

namespace {

const double pi = std::numbers::pi;
const double r2 = 1.0 / std::sqrt(2.0);

Element one(ElementKind k) { return Element{std::move(k), {ports::in}, {ports::in}}; }

}  // namespace

TEST(DovePrism, Examples) {
  const Truncation k{4};
  const auto odd = apply(one(DovePrism{pi}), PhotonState::basis(k, 3));
  EXPECT_NEAR(std::abs(odd.amplitude({"in", Polarization::H, 3}) - complex{-1.0}), 0.0, 1e-12);
  const auto even = apply(one(DovePrism{pi}), PhotonState::basis(k, 2));
  EXPECT_NEAR(std::abs(even.amplitude({"in", Polarization::H, 2}) - complex{1.0}), 0.0, 1e-12);
}

TEST(SpiralPhasePlate, OddToEvenNot) {
  const Truncation k{6};
  PhotonState s(k);
  const std::map<int, double> c = {{-3, 0.1}, {-1, 0.3}, {1, 0.5}, {3, 0.7}};
  for (const auto& [m, a] : c) s.add({"in", Polarization::H, m}, a);
  const auto out = apply(one(SpiralPhasePlate{+1}), s);
  for (const auto& [key, a] : out.amplitudes()) {
    EXPECT_EQ(parity(key.m), Parity::Even);
    EXPECT_NEAR(std::abs(a - complex{c.at(key.m - 1)}), 0.0, 1e-15);
  }
}

TEST(SpiralPhasePlate, WrapGuard) {
  const Truncation k{2};
  EXPECT_THROW(apply(one(SpiralPhasePlate{+1}), PhotonState::basis(k, 2)), GuardError);
  const auto wrapped = apply(one(SpiralPhasePlate{+1}), PhotonState::basis(k, 2), {false, kPruneThreshold});
  EXPECT_NEAR(std::abs(wrapped.amplitude({"in", Polarization::H, -2})), 1.0, 1e-15);
  PhotonState tiny(k);
  tiny.add({"in", Polarization::H, 0}, 1.0);
  tiny.add({"in", Polarization::H, 2}, 1e-6);  // weight 1e-12, under the guard
  EXPECT_NO_THROW(apply(one(SpiralPhasePlate{+1}), tiny));
}

TEST(SpiralPhasePlate, PlusThenMinusIsIdentity) {
  Rng rng(2);
  const Truncation k{4};
  PhotonState s(k);
  for (int m = -3; m <= 3; ++m) s.add({"in", Polarization::V, m}, oamqi::testing::random_complex(rng));
  s.normalize();
  const auto back = apply(one(SpiralPhasePlate{-1}), apply(one(SpiralPhasePlate{+1}), s));
  EXPECT_LT(max_amplitude_diff(back, s), 1e-12);
}

TEST(HalfWavePlate, Matrix) {
  const Truncation k{1};
  const double th = 0.3;
  const auto h = apply(one(HalfWavePlate{th}), PhotonState::basis(k, 0, Polarization::H));
  EXPECT_NEAR(h.amplitude({"in", Polarization::H, 0}).real(), std::cos(2 * th), 1e-15);
  EXPECT_NEAR(h.amplitude({"in", Polarization::V, 0}).real(), std::sin(2 * th), 1e-15);
  const auto v = apply(one(HalfWavePlate{th}), PhotonState::basis(k, 0, Polarization::V));
  EXPECT_NEAR(v.amplitude({"in", Polarization::H, 0}).real(), std::sin(2 * th), 1e-15);
  EXPECT_NEAR(v.amplitude({"in", Polarization::V, 0}).real(), -std::cos(2 * th), 1e-15);
}

TEST(HalfWavePlate, TwiceAtPiOver8IsIdentity) {
  Rng rng(4);
  const Truncation k{2};
  const auto s = oamqi::testing::random_state(rng, k, {ports::in});
  const auto hwp = one(HalfWavePlate{pi / 8});
  EXPECT_LT(max_amplitude_diff(apply(hwp, apply(hwp, s)), s), 1e-12);
}

TEST(BeamSplitter, UnitaryForEveryTransmission) {
  for (int i = 0; i <= 20; ++i) {
    const double t = i / 20.0;
    const Element bs{BeamSplitter::from_transmission(t), {"a", "b"}, {"c", "d"}};
    const DenseBasis basis({"a", "b", "c", "d"}, Truncation{1});
    EXPECT_LT(unitarity_defect(element_matrix(bs, basis)), 1e-12) << "t=" << t;
    const auto out = apply(bs, PhotonState::basis(Truncation{1}, 0, Polarization::H, "a"));
    EXPECT_NEAR(out.amplitude({"c", Polarization::H, 0}).real(), t, 1e-12);
    EXPECT_NEAR(out.amplitude({"d", Polarization::H, 0}).imag(), std::sqrt(1 - t * t), 1e-12);
  }
  EXPECT_THROW(BeamSplitter::from_transmission(1.5), std::invalid_argument);
}

TEST(PolarizingBS, TransmitsHReflectsV) {
  const Element pbs{PolarizingBS{}, {"a", "b"}, {"c", "d"}};
  const Truncation k{1};
  const auto h = apply(pbs, PhotonState::basis(k, 0, Polarization::H, "a"));
  EXPECT_EQ(detect(h, "c"), 1.0);
  const auto v = apply(pbs, PhotonState::basis(k, 0, Polarization::V, "a"));
  EXPECT_NEAR(std::abs(v.amplitude({"d", Polarization::V, 0}) - complex{0, 1}), 0.0, 1e-15);
}

TEST(Element, ArityAndPortChecks) {
  EXPECT_THROW((Element{BeamSplitter{0.1}, {"a"}, {"b"}}), std::invalid_argument);
  EXPECT_THROW((Element{Mirror{}, {"a", "b"}, {"c", "d"}}), std::invalid_argument);
  EXPECT_THROW((Element{BeamSplitter{0.1}, {"a", "a"}, {"c", "d"}}), std::invalid_argument);
}

TEST(Circuit, Validation) {
  EXPECT_THROW((Circuit{"bad", "in", {Element{Mirror{}, {"in"}, {"x"}}, Element{Mirror{}, {"in"}, {"y"}}}, {"y"}}),
               std::invalid_argument);
  EXPECT_THROW((Circuit{"bad", "in", {Element{Mirror{}, {"in"}, {"x"}}}, {"in"}}), std::invalid_argument);
  EXPECT_THROW((Circuit{"bad", "in", {Element{Mirror{}, {"in"}, {"x"}}}, {"x", "x"}}), std::invalid_argument);
}

TEST(Sorter, Examples) {
  const Circuit s = build_sorter();
  const Truncation k{4};
  EXPECT_NEAR(detect(s.apply(PhotonState::basis(k, 4)), ports::even), 1.0, 1e-12);
  EXPECT_NEAR(detect(s.apply(PhotonState::basis(k, 1)), ports::odd), 1.0, 1e-12);
  PhotonState sup(k);
  sup.add({"in", Polarization::H, 0}, r2);
  sup.add({"in", Polarization::H, 1}, r2);
  const auto out = s.apply(sup);
  EXPECT_NEAR(detect(out, ports::even), 0.5, 1e-12);
  EXPECT_NEAR(detect(out, ports::odd), 0.5, 1e-12);
}

TEST(Sorter, EvenPortCarriesSumOfEvenWeights) {
  Rng rng(8);
  const Truncation k{5};
  const auto s = oamqi::testing::random_state(rng, k, {ports::in});
  double even = 0.0;
  for (const auto& [key, a] : s.amplitudes())
    if (parity(key.m) == Parity::Even) even += std::norm(a);
  EXPECT_NEAR(detect(build_sorter().apply(s), ports::even), even, 1e-12);
}

TEST(Sorter, PortPhases) {
  // Even port carries i*E, odd port carries O.
  const auto out = build_sorter().apply(PhotonState::basis(Truncation{2}, 2));
  EXPECT_NEAR(std::abs(out.amplitude({ports::even, Polarization::H, 2}) - complex{0, 1}), 0.0, 1e-12);
  const auto odd = build_sorter().apply(PhotonState::basis(Truncation{2}, 1));
  EXPECT_NEAR(std::abs(odd.amplitude({ports::odd, Polarization::H, 1}) - complex{1, 0}), 0.0, 1e-12);
}

TEST(Sorter, TwoPhotonCoincidence) {
  TwoPhotonState s(Truncation{2});
  s.add({{"in", Polarization::H, 0}, {"in", Polarization::H, 1}}, r2);
  s.add({{"in", Polarization::H, 1}, {"in", Polarization::H, 0}}, r2);
  const auto out = build_sorter().apply(s, Slot::Both);
  EXPECT_NEAR(coincidence(out, ports::even, ports::odd), 0.5, 1e-12);
  EXPECT_NEAR(coincidence(out, ports::odd, ports::even), 0.5, 1e-12);
  EXPECT_NEAR(coincidence(out, ports::even, ports::even), 0.0, 1e-12);
}

TEST(Circuit, BuiltinsAreUnitary) {
  for (const Circuit& c : {build_sorter(), build_s2_setup(), build_s3_setup(), build_soba()}) {
    const auto basis = basis_for(c, {}, Truncation{3});
    EXPECT_LT(unitarity_defect(circuit_matrix(c, basis)), 1e-10) << c.name();
  }
}

TEST(Circuit, NormPreservedOnRandomCircuits) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Truncation k{3};
    const Circuit c = oamqi::testing::random_circuit(rng, 12);
    const auto s = oamqi::testing::random_state(rng, k, {ports::in});
    EXPECT_NEAR(c.apply(s, {false, 0.0}).norm(), 1.0, 1e-12);
  }
}

TEST(Io, CircuitRoundTrip) {
  for (const Circuit& c : {build_sorter(), build_s3_setup(), build_soba()}) {
    const auto j = io::to_json(c);
    EXPECT_EQ(io::to_json(io::circuit_from_json(io::json::parse(j.dump()))), j);
  }
  EXPECT_THROW(io::circuit_from_json(io::json::parse(R"({"elements":[{"kind":"laser","in":["in"],"out":["x"]}],"detectors":["x"]})")),
               io::FormatError);
}
