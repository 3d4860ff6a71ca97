#include <doctest.h>

#include <cmath>

#include "pbg/analysis.hpp"

using namespace pbg;

namespace
{
    const double kS = 1 / std::sqrt(2.0);
    const double kT = 1 / std::sqrt(3.0);
} // namespace

TEST_CASE("entropy values")
{
    CHECK(VonNeumannEntropy(1.0) == 0.0);
    CHECK(VonNeumannEntropy(0.0) == 0.0);
    CHECK(VonNeumannEntropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(std::abs(VonNeumannEntropy(0.5) - 0.6931) < 1e-4);
    CHECK(std::abs(VonNeumannEntropy(0.9) - 0.3251) < 1e-4);
    CHECK(VonNeumannEntropy(1.0 + 1e-13) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(VonNeumannEntropy(1.0 + 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(VonNeumannEntropy(-1e-9), std::invalid_argument);
}

TEST_CASE("entropy is symmetric with its maximum at one half")
{
    // Dyadic grid: 1 - p is exact, so the symmetry can be checked bit for bit.
    for (int i = 0; i <= 1024; i++)
    {
        const double p = i / 1024.0;
        CHECK(VonNeumannEntropy(p) == VonNeumannEntropy(1 - p));
        if (i != 512)
            CHECK(VonNeumannEntropy(p) < VonNeumannEntropy(0.5));
    }
}

TEST_CASE("Bell fidelity")
{
    CHECK(BellFidelity({{kS, kS}, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(BellFidelity({{1.0, 0.0}, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(BellFidelity({{kS, -kS}, 0.0}) == doctest::Approx(0.0));
    CHECK(BestBellFidelity({{kS, Complex(0.0, -kS)}, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(BellFidelity({{Complex(0.6, 0.0), Complex(0.0, 0.8)}, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(BellFidelity({{1.0}, 0.0}), std::invalid_argument);
}

TEST_CASE("W fidelity")
{
    CHECK(WFidelity({{kT, kT, kT}, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(WFidelity({{1.0, 0.0, 0.0}, 0.0}) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(WFidelity({{kT, kT, -kT}, 0.0}) == doctest::Approx(1.0 / 9).epsilon(1e-14));
    CHECK(BestWFidelity({{kT, Complex(0.0, kT), -kT}, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(WFidelity({{kS, kS}, 0.0}), std::invalid_argument);
}

TEST_CASE("fidelities ignore a global phase")
{
    const ExcitationState two{{Complex(0.3, 0.4), Complex(-0.5, 0.2)}, Complex(0.1, -0.6708203932499369)};
    const ExcitationState three{{Complex(0.3, 0.4), Complex(-0.5, 0.2), Complex(0.2, 0.1)},
                                Complex(0.0, 0.6403124237432849)};
    for (double phi : {0.3, 1.7, -2.9})
    {
        const Complex u = std::polar(1.0, phi);
        ExcitationState t2 = two, t3 = three;
        for (auto& a : t2.atom_amps)
            a *= u;
        for (auto& a : t3.atom_amps)
            a *= u;
        CHECK(BellFidelity(t2) == doctest::Approx(BellFidelity(two)).epsilon(1e-14));
        CHECK(BestBellFidelity(t2) == doctest::Approx(BestBellFidelity(two)).epsilon(1e-14));
        CHECK(WFidelity(t3) == doctest::Approx(WFidelity(three)).epsilon(1e-14));
        CHECK(BestWFidelity(t3) == doctest::Approx(BestWFidelity(three)).epsilon(1e-14));
    }
}

TEST_CASE("report is computed from the amplitudes")
{
    const ExcitationState two{{Complex(0.6, 0.0), Complex(0.0, -0.7)}, Complex(0.0, std::sqrt(1 - 0.36 - 0.49))};
    const auto r2 = MakeReport(two);
    CHECK(r2.populations[0] == doctest::Approx(0.36).epsilon(1e-15));
    CHECK(r2.populations[1] == doctest::Approx(0.49).epsilon(1e-15));
    CHECK(r2.populations[0] + r2.populations[1] + r2.photon_prob == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(r2.entropy.has_value());
    CHECK(*r2.entropy == VonNeumannEntropy(r2.populations[0]));
    CHECK(r2.bell_fidelity.has_value());
    CHECK_FALSE(r2.w_fidelity.has_value());

    const ExcitationState three{{kT, kT, kT}, 0.0};
    const auto r3 = MakeReport(three);
    CHECK_FALSE(r3.entropy.has_value());
    CHECK_FALSE(r3.bell_fidelity.has_value());
    CHECK(*r3.w_fidelity == doctest::Approx(1.0).epsilon(1e-15));

    const auto r1 = MakeReport(ExcitationState{{1.0}, 0.0});
    CHECK_FALSE(r1.entropy.has_value());
    CHECK(r1.populations == std::vector<double>{1.0});
}
