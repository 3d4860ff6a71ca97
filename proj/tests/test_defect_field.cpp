#include <doctest.h>

#include <cmath>

#include "pbg/defect_field.hpp"

using namespace pbg;

namespace
{
    constexpr double kLattice = 16.3e-3;

    DefectModeSpec AxisMode(double g0 = 1.0e5)
    {
        DefectModeSpec mode;
        mode.radius = 10e-3;
        mode.k_vec = Vec3(0.0, 0.0, kPi / kLattice);
        mode.polarization = Vec3::UnitX();
        mode.omega0 = 2 * kPi * 21.50651e9;
        mode.g0 = g0;
        return mode;
    }

    AtomSpec AtomA(double speed)
    {
        CrystalSpec crystal;
        AtomSpec atom;
        atom.label = "A";
        atom.trajectory = StandardTrajectories(crystal, speed, speed, speed)[0];
        atom.dipole_dir = Vec3::UnitX();
        atom.omega = 2 * kPi * 21.50651e9;
        atom.initially_excited = true;
        return atom;
    }

    MicrocavityCalibration ReferenceCalibration()
    {
        return MicrocavityCalibration{11.5e-6, 2 * kPi * 43e3, 10e-3};
    }
} // namespace

TEST_CASE("mode amplitude values")
{
    DefectModeSpec mode = AxisMode();
    CHECK(ModeAmplitude(Vec3::Zero(), mode) == 0.0);

    const double expected = std::exp(-0.5) * std::sin(kPi * 5.0 / 16.3);
    CHECK(ModeAmplitude(Vec3(0.0, 0.0, 5e-3), mode) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(ModeAmplitude(Vec3(0.0, 0.0, 5e-3), mode) - 0.498) < 1e-3);

    mode.center = Vec3(1e-3, -3e-3, 2e-3);
    mode.phase = kPi / 2 - mode.k_vec.dot(mode.center);
    CHECK(ModeAmplitude(mode.center, mode) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mode amplitude is bounded by its envelope and Lipschitz")
{
    DefectModeSpec mode = AxisMode();
    mode.center = Vec3(1e-3, -3e-3, 2e-3);
    mode.phase = 0.4;
    mode.k_vec = Vec3(40.0, -70.0, kPi / kLattice);
    const double lipschitz = 1.0 / mode.radius + mode.k_vec.norm();
    for (int i = 0; i < 400; i++)
    {
        const Vec3 r(0.03 * std::sin(0.37 * i), 0.02 * std::cos(1.3 * i), 0.05 * std::sin(0.11 * i + 1));
        CHECK(std::abs(ModeAmplitude(r, mode)) <= std::exp(-(r - mode.center).norm() / mode.radius) + 1e-15);
        const Vec3 delta = 1e-6 * Vec3(std::cos(i), std::sin(2.0 * i), std::cos(3.0 * i));
        CHECK(std::abs(ModeAmplitude(r + delta, mode) - ModeAmplitude(r, mode)) <= lipschitz * delta.norm() * 1.0001);
    }
}

TEST_CASE("coupling follows polarization, g0 and the profile")
{
    DefectModeSpec mode = AxisMode(2.0e5);
    AtomSpec atom = AtomA(500.0);
    const Vec3 r(1e-3, 2e-3, 4e-3);

    atom.dipole_dir = Vec3::UnitY();
    CHECK(Coupling(atom, mode, r) == 0.0);

    atom.dipole_dir = Vec3::UnitX();
    const double base = Coupling(atom, mode, r);
    CHECK(base == doctest::Approx(2.0e5 * ModeAmplitude(r, mode)).epsilon(1e-15));

    DefectModeSpec doubled = mode;
    doubled.g0 *= 2;
    CHECK(Coupling(atom, doubled, r) == doctest::Approx(2 * base).epsilon(1e-15));

    atom.dipole_dir = Vec3(std::cos(1.0), std::sin(1.0), 0.0);
    CHECK(Coupling(atom, mode, r) == doctest::Approx(std::cos(1.0) * base).epsilon(1e-14));

    DefectModeSpec peaked = mode;
    peaked.phase = kPi / 2;
    atom.dipole_dir = Vec3::UnitX();
    CHECK(Coupling(atom, peaked, Vec3::Zero()) == doctest::Approx(peaked.g0).epsilon(1e-15));
}

TEST_CASE("coupling pulse")
{
    DefectModeSpec mode = AxisMode(1.5e5);
    AtomSpec atom = AtomA(500.0);
    CrystalSpec crystal;
    const double t_mid = MidTransitTime(crystal, 500.0);

    SUBCASE("equals the coupling at the atom position")
    {
        for (double t : {0.0, 1e-4, 2.3e-4, 4.0e-4})
            CHECK(CouplingPulse(atom, mode, t) == Coupling(atom, mode, PositionAt(atom.trajectory, t)));
    }
    SUBCASE("is small far from the defect")
    {
        for (double t : {0.0, ExitTime(atom.trajectory, crystal)})
        {
            const double d = (PositionAt(atom.trajectory, t) - mode.center).norm();
            REQUIRE(d >= 10 * mode.radius);
            CHECK(std::abs(CouplingPulse(atom, mode, t)) <= mode.g0 * std::exp(-10.0));
        }
    }
    SUBCASE("is odd about mid transit for zero phase and a centred mode")
    {
        for (double s : {1e-6, 7e-6, 3e-5, 1e-4})
            CHECK(CouplingPulse(atom, mode, t_mid + s) ==
                  doctest::Approx(-CouplingPulse(atom, mode, t_mid - s)).epsilon(1e-9));
    }
    SUBCASE("a time-shifted trajectory gives a time-shifted pulse")
    {
        AtomSpec later = atom;
        const double shift = 3e-5;
        later.trajectory.r0 = atom.trajectory.r0 - atom.trajectory.v * shift;
        for (double t : {5e-5, 2e-4, 3e-4})
            CHECK(CouplingPulse(later, mode, t + shift) ==
                  doctest::Approx(CouplingPulse(atom, mode, t)).epsilon(1e-9));
    }
}

TEST_CASE("g0 from the microcavity calibration")
{
    const auto cal = ReferenceCalibration();
    CHECK(EffectiveModeVolume(10e-3) == doctest::Approx(33.51e-6).epsilon(1e-3));
    CHECK(G0FromMicrocavity(cal) == doctest::Approx(2 * kPi * 25.2e3).epsilon(0.01));

    MicrocavityCalibration matched = cal;
    matched.v_cav = EffectiveModeVolume(matched.r_def);
    CHECK(G0FromMicrocavity(matched) == doctest::Approx(matched.rabi).epsilon(1e-15));

    MicrocavityCalibration quad = cal;
    quad.v_cav *= 4;
    CHECK(G0FromMicrocavity(quad) == doctest::Approx(2 * G0FromMicrocavity(cal)).epsilon(1e-15));

    double previous = INFINITY;
    for (double r = 1e-3; r < 50e-3; r *= 1.3)
    {
        MicrocavityCalibration c = cal;
        c.r_def = r;
        CHECK(G0FromMicrocavity(c) < previous);
        previous = G0FromMicrocavity(c);
    }

    MicrocavityCalibration bad = cal;
    bad.v_cav = 0.0;
    CHECK_THROWS_AS(bad.Validate(), ConfigError);
}

TEST_CASE("pulse area")
{
    DefectModeSpec mode = AxisMode(G0FromMicrocavity(ReferenceCalibration()));
    AtomSpec atom = AtomA(500.0);
    CrystalSpec crystal;
    const double t_exit = ExitTime(atom.trajectory, crystal);

    SUBCASE("vanishes over the full symmetric transit")
    {
        CHECK(std::abs(PulseArea(atom, mode, 0.0, t_exit)) < 1e-6);
    }
    SUBCASE("vanishes for a perpendicular dipole")
    {
        atom.dipole_dir = Vec3::UnitY();
        CHECK(PulseArea(atom, mode, 0.0, t_exit) == 0.0);
    }
    SUBCASE("is additive")
    {
        for (double t1 : {1.3e-4, 2.2e-4, 2.449e-4, 3.1e-4})
        {
            const double whole = PulseArea(atom, mode, 0.0, t_exit);
            const double split = PulseArea(atom, mode, 0.0, t1) + PulseArea(atom, mode, t1, t_exit);
            CHECK(std::abs(whole - split) < 2e-9);
        }
    }
    SUBCASE("matches a midpoint-rule reference")
    {
        const double t1 = 2.3e-4;
        const int n = 200000;
        double sum = 0.0;
        for (int i = 0; i < n; i++)
            sum += CouplingPulse(atom, mode, (i + 0.5) * t1 / n);
        CHECK(PulseArea(atom, mode, 0.0, t1) == doctest::Approx(sum * t1 / n).epsilon(1e-7));
    }
}
