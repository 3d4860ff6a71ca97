#include <doctest.h>

#include <cmath>
#include <vector>

#include "pbg/rddi.hpp"

using namespace pbg;

namespace
{
    const PhysicalConstants kConsts{};
    const double kOmega = 2 * kPi * 21.50651e9;
    const double kMu = 6.72e-7 * kConsts.e_charge;

    // Direct tensor evaluation in long double, written out index by index.
    long double OracleJ(const Vec3& da, const Vec3& db, double mu, const Vec3& r_vec, double omega)
    {
        const long double pi = 3.141592653589793238462643383279502884L;
        const long double R = std::sqrt((long double)r_vec.x() * r_vec.x() + (long double)r_vec.y() * r_vec.y() +
                                        (long double)r_vec.z() * r_vec.z());
        const long double n[3] = {r_vec.x() / R, r_vec.y() / R, r_vec.z() / R};
        const long double k = (long double)omega / kConsts.c;
        const long double kr = k * R;
        long double sum = 0.0L;
        for (int i = 0; i < 3; i++)
            for (int j = 0; j < 3; j++)
            {
                const long double delta = i == j ? 1.0L : 0.0L;
                const long double term = (delta - 3 * n[i] * n[j]) * (std::cos(kr) + kr * std::sin(kr)) -
                                         (delta - n[i] * n[j]) * kr * kr * std::cos(kr);
                sum += (long double)mu * da[i] * (long double)mu * db[j] * term;
            }
        return sum / (4 * pi * (long double)kConsts.epsilon0 * R * R * R) / kConsts.hbar;
    }

    AtomSpec MovingAtom(const std::string& label, const Vec3& r0, const Vec3& v)
    {
        AtomSpec atom;
        atom.label = label;
        atom.trajectory = {r0, v};
        atom.dipole_dir = Vec3::UnitX();
        atom.dipole_mag = kMu;
        atom.omega = kOmega;
        return atom;
    }
} // namespace

TEST_CASE("orthogonal dipoles across a perpendicular separation do not couple")
{
    const auto sep = SeparationGeometry::Between(Vec3::Zero(), Vec3(0.0, 0.0, 1e-4));
    CHECK(JCoupling(Vec3::UnitX(), Vec3::UnitY(), kMu, sep, kOmega, kConsts) == 0.0);
}

TEST_CASE("coupling at the closest approach of the RDDI scenario")
{
    const auto sep = SeparationGeometry::Between(Vec3::Zero(), Vec3(0.0, 0.0, 0.05e-3));
    const double j = JCoupling(Vec3::UnitX(), Vec3::UnitX(), kMu, sep, kOmega, kConsts);
    CHECK(j == doctest::Approx(7.9e6).epsilon(0.01));
    const long double oracle = OracleJ(Vec3::UnitX(), Vec3::UnitX(), kMu, sep.r_vec, kOmega);
    CHECK(std::abs(j - (double)oracle) <= 1e-12 * std::abs((double)oracle));
}

TEST_CASE("agrees with the tensor oracle for arbitrary orientations")
{
    const Vec3 da = Vec3(0.3, -0.5, 0.8).normalized();
    const Vec3 db = Vec3(-0.9, 0.1, 0.4).normalized();
    for (double r : {1e-5, 3e-4, 2e-3, 0.05, 1.7})
    {
        const Vec3 r_vec = r * Vec3(0.2, 0.7, -0.4).normalized();
        const auto sep = SeparationGeometry::Between(Vec3(0.01, 0.0, 0.0), Vec3(0.01, 0.0, 0.0) + r_vec);
        const double j = JCoupling(da, db, kMu, sep, kOmega, kConsts);
        const double oracle = (double)OracleJ(da, db, kMu, r_vec, kOmega);
        CHECK(std::abs(j - oracle) <= 1e-11 * std::abs(oracle));
    }
}

TEST_CASE("symmetry under exchanging the dipoles and reversing the separation")
{
    const Vec3 da = Vec3(0.3, -0.5, 0.8).normalized();
    const Vec3 db = Vec3(-0.9, 0.1, 0.4).normalized();
    const Vec3 p(1e-3, 2e-3, -1e-3), q(1.2e-3, 1.7e-3, -0.4e-3);
    const double forward = JCoupling(da, db, kMu, SeparationGeometry::Between(p, q), kOmega, kConsts);
    const double backward = JCoupling(db, da, kMu, SeparationGeometry::Between(q, p), kOmega, kConsts);
    CHECK(forward == doctest::Approx(backward).epsilon(1e-14));

    AtomSpec a = MovingAtom("A", p, Vec3(0.0, 100.0, 300.0));
    AtomSpec b = MovingAtom("B", q, Vec3(50.0, 0.0, 250.0));
    RddiOptions options;
    for (double t : {0.0, 1e-6, 5e-6})
        CHECK(JCouplingAtTime(a, b, t, options) == doctest::Approx(JCouplingAtTime(b, a, t, options)).epsilon(1e-14));
}

TEST_CASE("quadratic in the dipole magnitude")
{
    const auto sep = SeparationGeometry::Between(Vec3::Zero(), Vec3(1e-4, 2e-4, 3e-4));
    const Vec3 d = Vec3(1.0, 1.0, 0.0).normalized();
    const double j1 = JCoupling(d, d, kMu, sep, kOmega, kConsts);
    const double j2 = JCoupling(d, d, 2 * kMu, sep, kOmega, kConsts);
    CHECK(j2 == doctest::Approx(4 * j1).epsilon(1e-15));
}

TEST_CASE("static dipole limit for kR <= 0.05")
{
    const double k = kOmega / kConsts.c;
    const Vec3 da = Vec3::UnitX();
    const Vec3 db = Vec3(1.0, 0.0, 1.0).normalized();
    const Vec3 dir = Vec3(0.2, 0.3, 1.0).normalized();
    for (double kr : {1e-4, 1e-3, 0.01, 0.03, 0.05})
    {
        const double R = kr / k;
        const auto sep = SeparationGeometry::Between(Vec3::Zero(), R * dir);
        const double tensor = da.dot(db) - 3 * da.dot(dir) * db.dot(dir);
        const double stat = kMu * kMu * tensor / (4 * kPi * kConsts.epsilon0 * R * R * R) / kConsts.hbar;
        const double j = JCoupling(da, db, kMu, sep, kOmega, kConsts);
        CHECK(std::abs(j - stat) <= 0.01 * std::abs(stat));
    }
}

TEST_CASE("far-field envelope decays as 1/R")
{
    const double k = kOmega / kConsts.c;
    const double wavelength = 2 * kPi / k;
    std::vector<double> log_r, log_env;
    for (double r0 = 1.0; r0 <= 10.0 + 1e-9; r0 *= std::sqrt(10.0) / 2)
    {
        double envelope = 0.0;
        for (int i = 0; i < 400; i++)
        {
            const double R = r0 + wavelength * i / 400.0;
            const auto sep = SeparationGeometry::Between(Vec3::Zero(), Vec3(0.0, 0.0, R));
            envelope = std::max(envelope, std::abs(JCoupling(Vec3::UnitX(), Vec3::UnitX(), kMu, sep, kOmega, kConsts)));
        }
        log_r.push_back(std::log(r0));
        log_env.push_back(std::log(envelope));
    }
    const double n = log_r.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_r.size(); i++)
    {
        sx += log_r[i];
        sy += log_env[i];
        sxx += log_r[i] * log_r[i];
        sxy += log_r[i] * log_env[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("coincident atoms are rejected")
{
    CHECK_THROWS_AS(SeparationGeometry::Between(Vec3(1.0, 2.0, 3.0), Vec3(1.0, 2.0, 3.0)), std::invalid_argument);
    AtomSpec a = MovingAtom("A", Vec3::Zero(), Vec3(0.0, 0.0, 1.0));
    AtomSpec b = MovingAtom("B", Vec3(0.0, 0.0, -1.0), Vec3(0.0, 0.0, 2.0));
    CHECK_THROWS_AS(JCouplingAtTime(a, b, 1.0, RddiOptions{}), std::invalid_argument);
}

TEST_CASE("time-dependent coupling along the standard trajectories")
{
    CrystalSpec crystal;
    const double v = 200.0, r_min = 0.05e-3;
    const auto trajs = StandardTrajectories(crystal, v, v, v, r_min);
    AtomSpec a = MovingAtom("A", trajs[0].r0, trajs[0].v);
    AtomSpec b = MovingAtom("B", trajs[1].r0, trajs[1].v);
    RddiOptions boxed;
    boxed.box = InteractionBox{};
    const double t_mid = MidTransitTime(crystal, v);

    SUBCASE("equals the static separation value at mid transit")
    {
        const auto sep = SeparationGeometry::Between(PositionAt(a.trajectory, t_mid), PositionAt(b.trajectory, t_mid));
        CHECK(sep.distance == doctest::Approx(r_min).epsilon(1e-9));
        CHECK(JCouplingAtTime(a, b, t_mid, boxed) == JCoupling(a.dipole_dir, b.dipole_dir, kMu, sep, kOmega, kConsts));
    }
    SUBCASE("vanishes outside the box")
    {
        for (double t : {0.0, t_mid - 0.013 / (v * std::cos(crystal.hole_angle)), 2 * t_mid})
        {
            CHECK_FALSE((boxed.box->Contains(PositionAt(a.trajectory, t)) &&
                         boxed.box->Contains(PositionAt(b.trajectory, t))));
            CHECK(JCouplingAtTime(a, b, t, boxed) == 0.0);
        }
        CHECK(JCouplingAtTime(a, b, 0.0, RddiOptions{}) != 0.0);
    }
    SUBCASE("box window matches membership")
    {
        const auto window = BoxWindow(a, b, *boxed.box, 0.0, 2 * t_mid);
        REQUIRE(window.has_value());
        CHECK(window->first < t_mid);
        CHECK(window->second > t_mid);
        CHECK(JCouplingAtTime(a, b, window->first - 1e-9, boxed) == 0.0);
        CHECK(JCouplingAtTime(a, b, window->first + 1e-9, boxed) != 0.0);
        CHECK(JCouplingAtTime(a, b, window->second - 1e-9, boxed) != 0.0);
        CHECK(JCouplingAtTime(a, b, window->second + 1e-9, boxed) == 0.0);
    }
    SUBCASE("continuous without the box")
    {
        RddiOptions open;
        const double dt = 1e-9;
        const double j_peak = std::abs(JCouplingAtTime(a, b, t_mid, open));
        // 1/R^3 near field: |dJ/dt| is of order 3 J_peak |dR/dt| / R_min.
        const double lipschitz = 10 * j_peak * (2 * v) / r_min;
        for (double t = 0.0; t < 2 * t_mid; t += 2 * t_mid / 500)
            CHECK(std::abs(JCouplingAtTime(a, b, t + dt, open) - JCouplingAtTime(a, b, t, open)) <= lipschitz * dt);
    }
}
