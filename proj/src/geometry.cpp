#include "pbg/geometry.hpp"
#include "pbg/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace pbg
{
    void PhysicalConstants::Validate() const
    {
        if (!(hbar > 0 && epsilon0 > 0 && c > 0 && e_charge > 0))
            throw ConfigError("physical constants must be strictly positive");
    }

    void CrystalSpec::Validate() const
    {
        if (!(side > 0))
            throw ConfigError("crystal side must be positive");
        if (!(lattice > 0))
            throw ConfigError("crystal lattice constant must be positive");
        if (!(hole_angle > 0 && hole_angle < kPi / 2))
            throw ConfigError("hole angle must lie in (0, 90) degrees");
    }

    void AtomSpec::Validate() const
    {
        if (!(trajectory.Speed() > 0))
            throw ConfigError("atom " + label + ": speed must be positive");
        if (std::abs(dipole_dir.norm() - 1.0) > 1e-12)
            throw ConfigError("atom " + label + ": dipole direction must be a unit vector");
        if (!(dipole_mag >= 0))
            throw ConfigError("atom " + label + ": dipole magnitude must be non-negative");
        if (!(omega > 0))
            throw ConfigError("atom " + label + ": transition frequency must be positive");
    }

    Vec3 PositionAt(const Trajectory& traj, double t)
    {
        return traj.r0 + traj.v * t;
    }

    std::array<Trajectory, 3> StandardTrajectories(
        const CrystalSpec& crystal, double v_a, double v_b, double v_c,
        double x_offset_a)
    {
        if (!(v_a > 0 && v_b > 0 && v_c > 0))
            throw std::invalid_argument("atom speeds must be positive");

        const double L = crystal.side;
        const double s = std::sin(crystal.hole_angle);
        const double c = std::cos(crystal.hole_angle);
        const double t = std::tan(crystal.hole_angle);
        const double r3 = std::sqrt(3.0);

        Trajectory a;
        a.r0 = L / 4 * Vec3(t, -r3 * t, -2.0);
        a.r0.x() += x_offset_a;
        a.v = v_a / 2 * Vec3(-s, r3 * s, 2 * c);

        Trajectory b;
        b.r0 = L / 4 * Vec3(t, r3 * t, -2.0);
        b.v = v_b / 2 * Vec3(-s, -r3 * s, 2 * c);

        Trajectory cc;
        cc.r0 = L / 2 * Vec3(-t, 0.0, -1.0);
        cc.v = v_c * Vec3(s, 0.0, c);

        return {a, b, cc};
    }

    double ExitTime(const Trajectory& traj, const CrystalSpec& crystal)
    {
        if (!(traj.v.z() > 0))
            throw std::invalid_argument("atom never exits through the top face (v_z <= 0)");
        return (crystal.side / 2 - traj.r0.z()) / traj.v.z();
    }

    double MidTransitTime(const CrystalSpec& crystal, double speed)
    {
        return crystal.side / (2 * speed * std::cos(crystal.hole_angle));
    }

    double ClosestApproachTime(const Trajectory& traj, const Vec3& point)
    {
        const double v2 = traj.v.squaredNorm();
        if (v2 == 0)
            return 0.0;
        return (point - traj.r0).dot(traj.v) / v2;
    }

} // namespace pbg
