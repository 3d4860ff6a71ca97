#pragma once

#include <array>
#include <string>

#include "pbg/types.hpp"

namespace pbg
{
    // atan(1 / sqrt 2), i.e. 35.26 degrees: the hole tilt that makes three
    // drilled hole sets cross at the cube centre with fcc symmetry.
    inline constexpr double kHoleAngleDeg = 35.264389682754654;

    // Cubic crystal of side `side` centred at the origin, drilled with
    // cylindrical holes tilted by `hole_angle` from the z axis. Atoms enter
    // through the bottom face z = -side/2 and leave through z = +side/2.
    struct CrystalSpec
    {
        double side = 0.2;                     // m
        double lattice = 16.3e-3;              // m, elementary cell side
        double hole_angle = DegToRad(kHoleAngleDeg); // rad

        // Defect-mode oscillation wavenumber pi / lattice.
        double KMag() const { return kPi / lattice; }

        void Validate() const;
    };

    struct Trajectory
    {
        Vec3 r0 = Vec3::Zero(); // m, position at t = 0
        Vec3 v = Vec3::Zero();  // m/s, constant

        double Speed() const { return v.norm(); }
    };

    struct AtomSpec
    {
        std::string label;
        Trajectory trajectory;
        Vec3 dipole_dir = Vec3::UnitX(); // unit vector
        double dipole_mag = 0.0;         // C m
        double omega = 0.0;              // rad/s
        bool initially_excited = false;

        void Validate() const;
    };

    Vec3 PositionAt(const Trajectory& traj, double t);

    // The three hole-axis trajectories A, B, C. All atoms start on the bottom
    // face at t = 0; `x_offset_a` shifts atom A sideways off its axis.
    std::array<Trajectory, 3> StandardTrajectories(
        const CrystalSpec& crystal, double v_a, double v_b, double v_c,
        double x_offset_a = 0.0);

    // Time at which the atom reaches the top face z = +side/2.
    double ExitTime(const Trajectory& traj, const CrystalSpec& crystal);

    // Time at which an atom on a standard trajectory with speed `speed`
    // crosses the crystal centre plane.
    double MidTransitTime(const CrystalSpec& crystal, double speed);

    // Time of minimum distance between the straight line and `point`.
    double ClosestApproachTime(const Trajectory& traj, const Vec3& point);

} // namespace pbg
