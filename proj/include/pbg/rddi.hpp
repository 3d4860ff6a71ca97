#pragma once

#include <optional>

#include "pbg/constants.hpp"
#include "pbg/geometry.hpp"
#include "pbg/types.hpp"

namespace pbg
{
    struct SeparationGeometry
    {
        Vec3 r_vec;      // m, from atom A to atom B
        double distance; // m
        Vec3 unit;

        // Throws std::invalid_argument for coincident points.
        static SeparationGeometry Between(const Vec3& from, const Vec3& to);
    };

    // Axis-aligned cube; RDDI is only switched on while both atoms are inside.
    struct InteractionBox
    {
        double side = 0.02;          // m
        Vec3 center = Vec3::Zero();  // m

        bool Contains(const Vec3& r) const;
    };

    struct RddiOptions
    {
        std::optional<InteractionBox> box;
        PhysicalConstants consts;
    };

    // Free-space resonant dipole-dipole matrix element J_AB / hbar in rad/s.
    //
    //   hbar J = mu_i mu_j / (4 pi eps0 R^3) *
    //            [ (d_ij - 3 R_i R_j)(cos kR + kR sin kR) - (d_ij - R_i R_j) k^2 R^2 cos kR ]
    //
    // with k = omega / c. Throws std::invalid_argument when sep.distance == 0.
    double JCoupling(const Vec3& dipole_a_dir, const Vec3& dipole_b_dir,
                     double dipole_mag, const SeparationGeometry& sep,
                     double omega, const PhysicalConstants& consts);

    // Quasi-static J_AB(t) on the instantaneous positions. Returns 0 while
    // either atom is outside the interaction box (if one is configured).
    // Atoms with different dipole magnitudes use sqrt(mu_A mu_B).
    double JCouplingAtTime(const AtomSpec& atom_a, const AtomSpec& atom_b,
                           double t, const RddiOptions& options);

    // Time window [enter, exit] during which both atoms are inside the box,
    // clipped to [t0, t1]; std::nullopt if they never are simultaneously.
    std::optional<std::pair<double, double>> BoxWindow(
        const AtomSpec& atom_a, const AtomSpec& atom_b,
        const InteractionBox& box, double t0, double t1);

    // Integral of J_AB(t) over [t0, t1] by adaptive quadrature.
    double RddiPulseArea(const AtomSpec& atom_a, const AtomSpec& atom_b,
                         double t0, double t1, const RddiOptions& options,
                         double abs_tol = 1e-10);

} // namespace pbg
