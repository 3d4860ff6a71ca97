#pragma once

#include "pbg/geometry.hpp"
#include "pbg/types.hpp"

namespace pbg
{
    // Localised defect mode with profile
    //   f(r) = exp(-|r - center| / radius) * sin(k . r + phase)
    // and atom coupling G = g0 * (polarization . dipole_dir) * f(r).
    struct DefectModeSpec
    {
        Vec3 center = Vec3::Zero();          // m
        double radius = 10e-3;               // m
        double phase = 0.0;                  // rad
        Vec3 k_vec = Vec3::Zero();           // rad/m
        Vec3 polarization = Vec3::UnitX();   // unit vector
        double omega0 = 0.0;                 // rad/s
        double g0 = 0.0;                     // rad/s

        void Validate() const;
    };

    // Reference cavity data used to scale g0 to the defect-mode volume.
    struct MicrocavityCalibration
    {
        double v_cav = 0.0; // m^3
        double rabi = 0.0;  // rad/s (angular)
        double r_def = 0.0; // m

        void Validate() const;
    };

    double ModeAmplitude(const Vec3& r, const DefectModeSpec& mode);

    double Coupling(const AtomSpec& atom, const DefectModeSpec& mode, const Vec3& r);

    // G_j(t) along the atom's trajectory.
    double CouplingPulse(const AtomSpec& atom, const DefectModeSpec& mode, double t);

    // (4/3) pi (2 r_def)^3
    double EffectiveModeVolume(double r_def);

    double G0FromMicrocavity(const MicrocavityCalibration& cal);

    // Integral of G_j over [t0, t1] by adaptive Gauss-Kronrod quadrature.
    // The interval is cut at the closest approach to the mode centre and into
    // pieces no longer than the envelope/oscillation time scale.
    double PulseArea(const AtomSpec& atom, const DefectModeSpec& mode,
                     double t0, double t1, double abs_tol = 1e-9);

} // namespace pbg
