#include "pbg/defect_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quadrature.hpp"

namespace pbg
{
    void DefectModeSpec::Validate() const
    {
        if (!(radius > 0))
            throw ConfigError("defect mode radius must be positive");
        if (std::abs(polarization.norm() - 1.0) > 1e-12)
            throw ConfigError("defect mode polarization must be a unit vector");
        if (!(g0 >= 0))
            throw ConfigError("defect mode g0 must be non-negative");
        if (!(omega0 > 0))
            throw ConfigError("defect mode frequency must be positive");
    }

    void MicrocavityCalibration::Validate() const
    {
        if (!(v_cav > 0 && rabi > 0 && r_def > 0))
            throw ConfigError("microcavity calibration values must be strictly positive");
    }

    double ModeAmplitude(const Vec3& r, const DefectModeSpec& mode)
    {
        return std::exp(-(r - mode.center).norm() / mode.radius) *
               std::sin(mode.k_vec.dot(r) + mode.phase);
    }

    double Coupling(const AtomSpec& atom, const DefectModeSpec& mode, const Vec3& r)
    {
        return mode.g0 * mode.polarization.dot(atom.dipole_dir) * ModeAmplitude(r, mode);
    }

    double CouplingPulse(const AtomSpec& atom, const DefectModeSpec& mode, double t)
    {
        return Coupling(atom, mode, PositionAt(atom.trajectory, t));
    }

    double EffectiveModeVolume(double r_def)
    {
        const double d = 2 * r_def;
        return 4.0 / 3.0 * kPi * d * d * d;
    }

    double G0FromMicrocavity(const MicrocavityCalibration& cal)
    {
        cal.Validate();
        return std::sqrt(cal.v_cav / EffectiveModeVolume(cal.r_def)) * cal.rabi;
    }

    double PulseArea(const AtomSpec& atom, const DefectModeSpec& mode,
                     double t0, double t1, double abs_tol)
    {
        if (t1 < t0)
            throw std::invalid_argument("pulse area requires t1 >= t0");
        if (t1 == t0 || mode.g0 == 0 || mode.polarization.dot(atom.dipole_dir) == 0)
            return 0.0;

        const double speed = atom.trajectory.Speed();
        double length = mode.radius;
        if (mode.k_vec.norm() > 0)
            length = std::min(length, kPi / mode.k_vec.norm());
        const double width = speed > 0 ? length / speed : std::numeric_limits<double>::infinity();

        const auto cuts = detail::MakeCuts(
            t0, t1, {ClosestApproachTime(atom.trajectory, mode.center)}, width);
        return detail::IntegratePiecewise(
            [&](double t) { return CouplingPulse(atom, mode, t); }, cuts, abs_tol);
    }

} // namespace pbg
