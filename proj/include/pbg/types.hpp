#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace pbg
{
    using Vec3 = Eigen::Vector3d;
    using Complex = std::complex<double>;

    inline constexpr double kPi = std::numbers::pi;

    // Malformed or inconsistent input (maps to CLI exit code 1).
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Integration or search failure (maps to CLI exit code 2).
    class NumericalError : public std::runtime_error
    {
    public:
        NumericalError(const std::string& what, double t)
            : std::runtime_error(what), m_time(t) {}

        double time() const noexcept { return m_time; }

    private:
        double m_time;
    };

    inline double DegToRad(double deg) { return deg * kPi / 180.0; }
    inline double RadToDeg(double rad) { return rad * 180.0 / kPi; }

} // namespace pbg
