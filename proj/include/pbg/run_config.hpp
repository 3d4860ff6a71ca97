#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbg/dynamics.hpp"

namespace pbg
{
    // Run description as read from / written to JSON. Units are part of every
    // field name; angles in the file are degrees only where the name says so.
    using Triple = std::array<double, 3>;

    inline constexpr int kSchemaVersion = 1;

    struct CrystalConfig
    {
        double side_m = 0.2;
        double lattice_m = 16.3e-3;
        double hole_angle_deg = kHoleAngleDeg;

        bool operator==(const CrystalConfig&) const = default;
    };

    struct AtomConfig
    {
        std::string label;
        std::string hole;   // "A", "B" or "C"; picks the standard trajectory
        double speed_mps = 500.0;
        bool initially_excited = false;
        Triple dipole_dir{1.0, 0.0, 0.0};
        std::optional<double> x_offset_m;

        bool operator==(const AtomConfig&) const = default;
    };

    // Exactly one of rabi_hz (linear, converted with 2 pi) and rabi_rad_per_s.
    struct CalibrationConfig
    {
        double v_cav_m3 = 0.0;
        std::optional<double> rabi_hz;
        std::optional<double> rabi_rad_per_s;
        std::optional<double> r_def_m; // defaults to the mode radius

        bool operator==(const CalibrationConfig&) const = default;
    };

    // Exactly one of g0_rad_per_s and calibration.
    struct ModeConfig
    {
        Triple center_m{0.0, 0.0, 0.0};
        double radius_m = 10e-3;
        double phase_rad = 0.0;
        std::optional<Triple> k_vec_rad_per_m; // defaults to (0, 0, pi / lattice)
        Triple polarization{1.0, 0.0, 0.0};
        std::optional<double> g0_rad_per_s;
        std::optional<CalibrationConfig> calibration;

        bool operator==(const ModeConfig&) const = default;
    };

    struct RddiConfig
    {
        bool enabled = false;
        std::optional<double> interaction_box_m; // cube side; absent = everywhere
        double dipole_mag_over_e_m = 0.0;

        bool operator==(const RddiConfig&) const = default;
    };

    struct IntegratorConfig
    {
        double rel_tol = 1e-9;
        double abs_tol = 1e-12;

        bool operator==(const IntegratorConfig&) const = default;
    };

    struct OutputConfig
    {
        std::size_t grid_points = 1001;
        std::vector<std::string> formats{"csv", "json"};

        bool operator==(const OutputConfig&) const = default;
    };

    struct RunConfig
    {
        int schema_version = kSchemaVersion;
        std::string name = "run";
        CrystalConfig crystal;
        double transition_frequency_hz = 21.50651e9;
        double detuning_rad_per_s = 0.0;
        std::vector<AtomConfig> atoms;
        std::optional<ModeConfig> mode;
        RddiConfig rddi;
        IntegratorConfig integrator;
        OutputConfig output;

        bool operator==(const RunConfig&) const = default;
    };

    // Offset applied to atom A when two atoms fly at nearly equal speed and no
    // offset was configured, so that they do not collide at the centre.
    inline constexpr double kCollisionGuardOffset = 0.3e-3;
    inline constexpr double kCollisionGuardSpeedGap = 1.0;

    // Strict parsing: unknown keys, wrong types and missing required fields
    // raise ConfigError.
    RunConfig ParseRunConfig(const nlohmann::json& j);
    nlohmann::json ToJson(const RunConfig& config);

    RunConfig LoadRunConfig(const std::filesystem::path& path);
    void SaveRunConfig(const RunConfig& config, const std::filesystem::path& path);

    // Semantic checks beyond the schema (atom count, interactions, ...).
    void ValidateRunConfig(const RunConfig& config);

    CrystalSpec MakeCrystal(const RunConfig& config);

    // Resolved defect mode (g0 from calibration if needed); nullopt if absent.
    std::optional<DefectModeSpec> MakeMode(const RunConfig& config);

    // Assembles atoms on the standard trajectories, resolves g0 and sets the
    // time span to [0, latest exit time] with a uniform output grid.
    SimulationProblem BuildProblem(const RunConfig& config);

    // Index of the atom flying through `hole`, if any.
    std::optional<std::size_t> AtomOnHole(const RunConfig& config, const std::string& hole);

} // namespace pbg
