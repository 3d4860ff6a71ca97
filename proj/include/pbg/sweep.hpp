#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pbg/analysis.hpp"
#include "pbg/run_config.hpp"

namespace pbg
{
    // Evenly spaced velocity axis, lo < hi and count >= 2, or the single point
    // lo == hi with count == 1.
    struct VelocityRange
    {
        double lo = 0.0;
        double hi = 0.0;
        std::size_t count = 2;

        void Validate() const;
        std::vector<double> Points() const;
    };

    // Closed search interval; lo == hi evaluates that single point.
    struct Bracket
    {
        double lo = 0.0;
        double hi = 0.0;
    };

    struct SweepSpec
    {
        RunConfig base;
        VelocityRange vb;
        std::optional<VelocityRange> vc;
    };

    struct SweepPoint
    {
        double vb = 0.0;
        std::optional<double> vc;
        ExcitationState state;
        FinalStateReport report;
    };

    struct SweepResult
    {
        std::vector<double> vb_axis;
        std::vector<double> vc_axis; // empty for 1-D sweeps
        std::vector<SweepPoint> points; // row-major: index = ib * max(1, |vc_axis|) + ic
        std::string config_hash;
        std::string timestamp; // UTC, ISO 8601

        const SweepPoint& At(std::size_t ib, std::size_t ic = 0) const;
    };

    struct SearchOptions
    {
        std::size_t grid_points = 61;
        double resolution = 0.01; // m/s
        unsigned threads = 0;     // 0 = hardware concurrency
    };

    struct SearchResult
    {
        double vb = 0.0;
        std::optional<double> vc;
        ExcitationState state;
        FinalStateReport report;
        double objective = 0.0;
        bool target_met = false;
        std::size_t evaluations = 0;
        // Best coarse-grid objective, for the never-worse-than-grid contract.
        double best_grid_objective = 0.0;
    };

    // Copy of `base` with the speed of the atom on hole B (and C) replaced.
    RunConfig WithSpeeds(const RunConfig& base, double vb, std::optional<double> vc = std::nullopt);

    // Final state only (the output grid is reduced to the end points).
    ExcitationState SimulateFinal(const RunConfig& config);

    // Runs fn(0..count-1) on up to `threads` workers. The first exception (by
    // index) is rethrown after all workers finish.
    void ParallelFor(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

    // One integration per grid point; output order is the grid order
    // regardless of how the work was scheduled.
    SweepResult RunSweep(const SweepSpec& spec, unsigned threads = 0);

    // |gamma|^2 + (|a|^2 - 1/2)^2 + (|b|^2 - 1/2)^2
    double BellObjective(const ExcitationState& state);
    // |gamma|^2 + sum_x (|x|^2 - 1/3)^2
    double WObjective(const ExcitationState& state);

    inline constexpr double kBellPopulationTol = 0.02;
    inline constexpr double kBellPhotonMax = 0.01;
    inline constexpr double kWPopulationTol = 0.03;
    inline constexpr double kWPhotonMax = 0.03;

    bool BellTargetMet(const FinalStateReport& report);
    bool WTargetMet(const FinalStateReport& report);

    // Coarse scan of v_B followed by golden-section refinement around the
    // best grid point. Throws ConfigError for a non two-atom config or an
    // invalid bracket.
    SearchResult SearchBellVelocity(const RunConfig& base, Bracket vb, const SearchOptions& opts = {});

    // 2-D coarse scan over (v_B, v_C) followed by a compass search that halves
    // its step down to the resolution.
    SearchResult SearchWVelocities(const RunConfig& base, Bracket vb, Bracket vc,
                                   const SearchOptions& opts = {});

    // Largest change of any atomic population when (v_B, v_C) is moved by
    // +-dv along each axis and diagonal.
    double MaxPopulationShift(const RunConfig& base, double vb, double vc, double dv);

    // FNV-1a of the canonical JSON dump, as 16 hex digits.
    std::string ConfigHash(const std::string& canonical);

    std::string UtcTimestamp();

} // namespace pbg
