#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbg/analysis.hpp"
#include "pbg/dynamics.hpp"
#include "pbg/run_config.hpp"
#include "pbg/sweep.hpp"

namespace pbg
{
    // Shortest decimal string that parses back to the same double.
    std::string FormatDouble(double value);

    // t_s, then re_<label>, im_<label>, pop_<label> per atom, then re_gamma,
    // im_gamma, pop_photon and entropy_nats (two atoms) or w_fidelity (three).
    std::vector<std::string> TimeSeriesHeader(const std::vector<std::string>& labels);

    void WriteTimeSeriesCsv(const std::filesystem::path& path, const TimeSeries& series,
                            const std::vector<std::string>& labels);

    nlohmann::json ToJson(const FinalStateReport& report, const std::vector<std::string>& labels);
    nlohmann::json ToJson(const ExcitationState& state, const std::vector<std::string>& labels);
    nlohmann::json ToJson(const SweepResult& result, const std::vector<std::string>& labels);
    nlohmann::json ToJson(const SearchResult& result, const std::vector<std::string>& labels);

    void WriteJson(const std::filesystem::path& path, const nlohmann::json& j);

    // One row per grid point: v_b_mps[, v_c_mps], pop_<label>..., pop_photon.
    void WriteSweepCsv(const std::filesystem::path& path, const SweepResult& result,
                       const std::vector<std::string>& labels);

    std::vector<std::string> AtomLabels(const RunConfig& config);

} // namespace pbg
