#include "pbg/export.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace pbg
{
    using nlohmann::json;

    namespace
    {
        std::ofstream OpenForWrite(const std::filesystem::path& path)
        {
            std::ofstream out(path);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            return out;
        }

        void Finish(std::ofstream& out, const std::filesystem::path& path)
        {
            out.flush();
            if (!out)
                throw std::runtime_error("failed writing " + path.string());
        }

        json ComplexJson(const Complex& z) { return json::array({z.real(), z.imag()}); }

        void PutOptional(json& j, const char* key, const std::optional<double>& v)
        {
            if (v)
                j[key] = *v;
        }
    } // namespace

    std::string FormatDouble(double value)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), value);
        return std::string(buf, res.ptr);
    }

    std::vector<std::string> TimeSeriesHeader(const std::vector<std::string>& labels)
    {
        std::vector<std::string> header{"t_s"};
        for (const auto& l : labels)
        {
            header.push_back("re_" + l);
            header.push_back("im_" + l);
            header.push_back("pop_" + l);
        }
        header.insert(header.end(), {"re_gamma", "im_gamma", "pop_photon"});
        if (labels.size() == 2)
            header.push_back("entropy_nats");
        else if (labels.size() == 3)
            header.push_back("w_fidelity");
        return header;
    }

    void WriteTimeSeriesCsv(const std::filesystem::path& path, const TimeSeries& series,
                            const std::vector<std::string>& labels)
    {
        auto out = OpenForWrite(path);
        const auto header = TimeSeriesHeader(labels);
        for (std::size_t i = 0; i < header.size(); i++)
            out << (i ? "," : "") << header[i];
        out << "\n";

        for (std::size_t r = 0; r < series.times.size(); r++)
        {
            const auto& s = series.states[r];
            if (s.atom_amps.size() != labels.size())
                throw std::invalid_argument("label count does not match the state");
            out << FormatDouble(series.times[r]);
            for (const auto& a : s.atom_amps)
                out << ',' << FormatDouble(a.real()) << ',' << FormatDouble(a.imag()) << ','
                    << FormatDouble(std::norm(a));
            out << ',' << FormatDouble(s.photon_amp.real()) << ',' << FormatDouble(s.photon_amp.imag())
                << ',' << FormatDouble(std::norm(s.photon_amp));
            if (labels.size() == 2)
            {
                // Row norms can exceed one by integrator round-off.
                const double p = std::min(1.0, std::norm(s.atom_amps[0]));
                out << ',' << FormatDouble(VonNeumannEntropy(p));
            }
            else if (labels.size() == 3)
                out << ',' << FormatDouble(WFidelity(s));
            out << "\n";
        }
        Finish(out, path);
    }

    json ToJson(const FinalStateReport& report, const std::vector<std::string>& labels)
    {
        json j;
        json pops = json::object();
        for (std::size_t i = 0; i < report.populations.size(); i++)
            pops[i < labels.size() ? labels[i] : std::to_string(i)] = report.populations[i];
        j["populations"] = pops;
        j["photon_prob"] = report.photon_prob;
        PutOptional(j, "entropy_nats", report.entropy);
        PutOptional(j, "bell_fidelity", report.bell_fidelity);
        PutOptional(j, "best_bell_fidelity", report.best_bell_fidelity);
        PutOptional(j, "w_fidelity", report.w_fidelity);
        PutOptional(j, "best_w_fidelity", report.best_w_fidelity);
        return j;
    }

    json ToJson(const ExcitationState& state, const std::vector<std::string>& labels)
    {
        json j;
        json amps = json::object();
        for (std::size_t i = 0; i < state.atom_amps.size(); i++)
            amps[i < labels.size() ? labels[i] : std::to_string(i)] = ComplexJson(state.atom_amps[i]);
        j["atom_amps"] = amps;
        j["photon_amp"] = ComplexJson(state.photon_amp);
        return j;
    }

    json ToJson(const SweepResult& result, const std::vector<std::string>& labels)
    {
        json j;
        j["vb_axis_mps"] = result.vb_axis;
        if (!result.vc_axis.empty())
            j["vc_axis_mps"] = result.vc_axis;
        j["config_hash"] = result.config_hash;
        j["timestamp"] = result.timestamp;
        j["points"] = json::array();
        for (const auto& p : result.points)
        {
            json jp = {{"v_b_mps", p.vb},
                       {"state", ToJson(p.state, labels)},
                       {"report", ToJson(p.report, labels)}};
            if (p.vc)
                jp["v_c_mps"] = *p.vc;
            j["points"].push_back(jp);
        }
        return j;
    }

    json ToJson(const SearchResult& result, const std::vector<std::string>& labels)
    {
        json j = {{"v_b_mps", result.vb},
                  {"objective", result.objective},
                  {"target_met", result.target_met},
                  {"evaluations", result.evaluations},
                  {"state", ToJson(result.state, labels)},
                  {"report", ToJson(result.report, labels)}};
        if (result.vc)
            j["v_c_mps"] = *result.vc;
        return j;
    }

    void WriteJson(const std::filesystem::path& path, const json& j)
    {
        auto out = OpenForWrite(path);
        out << j.dump(2) << "\n";
        Finish(out, path);
    }

    void WriteSweepCsv(const std::filesystem::path& path, const SweepResult& result,
                       const std::vector<std::string>& labels)
    {
        auto out = OpenForWrite(path);
        out << "v_b_mps";
        if (!result.vc_axis.empty())
            out << ",v_c_mps";
        for (const auto& l : labels)
            out << ",pop_" << l;
        out << ",pop_photon\n";
        for (const auto& p : result.points)
        {
            out << FormatDouble(p.vb);
            if (p.vc)
                out << ',' << FormatDouble(*p.vc);
            for (double pop : p.report.populations)
                out << ',' << FormatDouble(pop);
            out << ',' << FormatDouble(p.report.photon_prob) << "\n";
        }
        Finish(out, path);
    }

    std::vector<std::string> AtomLabels(const RunConfig& config)
    {
        std::vector<std::string> labels;
        for (const auto& a : config.atoms)
            labels.push_back(a.label);
        return labels;
    }

} // namespace pbg
