#include "pbg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pbg/export.hpp"
#include "pbg/figures.hpp"
#include "pbg/run_config.hpp"
#include "pbg/sweep.hpp"

namespace pbg
{
    namespace fs = std::filesystem;

    namespace
    {
        std::vector<double> SplitNumbers(const std::string& text, const std::string& flag)
        {
            std::vector<double> values;
            std::stringstream ss(text);
            std::string part;
            while (std::getline(ss, part, ':'))
            {
                try
                {
                    std::size_t used = 0;
                    values.push_back(std::stod(part, &used));
                    if (used != part.size())
                        throw std::invalid_argument(part);
                }
                catch (const std::exception&)
                {
                    throw ConfigError(flag + ": cannot parse '" + part + "' as a number");
                }
            }
            return values;
        }

        VelocityRange ParseRange(const std::string& text, const std::string& flag)
        {
            const auto v = SplitNumbers(text, flag);
            if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2]))
                throw ConfigError(flag + " expects LO:HI:N with integer N >= 1");
            VelocityRange r{v[0], v[1], static_cast<std::size_t>(v[2])};
            r.Validate();
            return r;
        }

        Bracket ParseBracket(const std::string& text, const std::string& flag)
        {
            const auto v = SplitNumbers(text, flag);
            if (v.size() != 2)
                throw ConfigError(flag + " expects LO:HI");
            return Bracket{v[0], v[1]};
        }

        bool Wants(const RunConfig& cfg, const std::string& format)
        {
            return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), format) !=
                   cfg.output.formats.end();
        }

        void PrintReport(std::ostream& out, const FinalStateReport& r, const std::vector<std::string>& labels)
        {
            out << std::setprecision(6);
            for (std::size_t i = 0; i < r.populations.size(); i++)
                out << "  pop_" << labels[i] << " = " << r.populations[i] << "\n";
            out << "  pop_photon = " << r.photon_prob << "\n";
            if (r.entropy)
                out << "  entropy_nats = " << *r.entropy << "\n";
            if (r.bell_fidelity)
                out << "  bell_fidelity = " << *r.bell_fidelity << " (best over phase " << *r.best_bell_fidelity << ")\n";
            if (r.w_fidelity)
                out << "  w_fidelity = " << *r.w_fidelity << " (best over phase " << *r.best_w_fidelity << ")\n";
        }

        // Integrates one configuration and writes <name>.csv, <name>.report.json
        // and the <name>.config.json sidecar into `dir`.
        FinalStateReport SimulateAndWrite(const RunConfig& cfg, const fs::path& dir, std::ostream& out)
        {
            const SimulationProblem problem = BuildProblem(cfg);
            const TimeSeries series = Integrate(problem);
            const ExcitationState final_state = FinalState(series);
            const FinalStateReport report = MakeReport(final_state);
            const auto labels = AtomLabels(cfg);

            fs::create_directories(dir);
            if (Wants(cfg, "csv"))
                WriteTimeSeriesCsv(dir / (cfg.name + ".csv"), series, labels);
            if (Wants(cfg, "json"))
            {
                nlohmann::json j = {{"name", cfg.name},
                                    {"final_state", ToJson(final_state, labels)},
                                    {"report", ToJson(report, labels)},
                                    {"t_end_s", problem.t_end},
                                    {"max_norm_drift", series.max_norm_drift},
                                    {"accepted_steps", series.accepted_steps},
                                    {"rejected_steps", series.rejected_steps}};
                WriteJson(dir / (cfg.name + ".report.json"), j);
            }
            SaveRunConfig(cfg, dir / (cfg.name + ".config.json"));

            out << cfg.name << ": t_end = " << problem.t_end << " s\n";
            PrintReport(out, report, labels);
            return report;
        }

        void WriteSweep(const SweepResult& result, const RunConfig& base, const fs::path& dir, std::ostream& out)
        {
            const auto labels = AtomLabels(base);
            fs::create_directories(dir);
            WriteJson(dir / (base.name + ".sweep.json"), ToJson(result, labels));
            WriteSweepCsv(dir / (base.name + ".sweep.csv"), result, labels);
            SaveRunConfig(base, dir / (base.name + ".config.json"));
            out << base.name << ": " << result.points.size() << " grid points, hash " << result.config_hash << "\n";
        }

        int Dispatch(CLI::App& app, const std::vector<std::string>& args, std::ostream& out)
        {
            std::string config_path;
            std::string out_dir = ".";
            std::string vb_text;
            std::string vc_text;
            std::string target;
            std::string figure_id;
            unsigned threads = 0;
            bool list = false;

            auto* simulate = app.add_subcommand("simulate", "integrate one configuration");
            simulate->add_option("config", config_path, "JSON run configuration")->required();
            simulate->add_option("--out", out_dir, "output directory");

            auto* sweep = app.add_subcommand("sweep", "grid of final states over v_B [and v_C]");
            sweep->add_option("config", config_path, "JSON run configuration")->required();
            sweep->add_option("--vb", vb_text, "LO:HI:N velocity axis of atom B")->required();
            sweep->add_option("--vc", vc_text, "LO:HI:N velocity axis of atom C");
            sweep->add_option("--out", out_dir, "output directory");
            sweep->add_option("--threads", threads, "worker threads (0 = all cores)");

            auto* search = app.add_subcommand("search", "find Bell (two atoms) or W (three atoms) velocities");
            search->add_option("config", config_path, "JSON run configuration")->required();
            search->add_option("--target", target, "bell or w")->required()->check(CLI::IsMember({"bell", "w"}));
            search->add_option("--vb", vb_text, "LO:HI bracket for v_B (default 500:560)");
            search->add_option("--vc", vc_text, "LO:HI bracket for v_C (default 500:560)");
            search->add_option("--out", out_dir, "output directory");
            search->add_option("--threads", threads, "worker threads (0 = all cores)");

            auto* figure = app.add_subcommand("figure", "run a built-in figure recipe");
            figure->add_option("id", figure_id, "figure id (see --list)");
            figure->add_flag("--list", list, "list the built-in figures");
            figure->add_option("--out", out_dir, "output directory");
            figure->add_option("--threads", threads, "worker threads (0 = all cores)");

            app.require_subcommand(1);

            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);

            if (simulate->parsed())
            {
                SimulateAndWrite(LoadRunConfig(config_path), out_dir, out);
                return kExitOk;
            }
            if (sweep->parsed())
            {
                SweepSpec spec;
                spec.base = LoadRunConfig(config_path);
                spec.vb = ParseRange(vb_text, "--vb");
                if (!vc_text.empty())
                    spec.vc = ParseRange(vc_text, "--vc");
                WriteSweep(RunSweep(spec, threads), spec.base, out_dir, out);
                return kExitOk;
            }
            if (search->parsed())
            {
                const RunConfig base = LoadRunConfig(config_path);
                const Bracket vb = vb_text.empty() ? Bracket{500.0, 560.0} : ParseBracket(vb_text, "--vb");
                SearchOptions opts;
                opts.threads = threads;
                SearchResult result;
                if (target == "bell")
                    result = SearchBellVelocity(base, vb, opts);
                else
                {
                    const Bracket vc = vc_text.empty() ? Bracket{500.0, 560.0} : ParseBracket(vc_text, "--vc");
                    result = SearchWVelocities(base, vb, vc, opts);
                }
                const auto labels = AtomLabels(base);
                fs::create_directories(out_dir);
                WriteJson(fs::path(out_dir) / (base.name + ".search.json"), ToJson(result, labels));
                out << std::setprecision(8) << "v_B = " << result.vb << " m/s";
                if (result.vc)
                    out << ", v_C = " << *result.vc << " m/s";
                out << ", objective = " << result.objective << "\n";
                PrintReport(out, result.report, labels);
                out << (result.target_met ? "target met\n" : "target not met\n");
                return result.target_met ? kExitOk : kExitTargetNotMet;
            }
            if (figure->parsed())
            {
                if (list)
                {
                    for (const auto& id : FigureIds())
                        out << id << "\t" << BuiltinFigure(id).description << "\n";
                    return kExitOk;
                }
                if (figure_id.empty())
                    throw ConfigError("figure: give an id or --list");
                const FigureRecipe recipe = BuiltinFigure(figure_id);
                for (const auto& run : recipe.runs)
                    SimulateAndWrite(run, out_dir, out);
                if (recipe.sweep)
                    WriteSweep(RunSweep(*recipe.sweep, threads), recipe.sweep->base, out_dir, out);
                return kExitOk;
            }
            return kExitConfigError;
        }
    } // namespace

    int RunCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
    {
        CLI::App app{"Atom-mode and dipole-dipole dynamics of atoms crossing a photonic crystal", "pbgsim"};
        try
        {
            return Dispatch(app, args, out);
        }
        catch (const CLI::CallForHelp&)
        {
            out << app.help();
            return kExitOk;
        }
        catch (const CLI::CallForAllHelp&)
        {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        }
        catch (const CLI::ParseError& e)
        {
            err << "error: " << e.what() << "\n\n" << app.help();
            return kExitConfigError;
        }
        catch (const ConfigError& e)
        {
            err << "config error: " << e.what() << "\n";
            return kExitConfigError;
        }
        catch (const NumericalError& e)
        {
            err << "numerical failure: " << e.what() << "\n";
            return kExitNumericalError;
        }
        catch (const std::exception& e)
        {
            err << "error: " << e.what() << "\n";
            return kExitConfigError;
        }
    }

} // namespace pbg
