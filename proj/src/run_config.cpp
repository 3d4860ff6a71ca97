#include "pbg/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pbg/constants.hpp"

namespace pbg
{
    using nlohmann::json;

    namespace
    {
        // Reads one JSON object, remembering which keys were consumed so that
        // anything left over can be reported as unknown.
        class ObjectReader
        {
        public:
            ObjectReader(const json& j, std::string path) : m_j(j), m_path(std::move(path))
            {
                if (!m_j.is_object())
                    throw ConfigError(m_path + ": expected an object");
            }

            bool Has(const std::string& key) const { return m_j.contains(key) && !m_j.at(key).is_null(); }

            double Number(const std::string& key)
            {
                const json& v = Get(key);
                if (!v.is_number())
                    throw ConfigError(Where(key) + ": expected a number");
                const double d = v.get<double>();
                if (!std::isfinite(d))
                    throw ConfigError(Where(key) + ": must be finite");
                return d;
            }

            std::optional<double> OptNumber(const std::string& key)
            {
                if (!Has(key))
                {
                    Mark(key);
                    return std::nullopt;
                }
                return Number(key);
            }

            bool Bool(const std::string& key)
            {
                const json& v = Get(key);
                if (!v.is_boolean())
                    throw ConfigError(Where(key) + ": expected true or false");
                return v.get<bool>();
            }

            std::string String(const std::string& key)
            {
                const json& v = Get(key);
                if (!v.is_string())
                    throw ConfigError(Where(key) + ": expected a string");
                return v.get<std::string>();
            }

            int Integer(const std::string& key)
            {
                const json& v = Get(key);
                if (!v.is_number_integer())
                    throw ConfigError(Where(key) + ": expected an integer");
                return v.get<int>();
            }

            Triple Vector(const std::string& key)
            {
                const json& v = Get(key);
                if (!v.is_array() || v.size() != 3)
                    throw ConfigError(Where(key) + ": expected an array of 3 numbers");
                Triple out{};
                for (std::size_t i = 0; i < 3; i++)
                {
                    if (!v[i].is_number())
                        throw ConfigError(Where(key) + ": expected an array of 3 numbers");
                    out[i] = v[i].get<double>();
                    if (!std::isfinite(out[i]))
                        throw ConfigError(Where(key) + ": must be finite");
                }
                return out;
            }

            const json& Sub(const std::string& key) { return Get(key); }

            std::string Where(const std::string& key) const { return m_path + "." + key; }

            void Mark(const std::string& key) { m_seen.insert(key); }

            void Finish() const
            {
                for (const auto& [key, _] : m_j.items())
                    if (!m_seen.count(key))
                        throw ConfigError(m_path + ": unknown key '" + key + "'");
            }

        private:
            const json& Get(const std::string& key)
            {
                m_seen.insert(key);
                if (!Has(key))
                    throw ConfigError(Where(key) + ": missing required field");
                return m_j.at(key);
            }

            const json& m_j;
            std::string m_path;
            std::set<std::string> m_seen;
        };

        const char* DefaultHole(std::size_t index)
        {
            static const char* holes[] = {"A", "B", "C"};
            return index < 3 ? holes[index] : "?";
        }

        Vec3 ToVec(const Triple& t) { return Vec3(t[0], t[1], t[2]); }

        json ToJsonArray(const Triple& t) { return json::array({t[0], t[1], t[2]}); }
    } // namespace

    RunConfig ParseRunConfig(const json& j)
    {
        RunConfig cfg;
        ObjectReader root(j, "config");
        cfg.schema_version = root.Integer("schema_version");
        if (cfg.schema_version != kSchemaVersion)
            throw ConfigError("config.schema_version: unsupported version " + std::to_string(cfg.schema_version));
        if (root.Has("name"))
            cfg.name = root.String("name");
        else
            root.Mark("name");

        {
            ObjectReader r(root.Sub("crystal"), "config.crystal");
            cfg.crystal.side_m = r.Number("side_m");
            cfg.crystal.lattice_m = r.Number("lattice_m");
            cfg.crystal.hole_angle_deg = r.Number("hole_angle_deg");
            r.Finish();
        }

        cfg.transition_frequency_hz = root.Number("transition_frequency_hz");
        cfg.detuning_rad_per_s = root.OptNumber("detuning_rad_per_s").value_or(0.0);

        const json& atoms = root.Sub("atoms");
        if (!atoms.is_array())
            throw ConfigError("config.atoms: expected an array");
        for (std::size_t i = 0; i < atoms.size(); i++)
        {
            ObjectReader r(atoms[i], "config.atoms[" + std::to_string(i) + "]");
            AtomConfig a;
            if (r.Has("hole"))
                a.hole = r.String("hole");
            else
            {
                r.Mark("hole");
                a.hole = DefaultHole(i);
            }
            if (r.Has("label"))
                a.label = r.String("label");
            else
            {
                r.Mark("label");
                a.label = a.hole;
            }
            a.speed_mps = r.Number("speed_mps");
            a.initially_excited = r.Bool("initially_excited");
            if (r.Has("dipole_dir"))
                a.dipole_dir = r.Vector("dipole_dir");
            else
                r.Mark("dipole_dir");
            a.x_offset_m = r.OptNumber("x_offset_m");
            r.Finish();
            cfg.atoms.push_back(a);
        }

        if (root.Has("mode"))
        {
            ObjectReader r(root.Sub("mode"), "config.mode");
            ModeConfig m;
            m.center_m = r.Vector("center_m");
            m.radius_m = r.Number("radius_m");
            m.phase_rad = r.Number("phase_rad");
            if (r.Has("k_vec_rad_per_m"))
                m.k_vec_rad_per_m = r.Vector("k_vec_rad_per_m");
            else
                r.Mark("k_vec_rad_per_m");
            m.polarization = r.Vector("polarization");
            m.g0_rad_per_s = r.OptNumber("g0_rad_per_s");
            if (r.Has("calibration"))
            {
                ObjectReader c(r.Sub("calibration"), "config.mode.calibration");
                CalibrationConfig cal;
                cal.v_cav_m3 = c.Number("v_cav_m3");
                cal.rabi_hz = c.OptNumber("rabi_hz");
                cal.rabi_rad_per_s = c.OptNumber("rabi_rad_per_s");
                cal.r_def_m = c.OptNumber("r_def_m");
                c.Finish();
                m.calibration = cal;
            }
            else
                r.Mark("calibration");
            r.Finish();
            cfg.mode = m;
        }
        else
            root.Mark("mode");

        if (root.Has("rddi"))
        {
            ObjectReader r(root.Sub("rddi"), "config.rddi");
            cfg.rddi.enabled = r.Bool("enabled");
            cfg.rddi.interaction_box_m = r.OptNumber("interaction_box_m");
            cfg.rddi.dipole_mag_over_e_m = r.OptNumber("dipole_mag_over_e_m").value_or(0.0);
            r.Finish();
        }
        else
            root.Mark("rddi");

        if (root.Has("integrator"))
        {
            ObjectReader r(root.Sub("integrator"), "config.integrator");
            cfg.integrator.rel_tol = r.OptNumber("rel_tol").value_or(cfg.integrator.rel_tol);
            cfg.integrator.abs_tol = r.OptNumber("abs_tol").value_or(cfg.integrator.abs_tol);
            r.Finish();
        }
        else
            root.Mark("integrator");

        if (root.Has("output"))
        {
            ObjectReader r(root.Sub("output"), "config.output");
            if (r.Has("grid_points"))
            {
                const int n = r.Integer("grid_points");
                if (n < 2)
                    throw ConfigError("config.output.grid_points: must be at least 2");
                cfg.output.grid_points = static_cast<std::size_t>(n);
            }
            else
                r.Mark("grid_points");
            if (r.Has("formats"))
            {
                const json& f = r.Sub("formats");
                if (!f.is_array())
                    throw ConfigError("config.output.formats: expected an array of strings");
                cfg.output.formats.clear();
                for (const auto& s : f)
                {
                    if (!s.is_string() || (s != "csv" && s != "json"))
                        throw ConfigError("config.output.formats: entries must be \"csv\" or \"json\"");
                    cfg.output.formats.push_back(s.get<std::string>());
                }
            }
            else
                r.Mark("formats");
            r.Finish();
        }
        else
            root.Mark("output");

        root.Finish();
        ValidateRunConfig(cfg);
        return cfg;
    }

    json ToJson(const RunConfig& cfg)
    {
        json j;
        j["schema_version"] = cfg.schema_version;
        j["name"] = cfg.name;
        j["crystal"] = {{"side_m", cfg.crystal.side_m},
                        {"lattice_m", cfg.crystal.lattice_m},
                        {"hole_angle_deg", cfg.crystal.hole_angle_deg}};
        j["transition_frequency_hz"] = cfg.transition_frequency_hz;
        j["detuning_rad_per_s"] = cfg.detuning_rad_per_s;

        j["atoms"] = json::array();
        for (const auto& a : cfg.atoms)
        {
            json ja = {{"label", a.label},
                       {"hole", a.hole},
                       {"speed_mps", a.speed_mps},
                       {"initially_excited", a.initially_excited},
                       {"dipole_dir", ToJsonArray(a.dipole_dir)}};
            if (a.x_offset_m)
                ja["x_offset_m"] = *a.x_offset_m;
            j["atoms"].push_back(ja);
        }

        if (cfg.mode)
        {
            const auto& m = *cfg.mode;
            json jm = {{"center_m", ToJsonArray(m.center_m)},
                       {"radius_m", m.radius_m},
                       {"phase_rad", m.phase_rad},
                       {"polarization", ToJsonArray(m.polarization)}};
            if (m.k_vec_rad_per_m)
                jm["k_vec_rad_per_m"] = ToJsonArray(*m.k_vec_rad_per_m);
            if (m.g0_rad_per_s)
                jm["g0_rad_per_s"] = *m.g0_rad_per_s;
            if (m.calibration)
            {
                json jc = {{"v_cav_m3", m.calibration->v_cav_m3}};
                if (m.calibration->rabi_hz)
                    jc["rabi_hz"] = *m.calibration->rabi_hz;
                if (m.calibration->rabi_rad_per_s)
                    jc["rabi_rad_per_s"] = *m.calibration->rabi_rad_per_s;
                if (m.calibration->r_def_m)
                    jc["r_def_m"] = *m.calibration->r_def_m;
                jm["calibration"] = jc;
            }
            j["mode"] = jm;
        }

        json jr = {{"enabled", cfg.rddi.enabled}, {"dipole_mag_over_e_m", cfg.rddi.dipole_mag_over_e_m}};
        if (cfg.rddi.interaction_box_m)
            jr["interaction_box_m"] = *cfg.rddi.interaction_box_m;
        j["rddi"] = jr;

        j["integrator"] = {{"rel_tol", cfg.integrator.rel_tol}, {"abs_tol", cfg.integrator.abs_tol}};
        j["output"] = {{"grid_points", cfg.output.grid_points}, {"formats", cfg.output.formats}};
        return j;
    }

    RunConfig LoadRunConfig(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file " + path.string());
        json j;
        try
        {
            in >> j;
        }
        catch (const json::parse_error& e)
        {
            throw ConfigError(path.string() + ": " + e.what());
        }
        return ParseRunConfig(j);
    }

    void SaveRunConfig(const RunConfig& config, const std::filesystem::path& path)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        out << ToJson(config).dump(2) << "\n";
        if (!out)
            throw std::runtime_error("failed writing " + path.string());
    }

    void ValidateRunConfig(const RunConfig& cfg)
    {
        if (cfg.schema_version != kSchemaVersion)
            throw ConfigError("unsupported schema version");
        MakeCrystal(cfg).Validate();
        if (!(cfg.transition_frequency_hz > 0))
            throw ConfigError("transition_frequency_hz must be positive");

        if (cfg.atoms.empty() || cfg.atoms.size() > kMaxAtoms)
            throw ConfigError("config.atoms: between 1 and 3 atoms are supported, got " +
                              std::to_string(cfg.atoms.size()));
        std::set<std::string> holes;
        std::set<std::string> labels;
        int excited = 0;
        for (const auto& a : cfg.atoms)
        {
            if (a.hole != "A" && a.hole != "B" && a.hole != "C")
                throw ConfigError("atom hole must be one of A, B, C");
            if (!holes.insert(a.hole).second)
                throw ConfigError("two atoms share hole " + a.hole);
            if (a.label.empty() ||
                !std::all_of(a.label.begin(), a.label.end(), [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; }))
                throw ConfigError("atom labels must be non-empty and alphanumeric");
            if (a.label == "gamma" || a.label == "photon" || !labels.insert(a.label).second)
                throw ConfigError("atom label '" + a.label + "' is reserved or duplicated");
            if (!(a.speed_mps > 0))
                throw ConfigError("atom " + a.label + ": speed_mps must be positive");
            if (!(ToVec(a.dipole_dir).norm() > 0))
                throw ConfigError("atom " + a.label + ": dipole_dir must be non-zero");
            excited += a.initially_excited ? 1 : 0;
        }
        if (excited != 1)
            throw ConfigError("exactly one atom must be initially excited");

        if (cfg.mode)
        {
            const auto& m = *cfg.mode;
            if (!(m.radius_m > 0))
                throw ConfigError("mode.radius_m must be positive");
            if (!(ToVec(m.polarization).norm() > 0))
                throw ConfigError("mode.polarization must be non-zero");
            if (m.g0_rad_per_s.has_value() == m.calibration.has_value())
                throw ConfigError("mode: give exactly one of g0_rad_per_s and calibration");
            if (m.g0_rad_per_s && !(*m.g0_rad_per_s >= 0))
                throw ConfigError("mode.g0_rad_per_s must be non-negative");
            if (m.calibration)
            {
                const auto& c = *m.calibration;
                if (c.rabi_hz.has_value() == c.rabi_rad_per_s.has_value())
                    throw ConfigError("mode.calibration: give exactly one of rabi_hz and rabi_rad_per_s");
                if (!(c.v_cav_m3 > 0) || !(c.rabi_hz.value_or(1.0) > 0) ||
                    !(c.rabi_rad_per_s.value_or(1.0) > 0) || !(c.r_def_m.value_or(1.0) > 0))
                    throw ConfigError("mode.calibration values must be positive");
            }
        }
        if (!cfg.mode && !cfg.rddi.enabled)
            throw ConfigError("no interaction enabled: configure a defect mode or enable RDDI");
        if (cfg.rddi.interaction_box_m && !(*cfg.rddi.interaction_box_m > 0))
            throw ConfigError("rddi.interaction_box_m must be positive");
        if (!(cfg.rddi.dipole_mag_over_e_m >= 0))
            throw ConfigError("rddi.dipole_mag_over_e_m must be non-negative");
        if (!(cfg.integrator.rel_tol > 0 && cfg.integrator.abs_tol > 0))
            throw ConfigError("integrator tolerances must be positive");
        if (cfg.output.grid_points < 2)
            throw ConfigError("output.grid_points must be at least 2");
    }

    CrystalSpec MakeCrystal(const RunConfig& cfg)
    {
        CrystalSpec crystal;
        crystal.side = cfg.crystal.side_m;
        crystal.lattice = cfg.crystal.lattice_m;
        crystal.hole_angle = DegToRad(cfg.crystal.hole_angle_deg);
        return crystal;
    }

    std::optional<DefectModeSpec> MakeMode(const RunConfig& cfg)
    {
        if (!cfg.mode)
            return std::nullopt;
        const auto& m = *cfg.mode;
        DefectModeSpec mode;
        mode.center = ToVec(m.center_m);
        mode.radius = m.radius_m;
        mode.phase = m.phase_rad;
        mode.k_vec = m.k_vec_rad_per_m ? ToVec(*m.k_vec_rad_per_m) : Vec3(0.0, 0.0, MakeCrystal(cfg).KMag());
        mode.polarization = ToVec(m.polarization).normalized();
        mode.omega0 = 2 * kPi * cfg.transition_frequency_hz - cfg.detuning_rad_per_s;
        if (m.g0_rad_per_s)
            mode.g0 = *m.g0_rad_per_s;
        else
        {
            const auto& c = *m.calibration;
            MicrocavityCalibration cal;
            cal.v_cav = c.v_cav_m3;
            cal.rabi = c.rabi_rad_per_s ? *c.rabi_rad_per_s : 2 * kPi * *c.rabi_hz;
            cal.r_def = c.r_def_m.value_or(m.radius_m);
            mode.g0 = G0FromMicrocavity(cal);
        }
        return mode;
    }

    std::optional<std::size_t> AtomOnHole(const RunConfig& cfg, const std::string& hole)
    {
        for (std::size_t i = 0; i < cfg.atoms.size(); i++)
            if (cfg.atoms[i].hole == hole)
                return i;
        return std::nullopt;
    }

    SimulationProblem BuildProblem(const RunConfig& cfg)
    {
        ValidateRunConfig(cfg);
        const CrystalSpec crystal = MakeCrystal(cfg);
        const PhysicalConstants consts;

        auto speed_of = [&](const char* hole) {
            const auto i = AtomOnHole(cfg, hole);
            return i ? cfg.atoms[*i].speed_mps : 500.0;
        };
        const auto trajectories = StandardTrajectories(crystal, speed_of("A"), speed_of("B"), speed_of("C"));

        std::vector<double> offsets(cfg.atoms.size(), 0.0);
        bool any_offset = false;
        for (std::size_t i = 0; i < cfg.atoms.size(); i++)
            if (cfg.atoms[i].x_offset_m)
            {
                offsets[i] = *cfg.atoms[i].x_offset_m;
                any_offset = true;
            }
        if (cfg.atoms.size() == 2 && !any_offset &&
            std::abs(cfg.atoms[0].speed_mps - cfg.atoms[1].speed_mps) < kCollisionGuardSpeedGap)
        {
            const auto a = AtomOnHole(cfg, "A");
            offsets[a ? *a : 0] = kCollisionGuardOffset;
        }

        SimulationProblem problem;
        for (std::size_t i = 0; i < cfg.atoms.size(); i++)
        {
            const auto& ac = cfg.atoms[i];
            AtomSpec atom;
            atom.label = ac.label;
            atom.trajectory = trajectories[static_cast<std::size_t>(ac.hole[0] - 'A')];
            atom.trajectory.r0.x() += offsets[i];
            atom.dipole_dir = ToVec(ac.dipole_dir).normalized();
            atom.dipole_mag = cfg.rddi.dipole_mag_over_e_m * consts.e_charge;
            atom.omega = 2 * kPi * cfg.transition_frequency_hz;
            atom.initially_excited = ac.initially_excited;
            problem.atoms.push_back(atom);
        }

        problem.mode = MakeMode(cfg);
        problem.rddi_enabled = cfg.rddi.enabled;
        if (cfg.rddi.interaction_box_m)
            problem.rddi.box = InteractionBox{*cfg.rddi.interaction_box_m, Vec3::Zero()};
        problem.detuning = cfg.detuning_rad_per_s;

        problem.t_begin = 0.0;
        problem.t_end = 0.0;
        for (const auto& atom : problem.atoms)
            problem.t_end = std::max(problem.t_end, ExitTime(atom.trajectory, crystal));
        problem.rel_tol = cfg.integrator.rel_tol;
        problem.abs_tol = cfg.integrator.abs_tol;
        problem.output_grid = UniformGrid(problem.t_begin, problem.t_end, cfg.output.grid_points);

        problem.Validate();
        return problem;
    }

} // namespace pbg
