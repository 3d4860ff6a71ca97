#include "pbg/figures.hpp"

#include <sstream>

namespace pbg
{
    namespace
    {
        constexpr double kLattice = 16.3e-3;
        constexpr double kDefectRadius = 10e-3;
        constexpr double kCavityVolume = 11.5e-6; // m^3
        constexpr double kVacuumRabiHz = 43e3;
        constexpr double kDipoleOverE = 6.72e-7;  // m
        constexpr double kRddiBox = 0.02;         // m

        AtomConfig Atom(const std::string& hole, double speed, bool excited)
        {
            AtomConfig a;
            a.label = hole;
            a.hole = hole;
            a.speed_mps = speed;
            a.initially_excited = excited;
            a.dipole_dir = {1.0, 0.0, 0.0};
            return a;
        }

        RunConfig BaseConfig(const std::string& name)
        {
            RunConfig cfg;
            cfg.name = name;
            cfg.crystal = CrystalConfig{0.2, kLattice, kHoleAngleDeg};
            cfg.transition_frequency_hz = 21.50651e9;
            return cfg;
        }

        ModeConfig ReferenceMode(double k_cells)
        {
            ModeConfig m;
            m.center_m = {0.0, 0.0, 0.0};
            m.radius_m = kDefectRadius;
            m.phase_rad = 0.0;
            m.k_vec_rad_per_m = Triple{0.0, 0.0, k_cells * kPi / kLattice};
            m.polarization = {1.0, 0.0, 0.0};
            CalibrationConfig cal;
            cal.v_cav_m3 = kCavityVolume;
            cal.rabi_hz = kVacuumRabiHz;
            m.calibration = cal;
            return m;
        }

        std::string Fmt(double v)
        {
            std::ostringstream os;
            os << v;
            return os.str();
        }
    } // namespace

    RunConfig ReferenceDefectConfig()
    {
        RunConfig cfg = BaseConfig("figure_3");
        cfg.atoms = {Atom("A", 500.0, true)};
        cfg.mode = ReferenceMode(1.0);
        return cfg;
    }

    // The two- and three-atom velocity maps use a mode wavevector of 2 pi / a
    // along z. With it the reference end states (photon amplitude near
    // -0.0616 i at v_B = 515 m/s, the Bell state at 532.8 m/s, the W state at
    // (536.4, 527.4) m/s) come out to about three digits; pi / a misses all
    // of them.
    RunConfig ReferenceTwoAtomDefectConfig(double vb)
    {
        RunConfig cfg = BaseConfig("two_atom_defect");
        cfg.atoms = {Atom("A", 500.0, true), Atom("B", vb, false)};
        cfg.mode = ReferenceMode(2.0);
        return cfg;
    }

    RunConfig ReferenceThreeAtomDefectConfig(double vb, double vc)
    {
        RunConfig cfg = BaseConfig("three_atom_defect");
        cfg.atoms = {Atom("A", 500.0, true), Atom("B", vb, false), Atom("C", vc, false)};
        cfg.mode = ReferenceMode(2.0);
        cfg.mode->center_m = {1e-3, -3e-3, 2e-3};
        return cfg;
    }

    RunConfig ReferenceRddiConfig(double r_min_m)
    {
        RunConfig cfg = BaseConfig("rddi");
        cfg.atoms = {Atom("A", 200.0, true), Atom("B", 200.0, false)};
        // Equal speeds: the separation at mid transit is exactly the x offset.
        cfg.atoms[0].x_offset_m = r_min_m;
        cfg.rddi.enabled = true;
        cfg.rddi.interaction_box_m = kRddiBox;
        cfg.rddi.dipole_mag_over_e_m = kDipoleOverE;
        return cfg;
    }

    std::vector<std::string> FigureIds()
    {
        return {"2", "3", "4a", "4b", "4c", "4d", "5", "6"};
    }

    FigureRecipe BuiltinFigure(const std::string& id)
    {
        FigureRecipe recipe;
        recipe.id = id;
        if (id == "2")
        {
            recipe.description = "RDDI: population of atom A for R_min = 0.05, 0.1, 0.3 mm (v = 200 m/s)";
            for (double r : {0.05e-3, 0.1e-3, 0.3e-3})
            {
                RunConfig cfg = ReferenceRddiConfig(r);
                cfg.name = "figure_2_rmin_" + Fmt(r * 1e3) + "mm";
                recipe.runs.push_back(cfg);
            }
        }
        else if (id == "3")
        {
            recipe.description = "single atom through the defect mode, v_A = 500 m/s";
            recipe.runs.push_back(ReferenceDefectConfig());
        }
        else if (id == "4a" || id == "4b" || id == "4c" || id == "4d")
        {
            const double vb = id == "4a" ? 500.0 : id == "4b" ? 490.0 : id == "4c" ? 515.0 : 532.8;
            RunConfig cfg = ReferenceTwoAtomDefectConfig(vb);
            cfg.name = "figure_" + id;
            if (id == "4a")
                cfg.atoms[0].x_offset_m = 0.3e-3;
            recipe.description = "two atoms through the defect mode, v_A = 500 m/s, v_B = " + Fmt(vb) + " m/s";
            recipe.runs.push_back(cfg);
        }
        else if (id == "5")
        {
            recipe.description = "final populations of three atoms versus (v_B, v_C), R0 = (1, -3, 2) mm";
            SweepSpec spec;
            spec.base = ReferenceThreeAtomDefectConfig(500.0, 500.0);
            spec.base.name = "figure_5";
            spec.vb = VelocityRange{500.0, 560.0, 61};
            spec.vc = VelocityRange{500.0, 560.0, 61};
            recipe.sweep = spec;
        }
        else if (id == "6")
        {
            recipe.description = "three atoms at v_B = 536.4, v_C = 527.4 m/s";
            RunConfig cfg = ReferenceThreeAtomDefectConfig(536.4, 527.4);
            cfg.name = "figure_6";
            recipe.runs.push_back(cfg);
        }
        else
            throw ConfigError("unknown figure '" + id + "'");
        return recipe;
    }

} // namespace pbg
