#include "pbg/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dopri5.hpp"

namespace pbg
{
    namespace
    {
        constexpr std::size_t kSlots = kMaxAtoms + 1;
        using Stepper = detail::DormandPrince5<kSlots>;
        using Slots = Stepper::State;
        using Matrix = std::array<std::array<Complex, kSlots>, kSlots>;

        constexpr double kAbortDrift = 1e-6;
        constexpr double kRenormDrift = 1e-8;

        // Time-dependent Hermitian generator M(t) with i dy/dt = M(t) y, plus the
        // step ceiling and the coefficient discontinuities of the problem.
        class CoefficientModel
        {
        public:
            explicit CoefficientModel(const SimulationProblem& problem)
                : m_problem(problem), m_n(problem.atoms.size())
            {
                if (problem.mode)
                {
                    const auto& mode = *problem.mode;
                    m_length = mode.radius;
                    if (mode.k_vec.norm() > 0)
                        m_length = std::min(m_length, kPi / mode.k_vec.norm());
                    for (std::size_t j = 0; j < m_n; j++)
                        m_gamp[j] = mode.g0 * mode.polarization.dot(problem.atoms[j].dipole_dir);
                }
            }

            std::size_t Photon() const { return m_n; }

            void Fill(double t, Matrix& m) const
            {
                for (auto& row : m)
                    row.fill(Complex{});

                if (m_problem.mode)
                {
                    const auto& mode = *m_problem.mode;
                    const Complex phase = std::polar(1.0, m_problem.detuning * t);
                    for (std::size_t j = 0; j < m_n; j++)
                    {
                        if (m_gamp[j] == 0)
                            continue;
                        const Vec3 r = PositionAt(m_problem.atoms[j].trajectory, t);
                        const double g = m_gamp[j] * ModeAmplitude(r, mode);
                        m[j][m_n] = g * phase;
                        m[m_n][j] = g * std::conj(phase);
                    }
                }

                if (m_problem.rddi_enabled)
                {
                    for (std::size_t j = 0; j < m_n; j++)
                        for (std::size_t l = j + 1; l < m_n; l++)
                        {
                            double J = 0.0;
                            try
                            {
                                J = JCouplingAtTime(m_problem.atoms[j], m_problem.atoms[l], t, m_problem.rddi);
                            }
                            catch (const std::invalid_argument&)
                            {
                                throw NumericalError("atoms " + m_problem.atoms[j].label + " and " +
                                                         m_problem.atoms[l].label + " coincide",
                                                     t);
                            }
                            m[j][l] = J;
                            m[l][j] = J;
                        }
                }
            }

            // Inside 10 R_def of the mode centre a step may not exceed a tenth of
            // the envelope/oscillation transit time; further out it may not
            // overshoot the entry into that region. RDDI steps are limited to a
            // tenth of the instantaneous separation over the relative speed.
            double MaxStep(double t) const
            {
                double h = std::numeric_limits<double>::infinity();
                if (m_problem.mode)
                {
                    const auto& mode = *m_problem.mode;
                    const double region = 10 * mode.radius;
                    for (std::size_t j = 0; j < m_n; j++)
                    {
                        if (m_gamp[j] == 0)
                            continue;
                        const auto& traj = m_problem.atoms[j].trajectory;
                        const double v = traj.Speed();
                        const double d = (PositionAt(traj, t) - mode.center).norm();
                        const double base = 0.1 * m_length / v;
                        h = std::min(h, d <= region ? base : (d - region) / v + base);
                    }
                }
                if (m_problem.rddi_enabled)
                {
                    for (std::size_t j = 0; j < m_n; j++)
                        for (std::size_t l = j + 1; l < m_n; l++)
                        {
                            const auto& a = m_problem.atoms[j].trajectory;
                            const auto& b = m_problem.atoms[l].trajectory;
                            const double dv = (b.v - a.v).norm();
                            if (dv > 0)
                                h = std::min(h, 0.1 * (PositionAt(b, t) - PositionAt(a, t)).norm() / dv);
                        }
                }
                if (!std::isfinite(h))
                    h = m_problem.t_end - m_problem.t_begin;
                return h;
            }

            std::vector<double> Stops() const
            {
                std::vector<double> stops;
                if (m_problem.mode)
                    for (std::size_t j = 0; j < m_n; j++)
                        if (m_gamp[j] != 0)
                            stops.push_back(ClosestApproachTime(m_problem.atoms[j].trajectory,
                                                                m_problem.mode->center));
                if (m_problem.rddi_enabled && m_problem.rddi.box)
                {
                    for (std::size_t j = 0; j < m_n; j++)
                        for (std::size_t l = j + 1; l < m_n; l++)
                        {
                            const auto window = BoxWindow(m_problem.atoms[j], m_problem.atoms[l],
                                                          *m_problem.rddi.box,
                                                          -std::numeric_limits<double>::infinity(),
                                                          std::numeric_limits<double>::infinity());
                            if (window)
                            {
                                stops.push_back(window->first);
                                stops.push_back(window->second);
                            }
                        }
                }
                std::sort(stops.begin(), stops.end());
                return stops;
            }

        private:
            const SimulationProblem& m_problem;
            std::size_t m_n;
            std::array<double, kMaxAtoms> m_gamp{};
            double m_length = std::numeric_limits<double>::infinity();
        };

        Slots ToSlots(const ExcitationState& s)
        {
            Slots y{};
            for (std::size_t j = 0; j < s.atom_amps.size(); j++)
                y[j] = s.atom_amps[j];
            y[s.atom_amps.size()] = s.photon_amp;
            return y;
        }

        ExcitationState FromSlots(const Slots& y, std::size_t n)
        {
            ExcitationState s;
            s.atom_amps.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
            s.photon_amp = y[n];
            return s;
        }

        double SlotNorm(const Slots& y, std::size_t active)
        {
            double sum = 0.0;
            for (std::size_t i = 0; i < active; i++)
                sum += std::norm(y[i]);
            return sum;
        }

        // Evolves y from t0 to t1 (either direction). `on_step(view, sign)`
        // sees every accepted step in the reflected time s = sign * t.
        template <class OnStep>
        Slots Evolve(const SimulationProblem& problem, Slots y, double t0, double t1,
                     std::size_t& accepted, std::size_t& rejected, OnStep&& on_step)
        {
            const CoefficientModel model(problem);
            const std::size_t active = problem.atoms.size() + 1;
            const double sign = t1 >= t0 ? 1.0 : -1.0;
            const double norm0 = SlotNorm(y, active);

            Stepper::Options opts;
            opts.rel_tol = problem.rel_tol;
            opts.abs_tol = problem.abs_tol;
            opts.active = active;
            Stepper stepper(opts);

            std::vector<double> stops;
            for (double s : model.Stops())
                stops.push_back(sign * s);
            std::sort(stops.begin(), stops.end());

            Matrix m;
            auto rhs = [&](double s, const Slots& x, Slots& dx) {
                model.Fill(sign * s, m);
                for (std::size_t i = 0; i < active; i++)
                {
                    Complex acc{};
                    for (std::size_t k = 0; k < active; k++)
                        acc += m[i][k] * x[k];
                    dx[i] = Complex(0.0, -sign) * acc;
                }
                for (std::size_t i = active; i < kSlots; i++)
                    dx[i] = Complex{};
            };
            auto max_step = [&](double s) { return model.MaxStep(sign * s); };
            auto step_cb = [&](const auto& view) {
                const double drift = std::abs(SlotNorm(view.y1, active) - norm0);
                if (drift > kAbortDrift)
                    throw NumericalError("norm drift " + std::to_string(drift) + " exceeds bound",
                                         sign * (view.t0 + view.h));
                on_step(view, sign);
            };

            y = stepper.Run(rhs, max_step, step_cb, y, sign * t0, sign * t1, stops);
            accepted = stepper.accepted;
            rejected = stepper.rejected;
            return y;
        }
    } // namespace

    double ExcitationState::NormSquared() const
    {
        double sum = std::norm(photon_amp);
        for (const auto& a : atom_amps)
            sum += std::norm(a);
        return sum;
    }

    ExcitationState ExcitationState::Initial(const std::vector<AtomSpec>& atoms)
    {
        ExcitationState s;
        s.atom_amps.assign(atoms.size(), Complex{});
        std::size_t excited = 0;
        for (std::size_t j = 0; j < atoms.size(); j++)
            if (atoms[j].initially_excited)
            {
                s.atom_amps[j] = 1.0;
                excited++;
            }
        if (excited != 1)
            throw ConfigError("exactly one atom must be initially excited");
        return s;
    }

    void SimulationProblem::Validate() const
    {
        if (atoms.empty() || atoms.size() > kMaxAtoms)
            throw ConfigError("between 1 and 3 atoms are supported, got " + std::to_string(atoms.size()));
        for (const auto& a : atoms)
            a.Validate();
        if (mode)
            mode->Validate();
        if (!mode && !rddi_enabled)
            throw ConfigError("no interaction enabled: configure a defect mode or enable RDDI");
        if (!(t_end > t_begin))
            throw ConfigError("time span must be increasing");
        if (!(rel_tol > 0 && abs_tol > 0))
            throw ConfigError("integrator tolerances must be positive");
        if (!std::isfinite(detuning))
            throw ConfigError("detuning must be finite");
        for (std::size_t i = 0; i < output_grid.size(); i++)
        {
            if (output_grid[i] < t_begin || output_grid[i] > t_end)
                throw ConfigError("output grid point outside the time span");
            if (i > 0 && !(output_grid[i] > output_grid[i - 1]))
                throw ConfigError("output grid must be strictly increasing");
        }
        (void)ExcitationState::Initial(atoms);
    }

    std::vector<double> UniformGrid(double t0, double t1, std::size_t n)
    {
        if (n < 2)
            throw std::invalid_argument("a grid needs at least two points");
        std::vector<double> grid(n);
        for (std::size_t i = 0; i < n; i++)
            grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
        grid.back() = t1;
        return grid;
    }

    TimeSeries Integrate(const SimulationProblem& problem)
    {
        problem.Validate();
        const std::size_t n = problem.atoms.size();
        std::vector<double> grid = problem.output_grid;
        if (grid.empty())
            grid = {problem.t_begin, problem.t_end};

        TimeSeries series;
        series.times = grid;
        series.states.reserve(grid.size());

        const ExcitationState initial = ExcitationState::Initial(problem.atoms);
        std::size_t next = 0;
        auto record = [&](const ExcitationState& s) {
            series.max_norm_drift = std::max(series.max_norm_drift, std::abs(s.NormSquared() - 1.0));
            series.states.push_back(s);
            next++;
        };
        while (next < grid.size() && grid[next] <= problem.t_begin)
            record(initial);

        auto on_step = [&](const auto& view, double) {
            const double t_hi = view.t0 + view.h;
            while (next < grid.size() && grid[next] <= t_hi)
                record(FromSlots(view.At(grid[next]), n));
        };

        const Slots last = Evolve(problem, ToSlots(initial), problem.t_begin, problem.t_end,
                                  series.accepted_steps, series.rejected_steps, on_step);
        while (next < grid.size())
            record(FromSlots(last, n));
        return series;
    }

    ExcitationState Propagate(const SimulationProblem& problem,
                              const ExcitationState& start, double t0, double t1)
    {
        problem.Validate();
        if (start.atom_amps.size() != problem.atoms.size())
            throw std::invalid_argument("state does not match the number of atoms");
        std::size_t accepted = 0;
        std::size_t rejected = 0;
        const Slots y = Evolve(problem, ToSlots(start), t0, t1, accepted, rejected,
                               [](const auto&, double) {});
        return FromSlots(y, problem.atoms.size());
    }

    std::pair<Complex, Complex> SingleAtomClosedForm(
        const AtomSpec& atom, const DefectModeSpec& mode, double t, double detuning)
    {
        if (detuning != 0)
            throw std::invalid_argument("closed-form solution requires zero detuning");
        constexpr double tol = 1e-12;
        const double area = t >= 0 ? PulseArea(atom, mode, 0.0, t, tol) : -PulseArea(atom, mode, t, 0.0, tol);
        return {Complex(std::cos(area), 0.0), Complex(0.0, -std::sin(area))};
    }

    ExcitationState FinalState(const TimeSeries& series)
    {
        if (series.states.empty())
            throw std::invalid_argument("empty time series");
        ExcitationState s = series.states.back();
        const double norm = s.NormSquared();
        if (std::abs(norm - 1.0) > kRenormDrift)
            throw NumericalError("final state norm drift " + std::to_string(std::abs(norm - 1.0)) +
                                     " exceeds 1e-8",
                                 series.times.back());
        const double scale = 1.0 / std::sqrt(norm);
        for (auto& a : s.atom_amps)
            a *= scale;
        s.photon_amp *= scale;
        return s;
    }

} // namespace pbg
