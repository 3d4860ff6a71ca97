#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pbg/defect_field.hpp"
#include "pbg/geometry.hpp"
#include "pbg/rddi.hpp"
#include "pbg/types.hpp"

namespace pbg
{
    inline constexpr std::size_t kMaxAtoms = 3;

    // Amplitudes over the single-excitation basis
    //   |e_A g_B g_C 0>, |g_A e_B g_C 0>, |g_A g_B e_C 0>, |g_A g_B g_C 1>
    // restricted to the atoms present.
    struct ExcitationState
    {
        std::vector<Complex> atom_amps;
        Complex photon_amp{0.0, 0.0};

        double NormSquared() const;

        // Unit vector on the (single) initially excited atom, mode in vacuum.
        static ExcitationState Initial(const std::vector<AtomSpec>& atoms);
    };

    struct SimulationProblem
    {
        std::vector<AtomSpec> atoms;
        std::optional<DefectModeSpec> mode;
        bool rddi_enabled = false;
        RddiOptions rddi;
        double detuning = 0.0; // rad/s, atom minus mode frequency
        double t_begin = 0.0;  // s
        double t_end = 0.0;    // s
        double rel_tol = 1e-9;
        double abs_tol = 1e-12;
        std::vector<double> output_grid; // s; empty means {t_begin, t_end}

        // Throws ConfigError.
        void Validate() const;
    };

    struct TimeSeries
    {
        std::vector<double> times;
        std::vector<ExcitationState> states;

        // diagnostics
        double max_norm_drift = 0.0;
        std::size_t accepted_steps = 0;
        std::size_t rejected_steps = 0;
    };

    // n points from t0 to t1 inclusive.
    std::vector<double> UniformGrid(double t0, double t1, std::size_t n);

    // Solves, in the interaction picture at the mode frequency,
    //   i da_j/dt  = G_j(t) e^{+i det t} gamma + sum_{l != j} J_jl(t) a_l
    //   i dgamma/dt = sum_j G_j(t) e^{-i det t} a_j
    // with adaptive Dormand-Prince 5(4) steps and dense output on the grid.
    // Throws NumericalError on step-size underflow or norm drift above 1e-6.
    TimeSeries Integrate(const SimulationProblem& problem);

    // Same equations from an arbitrary state; t1 < t0 integrates backwards.
    ExcitationState Propagate(const SimulationProblem& problem,
                              const ExcitationState& start, double t0, double t1);

    // Resonant single-atom solution (cos A, -i sin A), A = int_0^t G(t') dt'.
    // Throws std::invalid_argument for nonzero detuning.
    std::pair<Complex, Complex> SingleAtomClosedForm(
        const AtomSpec& atom, const DefectModeSpec& mode, double t,
        double detuning = 0.0);

    // Last state of the series; renormalised when the drift is at most 1e-8,
    // otherwise NumericalError.
    ExcitationState FinalState(const TimeSeries& series);

} // namespace pbg
