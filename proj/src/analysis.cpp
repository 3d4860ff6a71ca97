#include "pbg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pbg
{
    namespace
    {
        double XLogX(double x) { return x > 0 ? x * std::log(x) : 0.0; }

        void RequireAtoms(const ExcitationState& state, std::size_t n, const char* what)
        {
            if (state.atom_amps.size() != n)
                throw std::invalid_argument(std::string(what) + " requires a " + std::to_string(n) +
                                            "-atom state");
        }
    } // namespace

    double VonNeumannEntropy(double p)
    {
        constexpr double slack = 1e-12;
        if (!(p >= -slack && p <= 1 + slack))
            throw std::invalid_argument("population outside [0, 1]");
        p = std::clamp(p, 0.0, 1.0);
        return -XLogX(p) - XLogX(1.0 - p);
    }

    double BellFidelity(const ExcitationState& state)
    {
        RequireAtoms(state, 2, "Bell fidelity");
        return std::norm(state.atom_amps[0] + state.atom_amps[1]) / 2.0;
    }

    double BestBellFidelity(const ExcitationState& state)
    {
        RequireAtoms(state, 2, "Bell fidelity");
        const double s = std::abs(state.atom_amps[0]) + std::abs(state.atom_amps[1]);
        return s * s / 2.0;
    }

    double WFidelity(const ExcitationState& state)
    {
        RequireAtoms(state, 3, "W fidelity");
        return std::norm(state.atom_amps[0] + state.atom_amps[1] + state.atom_amps[2]) / 3.0;
    }

    double BestWFidelity(const ExcitationState& state)
    {
        RequireAtoms(state, 3, "W fidelity");
        double s = 0.0;
        for (const auto& a : state.atom_amps)
            s += std::abs(a);
        return s * s / 3.0;
    }

    FinalStateReport MakeReport(const ExcitationState& state)
    {
        FinalStateReport report;
        for (const auto& a : state.atom_amps)
            report.populations.push_back(std::norm(a));
        report.photon_prob = std::norm(state.photon_amp);

        if (state.atom_amps.size() == 2)
        {
            report.entropy = VonNeumannEntropy(report.populations[0]);
            report.bell_fidelity = BellFidelity(state);
            report.best_bell_fidelity = BestBellFidelity(state);
        }
        else if (state.atom_amps.size() == 3)
        {
            report.w_fidelity = WFidelity(state);
            report.best_w_fidelity = BestWFidelity(state);
        }
        return report;
    }

} // namespace pbg
