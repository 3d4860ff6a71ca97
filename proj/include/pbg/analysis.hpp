#pragma once

#include <optional>
#include <vector>

#include "pbg/dynamics.hpp"

namespace pbg
{
    struct FinalStateReport
    {
        std::vector<double> populations; // |amp|^2 per atom
        double photon_prob = 0.0;
        std::optional<double> entropy;            // nats, two-atom case
        std::optional<double> bell_fidelity;      // two-atom case
        std::optional<double> best_bell_fidelity; // maximised over relative phase
        std::optional<double> w_fidelity;         // three-atom case
        std::optional<double> best_w_fidelity;
    };

    // -p ln p - (1 - p) ln(1 - p), with 0 ln 0 = 0. p = |a|^2 is the excited
    // population of one atom. Throws std::invalid_argument outside [0, 1]
    // beyond a 1e-12 slack.
    double VonNeumannEntropy(double p);

    // |(a + b)/sqrt 2|^2 against (|eg> + |ge>)/sqrt 2.
    double BellFidelity(const ExcitationState& state);
    double BestBellFidelity(const ExcitationState& state);

    // |(a + b + c)/sqrt 3|^2 against the equal-weight W state.
    double WFidelity(const ExcitationState& state);
    double BestWFidelity(const ExcitationState& state);

    FinalStateReport MakeReport(const ExcitationState& state);

} // namespace pbg
