#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pbg/run_config.hpp"
#include "pbg/sweep.hpp"

namespace pbg
{
    // Built-in, frozen parameter sets for each reproduced figure.
    struct FigureRecipe
    {
        std::string id;
        std::string description;
        std::vector<RunConfig> runs;    // single simulations
        std::optional<SweepSpec> sweep; // velocity map, if any
    };

    std::vector<std::string> FigureIds();

    // Throws ConfigError for an unknown id.
    FigureRecipe BuiltinFigure(const std::string& id);

    // Shared building blocks of the recipes.
    RunConfig ReferenceDefectConfig();          // single atom A, defect mode, k = (0, 0, pi/a)
    RunConfig ReferenceTwoAtomDefectConfig(double vb);   // A at 500 m/s + B, k = (0, 0, 2 pi/a)
    RunConfig ReferenceThreeAtomDefectConfig(double vb, double vc); // R0 = (1, -3, 2) mm
    RunConfig ReferenceRddiConfig(double r_min_m); // two atoms at 200 m/s, RDDI only

} // namespace pbg
