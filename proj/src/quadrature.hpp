#pragma once

#include <functional>
#include <vector>

namespace pbg::detail
{
    // Adaptive Gauss-Kronrod (GSL qag, 21-point rule) over consecutive
    // intervals [cuts[i], cuts[i+1]]. The absolute tolerance is shared evenly
    // between the pieces. Throws NumericalError if GSL cannot reach it.
    double IntegratePiecewise(const std::function<double(double)>& f,
                              const std::vector<double>& cuts, double abs_tol);

    // Sorted cut list from t0 to t1 containing every interior `extra` point and
    // with no piece wider than max_width.
    std::vector<double> MakeCuts(double t0, double t1, std::vector<double> extra,
                                 double max_width);

} // namespace pbg::detail
