#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "pbg/types.hpp"

namespace pbg::detail
{
    namespace
    {
        constexpr std::size_t kWorkspaceLimit = 2000;

        struct WorkspaceDeleter
        {
            void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
        };

        double Trampoline(double x, void* params)
        {
            return (*static_cast<const std::function<double(double)>*>(params))(x);
        }
    } // namespace

    double IntegratePiecewise(const std::function<double(double)>& f,
                              const std::vector<double>& cuts, double abs_tol)
    {
        if (cuts.size() < 2)
            return 0.0;

        // GSL's default handler aborts the process.
        static const gsl_error_handler_t* previous = gsl_set_error_handler_off();
        (void)previous;

        std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
            gsl_integration_workspace_alloc(kWorkspaceLimit));

        gsl_function fn;
        fn.function = &Trampoline;
        fn.params = const_cast<std::function<double(double)>*>(&f);

        const double piece_tol = abs_tol / static_cast<double>(cuts.size() - 1);
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); i++)
        {
            if (cuts[i + 1] == cuts[i])
                continue;
            double result = 0.0;
            double error = 0.0;
            int status = gsl_integration_qag(&fn, cuts[i], cuts[i + 1], piece_tol, 0.0,
                                             kWorkspaceLimit, GSL_INTEG_GAUSS21,
                                             ws.get(), &result, &error);
            if (status != GSL_SUCCESS && error > piece_tol)
                throw NumericalError(std::string("quadrature failed: ") + gsl_strerror(status), cuts[i]);
            total += result;
        }
        return total;
    }

    std::vector<double> MakeCuts(double t0, double t1, std::vector<double> extra,
                                 double max_width)
    {
        std::vector<double> marks{t0};
        std::sort(extra.begin(), extra.end());
        for (double e : extra)
            if (e > t0 && e < t1)
                marks.push_back(e);
        marks.push_back(t1);

        std::vector<double> cuts{t0};
        for (std::size_t i = 0; i + 1 < marks.size(); i++)
        {
            const double width = marks[i + 1] - marks[i];
            std::size_t pieces = 1;
            if (max_width > 0 && std::isfinite(max_width))
                pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(width / max_width)));
            for (std::size_t p = 1; p < pieces; p++)
                cuts.push_back(marks[i] + width * static_cast<double>(p) / static_cast<double>(pieces));
            cuts.push_back(marks[i + 1]);
        }
        return cuts;
    }

} // namespace pbg::detail
