#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include "pbg/types.hpp"

namespace pbg::detail
{
    // Dormand-Prince 5(4) with FSAL and elementary step control.
    // Integrates forward only; callers reflect time for backward runs.
    template <std::size_t N>
    class DormandPrince5
    {
    public:
        using State = std::array<Complex, N>;

        struct Options
        {
            double rel_tol = 1e-9;
            double abs_tol = 1e-12;
            std::size_t active = N; // components entering the error norm
            std::size_t max_steps = 5'000'000;
        };

        // Accepted step [t0, t0 + h]. At(t) evaluates the solution inside it
        // with a fresh fifth-order sub-step from t0, which is as accurate as
        // the step itself (the 4th-order interpolant is not, at tight tolerances).
        template <class Rhs>
        struct StepView
        {
            Rhs& rhs;
            double t0;
            double h;
            const State& y0;
            const State& k1;
            const State& y1;

            State At(double t) const
            {
                if (t == t0)
                    return y0;
                if (t == t0 + h)
                    return y1;
                return Probe(rhs, t0, y0, k1, t - t0);
            }
        };

        std::size_t accepted = 0;
        std::size_t rejected = 0;

        explicit DormandPrince5(Options opts) : m_opts(opts) {}

        // rhs(t, y, dy); max_step(t) -> ceiling for a step starting at t;
        // on_step(view) after each accepted step. `stops` are interior
        // times that no step may cross (coefficient discontinuities).
        template <class Rhs, class MaxStep, class OnStep>
        State Run(Rhs&& rhs, MaxStep&& max_step, OnStep&& on_step, State y,
                  double t, double t_end, std::span<const double> stops)
        {
            if (!(t_end > t))
                return y;

            State k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
            rhs(t, y, k1);

            double h = std::min(max_step(t), 1e-2 * (t_end - t));
            std::size_t next_stop = 0;
            bool last_rejected = false;

            for (std::size_t n = 0; t < t_end; n++)
            {
                if (n >= m_opts.max_steps)
                    throw NumericalError("integrator exceeded the maximum number of steps", t);

                while (next_stop < stops.size() && stops[next_stop] <= t)
                    next_stop++;
                const double barrier = next_stop < stops.size() ? std::min(stops[next_stop], t_end) : t_end;

                h = std::min(h, max_step(t));
                const double h_wanted = h;
                bool hits_barrier = false;
                if (t + h >= barrier || t + 1.01 * h >= barrier)
                {
                    h = barrier - t;
                    hits_barrier = true;
                }
                const double tiny = 16 * std::numeric_limits<double>::epsilon() *
                                    std::max(std::abs(t), std::abs(t_end));
                if (!hits_barrier && h < tiny)
                    throw NumericalError("step size underflow at t = " + std::to_string(t), t);

                auto stage = [&](State& out, std::initializer_list<std::pair<double, const State*>> terms) {
                    for (std::size_t i = 0; i < N; i++)
                    {
                        Complex acc = y[i];
                        for (const auto& [c, k] : terms)
                            acc += h * c * (*k)[i];
                        out[i] = acc;
                    }
                };

                stage(tmp, {{a21, &k1}});
                rhs(t + c2 * h, tmp, k2);
                stage(tmp, {{a31, &k1}, {a32, &k2}});
                rhs(t + c3 * h, tmp, k3);
                stage(tmp, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
                rhs(t + c4 * h, tmp, k4);
                stage(tmp, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
                rhs(t + c5 * h, tmp, k5);
                stage(tmp, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
                const double t_new = hits_barrier ? barrier : t + h;
                rhs(t_new, tmp, k6);
                stage(ynew, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
                rhs(t_new, ynew, k7);

                double err = 0.0;
                for (std::size_t i = 0; i < m_opts.active; i++)
                {
                    const Complex e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                           e6 * k6[i] + e7 * k7[i]);
                    const double sc = m_opts.abs_tol + m_opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                    const double q = std::abs(e) / sc;
                    err += q * q;
                }
                err = std::sqrt(err / static_cast<double>(m_opts.active));

                if (err <= 1.0)
                {
                    on_step(StepView<Rhs>{rhs, t, t_new - t, y, k1, ynew});

                    accepted++;
                    t = t_new;
                    y = ynew;
                    k1 = k7;

                    double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 10.0;
                    fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
                    h = h * fac;
                    if (hits_barrier)
                        h = std::max(h, h_wanted);
                    last_rejected = false;
                }
                else
                {
                    rejected++;
                    h = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
                    last_rejected = true;
                }
            }
            return y;
        }

    private:
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                    a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                    a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                                    a75 = -2187.0 / 6784, a76 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                    e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        // Fifth-order solution of a single step of size h from (t, y), no
        // error control.
        template <class Rhs>
        static State Probe(Rhs& rhs, double t, const State& y, const State& k1, double h)
        {
            State k2, k3, k4, k5, k6, tmp;
            auto stage = [&](State& out, std::initializer_list<std::pair<double, const State*>> terms) {
                for (std::size_t i = 0; i < N; i++)
                {
                    Complex acc = y[i];
                    for (const auto& [c, k] : terms)
                        acc += h * c * (*k)[i];
                    out[i] = acc;
                }
            };
            stage(tmp, {{a21, &k1}});
            rhs(t + c2 * h, tmp, k2);
            stage(tmp, {{a31, &k1}, {a32, &k2}});
            rhs(t + c3 * h, tmp, k3);
            stage(tmp, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
            rhs(t + c4 * h, tmp, k4);
            stage(tmp, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
            rhs(t + c5 * h, tmp, k5);
            stage(tmp, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
            rhs(t + h, tmp, k6);
            State out;
            stage(out, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
            return out;
        }

        Options m_opts;
    };

} // namespace pbg::detail
