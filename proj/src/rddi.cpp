#include "pbg/rddi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "quadrature.hpp"

namespace pbg
{
    SeparationGeometry SeparationGeometry::Between(const Vec3& from, const Vec3& to)
    {
        SeparationGeometry sep;
        sep.r_vec = to - from;
        sep.distance = sep.r_vec.norm();
        if (!(sep.distance > 0))
            throw std::invalid_argument("RDDI undefined for coincident atoms");
        sep.unit = sep.r_vec / sep.distance;
        return sep;
    }

    bool InteractionBox::Contains(const Vec3& r) const
    {
        return ((r - center).cwiseAbs().array() <= side / 2).all();
    }

    double JCoupling(const Vec3& dipole_a_dir, const Vec3& dipole_b_dir,
                     double dipole_mag, const SeparationGeometry& sep,
                     double omega, const PhysicalConstants& consts)
    {
        const double R = sep.distance;
        if (!(R > 0))
            throw std::invalid_argument("RDDI undefined at zero separation");

        const double kR = omega / consts.c * R;
        const double ab = dipole_a_dir.dot(dipole_b_dir);
        const double aR = dipole_a_dir.dot(sep.unit);
        const double bR = dipole_b_dir.dot(sep.unit);
        const double near = (ab - 3 * aR * bR) * (std::cos(kR) + kR * std::sin(kR));
        const double far = (ab - aR * bR) * kR * kR * std::cos(kR);

        const double prefactor = dipole_mag * dipole_mag / (4 * kPi * consts.epsilon0 * R * R * R);
        return prefactor * (near - far) / consts.hbar;
    }

    double JCouplingAtTime(const AtomSpec& atom_a, const AtomSpec& atom_b,
                           double t, const RddiOptions& options)
    {
        const Vec3 ra = PositionAt(atom_a.trajectory, t);
        const Vec3 rb = PositionAt(atom_b.trajectory, t);
        if (options.box && !(options.box->Contains(ra) && options.box->Contains(rb)))
            return 0.0;

        const auto sep = SeparationGeometry::Between(ra, rb);
        const double mu = std::sqrt(atom_a.dipole_mag * atom_b.dipole_mag);
        return JCoupling(atom_a.dipole_dir, atom_b.dipole_dir, mu, sep, atom_a.omega, options.consts);
    }

    namespace
    {
        // Interval of t for which the straight line stays inside the box.
        std::pair<double, double> SlabWindow(const Trajectory& traj, const InteractionBox& box)
        {
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            const double half = box.side / 2;
            for (int i = 0; i < 3; i++)
            {
                const double p = traj.r0[i] - box.center[i];
                const double v = traj.v[i];
                if (v == 0)
                {
                    if (std::abs(p) > half)
                        return {1.0, 0.0};
                    continue;
                }
                double ta = (-half - p) / v;
                double tb = (half - p) / v;
                if (ta > tb)
                    std::swap(ta, tb);
                lo = std::max(lo, ta);
                hi = std::min(hi, tb);
            }
            return {lo, hi};
        }
    } // namespace

    std::optional<std::pair<double, double>> BoxWindow(
        const AtomSpec& atom_a, const AtomSpec& atom_b,
        const InteractionBox& box, double t0, double t1)
    {
        const auto [a0, a1] = SlabWindow(atom_a.trajectory, box);
        const auto [b0, b1] = SlabWindow(atom_b.trajectory, box);
        const double lo = std::max({a0, b0, t0});
        const double hi = std::min({a1, b1, t1});
        if (!(lo < hi))
            return std::nullopt;
        return std::make_pair(lo, hi);
    }

    double RddiPulseArea(const AtomSpec& atom_a, const AtomSpec& atom_b,
                         double t0, double t1, const RddiOptions& options,
                         double abs_tol)
    {
        if (t1 < t0)
            throw std::invalid_argument("RDDI pulse area requires t1 >= t0");

        double lo = t0;
        double hi = t1;
        if (options.box)
        {
            const auto window = BoxWindow(atom_a, atom_b, *options.box, t0, t1);
            if (!window)
                return 0.0;
            std::tie(lo, hi) = *window;
        }

        // Refine around the closest approach, where J peaks on the scale R_min / v_rel.
        std::vector<double> extra;
        const Vec3 dr0 = atom_b.trajectory.r0 - atom_a.trajectory.r0;
        const Vec3 dv = atom_b.trajectory.v - atom_a.trajectory.v;
        if (dv.squaredNorm() > 0)
        {
            const double tc = -dr0.dot(dv) / dv.squaredNorm();
            const double rmin = (dr0 + dv * tc).norm();
            const double scale = rmin / dv.norm();
            extra.push_back(tc);
            for (double m : {1.0, 3.0, 10.0, 30.0, 100.0, 300.0})
            {
                extra.push_back(tc - m * scale);
                extra.push_back(tc + m * scale);
            }
        }

        const auto cuts = detail::MakeCuts(lo, hi, extra, std::numeric_limits<double>::infinity());
        return detail::IntegratePiecewise(
            [&](double t) { return JCouplingAtTime(atom_a, atom_b, t, options); }, cuts, abs_tol);
    }

} // namespace pbg
