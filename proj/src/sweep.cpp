#include "pbg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace pbg
{
    void VelocityRange::Validate() const
    {
        const bool single = count == 1 && lo == hi;
        if (!single && (!(lo < hi) || count < 2))
            throw ConfigError("velocity range must be increasing with at least 2 points, or a single point lo == hi");
        if (!(lo > 0))
            throw ConfigError("velocity range must be positive");
    }

    std::vector<double> VelocityRange::Points() const
    {
        Validate();
        if (count == 1)
            return {lo};
        return UniformGrid(lo, hi, count);
    }

    const SweepPoint& SweepResult::At(std::size_t ib, std::size_t ic) const
    {
        const std::size_t nc = std::max<std::size_t>(1, vc_axis.size());
        return points.at(ib * nc + ic);
    }

    RunConfig WithSpeeds(const RunConfig& base, double vb, std::optional<double> vc)
    {
        RunConfig cfg = base;
        const auto b = AtomOnHole(cfg, "B");
        if (!b)
            throw ConfigError("configuration has no atom on hole B");
        cfg.atoms[*b].speed_mps = vb;
        if (vc)
        {
            const auto c = AtomOnHole(cfg, "C");
            if (!c)
                throw ConfigError("configuration has no atom on hole C");
            cfg.atoms[*c].speed_mps = *vc;
        }
        return cfg;
    }

    ExcitationState SimulateFinal(const RunConfig& config)
    {
        SimulationProblem problem = BuildProblem(config);
        problem.output_grid = {problem.t_begin, problem.t_end};
        return FinalState(Integrate(problem));
    }

    void ParallelFor(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn)
    {
        if (threads == 0)
            threads = std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

        std::atomic<std::size_t> next{0};
        std::mutex mutex;
        std::size_t failed_index = std::numeric_limits<std::size_t>::max();
        std::exception_ptr failure;

        auto worker = [&]() {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(mutex);
                    if (i < failed_index)
                    {
                        failed_index = i;
                        failure = std::current_exception();
                    }
                }
            }
        };

        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; t++)
                pool.emplace_back(worker);
            for (auto& th : pool)
                th.join();
        }
        if (failure)
            std::rethrow_exception(failure);
    }

    namespace
    {
        std::string Coordinates(double vb, std::optional<double> vc)
        {
            std::ostringstream os;
            os << "v_B = " << vb << " m/s";
            if (vc)
                os << ", v_C = " << *vc << " m/s";
            return os.str();
        }

        SweepPoint Evaluate(const RunConfig& base, double vb, std::optional<double> vc)
        {
            SweepPoint p;
            p.vb = vb;
            p.vc = vc;
            try
            {
                p.state = SimulateFinal(WithSpeeds(base, vb, vc));
            }
            catch (const NumericalError& e)
            {
                throw NumericalError(std::string(e.what()) + " (at " + Coordinates(vb, vc) + ")", e.time());
            }
            p.report = MakeReport(p.state);
            return p;
        }

        void CheckBracket(const Bracket& b, const char* name)
        {
            if (!(b.lo > 0) || !(b.hi >= b.lo) || !std::isfinite(b.hi))
                throw ConfigError(std::string(name) + " bracket must satisfy 0 < lo <= hi");
        }

        std::vector<double> BracketPoints(const Bracket& b, std::size_t n)
        {
            if (b.lo == b.hi || n < 2)
                return {b.lo};
            return UniformGrid(b.lo, b.hi, n);
        }

        std::size_t ExpectAtoms(const RunConfig& base, std::size_t n, const char* what)
        {
            ValidateRunConfig(base);
            if (base.atoms.size() != n)
                throw ConfigError(std::string(what) + " requires a " + std::to_string(n) + "-atom configuration");
            return n;
        }
    } // namespace

    SweepResult RunSweep(const SweepSpec& spec, unsigned threads)
    {
        ValidateRunConfig(spec.base);
        SweepResult result;
        result.vb_axis = spec.vb.Points();
        if (spec.vc)
            result.vc_axis = spec.vc->Points();

        const std::size_t nb = result.vb_axis.size();
        const std::size_t nc = std::max<std::size_t>(1, result.vc_axis.size());
        result.points.resize(nb * nc);

        ParallelFor(nb * nc, threads, [&](std::size_t idx) {
            const std::size_t ib = idx / nc;
            const std::size_t ic = idx % nc;
            std::optional<double> vc;
            if (spec.vc)
                vc = result.vc_axis[ic];
            result.points[idx] = Evaluate(spec.base, result.vb_axis[ib], vc);
        });

        nlohmann::json canonical = {{"config", ToJson(spec.base)},
                                    {"vb", {spec.vb.lo, spec.vb.hi, spec.vb.count}}};
        if (spec.vc)
            canonical["vc"] = {spec.vc->lo, spec.vc->hi, spec.vc->count};
        result.config_hash = ConfigHash(canonical.dump());
        result.timestamp = UtcTimestamp();
        return result;
    }

    double BellObjective(const ExcitationState& state)
    {
        if (state.atom_amps.size() != 2)
            throw std::invalid_argument("Bell objective requires a two-atom state");
        const double pa = std::norm(state.atom_amps[0]);
        const double pb = std::norm(state.atom_amps[1]);
        return std::norm(state.photon_amp) + (pa - 0.5) * (pa - 0.5) + (pb - 0.5) * (pb - 0.5);
    }

    double WObjective(const ExcitationState& state)
    {
        if (state.atom_amps.size() != 3)
            throw std::invalid_argument("W objective requires a three-atom state");
        double w = std::norm(state.photon_amp);
        for (const auto& a : state.atom_amps)
        {
            const double d = std::norm(a) - 1.0 / 3.0;
            w += d * d;
        }
        return w;
    }

    bool BellTargetMet(const FinalStateReport& r)
    {
        return r.populations.size() == 2 && r.photon_prob <= kBellPhotonMax &&
               std::abs(r.populations[0] - 0.5) <= kBellPopulationTol &&
               std::abs(r.populations[1] - 0.5) <= kBellPopulationTol;
    }

    bool WTargetMet(const FinalStateReport& r)
    {
        if (r.populations.size() != 3 || r.photon_prob > kWPhotonMax)
            return false;
        return std::all_of(r.populations.begin(), r.populations.end(),
                           [](double p) { return std::abs(p - 1.0 / 3.0) <= kWPopulationTol; });
    }

    SearchResult SearchBellVelocity(const RunConfig& base, Bracket vb, const SearchOptions& opts)
    {
        ExpectAtoms(base, 2, "Bell search");
        CheckBracket(vb, "v_B");

        const auto grid = BracketPoints(vb, opts.grid_points);
        std::vector<SweepPoint> coarse(grid.size());
        ParallelFor(grid.size(), opts.threads,
                    [&](std::size_t i) { coarse[i] = Evaluate(base, grid[i], std::nullopt); });

        SearchResult best;
        best.objective = std::numeric_limits<double>::infinity();
        std::size_t best_index = 0;
        auto consider = [&](const SweepPoint& p) {
            best.evaluations++;
            const double w = BellObjective(p.state);
            if (w < best.objective)
            {
                best.objective = w;
                best.vb = p.vb;
                best.state = p.state;
                best.report = p.report;
            }
            return w;
        };
        for (std::size_t i = 0; i < coarse.size(); i++)
        {
            const double before = best.objective;
            consider(coarse[i]);
            if (best.objective < before)
                best_index = i;
        }
        best.best_grid_objective = best.objective;

        if (grid.size() > 1)
        {
            // Golden-section search on the two grid cells around the best node.
            double a = grid[best_index == 0 ? 0 : best_index - 1];
            double b = grid[std::min(best_index + 1, grid.size() - 1)];
            const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
            double c = b - inv_phi * (b - a);
            double d = a + inv_phi * (b - a);
            double fc = consider(Evaluate(base, c, std::nullopt));
            double fd = consider(Evaluate(base, d, std::nullopt));
            while (b - a > opts.resolution)
            {
                if (fc < fd)
                {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    fc = consider(Evaluate(base, c, std::nullopt));
                }
                else
                {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    fd = consider(Evaluate(base, d, std::nullopt));
                }
            }
        }

        best.target_met = BellTargetMet(best.report);
        return best;
    }

    SearchResult SearchWVelocities(const RunConfig& base, Bracket vb, Bracket vc, const SearchOptions& opts)
    {
        ExpectAtoms(base, 3, "W search");
        CheckBracket(vb, "v_B");
        CheckBracket(vc, "v_C");

        const auto gb = BracketPoints(vb, opts.grid_points);
        const auto gc = BracketPoints(vc, opts.grid_points);
        std::vector<SweepPoint> coarse(gb.size() * gc.size());
        ParallelFor(coarse.size(), opts.threads, [&](std::size_t idx) {
            coarse[idx] = Evaluate(base, gb[idx / gc.size()], gc[idx % gc.size()]);
        });

        SearchResult best;
        best.objective = std::numeric_limits<double>::infinity();
        auto consider = [&](const SweepPoint& p) {
            best.evaluations++;
            const double w = WObjective(p.state);
            if (w < best.objective)
            {
                best.objective = w;
                best.vb = p.vb;
                best.vc = p.vc;
                best.state = p.state;
                best.report = p.report;
            }
            return w;
        };
        for (const auto& p : coarse)
            consider(p);
        best.best_grid_objective = best.objective;

        double step_b = gb.size() > 1 ? (gb[1] - gb[0]) / 2 : 0.0;
        double step_c = gc.size() > 1 ? (gc[1] - gc[0]) / 2 : 0.0;
        while (std::max(step_b, step_c) >= opts.resolution)
        {
            const double cb = best.vb;
            const double cc = *best.vc;
            const double current = best.objective;
            const std::pair<double, double> moves[] = {{step_b, 0}, {-step_b, 0}, {0, step_c}, {0, -step_c}};
            for (const auto& [db, dc] : moves)
            {
                if (db == 0 && dc == 0)
                    continue;
                const double nb = std::clamp(cb + db, vb.lo, vb.hi);
                const double nc = std::clamp(cc + dc, vc.lo, vc.hi);
                if (nb == cb && nc == cc)
                    continue;
                consider(Evaluate(base, nb, nc));
            }
            if (!(best.objective < current))
            {
                step_b /= 2;
                step_c /= 2;
            }
        }

        best.target_met = WTargetMet(best.report);
        return best;
    }

    double MaxPopulationShift(const RunConfig& base, double vb, double vc, double dv)
    {
        const ExcitationState centre = SimulateFinal(WithSpeeds(base, vb, vc));
        std::vector<std::pair<double, double>> offsets;
        for (int i = -1; i <= 1; i++)
            for (int k = -1; k <= 1; k++)
                if (i != 0 || k != 0)
                    offsets.emplace_back(i * dv, k * dv);

        std::vector<double> shifts(offsets.size(), 0.0);
        ParallelFor(offsets.size(), 0, [&](std::size_t n) {
            const auto s = SimulateFinal(WithSpeeds(base, vb + offsets[n].first, vc + offsets[n].second));
            for (std::size_t j = 0; j < s.atom_amps.size(); j++)
                shifts[n] = std::max(shifts[n], std::abs(std::norm(s.atom_amps[j]) - std::norm(centre.atom_amps[j])));
        });
        return *std::max_element(shifts.begin(), shifts.end());
    }

    std::string ConfigHash(const std::string& canonical)
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char ch : canonical)
        {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        std::ostringstream os;
        os << std::hex << std::setw(16) << std::setfill('0') << h;
        return os.str();
    }

    std::string UtcTimestamp()
    {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::ostringstream os;
        os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
        return os.str();
    }

} // namespace pbg
