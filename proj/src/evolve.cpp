#include "gkdv/evolve.hpp"

#include <cmath>

#include "gkdv/norms.hpp"

namespace gkdv {

namespace {

using coeffs = std::vector<cdouble>;
using coeffs_map = std::map<std::string, coeffs>;

coeffs airy_phase(const Grid1D& g, double t) {
    coeffs p(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double xi = g.xi(k);
        const double ph = t * xi * xi * xi / 3.0;
        p[k] = cdouble(std::cos(ph), std::sin(ph));
    }
    return p;
}

coeffs_map to_coeffs(const State& z) {
    coeffs_map out;
    for (const auto& [n, f] : z) out.emplace(n, to_frequency(f).data());
    return out;
}

State to_state(const Grid1D& g, const coeffs_map& z) {
    State out;
    for (const auto& [n, c] : z) out.emplace(n, Field::from_coeffs(g, c));
    return out;
}

coeffs_map eval_rhs(const Grid1D& g, const coeffs_map& z, const EquationSpec& spec,
                    int pad) {
    return to_coeffs(rhs(to_state(g, z), spec, pad));
}

void axpy(coeffs_map& y, double a, const coeffs_map& x) {
    for (auto& [n, v] : y) {
        const coeffs& xv = x.at(n);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += a * xv[k];
    }
}

coeffs_map phased(const coeffs_map& z, const coeffs& p) {
    coeffs_map out = z;
    for (auto& [n, v] : out)
        for (std::size_t k = 0; k < v.size(); ++k) v[k] *= p[k];
    return out;
}

double sup_of(const Grid1D& g, const coeffs& c) {
    return sup_norm(Field::from_coeffs(g, c));
}

// One integrating-factor RK4 step of d_t z = L z + N(z) with L conjugated
// away exactly by the half/full-step free propagators.
coeffs_map if_rk4_step(const Grid1D& g, const coeffs_map& z, double dt,
                       const EquationSpec& spec, int pad, const coeffs& half,
                       const coeffs& half_inv, const coeffs& full,
                       const coeffs& full_inv) {
    coeffs_map k1 = eval_rhs(g, z, spec, pad);

    coeffs_map s = z;
    axpy(s, dt / 2.0, k1);
    coeffs_map k2 = phased(eval_rhs(g, phased(s, half), spec, pad), half_inv);

    s = z;
    axpy(s, dt / 2.0, k2);
    coeffs_map k3 = phased(eval_rhs(g, phased(s, half), spec, pad), half_inv);

    s = z;
    axpy(s, dt, k3);
    coeffs_map k4 = phased(eval_rhs(g, phased(s, full), spec, pad), full_inv);

    s = z;
    axpy(s, dt / 6.0, k1);
    axpy(s, dt / 3.0, k2);
    axpy(s, dt / 3.0, k3);
    axpy(s, dt / 6.0, k4);
    return phased(s, full);
}

const std::string& primary_field(const State& z) {
    if (z.count("u")) return z.find("u")->first;
    return z.begin()->first;
}

struct SnapshotPlan {
    std::size_t snaps;      // number of snapshot intervals
    std::size_t steps_per;  // internal steps per snapshot interval
    double dt;              // signed internal step
    double dt_snap;         // signed snapshot spacing
};

SnapshotPlan plan_steps(double T, const StepperConfig& cfg) {
    if (T == 0.0) throw ValidationError("evolve: zero time horizon");
    if (cfg.scheme != "if_rk4")
        throw ValidationError("evolve: unknown scheme '" + cfg.scheme + "'");
    if (!(cfg.dt > 0.0) || !(cfg.dt_snap > 0.0))
        throw ValidationError("evolve: dt and dt_snap must be positive");
    if (cfg.dt > cfg.dt_snap * (1.0 + 1e-12))
        throw ValidationError("evolve: dt must not exceed dt_snap");
    const double Tabs = std::abs(T);
    const double snaps_real = Tabs / cfg.dt_snap;
    const auto snaps = static_cast<std::size_t>(std::llround(snaps_real));
    if (snaps < 1 || std::abs(snaps_real - static_cast<double>(snaps)) > 1e-9 * std::max(1.0, snaps_real))
        throw ValidationError("evolve: dt_snap must divide the horizon T");
    const double per_real = cfg.dt_snap / cfg.dt;
    const auto per = static_cast<std::size_t>(std::llround(per_real));
    if (per < 1 || std::abs(per_real - static_cast<double>(per)) > 1e-9 * per_real)
        throw ValidationError("evolve: dt must divide dt_snap");
    const double sign = T > 0.0 ? 1.0 : -1.0;
    return {snaps, per, sign * cfg.dt_snap / static_cast<double>(per),
            sign * cfg.dt_snap};
}

void check_gates(const State& z0, const EquationSpec& spec, double dt) {
    const Grid1D& g = z0.begin()->second.grid();
    double sup0 = 0.0;
    for (const auto& [n, f] : z0) sup0 = std::max(sup0, sup_norm(f));
    const double xi_max = g.nyquist_xi();
    if (dt * sup0 * xi_max * xi_max > 0.5)
        throw ValidationError(
            "evolve: CFL proxy dt * sup|u| * xi_max^2 exceeds 0.5 at start");
    if (spec.variant == Variant::coupled || spec.variant == Variant::double_gauged) {
        const std::string& name = z0.count("u") ? "u" : "ug";
        if (std::abs(mean_integral(z0.at(name))) >= 1e-8)
            throw ValidationError(
                "evolve: gauge-weighted variants require zero-mean data "
                "(window integral below 1e-8); recenter the datum first");
    }
}

}  // namespace

const Field& Trajectory::at(const std::string& name, std::size_t i) const {
    auto it = fields.find(name);
    if (it == fields.end())
        throw ValidationError("trajectory: unknown field '" + name + "'");
    if (i >= it->second.size())
        throw ValidationError("trajectory: snapshot index out of range");
    return it->second[i];
}

Trajectory evolve(const State& z0, double T, const StepperConfig& cfg,
                  const EquationSpec& spec) {
    validate_spec(spec);
    if (z0.empty()) throw ValidationError("evolve: empty state");
    const Grid1D g = z0.begin()->second.grid();
    const SnapshotPlan plan = plan_steps(T, cfg);
    check_gates(z0, spec, cfg.dt);

    const coeffs half = airy_phase(g, plan.dt / 2.0);
    const coeffs half_inv = airy_phase(g, -plan.dt / 2.0);
    const coeffs full = airy_phase(g, plan.dt);
    const coeffs full_inv = airy_phase(g, -plan.dt);

    Trajectory traj{g, std::abs(plan.dt_snap), {}, {}, spec, false, 0.0};
    const std::string primary = primary_field(z0);
    double sup0 = 0.0;
    for (const auto& [n, f] : z0) sup0 = std::max(sup0, sup_norm(f));

    coeffs_map z = to_coeffs(z0);
    auto record = [&](double t) {
        traj.times.push_back(t);
        for (const auto& [n, c] : z) {
            Field f = to_physical(Field::from_coeffs(g, c));
            const double edge =
                std::max(std::abs(f.data().front()), std::abs(f.data().back()));
            if (n == primary) traj.edge_drift_max = std::max(traj.edge_drift_max, edge);
            traj.fields[n].push_back(std::move(f));
        }
    };
    record(0.0);

    for (std::size_t snap = 1; snap <= plan.snaps; ++snap) {
        bool failed = false;
        try {
            for (std::size_t s = 0; s < plan.steps_per; ++s)
                z = if_rk4_step(g, z, plan.dt, spec, cfg.pad_factor, half, half_inv,
                                full, full_inv);
        } catch (const NumericalError&) {
            failed = true;  // gauge overflow mid-run: report the partial trajectory
        }
        double sup = 0.0;
        for (const auto& [n, c] : z) sup = std::max(sup, sup_of(g, c));
        if (failed || !std::isfinite(sup) || (sup0 > 0.0 && sup > 1e3 * sup0)) {
            traj.aborted = true;
            break;
        }
        record(static_cast<double>(snap) * plan.dt_snap);
    }
    return traj;
}

Trajectory free_trajectory(const State& z0, double T, const StepperConfig& cfg,
                           const EquationSpec& spec) {
    if (z0.empty()) throw ValidationError("free_trajectory: empty state");
    const Grid1D g = z0.begin()->second.grid();
    const SnapshotPlan plan = plan_steps(T, cfg);
    Trajectory traj{g, std::abs(plan.dt_snap), {}, {}, spec, false, 0.0};
    coeffs_map z = to_coeffs(z0);
    for (std::size_t j = 0; j <= plan.snaps; ++j) {
        const double t = static_cast<double>(j) * plan.dt_snap;
        const coeffs p = airy_phase(g, t);
        traj.times.push_back(t);
        for (const auto& [n, c] : z) {
            coeffs ct = c;
            for (std::size_t k = 0; k < ct.size(); ++k) ct[k] *= p[k];
            traj.fields[n].push_back(to_physical(Field::from_coeffs(g, ct)));
        }
    }
    return traj;
}

Trajectory fuse(const Trajectory& backward, const Trajectory& forward) {
    if (backward.grid != forward.grid)
        throw ValidationError("fuse: trajectories on different grids");
    if (backward.times.empty() || forward.times.empty() ||
        backward.times.front() != 0.0 || forward.times.front() != 0.0)
        throw ValidationError("fuse: both trajectories must start at time 0");
    if (backward.times.back() >= 0.0 || forward.times.back() <= 0.0)
        throw ValidationError("fuse: expected a backward and a forward run");
    if (std::abs(backward.dt_snap - forward.dt_snap) > 1e-12)
        throw ValidationError("fuse: snapshot spacings differ");

    Trajectory out{forward.grid, forward.dt_snap, {}, {}, forward.spec,
                   backward.aborted || forward.aborted,
                   std::max(backward.edge_drift_max, forward.edge_drift_max)};
    for (std::size_t i = backward.times.size(); i-- > 1;)
        out.times.push_back(backward.times[i]);
    out.times.insert(out.times.end(), forward.times.begin(), forward.times.end());
    for (const auto& [n, snaps] : forward.fields) {
        auto bit = backward.fields.find(n);
        if (bit == backward.fields.end())
            throw ValidationError("fuse: field sets differ");
        std::vector<Field> seq;
        for (std::size_t i = bit->second.size(); i-- > 1;) seq.push_back(bit->second[i]);
        seq.insert(seq.end(), snaps.begin(), snaps.end());
        out.fields.emplace(n, std::move(seq));
    }
    return out;
}

Field duhamel(const Trajectory& forcing, double t, const std::string& name) {
    if (forcing.times.size() < 2)
        throw ValidationError("duhamel: need at least two snapshots");
    if (forcing.times.front() != 0.0)
        throw ValidationError("duhamel: forcing must start at time 0");
    const double dt = forcing.times[1] - forcing.times[0];
    const double idx_real = t / dt;
    const auto idx = static_cast<std::size_t>(std::llround(idx_real));
    if (std::abs(idx_real - static_cast<double>(idx)) > 1e-9 ||
        idx >= forcing.times.size())
        throw ValidationError("duhamel: t must coincide with a snapshot time");
    const Grid1D& g = forcing.grid;
    const auto snaps = forcing.fields.find(name);
    if (snaps == forcing.fields.end())
        throw ValidationError("duhamel: unknown forcing field '" + name + "'");

    const coeffs p = airy_phase(g, dt);
    coeffs acc(g.size(), cdouble(0.0, 0.0));
    coeffs f_cur = to_frequency(snaps->second[0]).data();
    for (std::size_t j = 0; j < idx; ++j) {
        coeffs f_next = to_frequency(snaps->second[j + 1]).data();
        for (std::size_t k = 0; k < g.size(); ++k)
            acc[k] = p[k] * (acc[k] + 0.5 * dt * f_cur[k]) + 0.5 * dt * f_next[k];
        f_cur = std::move(f_next);
    }
    return Field::from_coeffs(g, std::move(acc));
}

namespace {

// Proxy distance between two snapshot sequences: the larger of the
// L_T^inf L_x^2 norm and the L_x^inf L_T^2 norm of the spatial gradient,
// maximized over the named fields.
double proxy_distance(const Grid1D& g, const std::vector<double>& times,
                      double dt_snap, const EquationSpec& spec,
                      const std::vector<coeffs_map>& A,
                      const std::vector<coeffs_map>& B) {
    Trajectory diff{g, dt_snap, times, {}, spec, false, 0.0};
    for (const auto& [n, c0] : A[0]) {
        std::vector<Field> seq;
        for (std::size_t j = 0; j < A.size(); ++j) {
            coeffs d = A[j].at(n);
            const coeffs& b = B[j].at(n);
            for (std::size_t k = 0; k < d.size(); ++k) d[k] -= b[k];
            seq.push_back(to_physical(Field::from_coeffs(g, d)));
        }
        diff.fields.emplace(n, std::move(seq));
    }
    const double inf = std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& [n, seq] : diff.fields) {
        worst = std::max(worst, mixed_norm(diff, n, {OuterVar::time, inf, 2.0, {}}));
        worst = std::max(
            worst, mixed_norm(diff, n,
                              {OuterVar::space, inf, 2.0, multipliers::derivative(1)}));
    }
    return worst;
}

}  // namespace

PicardResult picard(const Field& u0, double T, double tol, std::size_t max_iter,
                    const EquationSpec& spec, const StepperConfig& cfg) {
    if (spec.variant != Variant::coupled)
        throw ValidationError("picard: only the coupled variant is iterated");
    if (!(T > 0.0)) throw ValidationError("picard: horizon must be positive");
    State z0 = initial_state(u0, spec, cfg.pad_factor);
    check_gates(z0, spec, cfg.dt);
    const Grid1D g = z0.begin()->second.grid();
    const SnapshotPlan plan = plan_steps(T, cfg);
    const std::size_t M = plan.snaps + 1;

    std::vector<double> times(M);
    for (std::size_t j = 0; j < M; ++j) times[j] = static_cast<double>(j) * plan.dt_snap;

    // Free evolution of the data pair: the iteration's base point.
    const coeffs_map z0c = to_coeffs(z0);
    std::vector<coeffs_map> free(M);
    for (std::size_t j = 0; j < M; ++j) free[j] = phased(z0c, airy_phase(g, times[j]));

    const coeffs p = airy_phase(g, plan.dt_snap);
    auto apply_map = [&](const std::vector<coeffs_map>& zk) {
        // Psi(z): free part plus the Duhamel integral of rhs along z.
        std::vector<coeffs_map> F(M);
        for (std::size_t j = 0; j < M; ++j) F[j] = eval_rhs(g, zk[j], spec, cfg.pad_factor);
        std::vector<coeffs_map> out(M);
        coeffs_map acc = F[0];
        for (auto& [n, v] : acc) std::fill(v.begin(), v.end(), cdouble(0.0, 0.0));
        out[0] = free[0];
        for (std::size_t j = 1; j < M; ++j) {
            for (auto& [n, v] : acc) {
                const coeffs& fc = F[j - 1].at(n);
                const coeffs& fn = F[j].at(n);
                for (std::size_t k = 0; k < v.size(); ++k)
                    v[k] = p[k] * (v[k] + 0.5 * plan.dt_snap * fc[k]) +
                           0.5 * plan.dt_snap * fn[k];
            }
            out[j] = free[j];
            axpy(out[j], 1.0, acc);
        }
        return out;
    };

    std::vector<double> residuals;
    std::vector<double> ratios;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<coeffs_map> zk = free;
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::vector<coeffs_map> znext = apply_map(zk);
        const double r = proxy_distance(g, times, plan.dt_snap, spec, znext, zk);
        if (!residuals.empty() && residuals.back() > 0.0)
            ratios.push_back(r / residuals.back());
        residuals.push_back(r);
        zk = std::move(znext);
        iterations = it + 1;
        if (r < tol) {
            converged = true;
            break;
        }
    }

    Trajectory fixed{g, plan.dt_snap, times, {}, spec, false, 0.0};
    for (const auto& [n, c] : zk[0]) {
        std::vector<Field> seq;
        for (std::size_t j = 0; j < M; ++j)
            seq.push_back(to_physical(Field::from_coeffs(g, zk[j].at(n))));
        fixed.fields.emplace(n, std::move(seq));
    }
    const double fp_residual =
        proxy_distance(g, times, plan.dt_snap, spec, apply_map(zk), zk);
    return PicardResult{std::move(residuals), std::move(ratios), converged,
                        iterations,           std::move(fixed), fp_residual};
}

}  // namespace gkdv
