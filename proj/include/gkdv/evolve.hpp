#pragma once

#include "gkdv/equation.hpp"

namespace gkdv {

struct StepperConfig {
    double dt = 1e-3;       // internal step
    double dt_snap = 1e-2;  // snapshot spacing; integer multiple of dt
    int pad_factor = 3;
    std::string scheme = "if_rk4";
};

// Snapshots of an evolution.  times run 0, dt_snap, ..., T (T may be
// negative: times then decrease).  Fields are stored in physical
// representation and are real for real data.
struct Trajectory {
    Grid1D grid;
    double dt_snap = 0.0;
    std::vector<double> times;
    std::map<std::string, std::vector<Field>> fields;
    EquationSpec spec;
    bool aborted = false;          // blow-up detector fired; trajectory is partial
    double edge_drift_max = 0.0;   // max over time of |u| at the window edges

    std::size_t snapshots() const { return times.empty() ? 0 : times.size(); }
    const Field& at(const std::string& name, std::size_t i) const;
    double horizon() const { return times.empty() ? 0.0 : times.back(); }
};

// Integrating-factor RK4: the stiff third-derivative term is conjugated
// away exactly by the free propagator; only the nonlinearity is stepped.
// Throws ValidationError when the CFL proxy dt * sup|u| * xi_max^2 > 0.5 at
// start, or when a gauge-weighted variant is fed data whose window integral
// is not zero (|mean integral| >= 1e-8).
Trajectory evolve(const State& z0, double T, const StepperConfig& cfg,
                  const EquationSpec& spec);

// Free linear trajectory of the same shape (every named field propagated by
// the Airy group), used as the Picard starting point.
Trajectory free_trajectory(const State& z0, double T, const StepperConfig& cfg,
                           const EquationSpec& spec);

// Merge a backward-in-time run (T < 0) with a forward run into one
// trajectory on the symmetric window; times are reindexed to -T..T.
Trajectory fuse(const Trajectory& backward, const Trajectory& forward);

// integral_0^t of U(t - t') F(t') dt' by trapezoid over the stored
// snapshots of the named forcing field; t must coincide with a snapshot
// time (within 1e-9).
Field duhamel(const Trajectory& forcing, double t, const std::string& name = "u");

struct PicardResult {
    std::vector<double> residuals;   // successive-difference proxy norms r_k
    std::vector<double> ratios;      // r_{k+1} / r_k
    bool converged = false;
    std::size_t iterations = 0;
    Trajectory fixed_point;
    double fixed_point_residual = 0.0;  // proxy distance of z from Psi(z)
};

// Picard iteration for the coupled variant: z^{k+1} = free + Duhamel of
// rhs(z^k), starting from the free evolution with the gauged-gradient
// partner built from u0.  Divergence is a reported outcome, not an error.
PicardResult picard(const Field& u0, double T, double tol, std::size_t max_iter,
                    const EquationSpec& spec, const StepperConfig& cfg);

}  // namespace gkdv
