#include "gkdv/equation.hpp"

#include <cmath>

namespace gkdv {

namespace {

constexpr double overflow_guard = 30.0;

using vals_t = std::vector<cdouble>;

// Fine-grid workspace: every nonlinear density is assembled pointwise on a
// pad_factor-times finer grid and truncated back once per output field.
struct Fine {
    Grid1D coarse;
    Grid1D fine;
    int pad;

    Fine(const Grid1D& g, int pad_factor)
        : coarse(g), fine(g.half_length(), g.size() * static_cast<std::size_t>(pad_factor)),
          pad(pad_factor) {}

    vals_t lift(const Field& f) const {
        return to_physical(pad_spectrum(f, pad)).data();
    }
    vals_t lift_deriv(const Field& f, int order) const {
        return lift(apply_multiplier(f, multipliers::derivative(order)));
    }
    // Running integral from -L of a fine-grid density (exact antiderivative
    // of the interpolant; mean handled as an explicit ramp).
    vals_t integral(const vals_t& density) const {
        return primitive_spectral(Field::from_values(fine, density)).data();
    }
    Field drop(vals_t density) const {
        return truncate_spectrum(Field::from_values(fine, std::move(density)), coarse);
    }
};

void guard_exponent(const vals_t& e, const char* label) {
    double sup = 0.0;
    for (const cdouble& v : e) sup = std::max(sup, std::abs(v));
    if (!(sup <= overflow_guard))
        throw NumericalError(std::string("gauge weight overflow in rhs (") + label +
                             "): sup of exponent is " + std::to_string(sup));
}

vals_t exp_of(const vals_t& e) {
    vals_t out(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) out[j] = std::exp(e[j]);
    return out;
}

}  // namespace

std::vector<std::string> state_names(Variant v) {
    switch (v) {
        case Variant::direct_kdv:
        case Variant::derivative_kdv:
        case Variant::quadratic: return {"u"};
        case Variant::coupled: return {"u", "v"};
        case Variant::double_gauged: return {"ug", "vg"};
        case Variant::quadratic_gauged: return {"u", "p", "w"};
    }
    throw ValidationError("unknown variant");
}

State initial_state(const Field& u0, const EquationSpec& spec, int pad_factor) {
    validate_spec(spec);
    GaugeBundle b = make_gauge_bundle(u0, spec, pad_factor);
    State z;
    switch (spec.variant) {
        case Variant::direct_kdv:
        case Variant::derivative_kdv:
        case Variant::quadratic:
            z.emplace("u", b.u);
            break;
        case Variant::coupled:
            z.emplace("u", b.u);
            z.emplace("v", *b.grad_gauged);
            break;
        case Variant::double_gauged:
            z.emplace("ug", *b.amp_gauged);
            z.emplace("vg", *b.grad_gauged);
            break;
        case Variant::quadratic_gauged:
            z.emplace("u", b.u);
            z.emplace("p", to_physical(apply_multiplier(b.u, multipliers::derivative(1))));
            z.emplace("w", *b.hess_gauged);
            break;
    }
    return z;
}

State rhs(const State& state, const EquationSpec& spec, int pad_factor) {
    validate_spec(spec);
    const auto names = state_names(spec.variant);
    if (state.size() != names.size())
        throw ValidationError("rhs: state has wrong field count for variant " +
                              variant_name(spec.variant));
    for (const auto& n : names)
        if (!state.count(n))
            throw ValidationError("rhs: state is missing field '" + n + "'");

    const Grid1D& g = state.begin()->second.grid();
    for (const auto& [n, f] : state)
        if (f.grid() != g) throw ValidationError("rhs: state fields on different grids");

    Fine ws(g, pad_factor);
    const std::size_t m = ws.fine.size();
    const double c1 = spec.c1, c2 = spec.c2, c3 = spec.c3, c4 = spec.c4;
    State out;

    switch (spec.variant) {
        case Variant::direct_kdv: {
            vals_t u = ws.lift(state.at("u"));
            vals_t du = ws.lift_deriv(state.at("u"), 1);
            vals_t d2u = ws.lift_deriv(state.at("u"), 2);
            vals_t r(m);
            for (std::size_t j = 0; j < m; ++j)
                r[j] = c1 * u[j] * d2u[j] + c2 * du[j] * du[j];
            out.emplace("u", ws.drop(std::move(r)));
            break;
        }
        case Variant::derivative_kdv: {
            // The equation the gradient obeys when c1 = 0.
            vals_t v = ws.lift(state.at("u"));
            vals_t dv = ws.lift_deriv(state.at("u"), 1);
            vals_t r(m);
            for (std::size_t j = 0; j < m; ++j) r[j] = 2.0 * c2 * v[j] * dv[j];
            out.emplace("u", ws.drop(std::move(r)));
            break;
        }
        case Variant::quadratic: {
            vals_t u = ws.lift(state.at("u"));
            vals_t du = ws.lift_deriv(state.at("u"), 1);
            vals_t d2u = ws.lift_deriv(state.at("u"), 2);
            vals_t r(m);
            for (std::size_t j = 0; j < m; ++j)
                r[j] = c1 * u[j] * d2u[j] + c2 * du[j] * du[j] +
                       c3 * du[j] * d2u[j] + c4 * d2u[j] * d2u[j];
            out.emplace("u", ws.drop(std::move(r)));
            break;
        }
        case Variant::coupled: {
            vals_t u = ws.lift(state.at("u"));
            vals_t du = ws.lift_deriv(state.at("u"), 1);
            vals_t v = ws.lift(state.at("v"));
            vals_t dv = ws.lift_deriv(state.at("v"), 1);
            vals_t lam(m);
            {
                vals_t iu = ws.integral(u);
                for (std::size_t j = 0; j < m; ++j) lam[j] = c1 * iu[j];
            }
            guard_exponent(lam, "coupled");
            vals_t el = exp_of(lam);
            // Window integral of the squared gradient; multiplies v, which
            // is edge-dead, so the ramp never meets a spectral derivative.
            vals_t sq(m);
            for (std::size_t j = 0; j < m; ++j) sq[j] = du[j] * du[j];
            vals_t J = ws.integral(sq);

            vals_t ru(m), rv(m);
            for (std::size_t j = 0; j < m; ++j) {
                const cdouble chain = dv[j] + c1 * u[j] * v[j];
                ru[j] = c1 * el[j] * u[j] * chain + c2 * el[j] * el[j] * v[j] * v[j];
                rv[j] = 2.0 * c2 * el[j] * v[j] * chain + c1 * c1 * u[j] * u[j] * dv[j] +
                        c1 * (c1 - c2) * v[j] * J[j] +
                        (2.0 / 3.0) * c1 * c1 * c1 * u[j] * u[j] * u[j] * v[j];
            }
            out.emplace("u", ws.drop(std::move(ru)));
            out.emplace("v", ws.drop(std::move(rv)));
            break;
        }
        case Variant::double_gauged: {
            vals_t ug = ws.lift(state.at("ug"));
            vals_t vg = ws.lift(state.at("vg"));
            vals_t dvg = ws.lift_deriv(state.at("vg"), 1);
            vals_t iug = ws.integral(ug);

            // Closed-form weights: e^{-amp exponent} = 1 - c2 * integral(ug),
            // which must stay positive on the window.
            vals_t eX(m), eT(m);
            const bool c2_small = std::abs(c2) < 1e-12;
            for (std::size_t j = 0; j < m; ++j) {
                const cdouble inv = 1.0 - c2 * iug[j];
                if (inv.real() <= 1e-12)
                    throw NumericalError("double_gauged: gauge weight lost positivity");
                eX[j] = 1.0 / inv;
                eT[j] = c2_small
                            ? std::exp((c1 - c2) * iug[j])
                            : std::exp(std::log(eX[j]) * ((c1 - c2) / c2));
            }
            {
                vals_t xi(m);
                for (std::size_t j = 0; j < m; ++j) xi[j] = std::log(eX[j]);
                guard_exponent(xi, "double_gauged amp");
                for (std::size_t j = 0; j < m; ++j) xi[j] = std::log(eT[j]);
                guard_exponent(xi, "double_gauged cross");
            }
            // Window integral whose integrand equals the squared gradient of
            // the ungauged unknown.
            vals_t sq(m);
            for (std::size_t j = 0; j < m; ++j) {
                const cdouble grad = eX[j] * eT[j] * vg[j] + c2 * eX[j] * eX[j] * ug[j] * ug[j];
                sq[j] = grad * grad;
            }
            vals_t J = ws.integral(sq);

            const double a1 = c1 * c1;
            const double a2 = 2.0 * c2 * (2.0 * c1 - c2);
            const double a3 = (2.0 / 3.0) * c1 * c1 * c1 + 8.0 * c1 * c2 * c2 -
                              4.0 * c2 * c2 * c2;
            const double a4 = c1 * (c1 - c2);
            const double a5 = 2.0 * c2 * c2 * c2 * (2.0 * c1 - c2);

            vals_t ru(m), rv(m);
            for (std::size_t j = 0; j < m; ++j) {
                const cdouble X = eX[j], T = eT[j], U = ug[j], V = vg[j];
                ru[j] = (c1 - c2) * X * T * U * dvg[j] + c1 * c1 * X * X * T * U * U * V +
                        (c1 - c2) * c2 * U * J[j] +
                        (c1 - c2 / 3.0) * c2 * c2 * X * X * X * U * U * U * U;
                rv[j] = a1 * X * X * U * U * dvg[j] + a2 * X * X * T * U * V * V +
                        a3 * X * X * X * U * U * U * V + a4 * V * J[j] +
                        a5 * (X * X * X * X / T) * U * U * U * U * U;
            }
            out.emplace("ug", ws.drop(std::move(ru)));
            out.emplace("vg", ws.drop(std::move(rv)));
            break;
        }
        case Variant::quadratic_gauged: {
            vals_t u = ws.lift(state.at("u"));
            vals_t p = ws.lift(state.at("p"));
            vals_t w = ws.lift(state.at("w"));
            vals_t dw = ws.lift_deriv(state.at("w"), 1);
            vals_t d2w = ws.lift_deriv(state.at("w"), 2);
            vals_t expo(m);
            for (std::size_t j = 0; j < m; ++j) expo[j] = 2.0 * c4 * p[j];
            guard_exponent(expo, "quadratic_gauged");
            vals_t E = exp_of(expo);

            vals_t ru(m), rp(m), rw(m);
            for (std::size_t j = 0; j < m; ++j) {
                const cdouble U = u[j], P = p[j], W = w[j], e = E[j];
                // chain = dw + 2 c4 e w^2, so that d_x^3 u = e * chain
                const cdouble chain = dw[j] + 2.0 * c4 * e * W * W;
                ru[j] = c1 * e * U * W + c2 * P * P + c3 * e * P * W + c4 * e * e * W * W;
                rp[j] = (c1 + 2.0 * c2) * e * P * W + (c1 * U + c3 * P) * e * chain +
                        c3 * e * e * W * W + 2.0 * c4 * e * e * W * chain;
                rw[j] = (c1 * U + c3 * P) * d2w[j]
                        + 2.0 * (c1 + c2) * P * dw[j]
                        + 3.0 * c3 * (e * W) * dw[j]
                        + 4.0 * c1 * c4 * U * (e * W) * dw[j]
                        + 4.0 * c3 * c4 * P * (e * W) * dw[j]
                        + 4.0 * c4 * c4 * (e * W) * (e * W) * dw[j]
                        + (c1 + 2.0 * c2) * e * W * W
                        + 2.0 * c1 * c4 * P * e * W * W
                        + 4.0 * c3 * c4 * e * e * W * W * W
                        + 4.0 * c1 * c4 * c4 * U * e * e * W * W * W
                        + 4.0 * c3 * c4 * c4 * P * e * e * W * W * W
                        + (16.0 / 3.0) * c4 * c4 * c4 * e * e * e * W * W * W * W;
            }
            out.emplace("u", ws.drop(std::move(ru)));
            out.emplace("p", ws.drop(std::move(rp)));
            out.emplace("w", ws.drop(std::move(rw)));
            break;
        }
    }
    return out;
}

}  // namespace gkdv
