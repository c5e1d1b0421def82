#include "gkdv/gauge.hpp"

#include <cmath>
#include <numbers>

namespace gkdv {

namespace {

constexpr double overflow_guard = 30.0;  // e^30 nears the double dynamic range in products
constexpr double sqrt_two_pi = 2.5066282746310005024;

Field scaled(const Field& f, double a) {
    Field g = f;
    for (auto& v : g.data()) v *= a;
    return g;
}

Field pointwise_sum(const Field& a, const Field& b, double ca = 1.0, double cb = 1.0) {
    Field pa = to_physical(a), pb = to_physical(b);
    for (std::size_t j = 0; j < pa.data().size(); ++j)
        pa.data()[j] = ca * pa.data()[j] + cb * pb.data()[j];
    return pa;
}

}  // namespace

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::direct_kdv: return "direct_kdv";
        case Variant::derivative_kdv: return "derivative_kdv";
        case Variant::coupled: return "coupled";
        case Variant::double_gauged: return "double_gauged";
        case Variant::quadratic: return "quadratic";
        case Variant::quadratic_gauged: return "quadratic_gauged";
    }
    throw ValidationError("unknown variant");
}

Variant variant_from_name(const std::string& name) {
    for (Variant v : {Variant::direct_kdv, Variant::derivative_kdv, Variant::coupled,
                      Variant::double_gauged, Variant::quadratic, Variant::quadratic_gauged})
        if (variant_name(v) == name) return v;
    throw ValidationError("unknown variant name: " + name);
}

void validate_spec(const EquationSpec& spec) {
    const bool quad = spec.variant == Variant::quadratic ||
                      spec.variant == Variant::quadratic_gauged;
    if (!quad && (spec.c3 != 0.0 || spec.c4 != 0.0))
        throw ValidationError("c3 and c4 apply only to the quadratic family");
}

Field primitive(const Field& u) {
    Field p = to_physical(u);
    const Grid1D& g = p.grid();
    const double h = 0.5 * g.dx();
    std::vector<cdouble> out(g.size());
    out[0] = 0.0;
    for (std::size_t j = 1; j < g.size(); ++j)
        out[j] = out[j - 1] + h * (p.data()[j - 1] + p.data()[j]);
    return Field::from_values(g, std::move(out));
}

Field primitive_spectral(const Field& u) {
    Field c = to_frequency(u);
    const Grid1D& g = c.grid();
    const double mean = c.data()[0].real() * sqrt_two_pi / (2.0 * g.half_length());
    std::vector<cdouble> anti(g.size());
    anti[0] = 0.0;
    for (std::size_t k = 1; k < g.size(); ++k)
        anti[k] = c.data()[k] / cdouble(0.0, g.xi(k));
    Field tilde = to_physical(Field::from_coeffs(g, std::move(anti)));
    // Shift so the value at -L is 0 and add back the mean as an explicit
    // linear ramp (exact; never fed to spectral differentiation by callers
    // unless the mean vanishes).
    std::vector<cdouble> out(g.size());
    const cdouble base = tilde.data()[0];
    for (std::size_t j = 0; j < g.size(); ++j)
        out[j] = tilde.data()[j] - base + mean * (g.x(j) + g.half_length());
    return Field::from_values(g, std::move(out));
}

bool boundary_small(const Field& u) {
    Field p = to_physical(u);
    const double sup = sup_norm(p);
    if (sup == 0.0) return true;
    const double edge =
        std::max(std::abs(p.data().front()), std::abs(p.data().back()));
    return edge < 1e-8 * sup;
}

Field weighted_product(const Field& exponent, double scale,
                       const std::vector<Field>& factors, int pad_factor) {
    const Grid1D& g = exponent.grid();
    for (const Field& f : factors)
        if (f.grid() != g)
            throw ValidationError("weighted_product: factors live on different grids");
    double sup = sup_norm(exponent) * std::abs(scale);
    if (sup > overflow_guard)
        throw NumericalError("gauge weight overflow: sup of exponent is " +
                             std::to_string(sup));
    // The factors are band-limited fields, so their product is dealiased on
    // the padded grid.  The exponential weight is applied pointwise on the
    // caller's grid and never interpolated: primitives of mean-carrying
    // densities are not periodic, and padding their samples would put a
    // Gibbs tail of size O(mean/n) onto the weight.
    std::vector<cdouble> vals(g.size(), cdouble{1.0, 0.0});
    if (factors.size() == 1) {
        vals = to_physical(factors[0]).data();
    } else if (!factors.empty()) {
        vals = to_physical(product(factors, pad_factor)).data();
    }
    Field ep = to_physical(exponent);
    for (std::size_t j = 0; j < g.size(); ++j)
        vals[j] *= std::exp(scale * ep.data()[j]);
    return Field::from_values(g, std::move(vals));
}

GaugeBundle make_gauge_bundle(const Field& u, const EquationSpec& spec,
                              int pad_factor) {
    validate_spec(spec);
    GaugeBundle b{spec.variant, to_physical(u), primitive_spectral(u)};
    b.boundary_ok = boundary_small(u);

    auto note_exponent = [&b](const Field& e) {
        const double sup = sup_norm(e);
        b.max_exponent = std::max(b.max_exponent, sup);
        if (sup > overflow_guard)
            throw NumericalError("gauge weight overflow: sup of exponent is " +
                                 std::to_string(sup));
        return e;
    };

    Field du = to_physical(apply_multiplier(b.u, multipliers::derivative(1)));

    switch (spec.variant) {
        case Variant::direct_kdv:
        case Variant::derivative_kdv:
        case Variant::coupled: {
            b.grad_exponent = note_exponent(scaled(b.prim, spec.c1));
            b.grad_gauged = weighted_product(b.prim, -spec.c1, {du}, pad_factor);
            break;
        }
        case Variant::double_gauged: {
            b.grad_exponent = note_exponent(scaled(b.prim, spec.c1));
            b.amp_exponent = note_exponent(scaled(b.prim, spec.c2));
            b.cross_exponent = note_exponent(scaled(b.prim, spec.c1 - spec.c2));
            b.amp_gauged = weighted_product(b.prim, -spec.c2, {b.u}, pad_factor);
            Field usq = to_physical(product(b.u, b.u, pad_factor));
            b.grad_gauged = weighted_product(
                b.prim, -spec.c1, {pointwise_sum(du, usq, 1.0, -spec.c2)}, pad_factor);
            break;
        }
        case Variant::quadratic:
        case Variant::quadratic_gauged: {
            Field d2u = to_physical(apply_multiplier(b.u, multipliers::derivative(2)));
            b.hess_exponent = note_exponent(scaled(du, 2.0 * spec.c4));
            b.hess_gauged = weighted_product(du, -2.0 * spec.c4, {d2u}, pad_factor);
            b.mixed_exponent =
                note_exponent(pointwise_sum(scaled(b.prim, spec.c1), b.u, 1.0, spec.c3));
            Field dw =
                to_physical(apply_multiplier(*b.hess_gauged, multipliers::derivative(1)));
            b.hess_grad_gauged =
                weighted_product(*b.mixed_exponent, -1.0, {dw}, pad_factor);
            break;
        }
    }
    return b;
}

NormReport xs_norm(const Field& u, double s) {
    NormReport r;
    r.params["s"] = s;
    r.components["sobolev"] = hs_norm(u, s);
    r.components["primitive_sup"] = sup_norm(primitive(u));
    r.total = r.components["sobolev"] + r.components["primitive_sup"];
    return r;
}

}  // namespace gkdv
