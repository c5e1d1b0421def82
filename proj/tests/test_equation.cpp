// Right-hand-side table tests.  Closed forms on single cosine modes, the
// c1 = 0 reduction of the gradient equation, cross-variant consistency of
// the gauged systems, and the pointwise identities that say the gauge
// constraints are preserved instantaneously by the tables.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gkdv/equation.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/spectral.hpp"

using namespace gkdv;
namespace nums = std::numbers;

namespace {

template <typename F>
Field make_field(const Grid1D& g, F f) {
    std::vector<cdouble> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) v[j] = f(g.x(j));
    return Field::from_values(g, v);
}

Field gaussian_field(const Grid1D& g, double amp, double sigma) {
    return make_field(g, [&](double x) {
        return amp * std::exp(-(x / sigma) * (x / sigma));
    });
}

Field gaussian_deriv_field(const Grid1D& g, double amp) {
    return make_field(g, [&](double x) {
        return -2.0 * amp * x * std::exp(-x * x);
    });
}

double sup_diff(const Field& a, const Field& b) {
    Field pa = to_physical(a);
    Field pb = to_physical(b);
    double m = 0.0;
    for (std::size_t j = 0; j < pa.grid().size(); ++j)
        m = std::max(m, std::abs(pa.data()[j] - pb.data()[j]));
    return m;
}

Field deriv(const Field& u, int order) {
    return apply_multiplier(u, multipliers::derivative(order));
}

// d_t z = -(1/3) d_x^3 z + rhs(z), assembled for one named unknown.
Field time_derivative(const State& st, const EquationSpec& spec,
                      const std::string& name) {
    Field r = rhs(st, spec).at(name);
    Field d3 = deriv(st.at(name), 3);
    Field rp = to_physical(r);
    Field dp = to_physical(d3);
    std::vector<cdouble> v(rp.grid().size());
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = rp.data()[j] - dp.data()[j] / 3.0;
    return Field::from_values(rp.grid(), v);
}

}  // namespace

TEST_CASE("constant states are steady for the direct evolution") {
    Grid1D g(16.0, 64);
    Field c = make_field(g, [](double) { return 0.8; });
    EquationSpec spec{Variant::direct_kdv, 1.0, 0.5, 0.0, 0.0};
    State out = rhs({{"u", c}}, spec);
    CHECK(sup_norm(out.at("u")) < 1e-14);
}

TEST_CASE("single cosine mode has a closed-form right-hand side") {
    // u = cos x, c2 = 0: rhs = c1 u u'' = -c1 cos^2 x
    Grid1D g(nums::pi, 64);
    Field u = make_field(g, [](double x) { return std::cos(x); });
    EquationSpec spec{Variant::direct_kdv, 1.0, 0.0, 0.0, 0.0};
    Field r = rhs({{"u", u}}, spec).at("u");
    Field exact = make_field(g, [](double x) {
        return -std::cos(x) * std::cos(x);
    });
    CHECK(sup_diff(r, exact) < 1e-12);
    CHECK(max_imag(to_physical(r)) < 1e-13);

    // the gradient-squared term alone: c1 = 0 gives c2 sin^2 x
    EquationSpec spec2{Variant::direct_kdv, 0.0, 0.7, 0.0, 0.0};
    Field r2 = rhs({{"u", u}}, spec2).at("u");
    Field exact2 = make_field(g, [](double x) {
        return 0.7 * std::sin(x) * std::sin(x);
    });
    CHECK(sup_diff(r2, exact2) < 1e-12);
}

TEST_CASE("coupled system is steady when the primary unknown vanishes") {
    Grid1D g(16.0, 128);
    Field zero = make_field(g, [](double) { return 0.0; });
    Field v = make_field(g, [](double x) { return std::cos(nums::pi * x / 16.0); });
    EquationSpec spec{Variant::coupled, 1.0, 0.0, 0.0, 0.0};
    State out = rhs({{"u", zero}, {"v", v}}, spec);
    CHECK(sup_norm(out.at("u")) < 1e-14);
    CHECK(sup_norm(out.at("v")) < 1e-14);
}

TEST_CASE("gradient equation is the derivative of the c1 = 0 flow") {
    Grid1D g(16.0, 256);
    Field u = gaussian_field(g, 0.3, 1.0);
    EquationSpec direct{Variant::direct_kdv, 0.0, 0.6, 0.0, 0.0};
    EquationSpec grad{Variant::derivative_kdv, 0.0, 0.6, 0.0, 0.0};
    Field lhs = rhs({{"u", to_physical(deriv(u, 1))}}, grad).at("u");
    Field rhs_direct = rhs({{"u", u}}, direct).at("u");
    CHECK(sup_diff(lhs, deriv(rhs_direct, 1)) < 1e-12);
}

TEST_CASE("double gauge with no amplitude weight reduces to the coupled system") {
    Grid1D g(16.0, 256);
    Field u0 = gaussian_deriv_field(g, 0.2);
    EquationSpec coupled{Variant::coupled, 0.9, 0.0, 0.0, 0.0};
    EquationSpec dg{Variant::double_gauged, 0.9, 0.0, 0.0, 0.0};
    State sc = initial_state(u0, coupled);
    State sd = initial_state(u0, dg);
    CHECK(sup_diff(sc.at("u"), sd.at("ug")) < 1e-12);
    CHECK(sup_diff(sc.at("v"), sd.at("vg")) < 1e-12);
    State rc = rhs(sc, coupled);
    State rd = rhs(sd, dg);
    CHECK(sup_diff(rc.at("u"), rd.at("ug")) < 1e-10);
    CHECK(sup_diff(rc.at("v"), rd.at("vg")) < 1e-10);
}

TEST_CASE("coupled tables preserve the gauge constraint instantaneously") {
    // on the constraint v = e^{-Lambda} d_x u the tables must satisfy
    // d_x u_t = e^{Lambda} (c1 I[u_t] v + v_t) pointwise, where I is the
    // spectral window primitive and u_t, v_t are the assembled time
    // derivatives
    Grid1D g(32.0, 512);
    Field u0 = gaussian_deriv_field(g, 0.1);
    EquationSpec spec{Variant::coupled, 1.0, 0.0, 0.0, 0.0};
    State st = initial_state(u0, spec);
    Field ut = time_derivative(st, spec, "u");
    Field vt = time_derivative(st, spec, "v");
    Field dut = to_physical(deriv(ut, 1));
    Field prim = to_physical(primitive_spectral(st.at("u")));
    Field iut = to_physical(primitive_spectral(ut));
    Field vp = to_physical(st.at("v"));
    Field vtp = to_physical(vt);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        cdouble lhs = dut.data()[j];
        cdouble rhsv = std::exp(prim.data()[j].real()) *
                       (iut.data()[j] * vp.data()[j] + vtp.data()[j]);
        worst = std::max(worst, std::abs(lhs - rhsv));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("quadratic gauged tables keep the gradient unknown consistent") {
    // p = d_x u evolves by the derivative of the u equation
    Grid1D g(16.0, 256);
    Field u0 = gaussian_field(g, 0.1, 1.0);
    EquationSpec spec{Variant::quadratic_gauged, 0.6, 0.4, 0.3, 0.25};
    State st = initial_state(u0, spec);
    State out = rhs(st, spec);
    double scale = sup_norm(out.at("p"));
    CHECK(sup_diff(out.at("p"), deriv(out.at("u"), 1)) < 1e-9 * std::max(scale, 1e-30));
}

TEST_CASE("quadratic gauged tables preserve the hessian weight constraint") {
    // w = e^{-2 c4 d_x u} d_x^2 u, so the tables must satisfy
    // w_t = e^{-2 c4 d_x u} (d_x^2 u_t - 2 c4 d_x u_t d_x^2 u)
    Grid1D g(16.0, 256);
    Field u0 = gaussian_field(g, 0.1, 1.0);
    double c4 = 0.25;
    EquationSpec spec{Variant::quadratic_gauged, 0.6, 0.4, 0.3, c4};
    State st = initial_state(u0, spec);
    Field ut = time_derivative(st, spec, "u");
    Field wt = time_derivative(st, spec, "w");
    Field du = to_physical(deriv(st.at("u"), 1));
    Field d2u = to_physical(deriv(st.at("u"), 2));
    Field dut = to_physical(deriv(ut, 1));
    Field d2ut = to_physical(deriv(ut, 2));
    Field wtp = to_physical(wt);
    double worst = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        cdouble chain = std::exp(-2.0 * c4 * du.data()[j].real()) *
                        (d2ut.data()[j] -
                         2.0 * c4 * dut.data()[j] * d2u.data()[j]);
        worst = std::max(worst, std::abs(wtp.data()[j] - chain));
        scale = std::max(scale, std::abs(chain));
    }
    CHECK(worst < 1e-9 * scale);
}

TEST_CASE("malformed states are rejected") {
    Grid1D g(16.0, 64);
    Field u = gaussian_field(g, 0.1, 1.0);
    EquationSpec coupled{Variant::coupled, 1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(rhs({{"u", u}}, coupled), ValidationError);
    CHECK_THROWS_AS(rhs({{"u", u}, {"bogus", u}}, coupled), ValidationError);
    Grid1D g2(16.0, 128);
    Field w = gaussian_field(g2, 0.1, 1.0);
    CHECK_THROWS_AS(rhs({{"u", u}, {"v", w}}, coupled), ValidationError);
    EquationSpec direct{Variant::direct_kdv, 1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(rhs({{"v", u}}, direct), ValidationError);
}

TEST_CASE("state names follow the variant") {
    CHECK(state_names(Variant::direct_kdv) == std::vector<std::string>{"u"});
    CHECK(state_names(Variant::coupled) == std::vector<std::string>{"u", "v"});
    CHECK(state_names(Variant::double_gauged) ==
          std::vector<std::string>{"ug", "vg"});
    CHECK(state_names(Variant::quadratic_gauged) ==
          std::vector<std::string>{"u", "p", "w"});
}
