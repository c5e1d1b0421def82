#include "gkdv/spectral.hpp"

#include <cmath>
#include <utility>

namespace gkdv {

namespace multipliers {

MultiplierSpec identity() {
    return {[](double) { return cdouble(1.0, 0.0); }, "identity"};
}

MultiplierSpec derivative(int order) {
    if (order < 1) throw ValidationError("derivative multiplier: order must be >= 1");
    return {[order](double xi) {
                cdouble ix(0.0, xi);
                cdouble r(1.0, 0.0);
                for (int i = 0; i < order; ++i) r *= ix;
                return r;
            },
            "d" + std::to_string(order)};
}

MultiplierSpec bessel(double s) {
    return {[s](double xi) { return cdouble(std::pow(1.0 + xi * xi, 0.5 * s), 0.0); },
            "bessel"};
}

MultiplierSpec riesz(double s) {
    // |xi|^s with the zero mode annihilated, so negative s stays finite.
    return {[s](double xi) {
                if (xi == 0.0) return cdouble(0.0, 0.0);
                return cdouble(std::pow(std::abs(xi), s), 0.0);
            },
            "riesz"};
}

MultiplierSpec airy(double t) {
    return {[t](double xi) {
                const double phase = t * xi * xi * xi / 3.0;
                return cdouble(std::cos(phase), std::sin(phase));
            },
            "airy"};
}

}  // namespace multipliers

Field apply_multiplier(const Field& f, const MultiplierSpec& m) {
    Field c = to_frequency(f);
    const Grid1D& g = c.grid();
    for (std::size_t k = 0; k < g.size(); ++k) c.data()[k] *= m.symbol(g.xi(k));
    return transform(c, f.rep());
}

Field airy_propagate(const Field& f, double t) {
    return apply_multiplier(f, multipliers::airy(t));
}

Field littlewood_paley(const Field& f, double block) {
    const Grid1D& g = f.grid();
    const double nyq = g.nyquist_xi();
    if (block != 0.0) {
        int exp2 = 0;
        const double mant = std::frexp(block, &exp2);
        if (block < 2.0 || mant != 0.5)
            throw ValidationError("littlewood_paley: block must be 0 (low) or a power of two >= 2");
        if (!(block / 2.0 < nyq))
            throw ValidationError("littlewood_paley: block lies beyond the Nyquist frequency");
    }
    Field c = to_frequency(f);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double a = std::abs(g.xi(k));
        const bool keep = block == 0.0 ? (a <= 1.0) : (block / 2.0 < a && a <= block);
        if (!keep) c.data()[k] = 0.0;
    }
    return transform(c, f.rep());
}

std::vector<double> admissible_blocks(const Grid1D& g) {
    std::vector<double> out{0.0};
    // The top block is clipped at Nyquist, so these blocks tile every
    // representable frequency: reassembly is exact for any grid field.
    for (double N = 2.0; N / 2.0 < g.nyquist_xi(); N *= 2.0) out.push_back(N);
    return out;
}

Field pad_spectrum(const Field& f, int pad_factor) {
    if (pad_factor < 1) throw ValidationError("pad_spectrum: pad_factor must be >= 1");
    Field c = to_frequency(f);
    const Grid1D& g = c.grid();
    const std::size_t n = g.size();
    Grid1D fine(g.half_length(), n * static_cast<std::size_t>(pad_factor));
    std::vector<cdouble> out(fine.size(), cdouble(0.0, 0.0));
    // Unitary coefficients approximate the continuum transform, so they move
    // between grids unscaled; the Nyquist mode -n/2 travels as is.
    for (std::size_t k = 0; k < n; ++k) {
        const long long m = g.mode(k);
        const std::size_t slot =
            m >= 0 ? static_cast<std::size_t>(m)
                   : fine.size() - static_cast<std::size_t>(-m);
        out[slot] = c.data()[k];
    }
    return Field::from_coeffs(fine, std::move(out));
}

Field truncate_spectrum(const Field& f, const Grid1D& coarse) {
    Field c = to_frequency(f);
    const Grid1D& fine = c.grid();
    if (fine.half_length() != coarse.half_length())
        throw ValidationError("truncate_spectrum: grids cover different intervals");
    if (fine.size() < coarse.size())
        throw ValidationError("truncate_spectrum: target grid is finer than the source");
    const std::size_t n = coarse.size();
    std::vector<cdouble> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long long m = coarse.mode(k);
        const std::size_t slot =
            m >= 0 ? static_cast<std::size_t>(m)
                   : fine.size() - static_cast<std::size_t>(-m);
        out[k] = c.data()[slot];
    }
    // Fold the fine +n/2 mode into the coarse Nyquist slot (which stores
    // -n/2): both restrict to (-1)^j on the coarse nodes, and the fold keeps
    // real products real.  pad_spectrum leaves +n/2 empty, so the pad ->
    // truncate round trip stays the exact identity.
    if (fine.size() > n) out[n / 2] += c.data()[n / 2];
    return Field::from_coeffs(coarse, std::move(out));
}

Field product(const std::vector<Field>& factors, int pad_factor) {
    if (factors.empty()) throw ValidationError("product: no factors");
    const Grid1D& g = factors.front().grid();
    for (const Field& f : factors)
        if (f.grid() != g) throw ValidationError("product: factors live on different grids");
    const int degree = static_cast<int>(factors.size());
    if (2 * pad_factor - 1 < degree)
        throw ValidationError("product: pad_factor " + std::to_string(pad_factor) +
                              " cannot dealias a degree-" + std::to_string(degree) +
                              " product");
    Field acc = to_physical(pad_spectrum(factors.front(), pad_factor));
    for (std::size_t i = 1; i < factors.size(); ++i) {
        Field fi = to_physical(pad_spectrum(factors[i], pad_factor));
        for (std::size_t j = 0; j < acc.data().size(); ++j) acc.data()[j] *= fi.data()[j];
    }
    return truncate_spectrum(to_frequency(acc), g);
}

Field product(const Field& a, const Field& b, int pad_factor) {
    return product(std::vector<Field>{a, b}, pad_factor);
}

Field dealias(const Field& f, int pad_factor) {
    if (pad_factor < 2) throw ValidationError("dealias: pad_factor must be >= 2");
    return transform(truncate_spectrum(pad_spectrum(f, pad_factor), f.grid()), f.rep());
}

}  // namespace gkdv
