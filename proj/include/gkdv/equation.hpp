#pragma once

#include <map>
#include <string>
#include <vector>

#include "gkdv/gauge.hpp"

namespace gkdv {

// Named unknowns of a system; all fields share one grid.
using State = std::map<std::string, Field>;

// Field names each variant evolves:
//   direct_kdv / derivative_kdv / quadratic : {"u"}
//   coupled                                 : {"u", "v"}
//   double_gauged                           : {"ug", "vg"}
//   quadratic_gauged                        : {"u", "p", "w"}
std::vector<std::string> state_names(Variant v);

// Builds the full initial state from the primary datum u0 (physical):
// partner unknowns are derived through their gauge definitions.
State initial_state(const Field& u0, const EquationSpec& spec,
                    int pad_factor = 3);

// Nonlinear right-hand sides: d_t z = -(1/3) d_x^3 z + rhs(z).  Input fields
// may be in either representation; outputs are returned in frequency
// representation.  All products are dealiased on a pad_factor-times finer
// grid and window primitives are spectral antiderivatives.
State rhs(const State& state, const EquationSpec& spec, int pad_factor = 3);

}  // namespace gkdv
