#pragma once

#include <vector>

#include "borelsum/multi_index.hpp"
#include "borelsum/types.hpp"

namespace borelsum {

/// Truncated Taylor expansion around a fixed point: a[d] = f^(d)(x0) / d!.
/// All operations truncate to the shorter operand length (or an explicit L).
/// Jets remove every numerical differentiation from the order-by-order
/// recursions: d/dx is an exact coefficient shift.
using Jet = std::vector<cx>;

Jet jet_const(cx v, int L);
Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
Jet jet_scale(const Jet& a, cx s);
Jet jet_mul(const Jet& a, const Jet& b, int L);
Jet jet_div(const Jet& a, const Jet& b, int L);  // requires b[0] != 0
Jet jet_exp(const Jet& a, int L);
Jet jet_log(const Jet& a, int L);  // requires a[0] != 0
Jet jet_ipow(const Jet& a, int p, int L);  // integer p, negative allowed

/// d/dx: (f')_d = (d+1) a_{d+1}; output has length a.size() - 1.
Jet jet_deriv(const Jet& a);

/// Evaluate the jet at offset dx from its expansion point.
cx jet_eval(const Jet& a, cx dx);

/// Aggregate power-product coefficient with jet-valued series entries:
/// [t^s] Prod_j (sum_k f[j][k] t^k)^{m[j]}, every multiplication truncated
/// to jet length L.
Jet jet_power_product_total(const std::vector<std::vector<Jet>>& f,
                            const MultiIndex& m, int s, int L);

}  // namespace borelsum
