#pragma once

// Two small reference instances with closed-form solution sets.

#include "model.hpp"

#include <optional>
#include <string_view>

namespace pvvi::builtin {

/// F1 = (x2, -x1 - 1), F2 = (-x2, x1 - 1) on K = {x1^2 - x2 <= 4}.
/// Weak solution set has two components; the fiber at xi = (1/2, 1/2) is empty.
inline VviProblem po()
{
    ConstraintSet K;
    K.n = 2;
    K.g = {parse_polynomial("x1^2 - x2 - 4", 2)};
    K.convexity_asserted = true;
    K.acq_asserted = true;
    return {2, 2,
            {PolyVector({parse_polynomial("x2", 2), parse_polynomial("-x1 - 1", 2)}),
             PolyVector({parse_polynomial("-x2", 2), parse_polynomial("x1 - 1", 2)})},
            std::move(K)};
}

/// f1 = x1^4/4 - x2, f2 = x2^3/3 - x1 on K = {x1 >= 0}.
/// Solutions for interior xi: x1 = cbrt((1 - xi1)/xi1), x2 = sqrt(xi1/(1 - xi1)).
inline VopProblem vop()
{
    ConstraintSet K;
    K.n = 2;
    K.g = {parse_polynomial("-x1", 2)};
    K.convexity_asserted = true;
    K.acq_asserted = true;
    return {2, 2,
            {parse_polynomial("0.25*x1^4 - x2", 2), parse_polynomial("x2^3/3 - x1", 2)},
            std::move(K)};
}

inline std::optional<Problem> by_name(std::string_view name)
{
    if (name == "po")
        return Problem(po());
    if (name == "vop")
        return Problem(vop());
    return std::nullopt;
}

} // namespace pvvi::builtin
