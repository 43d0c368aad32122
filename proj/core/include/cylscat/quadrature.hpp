#pragma once

#include <functional>

#include "cylscat/scaled.hpp"

namespace cylscat {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    int max_depth = 28;
};

/// Adaptive Gauss-Kronrod (7/15) integration of a complex-valued integrand
/// over [a, b], bisecting until |K15 - G7| meets the tolerance.
Complex integrate_gk(const std::function<Complex(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

/// Tensor 2-D version over [ax, bx] x [ay, by]; the inner integral runs at a
/// tightened tolerance.
Complex integrate_gk_2d(const std::function<Complex(double, double)>& f,
                        double ax, double bx, double ay, double by,
                        const QuadOptions& opt = {});

}  // namespace cylscat
