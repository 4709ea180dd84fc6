#pragma once

namespace pricekit {

struct Tolerances {
    double zero = 1e-12;  // snapping threshold for support decisions
    double rel = 1e-9;    // disintegration and identity residuals
    double sat = 1e-9;    // saturation of an inequality
    double herm = 1e-10;  // Hermiticity residual
    double psd = 1e-10;   // negative eigenvalue clipping
    double supp = 1e-10;  // relative eigenvalue cutoff for pseudoinverses
};

/// Defaults, with `rel` overridden by PRICEKIT_TOLERANCE when it parses as a positive number.
const Tolerances& tolerances();

/// Returns 0 for |v| <= tolerances().zero, v otherwise.
double snap(double v);

}  // namespace pricekit
