#include "pricekit/tolerance.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace pricekit {

namespace {

Tolerances load() {
    Tolerances t;
    if (const char* env = std::getenv("PRICEKIT_TOLERANCE")) {
        try {
            double v = std::stod(env);
            if (std::isfinite(v) && v > 0) t.rel = v;
        } catch (...) {
        }
    }
    return t;
}

}  // namespace

const Tolerances& tolerances() {
    static const Tolerances t = load();
    return t;
}

double snap(double v) { return std::abs(v) <= tolerances().zero ? 0.0 : v; }

}  // namespace pricekit
