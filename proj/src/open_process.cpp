#include "pricekit/open_process.hpp"

#include "pricekit/errors.hpp"
#include "pricekit/price.hpp"
#include "pricekit/tolerance.hpp"

#include <algorithm>
#include <cmath>

namespace pricekit {

namespace {

std::pair<Observable, Observable> densities(const Population& parented, const Population& full) {
    const double rel = tolerances().rel;
    const Vec& a = parented.weights();
    const Vec& b = full.weights();
    Vec pi(a.size()), nu(a.size());
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        if (b[j] > 0) {
            double r = a[j] / b[j];
            if (r > 1 + rel) throw InvalidInput("open process: parented mass exceeds the full target at " + full.types().label(j));
            pi[j] = std::min(r, 1.0);
        } else {
            if (std::abs(a[j]) > tolerances().zero) throw InvalidInput("open process: parented mass on an empty target type");
            pi[j] = 1.0;
        }
        nu[j] = 1.0 - pi[j];
    }
    return {Observable(full.types(), pi), Observable(full.types(), nu)};
}

}  // namespace

OpenProcess::OpenProcess(Process closed, Population full_target)
    : closed_(std::move(closed)),
      full_target_(std::move(full_target)),
      pi_(Observable::constant(full_target_.types(), 1.0)),
      nu_(Observable::constant(full_target_.types(), 0.0)) {
    require_same_types(closed_.target().types(), full_target_.types(), "open process");
    auto d = densities(closed_.target(), full_target_);
    pi_ = std::move(d.first);
    nu_ = std::move(d.second);
}

OpenProcess OpenProcess::with_orphans(Process closed, const Vec& orphan_weights) {
    if (static_cast<std::size_t>(orphan_weights.size()) != closed.target().dim())
        throw MismatchError("open process: orphan weights do not match the target types");
    Population full(closed.target().types(), closed.target().weights() + orphan_weights);
    return OpenProcess(std::move(closed), std::move(full));
}

KgsTerms kgs(const OpenProcess& p, const Observable& x, const Observable& y) {
    const Process& c = p.closed();
    require_same_types(c.source().types(), x.types(), "kgs: x");
    require_same_types(c.target().types(), y.types(), "kgs: y");
    KgsTerms t;
    t.p_parented = p.parented_fraction();
    if (!(t.p_parented > 0)) throw DomainError("kgs: every child is an orphan");
    // The first two terms are exactly the Price terms of the closed process.
    const PriceDecomposition closed = price(c, x, y);
    t.selection = closed.ns;
    t.transmission = closed.ec;
    t.delta = expectation(p.full_target(), y) - expectation(c.source(), x);
    t.orphan_nu = covariance(p.full_target(), y, p.orphan_density()) / t.p_parented;
    t.orphan_pi = -covariance(p.full_target(), y, p.parented_density()) / t.p_parented;
    t.residual_nu = t.delta - t.selection - t.transmission - t.orphan_nu;
    t.residual_pi = t.delta - t.selection - t.transmission - t.orphan_pi;
    return t;
}

DualKgsTerms dual_fitness_kgs(const OpenProcess& p, const Observable& x, const Observable& y) {
    const Process& c = p.closed();
    const KgsTerms k = kgs(p, x, y);
    const Vec Wstar = c.kernel().transpose() * c.source().weights();
    const double Npi = c.target().size();
    DualKgsTerms d{Observable(c.target().types(), Wstar)};
    d.selection = k.selection;
    d.transmission = k.transmission;
    d.orphan_kernel = expectation(p.full_target(), y) - y.values().dot(Wstar) / Npi;
    d.residual = k.delta - d.selection - d.transmission - d.orphan_kernel;
    d.counting_identity = Wstar.sum() / Npi;
    d.deme_expectation = c.target().weights().dot(Wstar) / Npi;
    return d;
}

}  // namespace pricekit
