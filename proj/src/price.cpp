#include "pricekit/price.hpp"

#include "pricekit/errors.hpp"
#include "pricekit/tolerance.hpp"

#include <algorithm>
#include <cmath>

namespace pricekit {

namespace {

double rel_residual(double r, std::initializer_list<double> scale) {
    double s = 1.0;
    for (double v : scale) s = std::max(s, std::abs(v));
    return std::abs(r) / s;
}

// E'_w[y](i) = <y>_w(i) U(i)
Vec weighted_local(const Process& p, const Vec& U, const Observable& y) {
    return local_average(p, y).values().cwiseProduct(U);
}

}  // namespace

bool PriceDecomposition::holds() const {
    return rel_residual(residual, {delta, ns, ec}) <= tolerances().rel;
}

PriceDecomposition price(const Process& p, const Observable& x, const Observable& y) {
    require_same_types(p.source().types(), x.types(), "price: x");
    require_same_types(p.target().types(), y.types(), "price: y");
    const FitnessData f = fitness(p);
    PriceDecomposition d;
    d.delta = expectation(p.target(), y) - expectation(p.source(), x);
    d.ns = covariance(p.source(), x, f.U);
    const Observable change = local_change(p, x, y);
    d.ec = expectation(p.source(), Observable(x.types(), change.values().cwiseProduct(f.U.values())));
    d.residual = d.delta - d.ns - d.ec;
    return d;
}

PriceDecomposition functional_price(const Process& p, const Observable& f_of_x, const Observable& g_of_y) {
    return price(p, f_of_x, g_of_y);
}

AggregatePrice aggregate_price(const Process& p, const Observable& x, const Observable& y) {
    require_same_types(p.source().types(), x.types(), "aggregate_price: x");
    require_same_types(p.target().types(), y.types(), "aggregate_price: y");
    const FitnessData f = fitness(p);
    const Population& mu = p.source();
    const double N = mu.size();
    const double Np = p.target().size();
    const Vec change = local_change(p, x, y).values();
    const Vec& W = f.W.values();
    AggregatePrice a;
    a.selection = N * covariance(mu, x, f.W);
    a.transmission = N * expectation(mu, Observable(x.types(), change.cwiseProduct(W)));
    a.growth = (Np - N) * expectation(mu, x);
    Vec two = x.values().cwiseProduct(W - Vec::Ones(W.size())) + change.cwiseProduct(W);
    a.two_term = N * expectation(mu, Observable(x.types(), two));
    a.direct = p.target().weights().dot(y.values()) - mu.weights().dot(x.values());
    a.residual = a.sum() - a.direct;
    return a;
}

void require_composable(const Process& p, const Process& q, const char* what) {
    require_same_types(p.target().types(), q.source().types(), what);
    const Vec& a = p.target().weights();
    const Vec& b = q.source().weights();
    double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    if ((a - b).cwiseAbs().maxCoeff() > tolerances().rel * scale)
        throw MismatchError(std::string(what) + ": second process does not start at the first one's target");
}

FisherTerms fisher(const Process& p, const Process& q) {
    require_composable(p, q, "fisher");
    const FitnessData f = fitness(p);
    const FitnessData g = fitness(q);
    FisherTerms t;
    t.ns = variance(p.source(), f.U);
    const Vec change = local_change(p, f.U, g.U).values();
    t.ec = expectation(p.source(), Observable(p.source().types(), change.cwiseProduct(f.U.values())));
    t.residual = t.ns + t.ec;
    return t;
}

Observable composed_relative_fitness(const Process& p, const Process& q) {
    require_composable(p, q, "composed_relative_fitness");
    const FitnessData f = fitness(p);
    const FitnessData g = fitness(q);
    return Observable(p.source().types(), weighted_local(p, f.U.values(), g.U));
}

MultilevelPrice multilevel_price(const Process& p, const Process& q, const Observable& y, const Observable& z) {
    require_composable(p, q, "multilevel_price");
    require_same_types(q.source().types(), y.types(), "multilevel_price: y");
    require_same_types(q.target().types(), z.types(), "multilevel_price: z");
    const Population& mu = p.source();
    const TypeSet& I = mu.types();
    const TypeSet& Ip = q.source().types();
    const Vec U = fitness(p).U.values();
    const Vec Up = fitness(q).U.values();

    const Vec Ey = weighted_local(p, U, y);
    const Vec EU = weighted_local(p, U, Observable(Ip, Up));
    const Vec EyU = weighted_local(p, U, Observable(Ip, y.values().cwiseProduct(Up)));
    const Vec trans = local_change(q, y, z).values().cwiseProduct(Up);
    const Vec Etrans = weighted_local(p, U, Observable(Ip, trans));

    MultilevelPrice m;
    m.between = covariance(mu, Observable(I, Ey), Observable(I, EU));
    m.within = expectation(mu, Observable(I, EyU - Ey.cwiseProduct(EU)));
    m.transmission = expectation(mu, Observable(I, Etrans));
    m.delta = expectation(q.target(), z) - expectation(q.source(), y);
    m.residual = m.sum() - m.delta;
    return m;
}

MultilevelVariance multilevel_variance(const Process& p, const Process& q) {
    require_composable(p, q, "multilevel_variance");
    const Population& mu = p.source();
    const TypeSet& I = mu.types();
    const Vec U = fitness(p).U.values();
    const Observable Up = fitness(q).U;
    const Vec EU = weighted_local(p, U, Up);
    const Vec EU2 = weighted_local(p, U, Observable(Up.types(), Up.values().cwiseAbs2()));
    MultilevelVariance v;
    v.var_mid = variance(q.source(), Up);
    v.var_composed = variance(mu, Observable(I, EU));
    v.mean_conditional_var = expectation(mu, Observable(I, EU2 - EU.cwiseAbs2()));
    v.residual = v.var_mid - v.var_composed - v.mean_conditional_var;
    return v;
}

}  // namespace pricekit
