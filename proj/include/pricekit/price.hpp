#pragma once

#include "pricekit/process.hpp"

namespace pricekit {

struct PriceDecomposition {
    double delta = 0;  // E'[y] - E[x]
    double ns = 0;     // cov(x, U)
    double ec = 0;     // E[Delta_w(x, y) U]
    double residual = 0;
    bool holds() const;
};

PriceDecomposition price(const Process& p, const Observable& x, const Observable& y);

/// Same identity for observables that are already f(x) and g(y).
PriceDecomposition functional_price(const Process& p, const Observable& f_of_x, const Observable& g_of_y);

struct AggregatePrice {
    double selection = 0;     // N cov(x, W)
    double transmission = 0;  // N E[Delta_w(x, y) W]
    double growth = 0;        // (N' - N) E[x]
    double two_term = 0;      // N E[x (W - 1) + Delta_w(x, y) W]
    double direct = 0;        // mu'[y] - mu[x]
    double residual = 0;
    double sum() const { return selection + transmission + growth; }
};

AggregatePrice aggregate_price(const Process& p, const Observable& x, const Observable& y);

struct FisherTerms {
    double ns = 0;  // var(U)
    double ec = 0;  // E[Delta_w(U, U') U]
    double residual = 0;
};

/// Throws MismatchError unless q starts where p ends.
void require_composable(const Process& p, const Process& q, const char* what);

FisherTerms fisher(const Process& p, const Process& q);

struct MultilevelPrice {
    double between = 0;       // cov(E'_w[y], E'_w[U'])
    double within = 0;        // E[cov'_w(y, U')]
    double transmission = 0;  // E[E'_w[Delta_{w'}(y, z) U']]
    double delta = 0;         // E''[z] - E'[y]
    double residual = 0;
    double sum() const { return between + within + transmission; }
};

MultilevelPrice multilevel_price(const Process& p, const Process& q, const Observable& y, const Observable& z);

struct MultilevelVariance {
    double var_mid = 0;               // var'(U')
    double var_composed = 0;          // var(U^(2)), U^(2) = <U'>_w U
    double mean_conditional_var = 0;  // E[var'_w(U')]
    double residual = 0;
};

MultilevelVariance multilevel_variance(const Process& p, const Process& q);

/// U^(2) = <U'>_w U on the source of p.
Observable composed_relative_fitness(const Process& p, const Process& q);

}  // namespace pricekit
