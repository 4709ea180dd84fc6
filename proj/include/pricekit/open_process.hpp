#pragma once

#include "pricekit/process.hpp"

namespace pricekit {

/// Closed process w_pi : mu -> pi mu' plus the orphaned remainder of mu'.
class OpenProcess {
public:
    OpenProcess(Process closed, Population full_target);

    /// full target = closed target + orphan weights
    static OpenProcess with_orphans(Process closed, const Vec& orphan_weights);

    const Process& closed() const { return closed_; }
    const Population& full_target() const { return full_target_; }
    const Observable& parented_density() const { return pi_; }
    const Observable& orphan_density() const { return nu_; }
    /// N'_pi / N'
    double parented_fraction() const { return closed_.target().size() / full_target_.size(); }

private:
    Process closed_;
    Population full_target_;
    Observable pi_;
    Observable nu_;
};

struct KgsTerms {
    double delta = 0;         // E'[y] - E[x] over the full target
    double selection = 0;     // cov(x, U)
    double transmission = 0;  // E[Delta_{w_pi}(x, y) U]
    double orphan_nu = 0;     // (1/p') cov'(y, nu)
    double orphan_pi = 0;     // -(1/p') cov'(y, pi)
    double p_parented = 0;
    double residual_nu = 0;
    double residual_pi = 0;
};

KgsTerms kgs(const OpenProcess& p, const Observable& x, const Observable& y);

struct DualKgsTerms {
    Observable dual_fitness;    // W*(i') = sum_i mu_i w_pi(i, i')
    double selection = 0;
    double transmission = 0;
    double orphan_kernel = 0;   // E'[y] - (1/N'_pi) sum_i' y W*
    double residual = 0;
    double counting_identity = 0;  // (1/N'_pi) sum_i' W*(i'), equals 1
    double deme_expectation = 0;   // E'_pi[W*] taken literally against mu'_pi
};

DualKgsTerms dual_fitness_kgs(const OpenProcess& p, const Observable& x, const Observable& y);

}  // namespace pricekit
