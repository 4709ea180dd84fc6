#pragma once

#include "pricekit/process.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pricekit {

enum class EquilibriumClass { selective_equilibrium, purely_environmental, generic };
std::string to_string(EquilibriumClass c);

/// descending: chain[0] >= chain[1] >= ...; ascending: chain[0] <= chain[1] <= ...
enum class ChainOrder { descending, ascending };

struct ChainEntry {
    std::string label;
    double value;
};

struct LawReport {
    std::string name;
    double lhs = 0;
    ChainOrder order = ChainOrder::descending;
    std::vector<ChainEntry> chain;  // contains the lhs as one of its entries
    std::vector<double> slacks;     // one per adjacent pair, >= 0 when that link holds
    std::vector<bool> saturated;    // |slack| <= eps_sat
    EquilibriumClass equilibrium_class = EquilibriumClass::generic;
    std::map<std::string, double> extras;
    std::vector<std::string> notes;

    double min_slack() const;
    /// Every link holds up to tol, relative to the link when its entries exceed 1.
    bool holds(double tol = 1e-9) const;
    bool all_saturated() const;
};

LawReport make_law_report(std::string name, double lhs, ChainOrder order, std::vector<ChainEntry> chain,
                          EquilibriumClass cls = EquilibriumClass::generic);

/// Distribution of relative fitness values: probabilities prob[k] attached to values u[k].
/// Classical processes give prob = mu/N, u = U; quantum processes give the spectral version.
struct FitnessDistribution {
    Vec prob;
    Vec u;

    double expect(const Vec& f) const { return prob.dot(f); }
    double moment(double k) const;  // E[u^k], with 0^k = 0 for k > 0
    double mean() const { return prob.dot(u); }
    double var() const;
    double p_star() const;
    double selective_entropy() const;  // E[-u log u]
    EquilibriumClass classify() const;
};

FitnessDistribution fitness_distribution(const Process& p);

LawReport zeroth_law(const FitnessDistribution& d);
LawReport gibbs_inequality(const FitnessDistribution& d);
LawReport first_law(const FitnessDistribution& d);
LawReport higher_order_first_law(const FitnessDistribution& d, int n);
LawReport exp_first_law(const FitnessDistribution& d);
LawReport second_law(const FitnessDistribution& d);
LawReport speed_limits(const FitnessDistribution& d, std::vector<double> c_grid = {});
LawReport selective_acceleration(const FitnessDistribution& d);

LawReport zeroth_law(const Process& p);
LawReport gibbs_inequality(const Process& p);
LawReport first_law(const Process& p);
LawReport higher_order_first_law(const Process& p, int n);
LawReport exp_first_law(const Process& p);
LawReport second_law(const Process& p);
LawReport speed_limits(const Process& p, std::vector<double> c_grid = {});
LawReport selective_acceleration(const Process& p);

/// n-fold selective change of U via the iterated covariance route X_1 = U, X_{k+1} = (U - 1) X_k.
double iterated_selective_change(const Process& p, int n);

LawReport ec_variance_bound(const Process& p, const Process& q);
LawReport ec_selective_entropy_bound(const Process& p, const Process& q);
LawReport multilevel_second_law(const Process& p, const Process& q);

struct StationarityClass {
    bool strong = false;
    bool weak = false;
    bool locally_homogeneous = false;
    bool locally_constant = false;
};

StationarityClass stationarity(const Process& p, const Process& q);

}  // namespace pricekit
