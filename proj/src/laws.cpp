#include "pricekit/laws.hpp"

#include "pricekit/errors.hpp"
#include "pricekit/price.hpp"
#include "pricekit/tolerance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pricekit {

std::string to_string(EquilibriumClass c) {
    switch (c) {
        case EquilibriumClass::selective_equilibrium: return "selective_equilibrium";
        case EquilibriumClass::purely_environmental: return "purely_environmental";
        case EquilibriumClass::generic: return "generic";
    }
    return "generic";
}

double LawReport::min_slack() const {
    double m = std::numeric_limits<double>::infinity();
    for (double s : slacks) m = std::min(m, s);
    return m;
}

namespace {
// tolerances are relative once chain entries exceed 1 in magnitude
double link_scale(const std::vector<ChainEntry>& chain, std::size_t k) {
    if (k + 1 >= chain.size()) return 1.0;
    const double a = std::abs(chain[k].value), b = std::abs(chain[k + 1].value);
    return std::isfinite(a) && std::isfinite(b) ? std::max({1.0, a, b}) : 1.0;
}
}  // namespace

bool LawReport::holds(double tol) const {
    for (std::size_t k = 0; k < slacks.size(); ++k)
        if (!(slacks[k] >= -tol * link_scale(chain, k))) return false;
    return true;
}

bool LawReport::all_saturated() const {
    return std::all_of(saturated.begin(), saturated.end(), [](bool b) { return b; });
}

LawReport make_law_report(std::string name, double lhs, ChainOrder order, std::vector<ChainEntry> chain,
                          EquilibriumClass cls) {
    LawReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.order = order;
    r.chain = std::move(chain);
    r.equilibrium_class = cls;
    const double sat = tolerances().sat;
    for (std::size_t k = 0; k + 1 < r.chain.size(); ++k) {
        double a = r.chain[k].value;
        double b = r.chain[k + 1].value;
        double s = order == ChainOrder::descending ? a - b : b - a;
        r.slacks.push_back(s);
        r.saturated.push_back(std::abs(s) <= sat * link_scale(r.chain, k));
    }
    return r;
}

double FitnessDistribution::moment(double k) const {
    double s = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u[i] > 0) s += prob[i] * std::pow(u[i], k);
    return k == 0 ? prob.sum() : s;
}

double FitnessDistribution::var() const {
    const double m = mean();
    double s = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i) s += prob[i] * (u[i] - m) * (u[i] - m);
    return s;
}

double FitnessDistribution::p_star() const {
    double s = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (snap(u[i]) > 0) s += prob[i];
    return s;
}

double FitnessDistribution::selective_entropy() const {
    double s = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i) s -= prob[i] * xlogx(u[i]);
    return s;
}

EquilibriumClass FitnessDistribution::classify() const {
    const double sat = tolerances().sat;
    bool flat = true;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (prob[i] > 0 && std::abs(u[i] - 1.0) > sat) flat = false;
    if (flat) return EquilibriumClass::purely_environmental;
    const double ps = p_star();
    if (ps <= 0) return EquilibriumClass::generic;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (prob[i] > 0 && snap(u[i]) > 0 && std::abs(u[i] - 1.0 / ps) > sat) return EquilibriumClass::generic;
    return EquilibriumClass::selective_equilibrium;
}

FitnessDistribution fitness_distribution(const Process& p) {
    return {p.source().probabilities(), fitness(p).U.values()};
}

namespace {

// x log(y) with the convention that a zero coefficient suppresses the log.
double xlog(double x, double y) { return x == 0 ? 0.0 : x * std::log(y); }

Vec map(const Vec& u, double (*f)(double)) {
    Vec out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = f(u[i]);
    return out;
}

void add_scalars(LawReport& r, const FitnessDistribution& d) {
    r.extras["var_U"] = d.var();
    r.extras["p_star"] = d.p_star();
    r.extras["S_NS"] = d.selective_entropy();
    r.extras["E_U2"] = d.moment(2);
    r.extras["E_U3"] = d.moment(3);
}

}  // namespace

LawReport zeroth_law(const FitnessDistribution& d) {
    const double var = d.var();
    const double S = d.selective_entropy();
    const double ps = d.p_star();
    LawReport r = make_law_report("zeroth_law", var, ChainOrder::descending,
                                  {{"var(U)", var}, {"exp(-S_NS)-1", std::exp(-S) - 1}, {"1/p_star-1", 1 / ps - 1},
                                   {"0", 0.0}},
                                  d.classify());
    add_scalars(r, d);
    return r;
}

LawReport gibbs_inequality(const FitnessDistribution& d) {
    const double S = d.selective_entropy();
    LawReport r = make_law_report("gibbs_inequality", S, ChainOrder::ascending,
                                  {{"-log(1+var(U))", -std::log1p(d.var())}, {"S_NS", S},
                                   {"log(p_star)", std::log(d.p_star())}, {"0", 0.0}},
                                  d.classify());
    add_scalars(r, d);
    return r;
}

LawReport first_law(const FitnessDistribution& d) {
    const double var = d.var();
    const double lhs = d.moment(3) - d.moment(2);  // cov(U^2, U) with E[U] = 1
    LawReport r = make_law_report("first_law", lhs, ChainOrder::descending,
                                  {{"d_NS var(U)", lhs}, {"var(U)(1+var(U))", var * (1 + var)},
                                   {"var(U)^2/2", 0.5 * var * var}, {"0", 0.0}},
                                  d.classify());
    add_scalars(r, d);
    const Vec& u = d.u;
    Vec weak(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) weak[i] = (u[i] + 1) * (u[i] - 1) * (u[i] - 1);
    r.extras["weak_route"] = 0.5 * d.expect(weak);
    r.extras["tightest_bound"] = std::max(var * (1 + var), 0.5 * var * var);
    const double ps = d.p_star();
    r.extras["equilibrium_value"] = 1 / (ps * ps) - 1 / ps;
    return r;
}

LawReport higher_order_first_law(const FitnessDistribution& d, int n) {
    if (n < 1 || n > 8) throw InvalidInput("higher_order_first_law: n must lie in [1, 8]");
    const Vec& u = d.u;
    Vec f(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) f[i] = u[i] * std::pow(u[i] - 1, n);
    const double lhs = d.expect(f);
    const double ps = d.p_star();
    const double var = d.var();
    double bound = n % 2 == 0 ? std::pow(var + 1 - ps, n) / std::pow(ps, n - 1) : std::pow(1 - ps, n + 1) / std::pow(ps, n);
    LawReport r = make_law_report("higher_order_first_law_n" + std::to_string(n), lhs, ChainOrder::descending,
                                  {{"E[U(U-1)^n]", lhs}, {n % 2 == 0 ? "(var+1-p*)^n/p*^(n-1)" : "(1-p*)^(n+1)/p*^n", bound},
                                   {"0", 0.0}},
                                  d.classify());
    r.extras["n"] = n;
    add_scalars(r, d);
    return r;
}

LawReport exp_first_law(const FitnessDistribution& d) {
    const Vec& u = d.u;
    Vec eu = map(u, [](double x) { return std::exp(x); });
    const double lhs = d.expect(eu.cwiseProduct(u)) - d.expect(eu) * d.mean();
    const double ps = d.p_star();
    LawReport r = make_law_report("exp_first_law", lhs, ChainOrder::descending,
                                  {{"cov(e^U,U)", lhs}, {"(1-p*)(e^(1/p*)-1)", (1 - ps) * std::expm1(1 / ps)}, {"0", 0.0}},
                                  d.classify());
    add_scalars(r, d);
    return r;
}

namespace {
double second_law_lhs(const FitnessDistribution& d) {
    // cov(-U log U, U) = E[-U^2 log U] - S_NS when E[U] = 1
    Vec f = map(d.u, [](double x) { return -x * xlogx(x); });
    return d.expect(f) - d.selective_entropy() * d.mean();
}
}  // namespace

LawReport second_law(const FitnessDistribution& d) {
    const double var = d.var();
    const double S = d.selective_entropy();
    const double ps = d.p_star();
    const double lhs = second_law_lhs(d);
    LawReport r = make_law_report("second_law", lhs, ChainOrder::ascending,
                                  {{"d_NS S_NS", lhs},
                                   {"-var log(1+var)", -var * std::log1p(var)},
                                   {"var S_NS", var * S},
                                   {"(exp(-S_NS)-1) S_NS", std::expm1(-S) * S},
                                   {"-(1/p*-1) log(1/p*)", -xlog(1 / ps - 1, 1 / ps)},
                                   {"0", 0.0}},
                                  d.classify());
    add_scalars(r, d);
    return r;
}

LawReport speed_limits(const FitnessDistribution& d, std::vector<double> c_grid) {
    const double EU2 = d.moment(2);
    if (c_grid.empty()) c_grid = {0.125, 0.25, 0.5, 1.0, 2.0, EU2};
    for (double c : c_grid)
        if (!(c > 0) || !std::isfinite(c)) throw InvalidInput("speed_limits: grid entries must be positive");
    std::sort(c_grid.begin(), c_grid.end());
    c_grid.erase(std::unique(c_grid.begin(), c_grid.end()), c_grid.end());

    const double ps = d.p_star();
    const double base = std::log(1 / ps);
    auto basic = [&](double c) { return base - (EU2 / c) * std::log(d.moment(2 + c) / EU2); };

    double best = -std::numeric_limits<double>::infinity();
    double best_c = c_grid.front();
    for (double c : c_grid) {
        double b = basic(c);
        if (b > best) {
            best = b;
            best_c = c;
        }
    }
    Vec f = map(d.u, [](double x) { return x * xlogx(x); });
    const double infinitary = base - d.expect(f);
    const double lhs = second_law_lhs(d);

    LawReport r = make_law_report("speed_limits", lhs, ChainOrder::ascending,
                                  {{"basic (grid sup)", best}, {"infinitary", infinitary}, {"d_NS S_NS", lhs}},
                                  d.classify());
    r.extras["basic_argmax_c"] = best_c;
    add_scalars(r, d);

    // Stationary point of the continuum bound: root of
    // g(c) = c log E[U^(1+c)] - (c-1) log E[U^2] - log E[U^(2+c)].
    auto g = [&](double c) { return c * std::log(d.moment(1 + c)) - (c - 1) * std::log(EU2) - std::log(d.moment(2 + c)); };
    std::optional<double> root;
    for (std::size_t k = 0; k < c_grid.size() && !root; ++k) {
        double gk = g(c_grid[k]);
        if (gk == 0) {
            root = c_grid[k];
            break;
        }
        if (k + 1 == c_grid.size()) break;
        double lo = c_grid[k], hi = c_grid[k + 1];
        double glo = gk, ghi = g(hi);
        if (!std::isfinite(glo) || !std::isfinite(ghi) || (glo < 0) == (ghi < 0)) continue;
        while (hi - lo > 1e-8) {
            double mid = 0.5 * (lo + hi);
            double gm = g(mid);
            if ((gm < 0) == (glo < 0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        root = 0.5 * (lo + hi);
    }
    if (root) {
        r.extras["c_star"] = *root;
        r.extras["continuum_bound"] = basic(*root);
    } else {
        r.notes.push_back("no stationary point on grid");
    }
    return r;
}

LawReport selective_acceleration(const FitnessDistribution& d) {
    const double var = d.var();
    const Vec& u = d.u;
    Vec f(u.size()), a_f(u.size()), b_f(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        double s = (u[i] - 1) * (u[i] - 1);
        f[i] = -s * xlogx(u[i]);
        a_f[i] = s * u[i];
        b_f[i] = s * u[i] * u[i];
    }
    const double lhs = d.expect(f);
    if (var <= tolerances().zero) {
        LawReport r = make_law_report("selective_acceleration", lhs, ChainOrder::ascending,
                                      {{"lower", 0.0}, {"d2_NS S_NS", lhs}, {"upper", 0.0}, {"0", 0.0}}, d.classify());
        r.notes.push_back("var(U) = 0: trivial case");
        add_scalars(r, d);
        return r;
    }
    const double var2 = var * var;
    const double varU2 = d.moment(4) - d.moment(2) * d.moment(2);
    const double upper = -var2 * std::log(var);  // -(1/2) var^2 log var^2
    const double lower = var2 * std::log((varU2 + var2) / (var2 * var2));
    LawReport r = make_law_report("selective_acceleration", lhs, ChainOrder::ascending,
                                  {{"var^2 log((var(U^2)+var^2)/var^4)", lower},
                                   {"d2_NS S_NS", lhs},
                                   {"-(1/2) var^2 log var^2", upper},
                                   {"0", 0.0}},
                                  d.classify());
    add_scalars(r, d);
    // Jensen steps that precede the stated bounds; these hold on their own.
    const double a = d.expect(a_f);
    const double b = d.expect(b_f);
    r.extras["jensen_upper"] = -xlog(a, a / var);
    r.extras["jensen_lower"] = -xlog(a, b / a);
    r.extras["half_equilibrium_constant"] = -2 * std::log(4.0);
    r.extras["var_U2"] = varU2;
    return r;
}

LawReport zeroth_law(const Process& p) { return zeroth_law(fitness_distribution(p)); }
LawReport gibbs_inequality(const Process& p) { return gibbs_inequality(fitness_distribution(p)); }
LawReport first_law(const Process& p) { return first_law(fitness_distribution(p)); }
LawReport higher_order_first_law(const Process& p, int n) { return higher_order_first_law(fitness_distribution(p), n); }
LawReport exp_first_law(const Process& p) { return exp_first_law(fitness_distribution(p)); }
LawReport second_law(const Process& p) { return second_law(fitness_distribution(p)); }
LawReport speed_limits(const Process& p, std::vector<double> c_grid) {
    return speed_limits(fitness_distribution(p), std::move(c_grid));
}
LawReport selective_acceleration(const Process& p) { return selective_acceleration(fitness_distribution(p)); }

double iterated_selective_change(const Process& p, int n) {
    if (n < 1 || n > 8) throw InvalidInput("iterated_selective_change: n must lie in [1, 8]");
    const Population& mu = p.source();
    const Observable U = fitness(p).U;
    Vec x = U.values();
    for (int k = 1; k < n; ++k) x = x.cwiseProduct(U.values() - Vec::Ones(x.size()));
    return covariance(mu, Observable(mu.types(), x), U);
}

LawReport ec_variance_bound(const Process& p, const Process& q) {
    require_composable(p, q, "ec_variance_bound");
    const Population& mu = p.source();
    const TypeSet& I = mu.types();
    const Vec U = fitness(p).U.values();
    const Observable Up = fitness(q).U;
    const Vec avgUp = local_average(p, Up).values();
    const Vec avgUp2 = local_average(p, Observable(Up.types(), Up.values().cwiseAbs2())).values();
    auto E = [&](const Vec& v) { return expectation(mu, Observable(I, v)); };
    const Vec U3 = U.array().cube().matrix();
    const double EU3 = E(U3);
    if (EU3 <= tolerances().zero) throw DomainError("ec_variance_bound: E[U^3] vanishes");
    Vec Rbar = Vec::Zero(U.size());
    for (Eigen::Index i = 0; i < U.size(); ++i)
        if (snap(U[i]) > 0) Rbar[i] = avgUp[i] / U[i];
    const double lhs = E((avgUp2 - U.cwiseAbs2()).cwiseProduct(U));
    const Vec ones = Vec::Ones(U.size());
    const double bound = E(U3.cwiseProduct(Rbar - ones)) * E(U3.cwiseProduct(Rbar + ones)) / EU3;
    LawReport r = make_law_report("ec_variance_bound", lhs, ChainOrder::descending,
                                  {{"d_EC(var, var')", lhs}, {"E[U^3(R-1)] E[U^3(R+1)] / E[U^3]", bound}});
    r.extras["E_U3"] = EU3;
    r.extras["strongly_stationary"] = stationarity(p, q).strong ? 1.0 : 0.0;
    return r;
}

LawReport ec_selective_entropy_bound(const Process& p, const Process& q) {
    require_composable(p, q, "ec_selective_entropy_bound");
    const Population& mu = p.source();
    const TypeSet& I = mu.types();
    const Vec U = fitness(p).U.values();
    const Observable Up = fitness(q).U;
    Vec negent(Up.dim());
    for (std::size_t j = 0; j < Up.dim(); ++j) negent[j] = -xlogx(Up[j]);
    const Vec avg = local_average(p, Observable(Up.types(), negent)).values();
    Vec f(U.size());
    for (Eigen::Index i = 0; i < U.size(); ++i) f[i] = (avg[i] + xlogx(U[i])) * U[i];
    const double lhs = expectation(mu, Observable(I, f));
    const double EU2 = expectation(mu, Observable(I, U.cwiseAbs2()));
    const double EU3 = expectation(mu, Observable(I, U.array().cube().matrix()));
    if (EU2 <= tolerances().zero || EU3 <= tolerances().zero)
        throw DomainError("ec_selective_entropy_bound: degenerate moments");
    LawReport r = make_law_report("ec_selective_entropy_bound", lhs, ChainOrder::ascending,
                                  {{"d_EC(S_NS, S_NS')", lhs}, {"log E[U^2] + log E[U^3]", std::log(EU2) + std::log(EU3)}});
    r.extras["strongly_stationary"] = stationarity(p, q).strong ? 1.0 : 0.0;
    return r;
}

LawReport multilevel_second_law(const Process& p, const Process& q) {
    const MultilevelVariance mv = multilevel_variance(p, q);
    const FitnessDistribution dq = fitness_distribution(q);
    const double lhs = second_law_lhs(dq);
    const double v = mv.var_mid;
    const double v2 = mv.var_composed + mv.mean_conditional_var;
    LawReport r = make_law_report("multilevel_second_law", lhs, ChainOrder::ascending,
                                  {{"d'_NS S'_NS", lhs}, {"-var'(U') log(1+var'(U'))", -v * std::log1p(v)}},
                                  dq.classify());
    r.extras["bound_via_variance_identity"] = -v2 * std::log1p(v2);
    r.extras["route_difference"] = (-v * std::log1p(v)) - (-v2 * std::log1p(v2));
    return r;
}

StationarityClass stationarity(const Process& p, const Process& q) {
    require_composable(p, q, "stationarity");
    const double tol = tolerances().sat;
    const Population& mu = p.source();
    const Vec U = fitness(p).U.values();
    const Observable Upo = fitness(q).U;
    const Vec& Up = Upo.values();
    const Vec avgUp = local_average(p, Upo).values();
    const Mat& w = p.kernel();

    StationarityClass s;
    s.strong = s.weak = s.locally_homogeneous = s.locally_constant = true;
    std::optional<double> ratio;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        if (!(mu.weights()[i] > 0) || snap(U[i]) == 0) continue;
        if (std::abs(avgUp[i] / U[i] - 1) > tol) s.weak = false;
        std::optional<double> row_value;
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            if (snap(w(i, j)) == 0) continue;
            double R = Up[j] / U[i];
            if (std::abs(Up[j] - U[i]) > tol) s.strong = false;
            if (!ratio) ratio = R;
            else if (std::abs(R - *ratio) > tol) s.locally_homogeneous = false;
            if (!row_value) row_value = Up[j];
            else if (std::abs(Up[j] - *row_value) > tol) s.locally_constant = false;
        }
    }
    return s;
}

}  // namespace pricekit
