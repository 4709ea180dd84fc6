#include "pricekit/entropy.hpp"

#include "pricekit/errors.hpp"
#include "pricekit/price.hpp"
#include "pricekit/tolerance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pricekit {

Partition::Partition(std::vector<Block> blocks, std::size_t k) : blocks_(std::move(blocks)), k_(k) {
    std::vector<int> seen(k, 0);
    for (const Block& b : blocks_) {
        if (b.empty()) throw InvalidInput("partition: empty block");
        for (std::size_t i : b) {
            if (i >= k) throw InvalidInput("partition: index out of range");
            if (seen[i]++) throw InvalidInput("partition: blocks overlap");
        }
    }
    for (int s : seen)
        if (!s) throw InvalidInput("partition: blocks do not cover the type set");
}

Partition Partition::singletons(std::size_t k) {
    std::vector<Block> b(k);
    for (std::size_t i = 0; i < k; ++i) b[i] = {i};
    return Partition(std::move(b), k);
}

Partition Partition::whole(std::size_t k) {
    Block all(k);
    for (std::size_t i = 0; i < k; ++i) all[i] = i;
    return Partition({all}, k);
}

Partition Partition::from_labels(const TypeSet& types, const std::vector<std::vector<std::string>>& blocks) {
    std::vector<Block> out;
    for (const auto& lb : blocks) {
        Block b;
        for (const auto& l : lb) {
            auto idx = types.index_of(l);
            if (!idx) throw InvalidInput("partition: unknown label '" + l + "'");
            b.push_back(*idx);
        }
        out.push_back(std::move(b));
    }
    return Partition(std::move(out), types.size());
}

namespace {

struct Context {
    Vec P;  // mu / N
    Vec U;
    Mat w;
    double Wbar;
};

Context context(const Process& p) {
    FitnessData f = fitness(p);
    return {p.source().probabilities(), f.U.values(), p.kernel(), f.Wbar};
}

// One cell (A, B) worth of derived observables.
struct Cell {
    Vec UAB;
    Vec D;
    double u_bar = 0;
};

Cell make_cell(const Context& c, const Block& A, const Block& B) {
    const Eigen::Index K = c.U.size();
    Cell cell;
    cell.UAB = Vec::Zero(K);
    cell.D = Vec::Zero(K);
    for (std::size_t i : A) {
        double s = 0;
        for (std::size_t j : B) s += c.w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        cell.UAB[static_cast<Eigen::Index>(i)] = snap(s / c.Wbar);
    }
    for (Eigen::Index i = 0; i < K; ++i)
        if (snap(c.U[i]) > 0) cell.D[i] = std::min(1.0, cell.UAB[i] / c.U[i]);
    cell.u_bar = c.P.dot(cell.UAB);
    return cell;
}

// E[UAB * g(D)] summed only where UAB > 0.
double weighted(const Context& c, const Cell& cell, const std::function<double(Eigen::Index)>& g) {
    double s = 0;
    for (Eigen::Index i = 0; i < cell.UAB.size(); ++i)
        if (cell.UAB[i] > 0) s += c.P[i] * g(i);
    return s;
}

CellProfile profile_cell(const Context& c, const Cell& cell, std::size_t a, std::size_t b) {
    CellProfile r;
    r.a = a;
    r.b = b;
    r.u_bar = cell.u_bar;
    if (!(cell.u_bar > 0)) return r;
    const Vec& UAB = cell.UAB;
    const Vec& D = cell.D;
    const Vec& U = c.U;
    r.s_ec = -xlogx(cell.u_bar);
    r.s_dis = weighted(c, cell, [&](Eigen::Index i) { return -UAB[i] * std::log(D[i]); });
    r.s_mix = weighted(c, cell, [&](Eigen::Index i) { return UAB[i] * std::log(D[i] / cell.u_bar); });
    r.s_ns = weighted(c, cell, [&](Eigen::Index i) { return -UAB[i] * std::log(U[i]); });
    r.p_tilde = weighted(c, cell, [&](Eigen::Index i) { return U[i]; });
    r.e_d2 = weighted(c, cell, [&](Eigen::Index i) { return U[i] * D[i] * D[i]; });
    if (r.p_tilde > 0) {
        r.phi = weighted(c, cell, [&](Eigen::Index i) { return U[i] * U[i]; }) / r.p_tilde;
        r.lambda = weighted(c, cell, [&](Eigen::Index i) { return U[i] * UAB[i]; }) / r.p_tilde;
        r.gamma = weighted(c, cell, [&](Eigen::Index i) { return UAB[i] * UAB[i]; }) / r.p_tilde;
    }
    return r;
}

template <class F>
void for_each_cell(const Process& p, const Partition& A, const Partition& B, F&& f) {
    if (A.universe() != p.source().dim()) throw MismatchError("partition does not cover the source types");
    if (B.universe() != p.target().dim()) throw MismatchError("partition does not cover the target types");
    const Context c = context(p);
    for (std::size_t a = 0; a < A.size(); ++a)
        for (std::size_t b = 0; b < B.size(); ++b) f(c, make_cell(c, A.blocks()[a], B.blocks()[b]), a, b);
}

}  // namespace

double selective_entropy(const Process& p) { return fitness_distribution(p).selective_entropy(); }

double local_selective_entropy(const Process& p, const Block& A, const Block& B) {
    for (std::size_t i : A)
        if (i >= p.source().dim()) throw InvalidInput("local_selective_entropy: source block index out of range");
    for (std::size_t j : B)
        if (j >= p.target().dim()) throw InvalidInput("local_selective_entropy: target block index out of range");
    if (A.empty() || B.empty()) throw InvalidInput("local_selective_entropy: empty block");
    const Context c = context(p);
    const Cell cell = make_cell(c, A, B);
    return weighted(c, cell, [&](Eigen::Index i) { return -cell.UAB[i] * std::log(c.U[i]); });
}

EntropyProfile environmental_profile(const Process& p, const Partition& A, const Partition& B) {
    EntropyProfile e;
    for_each_cell(p, A, B, [&](const Context& c, const Cell& cell, std::size_t a, std::size_t b) {
        CellProfile cp = profile_cell(c, cell, a, b);
        e.s_ec += cp.s_ec;
        e.s_dis += cp.s_dis;
        e.s_mix += cp.s_mix;
        e.per_cell.push_back(cp);
    });
    e.s_ns = selective_entropy(p);
    e.s_tot = e.s_ns + e.s_ec;
    return e;
}

EntropyProfile generating_profile(const Process& p) {
    return environmental_profile(p, Partition::singletons(p.source().dim()), Partition::singletons(p.target().dim()));
}

double total_entropy(const Process& p) { return generating_profile(p).s_tot; }

EnvironmentalEquilibrium environmental_equilibrium(const Process& p, const Partition& A, const Partition& B) {
    const double sat = tolerances().sat;
    EnvironmentalEquilibrium out;
    for_each_cell(p, A, B, [&](const Context& c, const Cell& cell, std::size_t a, std::size_t b) {
        EquilibriumWitness w;
        w.a = a;
        w.b = b;
        double pt = weighted(c, cell, [&](Eigen::Index i) { return c.U[i]; });
        if (pt > 0) {
            const double target = cell.u_bar / pt;
            for (Eigen::Index i = 0; i < cell.UAB.size(); ++i)
                if (cell.UAB[i] > 0 && c.P[i] > 0) w.max_deviation = std::max(w.max_deviation, std::abs(cell.D[i] - target));
            w.constant = w.max_deviation <= sat;
        }
        out.equilibrium = out.equilibrium && w.constant;
        out.cells.push_back(w);
    });
    return out;
}

EnvironmentalEquilibrium environmental_equilibrium(const Process& p) {
    return environmental_equilibrium(p, Partition::singletons(p.source().dim()), Partition::singletons(p.target().dim()));
}

DispersionMixingBounds dispersion_mixing_bounds(const Process& p, const Partition& A, const Partition& B) {
    double dl = 0, du = 0, ml = 0, mu = 0;
    const EntropyProfile e = environmental_profile(p, A, B);
    for (const CellProfile& c : e.per_cell) {
        if (!(c.u_bar > 0)) continue;
        dl += c.u_bar * std::log(c.u_bar / c.e_d2);
        du += c.u_bar * std::log(c.p_tilde / c.u_bar);
        ml += -c.u_bar * std::log(c.p_tilde);
        mu += c.u_bar * std::log(c.e_d2 / (c.u_bar * c.u_bar));
    }
    DispersionMixingBounds r{
        make_law_report("dispersion_bounds", e.s_dis, ChainOrder::ascending,
                        {{"0", 0.0}, {"sum u log(u/E[U D^2])", dl}, {"S_dis", e.s_dis}, {"sum u log(p/u)", du}, {"S_EC", e.s_ec}}),
        make_law_report("mixing_bounds", e.s_mix, ChainOrder::ascending,
                        {{"0", 0.0}, {"sum u log(1/p)", ml}, {"S_mix", e.s_mix}, {"sum u log E[M^2]", mu}, {"S_EC", e.s_ec}})};
    return r;
}

DispersionMixingBounds dispersion_mixing_bounds(const Process& p) {
    return dispersion_mixing_bounds(p, Partition::singletons(p.source().dim()), Partition::singletons(p.target().dim()));
}

ThirdLawReport third_law(const Process& p, const Partition& A, const Partition& B) {
    double ec = 0, dis = 0, mix = 0;
    double dis_lo = 0, dis_hi = 0, mix_lo = 0, mix_hi = 0;
    for_each_cell(p, A, B, [&](const Context& c, const Cell& cell, std::size_t a, std::size_t b) {
        if (!(cell.u_bar > 0)) return;
        const double ub = cell.u_bar;
        const Vec& UAB = cell.UAB;
        const Vec& D = cell.D;
        // cov(X, U) = E[X (U - E[U])]
        const double m = c.P.dot(c.U);
        dis += weighted(c, cell, [&](Eigen::Index i) { return -UAB[i] * std::log(D[i]) * (c.U[i] - m); });
        mix += weighted(c, cell, [&](Eigen::Index i) { return UAB[i] * std::log(D[i] / ub) * (c.U[i] - m); });
        ec += -std::log(ub) * weighted(c, cell, [&](Eigen::Index i) { return UAB[i] * (c.U[i] - m); });

        const CellProfile cp = profile_cell(c, cell, a, b);
        const double pl = cp.p_tilde * cp.lambda;
        dis_lo += pl * std::log(cp.lambda / cp.gamma) - ub * std::log(cp.p_tilde / ub);
        dis_hi += pl * std::log(cp.phi / cp.lambda) - ub * std::log(ub / cp.e_d2);
        mix_lo += pl * std::log(cp.lambda / (cp.phi * ub)) - ub * std::log(cp.e_d2 / (ub * ub));
        mix_hi += pl * std::log(cp.gamma / (cp.lambda * ub)) + ub * std::log(cp.p_tilde);
    });
    ThirdLawReport r{
        make_law_report("third_law_S_EC", ec, ChainOrder::ascending,
                        {{"lower", dis_lo + mix_lo}, {"d_NS S_EC", ec}, {"upper", dis_hi + mix_hi}}),
        make_law_report("third_law_S_dis", dis, ChainOrder::ascending,
                        {{"lower", dis_lo}, {"d_NS S_dis", dis}, {"upper", dis_hi}}),
        make_law_report("third_law_S_mix", mix, ChainOrder::ascending,
                        {{"lower", mix_lo}, {"d_NS S_mix", mix}, {"upper", mix_hi}}),
        false, ec - dis - mix};
    const double sat = tolerances().sat;
    r.weak_law_holds = std::abs(ec) <= sat && std::abs(dis) <= sat && std::abs(mix) <= sat;
    return r;
}

ThirdLawReport third_law(const Process& p) {
    return third_law(p, Partition::singletons(p.source().dim()), Partition::singletons(p.target().dim()));
}

namespace {

// X(i) = sum over singleton cells of -U_{i,j} log Ubar_{i,j}, so that E[X] = S_EC.
Vec ec_observable(const Context& c) {
    Vec X = Vec::Zero(c.U.size());
    for (Eigen::Index i = 0; i < c.w.rows(); ++i)
        for (Eigen::Index j = 0; j < c.w.cols(); ++j) {
            double uij = snap(c.w(i, j) / c.Wbar);
            double ub = c.P[i] * uij;
            if (ub > 0) X[i] -= uij * std::log(ub);
        }
    return X;
}

}  // namespace

IntergenerationalChange intergenerational_ec_change(const Process& p, const Process& q) {
    require_composable(p, q, "intergenerational_ec_change");
    const Context c = context(p);
    const Context d = context(q);
    const Eigen::Index K = c.w.rows(), Kp = c.w.cols(), Kpp = d.w.cols();

    IntergenerationalChange r;
    const double EU2 = c.P.dot(c.U.cwiseAbs2());
    for (Eigen::Index a = 0; a < K; ++a)
        for (Eigen::Index b = 0; b < Kp; ++b) {
            const double uab = snap(c.w(a, b) / c.Wbar);
            const double ub = c.P[a] * uab;
            if (!(ub > 0)) continue;
            const double coeff = c.P[a] * c.U[a] * uab / EU2;
            for (Eigen::Index bb = 0; bb < Kp; ++bb)
                for (Eigen::Index cc = 0; cc < Kpp; ++cc) {
                    const double ub2 = d.P[bb] * snap(d.w(bb, cc) / d.Wbar);
                    if (ub2 > 0) r.formula -= coeff * ub2 * std::log(ub2 / ub);
                }
        }

    const Vec X = ec_observable(c);
    const Vec Y = ec_observable(d);
    const Vec avg = local_average(p, Observable(q.source().types(), Y)).values();
    r.price_route = c.P.dot((avg - X).cwiseProduct(c.U));
    r.discrepancy = r.formula - r.price_route;
    return r;
}

ReversibilityVerdict reversibility(const Process& p) {
    const double sat = tolerances().sat;
    const Factorization f = price_factorize(p);
    const Process& env = f.environmental;
    const Population& mid = env.source();
    const Mat& w = env.kernel();
    const Eigen::Index K = w.rows(), Kp = w.cols();
    const double Np = env.target().size();

    // Joint law of (parent, child) on the intermediate population.
    Mat joint(K, Kp);
    for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index j = 0; j < Kp; ++j) joint(i, j) = snap(mid.weights()[i] * w(i, j) / Np);
    const Vec child = joint.colwise().sum().transpose();
    const Vec parent = joint.rowwise().sum();

    ReversibilityVerdict v;
    for (Eigen::Index i = 0; i < K; ++i)
        for (Eigen::Index j = 0; j < Kp; ++j) {
            double x = joint(i, j);
            if (!(x > 0)) continue;
            v.s_dis -= x * std::log(x / parent[i]);
            v.s_mix_conditional -= x * std::log(x / child[j]);
            v.s_mix -= x * std::log(parent[i]);
            v.s_ec -= x * std::log(x);
        }
    v.right_invertible = v.s_dis <= sat;
    v.left_invertible = v.s_mix_conditional <= sat;
    v.invertible = v.left_invertible && v.right_invertible;
    v.literal_mix_zero = v.s_mix <= sat;
    v.literal_ec_zero = v.s_ec <= sat;

    const Population& target = env.target();
    if (v.left_invertible) {
        // Every child with mass has exactly one parent with mass.
        Mat r = Mat::Zero(Kp, K);
        for (Eigen::Index j = 0; j < Kp; ++j) {
            Eigen::Index best = 0;
            double best_mass = -1;
            for (Eigen::Index i = 0; i < K; ++i) {
                double m = joint(i, j) > 0 ? joint(i, j) : (w(i, j) > 0 ? 0.0 : -0.5);
                if (m > best_mass) {
                    best_mass = m;
                    best = i;
                }
            }
            r(j, best) = 1;
        }
        v.retraction = Process(target, mid, r);
        const Mat prod = w * r;
        for (Eigen::Index i = 0; i < K; ++i) {
            if (!(parent[i] > 0)) continue;
            for (Eigen::Index k = 0; k < K; ++k) v.retraction_residual = std::max(v.retraction_residual, std::abs(prod(i, k) - (i == k)));
        }
    }
    if (v.right_invertible) {
        Mat s = Mat::Zero(Kp, K);
        for (Eigen::Index j = 0; j < Kp; ++j) {
            if (child[j] > 0) {
                for (Eigen::Index i = 0; i < K; ++i) s(j, i) = joint(i, j) / child[j];
            } else {
                for (Eigen::Index i = 0; i < K; ++i)
                    if (w(i, j) > 0) {
                        s(j, i) = 1;
                        break;
                    }
            }
        }
        v.section = Process(target, Population(mid.types(), s.transpose() * target.weights()), s);
        const Mat prod = s * w;
        for (Eigen::Index j = 0; j < Kp; ++j) {
            if (!(child[j] > 0)) continue;
            for (Eigen::Index k = 0; k < Kp; ++k) v.section_residual = std::max(v.section_residual, std::abs(prod(j, k) - (j == k)));
        }
    }
    if (v.invertible) v.inverse_kernel = v.retraction;
    v.dollo_childbearing = v.invertible;
    v.dollo_full = v.invertible && std::abs(fitness_distribution(p).p_star() - 1) <= tolerances().zero;
    return v;
}

namespace {

double ks_enumerate(const Process& p, int T) {
    const Mat& w = p.kernel();
    const Vec& mu = p.source().weights();
    const Eigen::Index K = w.rows();
    Vec reach = mu;
    for (int t = 0; t < T; ++t) reach = w.transpose() * reach;
    const double NT = reach.sum();
    double H = 0;
    std::function<void(Eigen::Index, int, double)> walk = [&](Eigen::Index i, int depth, double mass) {
        if (depth == T) {
            double q = mass / NT;
            H -= xlogx(q);
            return;
        }
        for (Eigen::Index j = 0; j < K; ++j)
            if (w(i, j) > 0) walk(j, depth + 1, mass * w(i, j));
    };
    for (Eigen::Index i = 0; i < K; ++i)
        if (mu[i] > 0) walk(i, 0, mu[i]);
    return H;
}

double ks_chain_rule(const Process& p, int T) {
    const Mat& w = p.kernel();
    const Vec& mu = p.source().weights();
    const Eigen::Index K = w.rows();
    std::vector<Vec> fwd(T + 1), bwd(T + 1);
    fwd[0] = mu;
    for (int t = 1; t <= T; ++t) fwd[t] = w.transpose() * fwd[t - 1];
    bwd[T] = Vec::Ones(K);
    for (int t = T - 1; t >= 0; --t) bwd[t] = w * bwd[t + 1];
    const double NT = fwd[T].sum();
    double H = std::log(NT);
    for (Eigen::Index i = 0; i < K; ++i)
        if (mu[i] > 0 && bwd[0][i] > 0) H -= mu[i] * bwd[0][i] / NT * std::log(mu[i]);
    for (int t = 1; t <= T; ++t)
        for (Eigen::Index i = 0; i < K; ++i)
            for (Eigen::Index j = 0; j < K; ++j) {
                double pair = fwd[t - 1][i] * w(i, j) * bwd[t][j] / NT;
                if (pair > 0) H -= pair * std::log(w(i, j));
            }
    return H;
}

}  // namespace

double ks_entropy(const Process& p, int T, KsMethod method) {
    if (!p.endomorphic()) throw MismatchError("ks_entropy: process must map a type set to itself");
    if (T < 1 || T > 6) throw InvalidInput("ks_entropy: T must lie in [1, 6]");
    {
        Vec reach = p.source().weights();
        for (int t = 0; t < T; ++t) reach = p.kernel().transpose() * reach;
        if (!(reach.sum() > 0)) throw DomainError("ks_entropy: no mass survives " + std::to_string(T) + " steps");
    }
    if (method == KsMethod::automatic)
        method = std::pow(static_cast<double>(p.source().dim()), T + 1) <= 1e6 ? KsMethod::enumerate : KsMethod::chain_rule;
    return method == KsMethod::enumerate ? ks_enumerate(p, T) : ks_chain_rule(p, T);
}

std::vector<double> ks_entropy_series(const Process& p, int T) {
    std::vector<double> out;
    for (int t = 1; t <= T; ++t) out.push_back(ks_entropy(p, t));
    return out;
}

}  // namespace pricekit
