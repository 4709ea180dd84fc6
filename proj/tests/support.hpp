// Random generators and plain std::vector oracles shared by the tests.
// The oracles deliberately avoid the library so that they can check it.
#pragma once

#include "pricekit/entropy.hpp"
#include "pricekit/process.hpp"
#include "pricekit/quantum.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testing {

using pricekit::Mat;
using pricekit::Vec;
using V = std::vector<double>;
using M = std::vector<std::vector<double>>;

inline M to_m(const Mat& w) {
    M out(static_cast<std::size_t>(w.rows()), V(static_cast<std::size_t>(w.cols())));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j) out[i][j] = w(i, j);
    return out;
}

inline V to_v(const Vec& v) { return V(v.data(), v.data() + v.size()); }

inline Vec from_v(const V& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

inline Mat from_m(const M& m) {
    Mat out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m[0].size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[0].size(); ++j) out(i, j) = m[i][j];
    return out;
}

// ---------------------------------------------------------------- generators

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double a = 0, double b = 1) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
    bool coin(double p) { return uniform() < p; }

    Vec weights(int k) {
        Vec v(k);
        for (int i = 0; i < k; ++i) v[i] = uniform(0.05, 3.0);
        return v;
    }

    Vec values(int k, double lo = -2, double hi = 2) {
        Vec v(k);
        for (int i = 0; i < k; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    // Nonnegative kernel with some zero entries and, sometimes, a barren row.
    Mat kernel(int k, int kp, double zero_prob = 0.3, double barren_prob = 0.1) {
        Mat w(k, kp);
        for (int i = 0; i < k; ++i) {
            const bool barren = coin(barren_prob);
            for (int j = 0; j < kp; ++j) w(i, j) = barren || coin(zero_prob) ? 0.0 : uniform(0.0, 2.0);
        }
        // keep at least one childbearing row
        if (w.sum() == 0) w(0, 0) = 1.0;
        return w;
    }

    pricekit::Process process(int k, int kp) {
        using namespace pricekit;
        return Process::derive(Population(TypeSet::indexed(k, "s"), weights(k)), TypeSet::indexed(kp, "t"), kernel(k, kp));
    }

    pricekit::Process process() { return process(integer(1, 8), integer(1, 8)); }

    pricekit::Process endomorphic(int k) {
        using namespace pricekit;
        TypeSet t = TypeSet::indexed(k);
        return Process::derive(Population(t, weights(k)), t, kernel(k, k));
    }

    // q starts at the target of p
    pricekit::Process next(const pricekit::Process& p, int kpp) {
        using namespace pricekit;
        while (true) {
            Mat w = kernel(static_cast<int>(p.target().dim()), kpp);
            if ((w.transpose() * p.target().weights()).sum() > 0) return Process::derive(p.target(), TypeSet::indexed(kpp, "u"), w);
        }
    }

    // Fitness equal to 1/p* on a random subset of mass p* and 0 elsewhere.
    pricekit::Process selective_equilibrium(int k, double p_star) {
        using namespace pricekit;
        Vec mu(k);
        const int live = integer(1, k - 1);
        double live_mass = 0, dead_mass = 0;
        for (int i = 0; i < k; ++i) {
            mu[i] = uniform(0.1, 1.0);
            (i < live ? live_mass : dead_mass) += mu[i];
        }
        for (int i = 0; i < k; ++i) mu[i] *= i < live ? p_star / live_mass : (1 - p_star) / dead_mass;
        const int kp = integer(1, 5);
        Mat w = Mat::Zero(k, kp);
        const double Wbar = uniform(0.5, 2.0);
        for (int i = 0; i < live; ++i) {
            Vec row(kp);
            for (int j = 0; j < kp; ++j) row[j] = uniform(0.1, 1.0);
            w.row(i) = (row / row.sum() * Wbar / p_star).transpose();
        }
        return Process::derive(Population(TypeSet::indexed(k, "s"), mu), TypeSet::indexed(kp, "t"), w);
    }

    pricekit::CMat complex_matrix(Eigen::Index r, Eigen::Index c) {
        pricekit::CMat m(r, c);
        std::normal_distribution<double> g;
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j) m(i, j) = {g(rng), g(rng)};
        return m;
    }

    pricekit::CMat density(Eigen::Index d) {
        pricekit::CMat g = complex_matrix(d, d);
        pricekit::CMat rho = g * g.adjoint();
        return rho / rho.trace().real() * uniform(0.5, 2.0);
    }

    pricekit::CMat hermitian(Eigen::Index d) {
        pricekit::CMat g = complex_matrix(d, d);
        return 0.5 * (g + g.adjoint());
    }

    std::vector<pricekit::CMat> kraus(Eigen::Index din, Eigen::Index dout, int count) {
        std::vector<pricekit::CMat> out;
        for (int k = 0; k < count; ++k) out.push_back(complex_matrix(dout, din) * uniform(0.2, 1.0));
        return out;
    }
};

// ---------------------------------------------------------------- oracles

inline double sum(const V& v) {
    double s = 0;
    for (double x : v) s += x;
    return s;
}

inline double plogp(double x) { return x > 0 ? x * std::log(x) : 0.0; }

struct OracleFitness {
    V P;  // mu / N
    V W;
    double Wbar = 0;
    V U;
};

inline OracleFitness oracle_fitness(const V& mu, const M& w) {
    OracleFitness f;
    const double N = sum(mu);
    double Np = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        f.P.push_back(mu[i] / N);
        f.W.push_back(sum(w[i]));
        Np += mu[i] * f.W.back();
    }
    f.Wbar = Np / N;
    for (double Wi : f.W) f.U.push_back(Wi / f.Wbar);
    return f;
}

struct OraclePrice {
    double delta, ns, ec;
};

// Direct sums: delta from the child population, ns as a covariance, ec from local child averages.
inline OraclePrice oracle_price(const V& mu, const M& w, const V& x, const V& y) {
    const OracleFitness f = oracle_fitness(mu, w);
    const std::size_t K = mu.size(), Kp = w[0].size();
    V child(Kp, 0.0);
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < Kp; ++j) child[j] += mu[i] * w[i][j];
    const double Np = sum(child);
    double Ey_child = 0, Ex = 0, EU = 0, ExU = 0, ec = 0;
    for (std::size_t j = 0; j < Kp; ++j) Ey_child += child[j] * y[j] / Np;
    for (std::size_t i = 0; i < K; ++i) {
        Ex += f.P[i] * x[i];
        EU += f.P[i] * f.U[i];
        ExU += f.P[i] * x[i] * f.U[i];
        if (f.W[i] > 0) {
            double avg = 0;
            for (std::size_t j = 0; j < Kp; ++j) avg += w[i][j] * y[j];
            avg /= f.W[i];
            ec += f.P[i] * (avg - x[i]) * f.U[i];
        }
    }
    return {Ey_child - Ex, ExU - Ex * EU, ec};
}

// Moments of a discrete distribution of fitness values.
struct OracleDist {
    V p, u;
    double E(const std::function<double(double)>& f) const {
        double s = 0;
        for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * f(u[i]);
        return s;
    }
    double var() const {
        const double m = E([](double x) { return x; });
        return E([&](double x) { return (x - m) * (x - m); });
    }
    double p_star() const { return E([](double x) { return x > 1e-12 ? 1.0 : 0.0; }); }
    double s_ns() const { return E([](double x) { return -plogp(x); }); }
    // d_NS S_NS = cov(-U log U, U)
    double ds_ns() const {
        return E([](double x) { return -plogp(x) * x; }) - s_ns() * E([](double x) { return x; });
    }
    // d2_NS S_NS = E[-(U-1)^2 U log U]
    double d2s_ns() const { return E([](double x) { return -(x - 1) * (x - 1) * plogp(x); }); }
};

inline OracleDist oracle_dist(const V& mu, const M& w) {
    const OracleFitness f = oracle_fitness(mu, w);
    return {f.P, f.U};
}

struct OracleCell {
    double u_bar = 0, s_ec = 0, s_dis = 0, s_mix = 0, s_ns = 0;
};

// Entropy functionals of one cell, recomputed from the kernel entries.
inline OracleCell oracle_cell(const V& mu, const M& w, const std::vector<std::size_t>& A, const std::vector<std::size_t>& B) {
    const OracleFitness f = oracle_fitness(mu, w);
    OracleCell c;
    V uab(mu.size(), 0.0);
    for (std::size_t i : A) {
        double s = 0;
        for (std::size_t j : B) s += w[i][j];
        uab[i] = s / f.Wbar;
        c.u_bar += f.P[i] * uab[i];
    }
    if (c.u_bar <= 0) return c;
    c.s_ec = -c.u_bar * std::log(c.u_bar);
    for (std::size_t i : A) {
        if (uab[i] <= 1e-14) continue;
        const double D = uab[i] / f.U[i];
        c.s_dis += -f.P[i] * uab[i] * std::log(D);
        c.s_mix += f.P[i] * uab[i] * std::log(D / c.u_bar);
        c.s_ns += -f.P[i] * uab[i] * std::log(f.U[i]);
    }
    return c;
}

// Entropy of the mu-weighted path measure of length T, normalized by the mass that survives.
inline double oracle_path_entropy(const V& mu, const M& w, int T) {
    const std::size_t K = mu.size();
    std::vector<std::pair<double, std::size_t>> paths;  // (mass, endpoint)
    for (std::size_t i = 0; i < K; ++i)
        if (mu[i] > 0) paths.push_back({mu[i], i});
    for (int t = 0; t < T; ++t) {
        std::vector<std::pair<double, std::size_t>> next;
        for (auto [m, i] : paths)
            for (std::size_t j = 0; j < K; ++j)
                if (w[i][j] > 0) next.push_back({m * w[i][j], j});
        paths = std::move(next);
    }
    double total = 0;
    for (auto& pr : paths) total += pr.first;
    double H = 0;
    for (auto& pr : paths) H -= plogp(pr.first / total);
    return H;
}

// Exact one-sided inverses of a stochastic kernel e (K x K') between populations mid and child = mid e.
// An inverse is itself a process child -> mid: a K' x K stochastic matrix x with child x = mid, and
//   retraction: e x = I_K      section: x e = I_K'
// The feasible set is a polytope, so it is nonempty iff it has a vertex, and a vertex is the unique
// solution of the equality constraints on its support. Enumerate every support and solve there.
inline bool oracle_inverse_exists(const M& e, const V& mid, bool retraction) {
    const std::size_t K = e.size(), Kp = e[0].size(), n = K * Kp;
    V child(Kp, 0.0);
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < Kp; ++j) child[j] += mid[i] * e[i][j];
    // unknown x(j, k) sits at column j * K + k
    std::vector<V> rows;
    V rhs;
    if (retraction) {
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t k = 0; k < K; ++k) {
                V a(n, 0.0);
                for (std::size_t j = 0; j < Kp; ++j) a[j * K + k] = e[i][j];
                rows.push_back(a);
                rhs.push_back(i == k ? 1.0 : 0.0);
            }
    } else {
        for (std::size_t j = 0; j < Kp; ++j)
            for (std::size_t l = 0; l < Kp; ++l) {
                V a(n, 0.0);
                for (std::size_t k = 0; k < K; ++k) a[j * K + k] = e[k][l];
                rows.push_back(a);
                rhs.push_back(j == l ? 1.0 : 0.0);
            }
    }
    for (std::size_t j = 0; j < Kp; ++j) {
        V a(n, 0.0);
        for (std::size_t k = 0; k < K; ++k) a[j * K + k] = 1;
        rows.push_back(a);
        rhs.push_back(1.0);
    }
    for (std::size_t k = 0; k < K; ++k) {
        V a(n, 0.0);
        for (std::size_t j = 0; j < Kp; ++j) a[j * K + k] = child[j];
        rows.push_back(a);
        rhs.push_back(mid[k]);
    }
    const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
    Mat A(m, static_cast<Eigen::Index>(n));
    Vec b(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) A(r, static_cast<Eigen::Index>(c)) = rows[static_cast<std::size_t>(r)][c];
        b[r] = rhs[static_cast<std::size_t>(r)];
    }
    // presolve: a zero right-hand side with nonnegative coefficients pins those unknowns to zero
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c) {
        bool pinned = false;
        for (Eigen::Index r = 0; r < m && !pinned; ++r)
            pinned = b[r] == 0 && A.row(r).minCoeff() >= 0 && A(r, static_cast<Eigen::Index>(c)) > 0;
        if (!pinned) free_cols.push_back(c);
    }
    for (std::size_t mask = 1; mask < (std::size_t{1} << free_cols.size()); ++mask) {
        std::vector<Eigen::Index> cols;
        for (std::size_t c = 0; c < free_cols.size(); ++c)
            if (mask >> c & 1) cols.push_back(static_cast<Eigen::Index>(free_cols[c]));
        if (static_cast<Eigen::Index>(cols.size()) > m) continue;
        Mat As(m, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) As.col(static_cast<Eigen::Index>(c)) = A.col(cols[c]);
        const Eigen::ColPivHouseholderQR<Mat> qr(As);
        if (qr.rank() != As.cols()) continue;
        const Vec x = qr.solve(b);
        if ((As * x - b).cwiseAbs().maxCoeff() > 1e-10) continue;
        if (x.minCoeff() < -1e-12) continue;
        return true;
    }
    return false;
}

}  // namespace testing
