#include "support.hpp"

#include "pricekit/entropy.hpp"
#include "pricekit/errors.hpp"
#include "pricekit/open_process.hpp"
#include "pricekit/price.hpp"
#include "pricekit/quantum.hpp"

#include <doctest.h>

#include <cmath>

using namespace pricekit;

namespace {

std::vector<CMat> block_projections(const Partition& P) {
    const auto d = static_cast<Eigen::Index>(P.universe());
    std::vector<CMat> out;
    for (const Block& b : P.blocks()) {
        CMat m = CMat::Zero(d, d);
        for (std::size_t i : b) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1;
        out.push_back(m);
    }
    return out;
}

Partition random_partition(testing::Gen& g, int k) {
    const int nb = g.integer(1, k);
    std::vector<Block> b(static_cast<std::size_t>(nb));
    for (int i = 0; i < k; ++i) b[static_cast<std::size_t>(i < nb ? i : g.integer(0, nb - 1))].push_back(static_cast<std::size_t>(i));
    return Partition(b, static_cast<std::size_t>(k));
}

QuantumProcess random_map(testing::Gen& g) {
    const int din = g.integer(1, 4), dout = g.integer(1, 4);
    return QuantumProcess(Superoperator::from_kraus(g.kraus(din, dout, g.integer(1, 3))), DensityOperator(g.density(din)));
}

// K = sqrt2 |0><v| with v off the computational basis, rho = Id.
QuantumProcess rotated_selective_fixture() {
    const double t = 0.7;
    CVec v(2);
    v << std::cos(t), cplx(0, std::sin(t));
    CVec e0 = CVec::Zero(2);
    e0[0] = 1;
    CMat K = std::sqrt(2.0) * e0 * v.adjoint();
    return QuantumProcess(Superoperator::from_kraus({K}), DensityOperator(CMat::Identity(2, 2)));
}

void check_close(double a, double b, double tol) { CHECK(std::abs(a - b) <= tol * std::max(1.0, std::abs(b))); }

}  // namespace

TEST_CASE("density operators") {
    CMat bad(2, 2);
    bad << 1, 0, 0, -0.5;
    CHECK_THROWS_AS(DensityOperator{bad}, InvalidInput);
    CMat nonherm(2, 2);
    nonherm << 1, 1, 0, 1;
    CHECK_THROWS_AS(DensityOperator{nonherm}, InvalidInput);
    CHECK_THROWS_AS(DensityOperator{CMat::Zero(2, 2)}, InvalidInput);
    CMat ok(2, 2);
    ok << 1, cplx(0, 0.5), cplx(0, -0.5), 1;
    CHECK(DensityOperator(ok).trace() == doctest::Approx(2.0));
}

TEST_CASE("Kraus application, adjoint duality and composition") {
    testing::Gen g(601);
    for (int trial = 0; trial < 100; ++trial) {
        const int din = g.integer(1, 4), dout = g.integer(1, 4);
        const auto K = g.kraus(din, dout, g.integer(1, 3));
        const Superoperator S = Superoperator::from_kraus(K);
        const CMat X = g.complex_matrix(din, din), Y = g.complex_matrix(dout, dout);
        CMat direct = CMat::Zero(dout, dout);
        for (const CMat& k : K) direct += k * X * k.adjoint();
        CHECK((S.apply(X) - direct).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, direct.cwiseAbs().maxCoeff()));
        const cplx lhs = trace_product(S.adjoint().apply(Y), X), rhs = trace_product(Y, S.apply(X));
        CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(rhs)));

        const auto K2 = g.kraus(dout, din, 2);
        const Superoperator T = Superoperator::from_kraus(K2);
        CHECK((T.after(S).apply(X) - T.apply(S.apply(X))).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, X.cwiseAbs().maxCoeff() * 100));
    }
}

TEST_CASE("validation flags non-positive maps and target mismatch") {
    testing::Gen g(602);
    const QuantumProcess good = random_map(g);
    CHECK(validate(good).ok);
    const Eigen::Index d = 2;
    const Superoperator neg(-CMat::Identity(d * d, d * d), d, d);
    CHECK_FALSE(validate(QuantumProcess(neg, DensityOperator(CMat::Identity(2, 2)), DensityOperator(CMat::Identity(2, 2)))).ok);
    CMat wrong = CMat::Identity(2, 2) * 3.0;
    const QuantumProcess mis(Superoperator::identity(2), DensityOperator(CMat::Identity(2, 2)), DensityOperator(wrong));
    const QuantumDiagnostics dg = validate(mis);
    CHECK_FALSE(dg.ok);
    CHECK(dg.target_residual > 0.5);
}

TEST_CASE("trace-preserving maps are purely environmental") {
    testing::Gen g(603);
    // unitary conjugation
    const CMat A = g.complex_matrix(3, 3);
    const Eigen::HouseholderQR<CMat> qr(A);
    const CMat Q = qr.householderQ();
    const QuantumProcess p(Superoperator::from_kraus({Q}), DensityOperator(g.density(3)));
    const QuantumFitness f = q_fitness(p);
    CHECK((f.W - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(f.Wbar == doctest::Approx(1.0));
    CHECK(q_laws(p).zeroth.lhs == doctest::Approx(0.0).scale(1));
}

TEST_CASE("quantum Price residuals on random positive maps") {
    testing::Gen g(604);
    for (int trial = 0; trial < 200; ++trial) {
        const QuantumProcess p = random_map(g);
        const QuantumObservable X(g.hermitian(p.map().d_in())), Y(g.hermitian(p.map().d_out()));
        const QuantumPrice q = q_price(p, X, Y);
        const double scale = std::max({1.0, std::abs(q.left.delta), std::abs(q.left.ns), std::abs(q.left.ec)});
        CHECK(q.left.residual <= 1e-9 * scale);
        CHECK(q.right.residual <= 1e-9 * scale);
        // gap between the two selection terms is E[[X, U]]
        CHECK(std::abs((q.left.ns - q.right.ns) - q.commutator_gap) <= 1e-9 * scale);

        const QuantumFactorization fz = q_factorize(p);
        CHECK(fz.reconstruction_residual <= 1e-9);
        CHECK(fz.trace_residual <= 1e-9);
    }
}

TEST_CASE("quantum Fisher identity on a composed pair") {
    testing::Gen g(605);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = g.integer(1, 3), dp = g.integer(1, 3), dpp = g.integer(1, 3);
        const QuantumProcess p(Superoperator::from_kraus(g.kraus(d, dp, 2)), DensityOperator(g.density(d)));
        const QuantumProcess q(Superoperator::from_kraus(g.kraus(dp, dpp, 2)), p.target());
        const QuantumFitness fq = q_fitness(q);
        const QuantumObservable Up(fq.U);
        // composed relative fitness pulled back to the source
        const QuantumProcess pq(q.map().after(p.map()), p.source());
        const QuantumObservable Upq(q_fitness(pq).U);
        const QuantumPrice r = q_price(p, Upq, Up);
        // E[U'] over mu' is 1 and E[U''] over mu is 1
        CHECK(std::abs(r.left.delta) <= 1e-9);
        CHECK(r.left.residual <= 1e-9 * std::max(1.0, std::abs(r.left.ns)));
    }
}

TEST_CASE("quantum Jensen on random states and observables") {
    testing::Gen g(606);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = g.integer(1, 4);
        const DensityOperator rho(g.density(d));
        const int which = trial % 3;
        CMat X = g.hermitian(d);
        std::function<double(double)> f;
        if (which == 0) f = [](double x) { return x * x; };
        if (which == 1) {
            X = X * X.adjoint();
            f = [](double x) { return xlogx(x); };
        }
        if (which == 2) f = [](double x) { return std::exp(x); };
        const double lhs = q_expectation(rho, QuantumObservable(hermitian_function(X, f)));
        const double rhs = f(q_expectation(rho, QuantumObservable(X)));
        CHECK(lhs >= rhs - 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("diagonal embedding reproduces classical functionals") {
    testing::Gen g(607);
    for (int trial = 0; trial < 200; ++trial) {
        const Process p = g.process();
        const QuantumProcess q = embed(p);
        CHECK(validate(q).ok);
        const Observable x(p.source().types(), g.values(static_cast<int>(p.source().dim())));
        const Observable y(p.target().types(), g.values(static_cast<int>(p.target().dim())));
        const PriceDecomposition c = price(p, x, y);
        const QuantumPrice qp = q_price(q, embed(x), embed(y));
        check_close(qp.left.ns.real(), c.ns, 1e-10);
        check_close(qp.left.ec.real(), c.ec, 1e-10);
        check_close(qp.right.ns.real(), c.ns, 1e-10);
        CHECK(std::abs(qp.commutator_gap) <= 1e-10);

        const QuantumLaws ql = q_laws(q);
        check_close(ql.zeroth.lhs, zeroth_law(p).lhs, 1e-10);
        check_close(ql.first.lhs, first_law(p).lhs, 1e-10);
        check_close(ql.gibbs.lhs, gibbs_inequality(p).lhs, 1e-10);
        check_close(ql.second.lhs, second_law(p).lhs, 1e-10);
        check_close(ql.acceleration.lhs, selective_acceleration(p).lhs, 1e-10);

        const int k = static_cast<int>(p.source().dim()), kp = static_cast<int>(p.target().dim());
        const Partition A = random_partition(g, k), B = random_partition(g, kp);
        const EntropyProfile e = environmental_profile(p, A, B);
        const QuantumEntropy qe = q_partition_entropy(q, block_projections(A), block_projections(B));
        check_close(qe.profile.s_ec, e.s_ec, 1e-10);
        check_close(qe.profile.s_dis, e.s_dis, 1e-10);
        check_close(qe.profile.s_mix, e.s_mix, 1e-10);
        check_close(qe.profile.s_ns, e.s_ns, 1e-10);
        REQUIRE(qe.profile.per_cell.size() == e.per_cell.size());
        for (std::size_t i = 0; i < e.per_cell.size(); ++i) {
            check_close(qe.profile.per_cell[i].s_ns, e.per_cell[i].s_ns, 1e-10);
            check_close(qe.profile.per_cell[i].p_tilde, e.per_cell[i].p_tilde, 1e-10);
        }
        const ThirdLawReport t = third_law(p, A, B);
        check_close(qe.third.ns_s_ec.lhs, t.ns_s_ec.lhs, 1e-10);
        check_close(qe.third.ns_s_dis.lhs, t.ns_s_dis.lhs, 1e-10);
        check_close(qe.third.ns_s_mix.lhs, t.ns_s_mix.lhs, 1e-10);
        for (std::size_t i = 0; i < t.ns_s_dis.chain.size(); ++i)
            check_close(qe.third.ns_s_dis.chain[i].value, t.ns_s_dis.chain[i].value, 1e-9);
        CHECK(qe.max_imaginary <= 1e-10);
    }
}

TEST_CASE("quantum law chains on random maps") {
    testing::Gen g(608);
    int acceleration_failures = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const QuantumProcess p = random_map(g);
        const QuantumLaws l = q_laws(p);
        CHECK(l.zeroth.holds());
        CHECK(l.first.holds());
        CHECK(l.gibbs.holds());
        CHECK(l.second.holds());
        if (!l.acceleration.holds()) ++acceleration_failures;

        const QuantumEntropy e = q_partition_entropy(p, embed_singletons(p.map().d_in()), embed_singletons(p.map().d_out()));
        CHECK(std::abs(e.profile.s_ec - e.profile.s_dis - e.profile.s_mix) <= 1e-10 * std::max(1.0, e.profile.s_ec));
        CHECK(e.bounds.dispersion.holds());
        CHECK(e.bounds.mixing.holds());
        CHECK(std::abs(e.third.sum_residual) <= 1e-9);
    }
    // same defect as the classical acceleration bounds
    CHECK(acceleration_failures > 0);
}

TEST_CASE("rotated selective-equilibrium fixture matches F1") {
    const QuantumProcess p = rotated_selective_fixture();
    const QuantumFitness f = q_fitness(p);
    CHECK(f.Wbar == doctest::Approx(1.0));
    Eigen::SelfAdjointEigenSolver<CMat> es(f.U);
    CHECK(es.eigenvalues()[0] == doctest::Approx(0.0).scale(1));
    CHECK(es.eigenvalues()[1] == doctest::Approx(2.0));
    const FitnessDistribution d = spectral_distribution(p);
    CHECK(d.p_star() == doctest::Approx(0.5));
    const QuantumLaws l = q_laws(p);
    CHECK(l.zeroth.lhs == doctest::Approx(1.0));
    CHECK(l.zeroth.equilibrium_class == EquilibriumClass::selective_equilibrium);
    CHECK(l.gibbs.lhs == doctest::Approx(-std::log(2.0)));
    CHECK(l.first.lhs == doctest::Approx(2.0));
    CHECK(l.second.lhs == doctest::Approx(-std::log(2.0)));
    CHECK(l.acceleration.lhs == doctest::Approx(-std::log(2.0)));
    CHECK(l.zeroth.saturated[0]);
    CHECK(l.zeroth.saturated[1]);
    CHECK(l.gibbs.saturated[0]);
    CHECK(l.gibbs.saturated[1]);
    for (std::size_t k = 0; k < 4; ++k) CHECK(l.second.saturated[k]);
}

TEST_CASE("quantum third-law windows are violated off the diagonal") {
    testing::Gen g(609);
    int violated = 0;
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const QuantumProcess p = random_map(g);
        const QuantumEntropy e = q_partition_entropy(p, embed_singletons(p.map().d_in()), embed_singletons(p.map().d_out()));
        if (!e.third.ns_s_ec.holds() || !e.third.ns_s_dis.holds() || !e.third.ns_s_mix.holds()) ++violated;
        worst = std::min({worst, e.third.ns_s_ec.min_slack(), e.third.ns_s_dis.min_slack(), e.third.ns_s_mix.min_slack()});
    }
    CHECK(violated > 0);
    CHECK(worst < -1e-3);
}

TEST_CASE("partition checks") {
    testing::Gen g(610);
    const QuantumProcess p = random_map(g);
    std::vector<CMat> half = embed_singletons(p.map().d_in());
    half.pop_back();
    if (!half.empty()) CHECK_THROWS_AS(q_partition_entropy(p, half, embed_singletons(p.map().d_out())), InvalidInput);
    CMat notproj = CMat::Identity(p.map().d_in(), p.map().d_in()) * 0.5;
    CHECK_THROWS_AS(q_partition_entropy(p, {notproj, notproj}, embed_singletons(p.map().d_out())), InvalidInput);
}

TEST_CASE("quantum KGS with a commuting orphan operator") {
    testing::Gen g(611);
    for (int trial = 0; trial < 100; ++trial) {
        const QuantumProcess p = random_map(g);
        const CMat t = p.target().matrix();
        const CMat orphan = t * t / std::max(1.0, t.trace().real()) * g.uniform(0.1, 2.0);
        const OpenQuantumProcess op = OpenQuantumProcess::with_orphans(p, orphan);
        const QuantumObservable X(g.hermitian(p.map().d_in())), Y(g.hermitian(p.map().d_out()));
        const QuantumKgs k = q_kgs(op, X, Y);
        const double scale = std::max({1.0, std::abs(k.delta), std::abs(k.left.selection), std::abs(k.left.transmission)});
        CHECK(k.left.residual_nu <= 1e-9 * scale);
        CHECK(k.left.residual_pi <= 1e-9 * scale);
        CHECK(k.right.residual_nu <= 1e-9 * scale);
        CHECK(k.right.residual_pi <= 1e-9 * scale);
    }
    // embedded classical open process matches the classical terms
    const Process cp = g.process(3, 3);
    Vec orphans = Vec::Constant(3, 0.4);
    const OpenProcess cop = OpenProcess::with_orphans(cp, orphans);
    const Observable x(cp.source().types(), g.values(3)), y(cp.target().types(), g.values(3));
    const KgsTerms ck = kgs(cop, x, y);
    const OpenQuantumProcess qop = OpenQuantumProcess::with_orphans(embed(cp), CMat(orphans.cast<cplx>().asDiagonal()));
    const QuantumKgs qk = q_kgs(qop, embed(x), embed(y));
    check_close(qk.delta, ck.delta, 1e-10);
    check_close(qk.left.orphan_nu.real(), ck.orphan_nu, 1e-10);
    check_close(qk.left.selection.real(), ck.selection, 1e-10);

    CHECK_THROWS_AS(OpenQuantumProcess::with_orphans(embed(cp), g.density(3)), InvalidInput);
}
