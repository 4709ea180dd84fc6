#include "support.hpp"

#include "pricekit/errors.hpp"
#include "pricekit/open_process.hpp"
#include "pricekit/price.hpp"

#include <doctest.h>

using namespace pricekit;

namespace {

Process f5() {
    Mat w(2, 2);
    w << 1, 1, 0.5, 0;
    Vec mu(2);
    mu << 1, 2;
    TypeSet t({"a", "b"});
    return Process::derive(Population(t, mu), t, w);
}

}  // namespace

TEST_CASE("parented and orphan densities") {
    Vec orphans(2);
    orphans << 2, 0;
    const OpenProcess op = OpenProcess::with_orphans(f5(), orphans);
    // closed target (2, 1), full target (4, 1)
    CHECK(op.parented_density()[0] == doctest::Approx(0.5));
    CHECK(op.parented_density()[1] == 1.0);
    CHECK(op.orphan_density()[0] == doctest::Approx(0.5));
    CHECK(op.parented_fraction() == doctest::Approx(3.0 / 5));
    Vec too_small(2);
    too_small << 1, 1;
    CHECK_THROWS_AS(OpenProcess(f5(), Population(f5().target().types(), too_small)), InvalidInput);
    CHECK_THROWS_AS(OpenProcess::with_orphans(f5(), Vec::Ones(3)), MismatchError);
}

TEST_CASE("KGS forms agree and reduce to Price without orphans") {
    testing::Gen g(401);
    for (int trial = 0; trial < 500; ++trial) {
        const Process p = g.process();
        const int kp = static_cast<int>(p.target().dim());
        Vec orphans(kp);
        for (int j = 0; j < kp; ++j) orphans[j] = g.coin(0.4) ? 0.0 : g.uniform(0, 2);
        const OpenProcess op = OpenProcess::with_orphans(p, orphans);
        const Observable x(p.source().types(), g.values(static_cast<int>(p.source().dim())));
        const Observable y(p.target().types(), g.values(kp));
        const KgsTerms k = kgs(op, x, y);
        const double scale = std::max({1.0, std::abs(k.delta), std::abs(k.selection), std::abs(k.transmission)});
        CHECK(std::abs(k.residual_nu) <= 1e-10 * scale);
        CHECK(std::abs(k.residual_pi) <= 1e-10 * scale);
        CHECK(std::abs(k.orphan_nu - k.orphan_pi) <= 1e-10 * scale);

        const DualKgsTerms d = dual_fitness_kgs(op, x, y);
        CHECK(std::abs(d.residual) <= 1e-10 * scale);
        CHECK(std::abs(d.counting_identity - 1) <= 1e-12);

        const OpenProcess closed = OpenProcess::with_orphans(p, Vec::Zero(kp));
        const KgsTerms c = kgs(closed, x, y);
        const PriceDecomposition pr = price(p, x, y);
        CHECK(c.selection == pr.ns);
        CHECK(c.transmission == pr.ec);
        CHECK(c.delta == pr.delta);
        CHECK(c.orphan_nu == 0.0);
        CHECK(c.p_parented == 1.0);
    }
}

TEST_CASE("dual fitness integrates to one against counting measure, not against the parented children") {
    const OpenProcess op = OpenProcess::with_orphans(f5(), Vec::Zero(2));
    const DualKgsTerms d = dual_fitness_kgs(op, Observable::constant(f5().source().types(), 0), Observable::constant(f5().target().types(), 0));
    // W* = mu'_pi = (2, 1), N'_pi = 3
    CHECK(d.dual_fitness[0] == doctest::Approx(2.0));
    CHECK(d.counting_identity == doctest::Approx(1.0));
    CHECK(d.deme_expectation == doctest::Approx(5.0 / 3));
}
