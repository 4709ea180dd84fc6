#include "pricekit/quantum.hpp"

#include "pricekit/errors.hpp"
#include "pricekit/tolerance.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace pricekit {

namespace {

double max_abs(const CMat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

double hermiticity_residual(const CMat& A) { return max_abs(A - A.adjoint()); }

CMat hermitize(const CMat& A) { return 0.5 * (A + A.adjoint()); }

void require_hermitian(const CMat& A, const char* what) {
    if (A.rows() != A.cols()) throw MismatchError(std::string(what) + ": matrix is not square");
    if (hermiticity_residual(A) > tolerances().herm * std::max(1.0, max_abs(A)))
        throw InvalidInput(std::string(what) + ": matrix is not Hermitian");
}

// Index of vec(X^T) entry for the column-major vec(X) index k of a d x d matrix.
Eigen::Index transpose_index(Eigen::Index k, Eigen::Index d) { return (k / d) + (k % d) * d; }

CVec vec(const CMat& X) { return Eigen::Map<const CVec>(X.data(), X.size()); }

CMat unvec(const CVec& v, Eigen::Index d) { return Eigen::Map<const CMat>(v.data(), d, d); }

CMat kron(const CMat& A, const CMat& B) {
    CMat out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

double spectral_norm_psd(const CMat& A) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(A));
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

void require_projections(const std::vector<CMat>& ps, Eigen::Index d, const char* what) {
    if (ps.empty()) throw InvalidInput(std::string(what) + ": empty partition");
    const double tol = tolerances().herm;
    CMat sum = CMat::Zero(d, d);
    for (const CMat& p : ps) {
        if (p.rows() != d || p.cols() != d) throw MismatchError(std::string(what) + ": projection has the wrong dimension");
        if (hermiticity_residual(p) > tol || max_abs(p * p - p) > tol)
            throw InvalidInput(std::string(what) + ": not a Hermitian projection");
        sum += p;
    }
    if (max_abs(sum - CMat::Identity(d, d)) > tol) throw InvalidInput(std::string(what) + ": not a resolution of the identity");
}

}  // namespace

CMat hermitian_function(const CMat& A, const std::function<double(double)>& f) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(A));
    const Eigen::VectorXd& ev = es.eigenvalues();
    CVec fv(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k) fv[k] = f(ev[k]);
    return es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().adjoint();
}

cplx trace_product(const CMat& A, const CMat& B) { return A.cwiseProduct(B.transpose()).sum(); }

DensityOperator::DensityOperator(const CMat& m) {
    require_hermitian(m, "density operator");
    const Tolerances& tol = tolerances();
    CMat h = hermitize(m);
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev.minCoeff() < -tol.psd * scale) throw InvalidInput("density operator: negative eigenvalue");
    if (ev.minCoeff() < 0) {
        Eigen::VectorXd clipped = ev.cwiseMax(0.0);
        h = es.eigenvectors() * clipped.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    }
    m_ = h;
    trace_ = m_.trace().real();
    if (!(trace_ > 0)) throw InvalidInput("density operator: trace must be positive");
}

QuantumObservable::QuantumObservable(const CMat& m) {
    require_hermitian(m, "quantum observable");
    m_ = hermitize(m);
}

QuantumObservable QuantumObservable::identity(Eigen::Index d) { return QuantumObservable(CMat::Identity(d, d)); }

Superoperator::Superoperator(CMat S, Eigen::Index d_in, Eigen::Index d_out) : S_(std::move(S)), d_in_(d_in), d_out_(d_out) {
    if (S_.rows() != d_out * d_out || S_.cols() != d_in * d_in)
        throw MismatchError("superoperator: matrix shape does not match the dimensions");
}

Superoperator Superoperator::from_kraus(const std::vector<CMat>& kraus) {
    if (kraus.empty()) throw InvalidInput("kraus: empty operator list");
    const Eigen::Index dout = kraus.front().rows(), din = kraus.front().cols();
    CMat S = CMat::Zero(dout * dout, din * din);
    for (const CMat& K : kraus) {
        if (K.rows() != dout || K.cols() != din) throw MismatchError("kraus: operators differ in shape");
        S += kron(K.conjugate(), K);
    }
    return Superoperator(std::move(S), din, dout);
}

Superoperator Superoperator::identity(Eigen::Index d) { return Superoperator(CMat::Identity(d * d, d * d), d, d); }

Superoperator Superoperator::left_multiplication(const CMat& A) {
    const Eigen::Index d = A.rows();
    return Superoperator(kron(CMat::Identity(d, d), A), A.cols(), d);
}

CMat Superoperator::apply(const CMat& X) const {
    if (X.rows() != d_in_ || X.cols() != d_in_) throw MismatchError("superoperator: input has the wrong dimension");
    return unvec(S_ * vec(X), d_out_);
}

Superoperator Superoperator::adjoint() const {
    // vec(W^dagger Y) = P_in S^T P_out vec(Y), P the vec-transpose permutation.
    CMat A(d_in_ * d_in_, d_out_ * d_out_);
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) A(i, j) = S_(transpose_index(j, d_out_), transpose_index(i, d_in_));
    return Superoperator(std::move(A), d_out_, d_in_);
}

Superoperator Superoperator::after(const Superoperator& first) const {
    if (first.d_out() != d_in_) throw MismatchError("superoperator: composition dimensions differ");
    return Superoperator(S_ * first.matrix(), first.d_in(), d_out_);
}

QuantumProcess::QuantumProcess(Superoperator map, DensityOperator source)
    : map_(std::move(map)), source_(std::move(source)), target_(map_.apply(source_.matrix())) {
    if (source_.dim() != map_.d_in()) throw MismatchError("quantum process: source dimension mismatch");
}

QuantumProcess::QuantumProcess(Superoperator map, DensityOperator source, DensityOperator target)
    : map_(std::move(map)), source_(std::move(source)), target_(std::move(target)) {
    if (source_.dim() != map_.d_in() || target_.dim() != map_.d_out())
        throw MismatchError("quantum process: dimensions do not match the map");
}

QuantumDiagnostics validate(const QuantumProcess& p, int probes) {
    const Tolerances& tol = tolerances();
    const Superoperator& W = p.map();
    const Eigen::Index d = W.d_in();
    QuantumDiagnostics diag;
    diag.probes = probes;
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> g;
    double min_ev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < probes; ++k) {
        CMat G(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) G(i, j) = cplx(g(rng), g(rng));
        // alternate full-rank and rank-one probes
        if (k % 2) G = G.col(0) * G.col(0).adjoint();
        CMat probe = G * G.adjoint();
        probe /= probe.trace().real();
        CMat out = W.apply(probe);
        diag.hermiticity_residual = std::max(diag.hermiticity_residual, hermiticity_residual(out));
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(out));
        min_ev = std::min(min_ev, es.eigenvalues().minCoeff());
    }
    diag.min_probe_eigenvalue = probes ? min_ev : 0.0;
    const CMat expected = W.apply(p.source().matrix());
    const double scale = std::max(1.0, max_abs(expected));
    diag.target_residual = max_abs(expected - p.target().matrix()) / scale;
    const double map_scale = std::max(1.0, max_abs(W.matrix()));
    diag.ok = diag.min_probe_eigenvalue >= -tol.psd * map_scale && diag.hermiticity_residual <= tol.herm * map_scale &&
              diag.target_residual <= tol.rel;
    return diag;
}

cplx q_expectation_c(const DensityOperator& rho, const CMat& X) {
    if (X.rows() != rho.dim()) throw MismatchError("quantum expectation: dimension mismatch");
    return trace_product(X, rho.matrix()) / rho.trace();
}

double q_expectation(const DensityOperator& rho, const QuantumObservable& X) { return q_expectation_c(rho, X.matrix()).real(); }

cplx q_covariance(const DensityOperator& rho, const CMat& A, const CMat& B) {
    return q_expectation_c(rho, A * B) - q_expectation_c(rho, A) * q_expectation_c(rho, B);
}

Superoperator adjoint(const QuantumProcess& p) { return p.map().adjoint(); }

QuantumFitness q_fitness(const QuantumProcess& p) {
    const Superoperator adj = p.map().adjoint();
    CMat W = hermitize(adj.apply(CMat::Identity(p.map().d_out(), p.map().d_out())));
    Eigen::SelfAdjointEigenSolver<CMat> es(W);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -tolerances().psd * scale)
        throw DomainError("quantum fitness: W is not positive semidefinite (map is not positive)");
    const double Wbar = p.target().trace() / p.source().trace();
    CMat U = W / Wbar;
    return {std::move(W), Wbar, std::move(U)};
}

SupportInverse support_inverse(const CMat& A) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(A));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double cutoff = tolerances().supp * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
    CVec inv = CVec::Zero(ev.size()), proj = CVec::Zero(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (ev[k] > cutoff && ev[k] > 0) {
            inv[k] = 1.0 / ev[k];
            proj[k] = 1.0;
        }
    const CMat& V = es.eigenvectors();
    return {V * inv.asDiagonal() * V.adjoint(), V * proj.asDiagonal() * V.adjoint()};
}

QuantumPrice q_price(const QuantumProcess& p, const QuantumObservable& X, const QuantumObservable& Y) {
    if (X.dim() != p.map().d_in() || Y.dim() != p.map().d_out()) throw MismatchError("q_price: observable dimension mismatch");
    const QuantumFitness f = q_fitness(p);
    const SupportInverse Winv = support_inverse(f.W);
    const CMat pulled = p.map().adjoint().apply(Y.matrix());
    const CMat left_avg = pulled * Winv.inverse;
    const CMat right_avg = Winv.inverse * pulled;
    const DensityOperator& mu = p.source();
    const CMat& x = X.matrix();
    const CMat& U = f.U;

    QuantumPrice r;
    const double delta = q_expectation(p.target(), Y) - q_expectation(mu, X);
    r.left.delta = r.right.delta = delta;
    r.left.ns = q_covariance(mu, x, U);
    r.left.ec = q_expectation_c(mu, (left_avg - x) * U);
    r.right.ns = q_covariance(mu, U, x);
    r.right.ec = q_expectation_c(mu, U * (right_avg - x));
    r.left.residual = std::abs(cplx(delta) - r.left.ns - r.left.ec);
    r.right.residual = std::abs(cplx(delta) - r.right.ns - r.right.ec);
    r.commutator_gap = q_expectation_c(mu, x * U - U * x);
    return r;
}

QuantumFactorization q_factorize(const QuantumProcess& p) {
    const QuantumFitness f = q_fitness(p);
    const SupportInverse Winv = support_inverse(f.W);
    Superoperator sel = Superoperator::left_multiplication(f.W);
    Superoperator env = p.map().after(Superoperator::left_multiplication(Winv.inverse));
    const Superoperator comp = env.after(sel);
    // Restrict both maps to inputs P rho P: vec(P X P) = (P^T kron P) vec(X).
    const CMat& P = Winv.projector;
    const CMat R = kron(P.transpose(), P);
    const double scale = std::max(1.0, max_abs(p.map().matrix()));
    QuantumFactorization out{std::move(sel), std::move(env), P};
    out.reconstruction_residual = max_abs(comp.matrix() * R - p.map().matrix() * R) / scale;
    const Eigen::Index dout = p.map().d_out();
    out.trace_residual = max_abs(out.environmental.adjoint().apply(CMat::Identity(dout, dout)) - P);
    return out;
}

FitnessDistribution spectral_distribution(const QuantumProcess& p) {
    const QuantumFitness f = q_fitness(p);
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(f.U));
    const CMat& V = es.eigenvectors();
    const CMat& mu = p.source().matrix();
    const Eigen::Index d = V.cols();
    Vec prob(d), u(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        prob[k] = std::max(0.0, (V.col(k).adjoint() * mu * V.col(k))(0, 0).real()) / p.source().trace();
        u[k] = snap(es.eigenvalues()[k]);
        if (u[k] < 0) u[k] = 0;
    }
    return {prob, u};
}

QuantumLaws q_laws(const QuantumProcess& p) {
    const FitnessDistribution d = spectral_distribution(p);
    return {zeroth_law(d), first_law(d), gibbs_inequality(d), second_law(d), selective_acceleration(d)};
}

QuantumEntropy q_partition_entropy(const QuantumProcess& p, const std::vector<CMat>& projsA, const std::vector<CMat>& projsB) {
    const Eigen::Index d = p.map().d_in(), dp = p.map().d_out();
    require_projections(projsA, d, "q_partition_entropy: source partition");
    require_projections(projsB, dp, "q_partition_entropy: target partition");
    const QuantumFitness f = q_fitness(p);
    const DensityOperator& mu = p.source();
    const double N = mu.trace();
    const Superoperator adj = p.map().adjoint();
    const double normU = spectral_norm_psd(f.U);
    const double cutoff = tolerances().supp * normU;
    const CMat Uhalf = hermitian_function(f.U, [&](double x) { return x > cutoff ? std::sqrt(x) : 0.0; });
    const CMat Uinvhalf = hermitian_function(f.U, [&](double x) { return x > cutoff && x > 0 ? 1.0 / std::sqrt(x) : 0.0; });
    const CMat rho_t = Uhalf * mu.matrix() * Uhalf / N;
    const CMat logU = hermitian_function(f.U, [&](double x) { return x > cutoff && x > 0 ? std::log(x) : 0.0; });

    QuantumEntropy out;
    double ec = 0, dis = 0, mix = 0, dis_lo = 0, dis_hi = 0, mix_lo = 0, mix_hi = 0;
    double dl = 0, du = 0, ml = 0, mu_b = 0;
    std::vector<CMat> roots;
    // Square roots amplify eigenvalue noise (1e-16 -> 1e-8), so cut at the support threshold.
    for (const CMat& pb : projsB) {
        const CMat wb = hermitize(adj.apply(pb));
        const double cut = tolerances().supp * std::max(spectral_norm_psd(wb), f.Wbar * normU);
        roots.push_back(hermitian_function(wb, [cut](double x) { return x > cut ? std::sqrt(x) : 0.0; }));
    }
    for (std::size_t a = 0; a < projsA.size(); ++a) {
        for (std::size_t b = 0; b < projsB.size(); ++b) {
            const CMat& root = roots[b];
            const CMat UAB = hermitize(root * projsA[a] * root) / f.Wbar;
            CellProfile cp;
            cp.a = a;
            cp.b = b;
            cp.u_bar = trace_product(UAB, mu.matrix()).real() / N;
            if (!(cp.u_bar > tolerances().zero)) {
                cp.u_bar = std::max(cp.u_bar, 0.0);
                out.profile.per_cell.push_back(cp);
                continue;
            }
            const double ub = cp.u_bar;
            const CMat D = hermitize(Uinvhalf * UAB * Uinvhalf);
            Eigen::SelfAdjointEigenSolver<CMat> es(D);
            const CMat& V = es.eigenvectors();
            CVec dv(D.rows()), ent(D.rows()), mixv(D.rows()), supp(D.rows()), half(D.rows());
            for (Eigen::Index k = 0; k < D.rows(); ++k) {
                double x = std::clamp(snap(es.eigenvalues()[k]), 0.0, 1.0);
                double wk = (V.col(k).adjoint() * rho_t * V.col(k))(0, 0).real();
                dv[k] = x;
                ent[k] = -xlogx(x);
                mixv[k] = x > 0 ? x * std::log(x / ub) : 0.0;
                supp[k] = x > 0 ? 1.0 : 0.0;
                half[k] = std::sqrt(x);
                cp.s_dis += wk * ent[k].real();
                cp.s_mix += wk * mixv[k].real();
                cp.p_tilde += wk * supp[k].real();
                cp.e_d2 += wk * x * x;
            }
            const CMat PD = V * supp.asDiagonal() * V.adjoint();
            const CMat Dh = V * half.asDiagonal() * V.adjoint();
            const CMat Dm = V * dv.asDiagonal() * V.adjoint();
            cp.s_ec = -xlogx(ub);
            cp.s_ns = -trace_product(UAB * logU, mu.matrix()).real() / N;
            if (cp.p_tilde > 0) {
                cp.phi = trace_product(PD * f.U * PD, rho_t).real() / cp.p_tilde;
                cp.lambda = trace_product(Dh * f.U * Dh, rho_t).real() / cp.p_tilde;
                cp.gamma = trace_product(Dm * f.U * Dm, rho_t).real() / cp.p_tilde;
            }
            out.profile.s_ec += cp.s_ec;
            out.profile.s_dis += cp.s_dis;
            out.profile.s_mix += cp.s_mix;

            // Observables whose mu-expectations are the cell's entropies.
            const CMat Xdis = Uhalf * (V * ent.asDiagonal() * V.adjoint()) * Uhalf;
            const CMat Xmix = Uhalf * (V * mixv.asDiagonal() * V.adjoint()) * Uhalf;
            const CMat Xec = -std::log(ub) * UAB;
            const cplx cd = q_covariance(mu, Xdis, f.U), cm = q_covariance(mu, Xmix, f.U), ce = q_covariance(mu, Xec, f.U);
            out.max_imaginary = std::max({out.max_imaginary, std::abs(cd.imag()), std::abs(cm.imag()), std::abs(ce.imag())});
            dis += cd.real();
            mix += cm.real();
            ec += ce.real();

            const double pl = cp.p_tilde * cp.lambda;
            dis_lo += pl * std::log(cp.lambda / cp.gamma) - ub * std::log(cp.p_tilde / ub);
            dis_hi += pl * std::log(cp.phi / cp.lambda) - ub * std::log(ub / cp.e_d2);
            mix_lo += pl * std::log(cp.lambda / (cp.phi * ub)) - ub * std::log(cp.e_d2 / (ub * ub));
            mix_hi += pl * std::log(cp.gamma / (cp.lambda * ub)) + ub * std::log(cp.p_tilde);
            dl += ub * std::log(ub / cp.e_d2);
            du += ub * std::log(cp.p_tilde / ub);
            ml += -ub * std::log(cp.p_tilde);
            mu_b += ub * std::log(cp.e_d2 / (ub * ub));
            out.profile.per_cell.push_back(cp);
        }
    }
    const FitnessDistribution sd = spectral_distribution(p);
    out.profile.s_ns = sd.selective_entropy();
    out.profile.s_tot = out.profile.s_ns + out.profile.s_ec;
    const EntropyProfile& e = out.profile;
    out.bounds = {make_law_report("q_dispersion_bounds", e.s_dis, ChainOrder::ascending,
                                  {{"0", 0.0}, {"sum u log(u/E[U D^2])", dl}, {"S_dis", e.s_dis}, {"sum u log(p/u)", du}, {"S_EC", e.s_ec}}),
                  make_law_report("q_mixing_bounds", e.s_mix, ChainOrder::ascending,
                                  {{"0", 0.0}, {"sum u log(1/p)", ml}, {"S_mix", e.s_mix}, {"sum u log E[M^2]", mu_b}, {"S_EC", e.s_ec}})};
    out.third = {make_law_report("q_third_law_S_EC", ec, ChainOrder::ascending,
                                 {{"lower", dis_lo + mix_lo}, {"d_NS S_EC", ec}, {"upper", dis_hi + mix_hi}}),
                 make_law_report("q_third_law_S_dis", dis, ChainOrder::ascending, {{"lower", dis_lo}, {"d_NS S_dis", dis}, {"upper", dis_hi}}),
                 make_law_report("q_third_law_S_mix", mix, ChainOrder::ascending, {{"lower", mix_lo}, {"d_NS S_mix", mix}, {"upper", mix_hi}}),
                 false, ec - dis - mix};
    const double sat = tolerances().sat;
    out.third.weak_law_holds = std::abs(ec) <= sat && std::abs(dis) <= sat && std::abs(mix) <= sat;
    return out;
}

OpenQuantumProcess::OpenQuantumProcess(QuantumProcess closed, DensityOperator full_target)
    : closed_(std::move(closed)), full_(std::move(full_target)) {
    const CMat& parented = closed_.target().matrix();
    const CMat& full = full_.matrix();
    if (parented.rows() != full.rows()) throw MismatchError("open quantum process: dimension mismatch");
    const double scale = std::max(1.0, max_abs(full));
    if (max_abs(parented * full - full * parented) > tolerances().herm * scale * scale)
        throw InvalidInput("open quantum process: parented and full child operators must commute");
    const SupportInverse inv = support_inverse(full);
    const Eigen::Index d = full.rows();
    pi_ = hermitize(inv.inverse * parented + (CMat::Identity(d, d) - inv.projector));
    nu_ = CMat::Identity(d, d) - pi_;
}

OpenQuantumProcess OpenQuantumProcess::with_orphans(QuantumProcess closed, const CMat& orphan) {
    CMat full = closed.target().matrix() + orphan;
    return OpenQuantumProcess(std::move(closed), DensityOperator(full));
}

QuantumKgs q_kgs(const OpenQuantumProcess& p, const QuantumObservable& X, const QuantumObservable& Y) {
    QuantumKgs k;
    k.p_parented = p.parented_fraction();
    if (!(k.p_parented > 0)) throw DomainError("q_kgs: every child is an orphan");
    const QuantumPrice closed = q_price(p.closed(), X, Y);
    const DensityOperator& full = p.full_target();
    const CMat& y = Y.matrix();
    k.delta = q_expectation(full, Y) - q_expectation(p.closed().source(), X);
    const double pp = k.p_parented;
    k.left.selection = closed.left.ns;
    k.left.transmission = closed.left.ec;
    k.left.orphan_nu = q_covariance(full, y, p.orphaned()) / pp;
    k.left.orphan_pi = -q_covariance(full, y, p.parented()) / pp;
    k.right.selection = closed.right.ns;
    k.right.transmission = closed.right.ec;
    k.right.orphan_nu = q_covariance(full, p.orphaned(), y) / pp;
    k.right.orphan_pi = -q_covariance(full, p.parented(), y) / pp;
    for (QuantumKgsSide* s : {&k.left, &k.right}) {
        s->residual_nu = std::abs(cplx(k.delta) - s->selection - s->transmission - s->orphan_nu);
        s->residual_pi = std::abs(cplx(k.delta) - s->selection - s->transmission - s->orphan_pi);
    }
    return k;
}

QuantumProcess embed(const Process& p) {
    const Mat& w = p.kernel();
    const Eigen::Index d = w.rows(), dp = w.cols();
    CMat S = CMat::Zero(dp * dp, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < dp; ++j) S(j + j * dp, i + i * d) = w(i, j);
    CMat rho = p.source().weights().cast<cplx>().asDiagonal();
    CMat target = p.target().weights().cast<cplx>().asDiagonal();
    return QuantumProcess(Superoperator(std::move(S), d, dp), DensityOperator(rho), DensityOperator(target));
}

QuantumObservable embed(const Observable& x) {
    CMat m = x.values().cast<cplx>().asDiagonal();
    return QuantumObservable(m);
}

std::vector<CMat> embed_singletons(Eigen::Index d) {
    std::vector<CMat> out;
    for (Eigen::Index i = 0; i < d; ++i) {
        CMat e = CMat::Zero(d, d);
        e(i, i) = 1;
        out.push_back(e);
    }
    return out;
}

}  // namespace pricekit
