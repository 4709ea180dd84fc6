#pragma once

#include "pricekit/entropy.hpp"
#include "pricekit/laws.hpp"
#include "pricekit/process.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace pricekit {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// f applied to the eigenvalues of a Hermitian matrix.
CMat hermitian_function(const CMat& A, const std::function<double(double)>& f);
cplx trace_product(const CMat& A, const CMat& B);  // Tr(A B)

/// Hermitian PSD matrix with positive trace. Tiny negative eigenvalues are clipped.
class DensityOperator {
public:
    explicit DensityOperator(const CMat& m);
    const CMat& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    double trace() const { return trace_; }

private:
    CMat m_;
    double trace_;
};

class QuantumObservable {
public:
    explicit QuantumObservable(const CMat& m);
    static QuantumObservable identity(Eigen::Index d);
    const CMat& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    CMat m_;
};

/// Linear map on matrices acting on column-major vectorizations: vec(W(X)) = S vec(X).
class Superoperator {
public:
    Superoperator(CMat S, Eigen::Index d_in, Eigen::Index d_out);
    static Superoperator from_kraus(const std::vector<CMat>& kraus);
    static Superoperator identity(Eigen::Index d);
    static Superoperator left_multiplication(const CMat& A);  // X -> A X

    CMat apply(const CMat& X) const;
    /// Dual in the trace pairing: Tr(adjoint(Y) X) = Tr(Y apply(X)).
    Superoperator adjoint() const;
    /// this after first
    Superoperator after(const Superoperator& first) const;

    const CMat& matrix() const { return S_; }
    Eigen::Index d_in() const { return d_in_; }
    Eigen::Index d_out() const { return d_out_; }

private:
    CMat S_;
    Eigen::Index d_in_, d_out_;
};

struct QuantumDiagnostics {
    bool ok = true;
    double min_probe_eigenvalue = 0;  // over images of random PSD probes, relative to probe scale
    double hermiticity_residual = 0;
    double target_residual = 0;
    int probes = 0;
};

class QuantumProcess {
public:
    /// target = map(source)
    QuantumProcess(Superoperator map, DensityOperator source);
    /// supplied target, checked by validate()
    QuantumProcess(Superoperator map, DensityOperator source, DensityOperator target);

    const Superoperator& map() const { return map_; }
    const DensityOperator& source() const { return source_; }
    const DensityOperator& target() const { return target_; }

private:
    Superoperator map_;
    DensityOperator source_;
    DensityOperator target_;
};

/// Positivity is sample-checked with 64 random PSD probes.
QuantumDiagnostics validate(const QuantumProcess& p, int probes = 64);

double q_expectation(const DensityOperator& rho, const QuantumObservable& X);
cplx q_expectation_c(const DensityOperator& rho, const CMat& X);
cplx q_covariance(const DensityOperator& rho, const CMat& A, const CMat& B);

Superoperator adjoint(const QuantumProcess& p);

struct QuantumFitness {
    CMat W;
    double Wbar;
    CMat U;
};

QuantumFitness q_fitness(const QuantumProcess& p);

/// Pseudoinverse on the eigen-support of a Hermitian PSD matrix, cutoff eps_supp * ||A||.
struct SupportInverse {
    CMat inverse;
    CMat projector;
};
SupportInverse support_inverse(const CMat& A);

struct QuantumPriceSide {
    double delta = 0;
    cplx ns;
    cplx ec;
    double residual = 0;  // |delta - ns - ec|
};

struct QuantumPrice {
    QuantumPriceSide left;
    QuantumPriceSide right;
    cplx commutator_gap;  // E[[X, U]]
};

QuantumPrice q_price(const QuantumProcess& p, const QuantumObservable& X, const QuantumObservable& Y);

struct QuantumFactorization {
    Superoperator selective;      // rho -> W rho
    Superoperator environmental;  // sigma -> W(W^+ sigma)
    CMat support;                 // projector onto the support of W
    double reconstruction_residual = 0;  // composition vs the original map on the support
    double trace_residual = 0;           // || env^dagger(Id') - support ||
};

QuantumFactorization q_factorize(const QuantumProcess& p);

/// Spectral distribution of U under mu / N.
FitnessDistribution spectral_distribution(const QuantumProcess& p);

struct QuantumLaws {
    LawReport zeroth;
    LawReport first;
    LawReport gibbs;
    LawReport second;
    LawReport acceleration;
};

QuantumLaws q_laws(const QuantumProcess& p);

struct QuantumEntropy {
    EntropyProfile profile;
    DispersionMixingBounds bounds;
    ThirdLawReport third;
    double max_imaginary = 0;  // largest imaginary part among the third-law covariances
};

/// Projections in each list must be Hermitian idempotents summing to the identity.
QuantumEntropy q_partition_entropy(const QuantumProcess& p, const std::vector<CMat>& projsA, const std::vector<CMat>& projsB);

class OpenQuantumProcess {
public:
    /// Parented and orphaned child operators must commute.
    OpenQuantumProcess(QuantumProcess closed, DensityOperator full_target);
    static OpenQuantumProcess with_orphans(QuantumProcess closed, const CMat& orphan);

    const QuantumProcess& closed() const { return closed_; }
    const DensityOperator& full_target() const { return full_; }
    const CMat& parented() const { return pi_; }
    const CMat& orphaned() const { return nu_; }
    double parented_fraction() const { return closed_.target().trace() / full_.trace(); }

private:
    QuantumProcess closed_;
    DensityOperator full_;
    CMat pi_, nu_;
};

struct QuantumKgsSide {
    cplx selection;
    cplx transmission;
    cplx orphan_nu;
    cplx orphan_pi;
    double residual_nu = 0;
    double residual_pi = 0;
};

struct QuantumKgs {
    double delta = 0;
    double p_parented = 0;
    QuantumKgsSide left;
    QuantumKgsSide right;
};

QuantumKgs q_kgs(const OpenQuantumProcess& p, const QuantumObservable& X, const QuantumObservable& Y);

/// Diagonal embedding: rho = diag(mu), Kraus operators sqrt(w_ij) |j><i|.
QuantumProcess embed(const Process& p);
QuantumObservable embed(const Observable& x);
std::vector<CMat> embed_singletons(Eigen::Index d);

}  // namespace pricekit
