#include "pricekit/process.hpp"

#include "pricekit/errors.hpp"
#include "pricekit/tolerance.hpp"

#include <algorithm>
#include <cmath>

namespace pricekit {

Process::Process(Population source, Population target, Mat kernel)
    : source_(std::move(source)), target_(std::move(target)), kernel_(std::move(kernel)) {
    if (static_cast<std::size_t>(kernel_.rows()) != source_.dim() ||
        static_cast<std::size_t>(kernel_.cols()) != target_.dim())
        throw MismatchError("process: kernel shape does not match source/target type counts");
    for (Eigen::Index i = 0; i < kernel_.rows(); ++i)
        for (Eigen::Index j = 0; j < kernel_.cols(); ++j) {
            double v = kernel_(i, j);
            if (!std::isfinite(v)) throw InvalidInput("process: non-finite kernel entry");
            if (v < 0) {
                if (snap(v) != 0)
                    throw InvalidInput("process: negative kernel entry at (" + source_.types().label(i) + ", " +
                                       target_.types().label(j) + ")");
                kernel_(i, j) = 0;
            }
        }
}

Process Process::derive(const Population& source, const TypeSet& target_types, Mat kernel) {
    if (static_cast<std::size_t>(kernel.rows()) != source.dim() ||
        static_cast<std::size_t>(kernel.cols()) != target_types.size())
        throw MismatchError("process: kernel shape does not match source/target type counts");
    Vec mu_prime = kernel.transpose() * source.weights();
    return Process(source, Population(target_types, mu_prime), std::move(kernel));
}

Diagnostics validate(const Process& p) {
    const auto& tol = tolerances();
    Diagnostics d;
    const Vec predicted = p.kernel().transpose() * p.source().weights();
    const Vec& actual = p.target().weights();
    const double floor = tol.zero * std::max(p.source().size(), p.target().size());
    d.residuals.resize(p.target().dim());
    for (Eigen::Index j = 0; j < actual.size(); ++j) {
        double scale = std::max(std::abs(actual[j]), std::abs(predicted[j]));
        double r = scale <= floor ? 0.0 : std::abs(actual[j] - predicted[j]) / scale;
        d.residuals[j] = r;
        d.max_residual = std::max(d.max_residual, r);
    }
    d.ok = d.max_residual <= tol.rel;
    return d;
}

FitnessData fitness(const Process& p) {
    Vec W = p.kernel().rowwise().sum();
    double Wbar = p.target().size() / p.source().size();
    Vec U = W / Wbar;
    return {Observable(p.source().types(), std::move(W)), Wbar, Observable(p.source().types(), std::move(U))};
}

Observable local_average(const Process& p, const Observable& y) {
    require_same_types(p.target().types(), y.types(), "local_average");
    const Mat& w = p.kernel();
    Vec out = Vec::Zero(w.rows());
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        double Wi = w.row(i).sum();
        if (snap(Wi) > 0) out[i] = w.row(i).dot(y.values()) / Wi;
    }
    return Observable(p.source().types(), std::move(out));
}

Observable local_change(const Process& p, const Observable& x, const Observable& y) {
    require_same_types(p.source().types(), x.types(), "local_change");
    Observable avg = local_average(p, y);
    return Observable(x.types(), avg.values() - x.values());
}

Process compose(const Process& p, const Process& q) {
    require_same_types(p.target().types(), q.source().types(), "compose");
    const Vec& a = p.target().weights();
    const Vec& b = q.source().weights();
    double diff = (a - b).cwiseAbs().maxCoeff();
    double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    if (diff > tolerances().rel * scale)
        throw MismatchError("compose: intermediate populations differ beyond tolerance");
    return Process(p.source(), q.target(), p.kernel() * q.kernel());
}

Factorization price_factorize(const Process& p) {
    const Mat& w = p.kernel();
    const Vec W = w.rowwise().sum();
    std::vector<std::size_t> kept;
    std::vector<std::string> labels;
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        if (snap(W[i]) > 0) {
            kept.push_back(static_cast<std::size_t>(i));
            labels.push_back(p.source().types().label(i));
        }
    if (kept.empty()) throw DomainError("price_factorize: every type is childless");
    const auto k = static_cast<Eigen::Index>(kept.size());
    TypeSet mid_types(std::move(labels));
    Mat sel = Mat::Zero(w.rows(), k);
    Mat env(k, w.cols());
    Vec mid(k);
    for (Eigen::Index c = 0; c < k; ++c) {
        auto i = static_cast<Eigen::Index>(kept[c]);
        sel(i, c) = W[i];
        env.row(c) = w.row(i) / W[i];
        mid[c] = W[i] * p.source().weights()[i];
    }
    Population mid_pop(mid_types, mid);
    Process selective(p.source(), mid_pop, std::move(sel));
    Process environmental(mid_pop, p.target(), std::move(env));
    return {std::move(selective), std::move(environmental), std::move(kept)};
}

Purity classify_purity(const Process& p) {
    const auto& tol = tolerances();
    const FitnessData f = fitness(p);
    bool flat = true;
    for (std::size_t i = 0; i < p.source().dim(); ++i)
        if (p.source().weight(i) > 0 && std::abs(f.U[i] - 1.0) > tol.rel) flat = false;
    if (flat) return Purity::purely_environmental;

    // Diagonal in the label sense: mass only flows to the identically labelled target type.
    const Mat& w = p.kernel();
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            if (snap(w(i, j)) == 0) continue;
            if (p.source().types().label(i) != p.target().types().label(j)) return Purity::mixed;
        }
    }
    return Purity::purely_selective;
}

std::string to_string(Purity c) {
    switch (c) {
        case Purity::purely_selective: return "purely_selective";
        case Purity::purely_environmental: return "purely_environmental";
        case Purity::mixed: return "mixed";
    }
    return "mixed";
}

}  // namespace pricekit
