#include "pricekit/measure.hpp"

#include "pricekit/errors.hpp"
#include "pricekit/tolerance.hpp"

#include <cmath>
#include <unordered_map>

namespace pricekit {

struct TypeSet::Data {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> index;
};

TypeSet::TypeSet(std::vector<std::string> labels) {
    if (labels.empty()) throw InvalidInput("type set must contain at least one label");
    auto d = std::make_shared<Data>();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!d->index.emplace(labels[i], i).second)
            throw InvalidInput("duplicate type label '" + labels[i] + "'");
    }
    d->labels = std::move(labels);
    d_ = std::move(d);
}

TypeSet TypeSet::indexed(std::size_t k, const std::string& prefix) {
    std::vector<std::string> labels;
    labels.reserve(k);
    for (std::size_t i = 0; i < k; ++i) labels.push_back(prefix + std::to_string(i));
    return TypeSet(std::move(labels));
}

std::size_t TypeSet::size() const { return d_->labels.size(); }
const std::string& TypeSet::label(std::size_t i) const { return d_->labels.at(i); }
const std::vector<std::string>& TypeSet::labels() const { return d_->labels; }

std::optional<std::size_t> TypeSet::index_of(const std::string& label) const {
    auto it = d_->index.find(label);
    if (it == d_->index.end()) return std::nullopt;
    return it->second;
}

bool operator==(const TypeSet& a, const TypeSet& b) {
    return a.d_ == b.d_ || a.d_->labels == b.d_->labels;
}

void require_same_types(const TypeSet& a, const TypeSet& b, const char* what) {
    if (!(a == b)) throw MismatchError(std::string(what) + ": type sets differ");
}

Population::Population(TypeSet types, Vec weights) : types_(std::move(types)), weights_(std::move(weights)) {
    if (static_cast<std::size_t>(weights_.size()) != types_.size())
        throw MismatchError("population: weight count does not match type count");
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
        double w = weights_[i];
        if (!std::isfinite(w)) throw InvalidInput("population: non-finite weight");
        if (w < 0) {
            if (snap(w) != 0) throw InvalidInput("population: negative weight for '" + types_.label(i) + "'");
            weights_[i] = 0;
        }
    }
    size_ = weights_.sum();
    if (!(size_ > 0)) throw InvalidInput("population: total size must be positive");
}

Observable::Observable(TypeSet types, Vec values) : types_(std::move(types)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != types_.size())
        throw MismatchError("observable: value count does not match type count");
}

Observable Observable::constant(const TypeSet& types, double c) {
    return Observable(types, Vec::Constant(static_cast<Eigen::Index>(types.size()), c));
}

double expectation(const Population& pop, const Observable& x) {
    require_same_types(pop.types(), x.types(), "expectation");
    return pop.weights().dot(x.values()) / pop.size();
}

double covariance(const Population& pop, const Observable& x, const Observable& y) {
    require_same_types(pop.types(), x.types(), "covariance");
    require_same_types(pop.types(), y.types(), "covariance");
    const Vec p = pop.probabilities();
    const double mx = p.dot(x.values());
    const double my = p.dot(y.values());
    // centred form keeps variance non-negative in floating point
    return (p.array() * (x.values().array() - mx) * (y.values().array() - my)).sum();
}

double variance(const Population& pop, const Observable& x) { return covariance(pop, x, x); }

ChildbearingStats childbearing_stats(const Population& pop, const Observable& u) {
    require_same_types(pop.types(), u.types(), "childbearing_stats");
    std::vector<bool> support(pop.dim());
    std::vector<std::string> labels;
    std::vector<double> kept;
    double mass = 0;
    for (std::size_t i = 0; i < pop.dim(); ++i) {
        double v = snap(u[i]);
        if (v < 0) throw InvalidInput("childbearing_stats: fitness must be non-negative");
        support[i] = v > 0;
        if (support[i]) {
            mass += pop.weight(i);
            labels.push_back(pop.types().label(i));
            kept.push_back(pop.weight(i));
        }
    }
    if (!(mass > 0)) throw DomainError("childbearing_stats: no childbearing mass");
    Vec w = Eigen::Map<Vec>(kept.data(), static_cast<Eigen::Index>(kept.size()));
    return {mass / pop.size(), std::move(support), Population(TypeSet(std::move(labels)), std::move(w))};
}

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

}  // namespace pricekit
