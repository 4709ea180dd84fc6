#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pricekit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Ordered set of unique type labels. Copies share storage.
class TypeSet {
public:
    explicit TypeSet(std::vector<std::string> labels);

    /// Labels "<prefix>0", "<prefix>1", ...
    static TypeSet indexed(std::size_t k, const std::string& prefix = "t");

    std::size_t size() const;
    const std::string& label(std::size_t i) const;
    const std::vector<std::string>& labels() const;
    std::optional<std::size_t> index_of(const std::string& label) const;

    friend bool operator==(const TypeSet& a, const TypeSet& b);

private:
    struct Data;
    std::shared_ptr<const Data> d_;
};

/// Finite nonnegative measure over a TypeSet.
class Population {
public:
    Population(TypeSet types, Vec weights);

    const TypeSet& types() const { return types_; }
    const Vec& weights() const { return weights_; }
    double weight(std::size_t i) const { return weights_[static_cast<Eigen::Index>(i)]; }
    std::size_t dim() const { return types_.size(); }
    double size() const { return size_; }
    /// weights / size
    Vec probabilities() const { return weights_ / size_; }

private:
    TypeSet types_;
    Vec weights_;
    double size_;
};

/// Real-valued function on a TypeSet.
class Observable {
public:
    Observable(TypeSet types, Vec values);
    static Observable constant(const TypeSet& types, double c);

    const TypeSet& types() const { return types_; }
    const Vec& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
    std::size_t dim() const { return types_.size(); }

private:
    TypeSet types_;
    Vec values_;
};

double expectation(const Population& pop, const Observable& x);
double covariance(const Population& pop, const Observable& x, const Observable& y);
double variance(const Population& pop, const Observable& x);

struct ChildbearingStats {
    double p_star;
    std::vector<bool> support;  // u_i > 0 after snapping
    Population restricted;      // mu restricted to the support
};

ChildbearingStats childbearing_stats(const Population& pop, const Observable& u);

/// x log x with 0 log 0 = 0.
double xlogx(double x);

/// Throws MismatchError unless the observable lives on the population's types.
void require_same_types(const TypeSet& a, const TypeSet& b, const char* what);

}  // namespace pricekit
