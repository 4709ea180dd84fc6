#pragma once

#include "pricekit/measure.hpp"

#include <string>
#include <vector>

namespace pricekit {

/// Kernel w[i][i'] carrying a source population to a target population.
/// Construction checks shapes and signs only; use validate() for the disintegration equation.
class Process {
public:
    Process(Population source, Population target, Mat kernel);

    /// Target weights computed as mu * w.
    static Process derive(const Population& source, const TypeSet& target_types, Mat kernel);

    const Population& source() const { return source_; }
    const Population& target() const { return target_; }
    const Mat& kernel() const { return kernel_; }
    bool endomorphic() const { return source_.types() == target_.types(); }

private:
    Population source_;
    Population target_;
    Mat kernel_;
};

struct Diagnostics {
    bool ok = true;
    std::vector<double> residuals;  // relative residual per target type
    double max_residual = 0;
};

Diagnostics validate(const Process& p);

struct FitnessData {
    Observable W;
    double Wbar;
    Observable U;
};

FitnessData fitness(const Process& p);

/// <y>_w on the source; 0 where W(i) = 0.
Observable local_average(const Process& p, const Observable& y);

/// <y>_w - x
Observable local_change(const Process& p, const Observable& x, const Observable& y);

/// First p, then q. Requires p.target == q.source up to the relative tolerance.
Process compose(const Process& p, const Process& q);

struct Factorization {
    Process selective;      // mu -> W mu on the childbearing types
    Process environmental;  // W mu -> mu', rows w[i]/W(i)
    std::vector<std::size_t> kept;  // source indices that survive into the intermediate space
};

Factorization price_factorize(const Process& p);

enum class Purity { purely_selective, purely_environmental, mixed };

Purity classify_purity(const Process& p);
std::string to_string(Purity c);

}  // namespace pricekit
