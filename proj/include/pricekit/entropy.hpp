#pragma once

#include "pricekit/laws.hpp"
#include "pricekit/process.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pricekit {

using Block = std::vector<std::size_t>;

/// Disjoint nonempty blocks covering {0, ..., K-1}.
class Partition {
public:
    Partition(std::vector<Block> blocks, std::size_t k);

    static Partition singletons(std::size_t k);
    static Partition whole(std::size_t k);
    static Partition from_labels(const TypeSet& types, const std::vector<std::vector<std::string>>& blocks);

    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t size() const { return blocks_.size(); }
    std::size_t universe() const { return k_; }

private:
    std::vector<Block> blocks_;
    std::size_t k_;
};

struct CellProfile {
    std::size_t a = 0;  // block index in the source partition
    std::size_t b = 0;  // block index in the target partition
    double u_bar = 0;
    double s_ec = 0;
    double s_dis = 0;
    double s_mix = 0;
    double s_ns = 0;  // local selective entropy
    double p_tilde = 0;
    double phi = 0;
    double lambda = 0;
    double gamma = 0;
    double e_d2 = 0;  // E[U D^2]
};

struct EntropyProfile {
    double s_ns = 0;
    double s_ec = 0;
    double s_dis = 0;
    double s_mix = 0;
    double s_tot = 0;
    std::vector<CellProfile> per_cell;  // cells with u_bar = 0 are kept with zero contributions
};

double selective_entropy(const Process& p);
double local_selective_entropy(const Process& p, const Block& A, const Block& B);

EntropyProfile environmental_profile(const Process& p, const Partition& A, const Partition& B);
/// Singleton partitions on both sides.
EntropyProfile generating_profile(const Process& p);
double total_entropy(const Process& p);

struct EquilibriumWitness {
    std::size_t a = 0;
    std::size_t b = 0;
    double max_deviation = 0;  // max |D - u_bar/p_tilde| on the cell's support
    bool constant = true;
};

struct EnvironmentalEquilibrium {
    bool equilibrium = true;
    std::vector<EquilibriumWitness> cells;
};

EnvironmentalEquilibrium environmental_equilibrium(const Process& p, const Partition& A, const Partition& B);
EnvironmentalEquilibrium environmental_equilibrium(const Process& p);

struct DispersionMixingBounds {
    LawReport dispersion;  // 0 <= lower <= S_dis <= upper <= S_EC
    LawReport mixing;      // 0 <= lower <= S_mix <= upper <= S_EC
};

DispersionMixingBounds dispersion_mixing_bounds(const Process& p, const Partition& A, const Partition& B);
DispersionMixingBounds dispersion_mixing_bounds(const Process& p);

struct ThirdLawReport {
    LawReport ns_s_ec;   // lower <= d_NS S_EC <= upper
    LawReport ns_s_dis;
    LawReport ns_s_mix;
    bool weak_law_holds = false;  // all three selective changes vanish within eps_sat
    double sum_residual = 0;      // d_NS S_EC - d_NS S_dis - d_NS S_mix
};

ThirdLawReport third_law(const Process& p, const Partition& A, const Partition& B);
ThirdLawReport third_law(const Process& p);

struct IntergenerationalChange {
    double formula = 0;      // closed-form intergenerational sum
    double price_route = 0;  // E[(<Y>_w - X) U] with E[X] = S_EC, E'[Y] = S'_EC
    double discrepancy = 0;
};

IntergenerationalChange intergenerational_ec_change(const Process& p, const Process& q);

struct ReversibilityVerdict {
    bool left_invertible = false;
    bool right_invertible = false;
    bool invertible = false;
    std::optional<Process> retraction;     // mu' -> W mu, left inverse of w_EC
    std::optional<Process> section;        // mu' -> W mu, right inverse of w_EC
    std::optional<Process> inverse_kernel;
    double retraction_residual = 0;  // max |w_EC r - Id| over supported intermediate types
    double section_residual = 0;     // max |s w_EC - Id| over supported target types
    bool dollo_full = false;
    bool dollo_childbearing = false;

    double s_dis = 0;              // H(child | parent) on the intermediate population
    double s_mix_conditional = 0;  // H(parent | child)
    double s_mix = 0;              // literal singleton mixing entropy
    double s_ec = 0;
    bool literal_mix_zero = false;
    bool literal_ec_zero = false;
};

ReversibilityVerdict reversibility(const Process& p);

enum class KsMethod { automatic, enumerate, chain_rule };

/// T-step environmental entropy at singleton partitions, 1 <= T <= 6.
double ks_entropy(const Process& p, int T, KsMethod method = KsMethod::automatic);
std::vector<double> ks_entropy_series(const Process& p, int T);

}  // namespace pricekit
