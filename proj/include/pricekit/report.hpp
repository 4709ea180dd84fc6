#pragma once

#include "pricekit/entropy.hpp"
#include "pricekit/laws.hpp"
#include "pricekit/price.hpp"
#include "pricekit/process.hpp"
#include "pricekit/quantum.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pricekit::io {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// Unreadable file, malformed JSON or a document that does not follow the schema.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuantumSpec {
    QuantumProcess process;
    std::map<std::string, CMat> observables;
    std::map<std::string, CMat> target_observables;  // defaults to the source observable of the same name
    std::optional<CMat> orphan;
    std::vector<CMat> source_projections;  // computational-basis singletons when absent
    std::vector<CMat> target_projections;
};

struct ProcessSpec {
    Process process;
    std::map<std::string, Observable> source_observables;
    std::map<std::string, Observable> target_observables;  // only names present on both sides are priced
    std::optional<Partition> source_partition;
    std::optional<Partition> target_partition;
    std::optional<Process> next;
    std::optional<Vec> orphan_weights;
    std::optional<QuantumSpec> quantum;
};

/// Structural problems throw SpecError; invalid values (negative weights, bad shapes) throw pricekit::Error.
ProcessSpec parse_spec(const Json& doc);
ProcessSpec load_spec(const std::string& path);

CMat parse_complex_matrix(const Json& j, const char* what);
Json complex_matrix_json(const CMat& m);

struct ReportSections {
    bool laws = true;
    bool entropy = true;
    bool quantum = true;
    bool kgs = true;
};

Json build_report(const ProcessSpec& spec, const ReportSections& sections);

/// Non-finite doubles serialize as null and read back as NaN.
Json number(double x);
double read_number(const Json& j);

Json to_json(const LawReport& r);
LawReport law_report_from_json(const Json& j);
Json to_json(const PriceDecomposition& d);
PriceDecomposition price_from_json(const Json& j);
Json to_json(const EntropyProfile& e);
EntropyProfile entropy_profile_from_json(const Json& j);
Json to_json(const Diagnostics& d);
Json to_json(const ReversibilityVerdict& v);
Json to_json(const ThirdLawReport& t);
Json to_json(const DispersionMixingBounds& b);

struct TrajectoryRow {
    int t = 0;
    double population = 0;  // N_t
    double var_u = 0;
    double s_ns = 0;
    double s_ec = 0;
    double second_law_slack = 0;
    double speed_limit_slack = 0;
};

/// Row t describes the one-step process from the t-th evolved population, t = 0 .. generations - 1.
std::vector<TrajectoryRow> simulate(const Process& p, int generations);
void write_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);

}  // namespace pricekit::io
