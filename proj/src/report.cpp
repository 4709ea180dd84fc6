#include "pricekit/report.hpp"

#include "pricekit/errors.hpp"
#include "pricekit/open_process.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace pricekit::io {

namespace {

const Json& require(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
    return doc.at(key);
}

double real_of(const Json& j, const char* what) {
    if (!j.is_number()) throw SpecError(std::string(what) + ": expected a number");
    return j.get<double>();
}

Vec parse_vector(const Json& j, const char* what) {
    if (!j.is_array()) throw SpecError(std::string(what) + ": expected an array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = real_of(j[i], what);
    return v;
}

Mat parse_matrix(const Json& j, const char* what) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw SpecError(std::string(what) + ": expected a nonempty array of rows");
    const std::size_t cols = j[0].size();
    Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw SpecError(std::string(what) + ": rows differ in length");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = real_of(j[r][c], what);
    }
    return m;
}

TypeSet parse_types(const Json& j, const char* what) {
    if (!j.is_array()) throw SpecError(std::string(what) + ": expected an array of labels");
    std::vector<std::string> labels;
    for (const Json& e : j) {
        if (!e.is_string()) throw SpecError(std::string(what) + ": labels must be strings");
        labels.push_back(e.get<std::string>());
    }
    return TypeSet(std::move(labels));
}

Process parse_process(const Population& source, const Json& doc, const char* what) {
    const TypeSet target_types = parse_types(require(doc, "target_types"), what);
    Mat kernel = parse_matrix(require(doc, "kernel"), what);
    if (doc.contains("target_weights"))
        return Process(source, Population(target_types, parse_vector(doc.at("target_weights"), what)), std::move(kernel));
    return Process::derive(source, target_types, std::move(kernel));
}

std::map<std::string, Observable> parse_observables(const Json& j, const TypeSet& types, const char* what) {
    std::map<std::string, Observable> out;
    if (!j.is_object()) throw SpecError(std::string(what) + ": expected an object of named arrays");
    for (const auto& [name, values] : j.items()) out.emplace(name, Observable(types, parse_vector(values, what)));
    return out;
}

Partition parse_partition(const Json& j, const TypeSet& types, const char* what) {
    if (!j.is_array()) throw SpecError(std::string(what) + ": expected an array of label blocks");
    std::vector<std::vector<std::string>> blocks;
    for (const Json& b : j) {
        std::vector<std::string> block;
        if (!b.is_array()) throw SpecError(std::string(what) + ": blocks must be arrays");
        for (const Json& l : b) {
            if (!l.is_string()) throw SpecError(std::string(what) + ": labels must be strings");
            block.push_back(l.get<std::string>());
        }
        blocks.push_back(std::move(block));
    }
    return Partition::from_labels(types, blocks);
}

cplx parse_complex(const Json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw SpecError(std::string(what) + ": complex entries are a number or [re, im]");
}

std::vector<CMat> parse_projections(const Json& j, const char* what) {
    if (!j.is_array()) throw SpecError(std::string(what) + ": expected an array of matrices");
    std::vector<CMat> out;
    for (const Json& m : j) out.push_back(parse_complex_matrix(m, what));
    return out;
}

QuantumSpec parse_quantum(const Json& q) {
    const CMat rho = parse_complex_matrix(require(q, "rho"), "quantum.rho");
    std::optional<Superoperator> map;
    if (q.contains("superoperator")) {
        const CMat S = parse_complex_matrix(q.at("superoperator"), "quantum.superoperator");
        const auto din = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(S.cols()))));
        const auto dout = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(S.rows()))));
        if (din * din != S.cols() || dout * dout != S.rows())
            throw SpecError("quantum.superoperator: dimensions must be perfect squares");
        map.emplace(S, din, dout);
    } else if (q.contains("kraus")) {
        map.emplace(Superoperator::from_kraus(parse_projections(q.at("kraus"), "quantum.kraus")));
    } else {
        throw SpecError("quantum: one of 'superoperator' or 'kraus' is required");
    }
    DensityOperator source(rho);
    QuantumSpec spec{q.contains("target_rho")
                         ? QuantumProcess(*map, source, DensityOperator(parse_complex_matrix(q.at("target_rho"), "quantum.target_rho")))
                         : QuantumProcess(*map, source),
                     {}, {}, std::nullopt, {}, {}};
    if (q.contains("observables")) {
        const Json& obs = q.at("observables");
        if (!obs.is_object()) throw SpecError("quantum.observables: expected an object of named matrices");
        for (const auto& [name, m] : obs.items()) spec.observables.emplace(name, parse_complex_matrix(m, "quantum.observables"));
    }
    if (q.contains("target_observables")) {
        const Json& obs = q.at("target_observables");
        if (!obs.is_object()) throw SpecError("quantum.target_observables: expected an object of named matrices");
        for (const auto& [name, m] : obs.items())
            spec.target_observables.emplace(name, parse_complex_matrix(m, "quantum.target_observables"));
    }
    if (q.contains("orphan")) spec.orphan = parse_complex_matrix(q.at("orphan"), "quantum.orphan");
    const Eigen::Index din = spec.process.map().d_in(), dout = spec.process.map().d_out();
    if (q.contains("partitions")) {
        const Json& parts = q.at("partitions");
        spec.source_projections = parse_projections(require(parts, "source"), "quantum.partitions.source");
        spec.target_projections = parse_projections(require(parts, "target"), "quantum.partitions.target");
    } else {
        spec.source_projections = embed_singletons(din);
        spec.target_projections = embed_singletons(dout);
    }
    return spec;
}

template <class F>
Json guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        return Json{{"error", e.what()}};
    }
}

Json vec_json(const Vec& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
    return out;
}

Json mat_json(const Mat& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vec_json(m.row(r).transpose()));
    return out;
}

Json cplx_json(cplx z) { return Json::array({number(z.real()), number(z.imag())}); }

Json labels_json(const TypeSet& t) { return Json(t.labels()); }

Json cell_json(const CellProfile& c) {
    return Json{{"a", c.a},           {"b", c.b},         {"u_bar", number(c.u_bar)},   {"s_ec", number(c.s_ec)},
                {"s_dis", number(c.s_dis)}, {"s_mix", number(c.s_mix)}, {"s_ns", number(c.s_ns)}, {"p_tilde", number(c.p_tilde)},
                {"phi", number(c.phi)},   {"lambda", number(c.lambda)}, {"gamma", number(c.gamma)}, {"e_d2", number(c.e_d2)}};
}

Json process_json(const Process& p) {
    return Json{{"source_types", labels_json(p.source().types())},
                {"target_types", labels_json(p.target().types())},
                {"source_weights", vec_json(p.source().weights())},
                {"target_weights", vec_json(p.target().weights())},
                {"kernel", mat_json(p.kernel())}};
}

Json fitness_json(const Process& p) {
    const FitnessData f = fitness(p);
    const Population& mu = p.source();
    const ChildbearingStats cb = childbearing_stats(mu, f.U);
    return Json{{"N", number(mu.size())},
                {"N_prime", number(p.target().size())},
                {"W", vec_json(f.W.values())},
                {"Wbar", number(f.Wbar)},
                {"U", vec_json(f.U.values())},
                {"var_U", number(variance(mu, f.U))},
                {"p_star", number(cb.p_star)}};
}

Json factorization_json(const Process& p) {
    const Factorization f = price_factorize(p);
    const Process comp = compose(f.selective, f.environmental);
    const Mat diff = comp.target().weights() - p.target().weights();
    const double scale = std::max(1.0, p.target().weights().cwiseAbs().maxCoeff());
    return Json{{"kept", f.kept},
                {"selective", process_json(f.selective)},
                {"environmental", process_json(f.environmental)},
                {"target_residual", number(diff.cwiseAbs().maxCoeff() / scale)}};
}

Json price_section(const ProcessSpec& s) {
    Json out = Json::object();
    for (const auto& [name, x] : s.source_observables) {
        auto it = s.target_observables.find(name);
        if (it == s.target_observables.end()) continue;
        out[name] = guarded([&] {
            Json j = to_json(price(s.process, x, it->second));
            const AggregatePrice a = aggregate_price(s.process, x, it->second);
            j["aggregate"] = Json{{"selection", number(a.selection)}, {"transmission", number(a.transmission)},
                                  {"growth", number(a.growth)},       {"direct", number(a.direct)},
                                  {"residual", number(a.residual)}};
            return j;
        });
    }
    return out;
}

Json laws_section(const Process& p) {
    Json out = Json::array();
    auto add = [&](auto&& f) { out.push_back(guarded([&] { return to_json(f()); })); };
    add([&] { return zeroth_law(p); });
    add([&] { return gibbs_inequality(p); });
    add([&] { return first_law(p); });
    for (int n = 1; n <= 8; ++n) add([&] { return higher_order_first_law(p, n); });
    add([&] { return exp_first_law(p); });
    add([&] { return second_law(p); });
    add([&] { return speed_limits(p); });
    add([&] { return selective_acceleration(p); });
    return out;
}

Json composition_section(const ProcessSpec& s) {
    const Process& p = s.process;
    const Process& q = *s.next;
    Json out;
    out["next"] = process_json(q);
    out["fisher"] = guarded([&] {
        const FisherTerms f = fisher(p, q);
        return Json{{"ns", number(f.ns)}, {"ec", number(f.ec)}, {"residual", number(f.residual)}};
    });
    out["multilevel_variance"] = guarded([&] {
        const MultilevelVariance m = multilevel_variance(p, q);
        return Json{{"var_mid", number(m.var_mid)}, {"var_composed", number(m.var_composed)},
                    {"mean_conditional_var", number(m.mean_conditional_var)}, {"residual", number(m.residual)}};
    });
    out["ec_variance_bound"] = guarded([&] { return to_json(ec_variance_bound(p, q)); });
    out["ec_selective_entropy_bound"] = guarded([&] { return to_json(ec_selective_entropy_bound(p, q)); });
    out["multilevel_second_law"] = guarded([&] { return to_json(multilevel_second_law(p, q)); });
    out["stationarity"] = guarded([&] {
        const StationarityClass c = stationarity(p, q);
        return Json{{"strong", c.strong}, {"weak", c.weak}, {"locally_homogeneous", c.locally_homogeneous},
                    {"locally_constant", c.locally_constant}};
    });
    out["intergenerational_ec_change"] = guarded([&] {
        const IntergenerationalChange c = intergenerational_ec_change(p, q);
        return Json{{"formula", number(c.formula)}, {"price_route", number(c.price_route)}, {"discrepancy", number(c.discrepancy)}};
    });
    return out;
}

Json equilibrium_json(const EnvironmentalEquilibrium& e) {
    Json cells = Json::array();
    for (const EquilibriumWitness& w : e.cells)
        cells.push_back(Json{{"a", w.a}, {"b", w.b}, {"max_deviation", number(w.max_deviation)}, {"constant", w.constant}});
    return Json{{"equilibrium", e.equilibrium}, {"cells", cells}};
}

Json entropy_section(const ProcessSpec& s) {
    const Process& p = s.process;
    Json out;
    out["selective_entropy"] = guarded([&] { return number(selective_entropy(p)); });
    out["total_entropy"] = guarded([&] { return number(total_entropy(p)); });
    out["singletons"] = guarded([&] {
        return Json{{"profile", to_json(generating_profile(p))},
                    {"bounds", to_json(dispersion_mixing_bounds(p))},
                    {"third_law", to_json(third_law(p))},
                    {"environmental_equilibrium", equilibrium_json(environmental_equilibrium(p))}};
    });
    if (s.source_partition || s.target_partition) {
        const Partition A = s.source_partition.value_or(Partition::singletons(p.source().dim()));
        const Partition B = s.target_partition.value_or(Partition::singletons(p.target().dim()));
        out["partitioned"] = guarded([&] {
            return Json{{"profile", to_json(environmental_profile(p, A, B))},
                        {"bounds", to_json(dispersion_mixing_bounds(p, A, B))},
                        {"third_law", to_json(third_law(p, A, B))},
                        {"environmental_equilibrium", equilibrium_json(environmental_equilibrium(p, A, B))}};
        });
    }
    out["reversibility"] = guarded([&] { return to_json(reversibility(p)); });
    if (p.endomorphic()) {
        out["ks_entropy"] = guarded([&] {
            Json series = Json::array();
            for (double v : ks_entropy_series(p, 4)) series.push_back(number(v));
            return series;
        });
    }
    return out;
}

Json kgs_section(const ProcessSpec& s) {
    const OpenProcess op = OpenProcess::with_orphans(s.process, *s.orphan_weights);
    Json out;
    out["parented_fraction"] = number(op.parented_fraction());
    out["parented_density"] = vec_json(op.parented_density().values());
    Json pairs = Json::object();
    for (const auto& [name, x] : s.source_observables) {
        auto it = s.target_observables.find(name);
        if (it == s.target_observables.end()) continue;
        pairs[name] = guarded([&] {
            const KgsTerms k = kgs(op, x, it->second);
            const DualKgsTerms d = dual_fitness_kgs(op, x, it->second);
            return Json{{"delta", number(k.delta)},
                        {"selection", number(k.selection)},
                        {"transmission", number(k.transmission)},
                        {"orphan_nu", number(k.orphan_nu)},
                        {"orphan_pi", number(k.orphan_pi)},
                        {"residual_nu", number(k.residual_nu)},
                        {"residual_pi", number(k.residual_pi)},
                        {"dual", Json{{"dual_fitness", vec_json(d.dual_fitness.values())},
                                      {"selection", number(d.selection)},
                                      {"transmission", number(d.transmission)},
                                      {"orphan_kernel", number(d.orphan_kernel)},
                                      {"residual", number(d.residual)},
                                      {"counting_identity", number(d.counting_identity)},
                                      {"deme_expectation", number(d.deme_expectation)}}}};
        });
    }
    out["observables"] = pairs;
    return out;
}

Json quantum_price_json(const QuantumPrice& q) {
    auto side = [](const QuantumPriceSide& s) {
        return Json{{"delta", number(s.delta)}, {"ns", cplx_json(s.ns)}, {"ec", cplx_json(s.ec)}, {"residual", number(s.residual)}};
    };
    return Json{{"left", side(q.left)}, {"right", side(q.right)}, {"commutator_gap", cplx_json(q.commutator_gap)}};
}

Json quantum_section(const ProcessSpec& s) {
    std::optional<QuantumSpec> embedded;
    const QuantumSpec* q = s.quantum ? &*s.quantum : nullptr;
    Json out;
    if (!q) {
        // No quantum description: analyse the diagonal embedding of the classical process.
        embedded.emplace(QuantumSpec{embed(s.process), {}, {}, std::nullopt, embed_singletons(static_cast<Eigen::Index>(s.process.source().dim())),
                                     embed_singletons(static_cast<Eigen::Index>(s.process.target().dim()))});
        for (const auto& [name, x] : s.source_observables)
            if (s.target_observables.count(name)) {
                embedded->observables.emplace(name, embed(x).matrix());
                embedded->target_observables.emplace(name, embed(s.target_observables.at(name)).matrix());
            }
        if (s.orphan_weights) embedded->orphan = CMat(s.orphan_weights->cast<cplx>().asDiagonal());
        q = &*embedded;
        out["source"] = "diagonal embedding";
    } else {
        out["source"] = "quantum";
    }
    const QuantumProcess& p = q->process;
    out["validation"] = guarded([&] {
        const QuantumDiagnostics d = validate(p);
        return Json{{"ok", d.ok}, {"min_probe_eigenvalue", number(d.min_probe_eigenvalue)},
                    {"hermiticity_residual", number(d.hermiticity_residual)}, {"target_residual", number(d.target_residual)},
                    {"probes", d.probes}};
    });
    out["fitness"] = guarded([&] {
        const QuantumFitness f = q_fitness(p);
        return Json{{"W", complex_matrix_json(f.W)}, {"Wbar", number(f.Wbar)}, {"U", complex_matrix_json(f.U)}};
    });
    out["factorization"] = guarded([&] {
        const QuantumFactorization f = q_factorize(p);
        return Json{{"reconstruction_residual", number(f.reconstruction_residual)}, {"trace_residual", number(f.trace_residual)}};
    });
    auto target_of = [&](const std::string& name, const CMat& m) {
        auto it = q->target_observables.find(name);
        return QuantumObservable(it == q->target_observables.end() ? m : it->second);
    };
    Json prices = Json::object();
    for (const auto& [name, m] : q->observables)
        prices[name] = guarded([&] { return quantum_price_json(q_price(p, QuantumObservable(m), target_of(name, m))); });
    out["price"] = prices;
    out["laws"] = guarded([&] {
        const QuantumLaws l = q_laws(p);
        return Json::array({to_json(l.zeroth), to_json(l.first), to_json(l.gibbs), to_json(l.second), to_json(l.acceleration)});
    });
    out["entropy"] = guarded([&] {
        const QuantumEntropy e = q_partition_entropy(p, q->source_projections, q->target_projections);
        return Json{{"profile", to_json(e.profile)}, {"bounds", to_json(e.bounds)}, {"third_law", to_json(e.third)},
                    {"max_imaginary", number(e.max_imaginary)}};
    });
    if (q->orphan) {
        out["kgs"] = guarded([&] {
            const OpenQuantumProcess op = OpenQuantumProcess::with_orphans(p, *q->orphan);
            Json pairs = Json::object();
            for (const auto& [name, m] : q->observables) {
                pairs[name] = guarded([&] {
                    const QuantumKgs k = q_kgs(op, QuantumObservable(m), target_of(name, m));
                    auto side = [](const QuantumKgsSide& sd) {
                        return Json{{"selection", cplx_json(sd.selection)}, {"transmission", cplx_json(sd.transmission)},
                                    {"orphan_nu", cplx_json(sd.orphan_nu)},  {"orphan_pi", cplx_json(sd.orphan_pi)},
                                    {"residual_nu", number(sd.residual_nu)}, {"residual_pi", number(sd.residual_pi)}};
                    };
                    return Json{{"delta", number(k.delta)}, {"p_parented", number(k.p_parented)}, {"left", side(k.left)},
                                {"right", side(k.right)}};
                });
            }
            return Json{{"parented_fraction", number(op.parented_fraction())}, {"observables", pairs}};
        });
    }
    return out;
}

}  // namespace

CMat parse_complex_matrix(const Json& j, const char* what) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw SpecError(std::string(what) + ": expected a nonempty array of rows");
    const std::size_t cols = j[0].size();
    CMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw SpecError(std::string(what) + ": rows differ in length");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(j[r][c], what);
    }
    return m;
}

Json complex_matrix_json(const CMat& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (m(r, c).imag() == 0.0)
                row.push_back(number(m(r, c).real()));
            else
                row.push_back(cplx_json(m(r, c)));
        }
        out.push_back(row);
    }
    return out;
}

ProcessSpec parse_spec(const Json& doc) {
    if (!doc.is_object()) throw SpecError("document must be a JSON object");
    const TypeSet types = parse_types(require(doc, "types"), "types");
    const Population source(types, parse_vector(require(doc, "weights"), "weights"));
    ProcessSpec spec{parse_process(source, doc, "process"), {}, {}, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    const TypeSet& target_types = spec.process.target().types();

    if (doc.contains("observables")) spec.source_observables = parse_observables(doc.at("observables"), types, "observables");
    if (doc.contains("target_observables")) {
        spec.target_observables = parse_observables(doc.at("target_observables"), target_types, "target_observables");
    } else if (spec.process.endomorphic()) {
        spec.target_observables = spec.source_observables;
    }
    if (doc.contains("partitions")) {
        const Json& parts = doc.at("partitions");
        if (!parts.is_object()) throw SpecError("partitions: expected an object");
        if (parts.contains("source")) spec.source_partition = parse_partition(parts.at("source"), types, "partitions.source");
        if (parts.contains("target")) spec.target_partition = parse_partition(parts.at("target"), target_types, "partitions.target");
    }
    if (doc.contains("next")) spec.next = parse_process(spec.process.target(), doc.at("next"), "next");
    if (doc.contains("open")) spec.orphan_weights = parse_vector(require(doc.at("open"), "orphan_weights"), "open.orphan_weights");
    if (doc.contains("quantum")) spec.quantum = parse_quantum(doc.at("quantum"));
    return spec;
}

ProcessSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError("malformed JSON in '" + path + "': " + e.what());
    }
    try {
        return parse_spec(doc);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("schema error: ") + e.what());
    }
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double read_number(const Json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

Json to_json(const LawReport& r) {
    Json chain = Json::array();
    for (const ChainEntry& e : r.chain) chain.push_back(Json{{"label", e.label}, {"value", number(e.value)}});
    Json slacks = Json::array();
    for (double s : r.slacks) slacks.push_back(number(s));
    Json extras = Json::object();
    for (const auto& [k, v] : r.extras) extras[k] = number(v);
    return Json{{"name", r.name},
                {"lhs", number(r.lhs)},
                {"order", r.order == ChainOrder::ascending ? "ascending" : "descending"},
                {"chain", chain},
                {"slacks", slacks},
                {"saturated", r.saturated},
                {"equilibrium_class", to_string(r.equilibrium_class)},
                {"holds", r.holds()},
                {"min_slack", number(r.min_slack())},
                {"extras", extras},
                {"notes", r.notes}};
}

LawReport law_report_from_json(const Json& j) {
    LawReport r;
    r.name = j.at("name").get<std::string>();
    r.lhs = read_number(j.at("lhs"));
    r.order = j.at("order").get<std::string>() == "ascending" ? ChainOrder::ascending : ChainOrder::descending;
    for (const Json& e : j.at("chain")) r.chain.push_back({e.at("label").get<std::string>(), read_number(e.at("value"))});
    for (const Json& s : j.at("slacks")) r.slacks.push_back(read_number(s));
    r.saturated = j.at("saturated").get<std::vector<bool>>();
    const std::string cls = j.at("equilibrium_class").get<std::string>();
    for (EquilibriumClass c : {EquilibriumClass::selective_equilibrium, EquilibriumClass::purely_environmental, EquilibriumClass::generic})
        if (to_string(c) == cls) r.equilibrium_class = c;
    for (const auto& [k, v] : j.at("extras").items()) r.extras[k] = read_number(v);
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

Json to_json(const PriceDecomposition& d) {
    return Json{{"delta", number(d.delta)}, {"ns", number(d.ns)}, {"ec", number(d.ec)}, {"residual", number(d.residual)}, {"holds", d.holds()}};
}

PriceDecomposition price_from_json(const Json& j) {
    PriceDecomposition d;
    d.delta = read_number(j.at("delta"));
    d.ns = read_number(j.at("ns"));
    d.ec = read_number(j.at("ec"));
    d.residual = read_number(j.at("residual"));
    return d;
}

Json to_json(const EntropyProfile& e) {
    Json cells = Json::array();
    for (const CellProfile& c : e.per_cell) cells.push_back(cell_json(c));
    return Json{{"s_ns", number(e.s_ns)},   {"s_ec", number(e.s_ec)},   {"s_dis", number(e.s_dis)},
                {"s_mix", number(e.s_mix)}, {"s_tot", number(e.s_tot)}, {"cells", cells}};
}

EntropyProfile entropy_profile_from_json(const Json& j) {
    EntropyProfile e;
    e.s_ns = read_number(j.at("s_ns"));
    e.s_ec = read_number(j.at("s_ec"));
    e.s_dis = read_number(j.at("s_dis"));
    e.s_mix = read_number(j.at("s_mix"));
    e.s_tot = read_number(j.at("s_tot"));
    for (const Json& c : j.at("cells")) {
        CellProfile cp;
        cp.a = c.at("a").get<std::size_t>();
        cp.b = c.at("b").get<std::size_t>();
        cp.u_bar = read_number(c.at("u_bar"));
        cp.s_ec = read_number(c.at("s_ec"));
        cp.s_dis = read_number(c.at("s_dis"));
        cp.s_mix = read_number(c.at("s_mix"));
        cp.s_ns = read_number(c.at("s_ns"));
        cp.p_tilde = read_number(c.at("p_tilde"));
        cp.phi = read_number(c.at("phi"));
        cp.lambda = read_number(c.at("lambda"));
        cp.gamma = read_number(c.at("gamma"));
        cp.e_d2 = read_number(c.at("e_d2"));
        e.per_cell.push_back(cp);
    }
    return e;
}

Json to_json(const Diagnostics& d) {
    return Json{{"ok", d.ok}, {"max_residual", number(d.max_residual)}, {"residuals", vec_json(Eigen::Map<const Vec>(d.residuals.data(), static_cast<Eigen::Index>(d.residuals.size())))}};
}

Json to_json(const ReversibilityVerdict& v) {
    Json out{{"left_invertible", v.left_invertible},
             {"right_invertible", v.right_invertible},
             {"invertible", v.invertible},
             {"retraction_residual", number(v.retraction_residual)},
             {"section_residual", number(v.section_residual)},
             {"dollo_full", v.dollo_full},
             {"dollo_childbearing", v.dollo_childbearing},
             {"s_dis", number(v.s_dis)},
             {"s_mix_conditional", number(v.s_mix_conditional)},
             {"s_mix", number(v.s_mix)},
             {"s_ec", number(v.s_ec)},
             {"literal_mix_zero", v.literal_mix_zero},
             {"literal_ec_zero", v.literal_ec_zero}};
    if (v.retraction) out["retraction"] = mat_json(v.retraction->kernel());
    if (v.section) out["section"] = mat_json(v.section->kernel());
    if (v.inverse_kernel) out["inverse_kernel"] = mat_json(v.inverse_kernel->kernel());
    return out;
}

Json to_json(const ThirdLawReport& t) {
    return Json{{"s_ec", to_json(t.ns_s_ec)},
                {"s_dis", to_json(t.ns_s_dis)},
                {"s_mix", to_json(t.ns_s_mix)},
                {"weak_law_holds", t.weak_law_holds},
                {"sum_residual", number(t.sum_residual)}};
}

Json to_json(const DispersionMixingBounds& b) { return Json{{"dispersion", to_json(b.dispersion)}, {"mixing", to_json(b.mixing)}}; }

Json build_report(const ProcessSpec& s, const ReportSections& sections) {
    const Process& p = s.process;
    Json out;
    out["schema_version"] = schema_version;
    out["process"] = process_json(p);
    out["validation"] = to_json(validate(p));
    out["fitness"] = guarded([&] { return fitness_json(p); });
    out["purity"] = guarded([&] { return Json(to_string(classify_purity(p))); });
    out["factorization"] = guarded([&] { return factorization_json(p); });
    out["price"] = price_section(s);
    if (sections.laws) {
        out["laws"] = laws_section(p);
        if (s.next) out["composition"] = composition_section(s);
    }
    if (sections.entropy) out["entropy"] = entropy_section(s);
    if (sections.kgs && s.orphan_weights) out["kgs"] = guarded([&] { return kgs_section(s); });
    if (sections.quantum) out["quantum"] = guarded([&] { return quantum_section(s); });
    return out;
}

std::vector<TrajectoryRow> simulate(const Process& p, int generations) {
    if (!p.endomorphic()) throw MismatchError("simulate: the process must map a type set to itself");
    if (generations < 1 || generations > 64) throw DomainError("simulate: generations must lie in [1, 64]");
    std::vector<TrajectoryRow> rows;
    Population mu = p.source();
    for (int t = 0; t < generations; ++t) {
        const Process step = Process::derive(mu, mu.types(), p.kernel());
        TrajectoryRow r;
        r.t = t;
        r.population = mu.size();
        const FitnessData f = fitness(step);
        r.var_u = variance(mu, f.U);
        r.s_ns = selective_entropy(step);
        r.s_ec = generating_profile(step).s_ec;
        r.second_law_slack = second_law(step).min_slack();
        r.speed_limit_slack = speed_limits(step).min_slack();
        rows.push_back(r);
        mu = step.target();
    }
    return rows;
}

void write_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
    std::ostringstream s;
    s << std::setprecision(17);
    s << "t,N_t,var_U,S_NS,S_EC,second_law_slack,speed_limit_slack\n";
    for (const TrajectoryRow& r : rows)
        s << r.t << ',' << r.population << ',' << r.var_u << ',' << r.s_ns << ',' << r.s_ec << ',' << r.second_law_slack << ','
          << r.speed_limit_slack << '\n';
    out << s.str();
}

}  // namespace pricekit::io
