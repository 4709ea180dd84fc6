#include "pricekit/errors.hpp"
#include "pricekit/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

using namespace pricekit;

namespace {

int cmd_validate(const std::string& path) {
    const io::ProcessSpec spec = io::load_spec(path);
    const Diagnostics d = validate(spec.process);
    const TypeSet& types = spec.process.target().types();
    const Vec predicted = spec.process.kernel().transpose() * spec.process.source().weights();
    std::cout << std::setprecision(17);
    std::cout << "types " << spec.process.source().dim() << " -> " << types.size() << '\n';
    std::cout << "label,target_weight,predicted,relative_residual\n";
    for (std::size_t j = 0; j < types.size(); ++j)
        std::cout << types.label(j) << ',' << spec.process.target().weight(j) << ',' << predicted[static_cast<Eigen::Index>(j)] << ','
                  << d.residuals[j] << '\n';
    bool ok = d.ok;
    std::cout << "process: " << (d.ok ? "valid" : "INVALID") << " (max residual " << d.max_residual << ")\n";
    if (spec.quantum) {
        const QuantumDiagnostics q = validate(spec.quantum->process);
        std::cout << "quantum: " << (q.ok ? "valid" : "INVALID") << " (min probe eigenvalue " << q.min_probe_eigenvalue
                  << ", hermiticity residual " << q.hermiticity_residual << ", target residual " << q.target_residual << ")\n";
        ok = ok && q.ok;
    }
    return ok ? 0 : 1;
}

int cmd_report(const std::string& path, io::ReportSections sections, const std::string& out) {
    const io::ProcessSpec spec = io::load_spec(path);
    const io::Json report = io::build_report(spec, sections);
    if (out.empty()) {
        std::cout << report.dump(2) << '\n';
        return 0;
    }
    std::ofstream f(out);
    if (!f) throw io::SpecError("cannot write '" + out + "'");
    f << report.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const std::string& path, int generations, const std::string& out) {
    const io::ProcessSpec spec = io::load_spec(path);
    const auto rows = io::simulate(spec.process, generations);
    if (out.empty()) {
        io::write_csv(std::cout, rows);
        return 0;
    }
    std::ofstream f(out);
    if (!f) throw io::SpecError("cannot write '" + out + "'");
    io::write_csv(f, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"price-kit: Price decompositions, entropy functionals and law checks for evolutionary processes"};
    app.require_subcommand(1);

    std::string file, json_out, csv_out;
    bool laws = false, entropy = false, quantum = false, kgs = false, all = false;
    int generations = 10;

    auto* validate_cmd = app.add_subcommand("validate", "check that the kernel accounts for the target population");
    validate_cmd->add_option("file", file, "process description (JSON)")->required();

    auto* report_cmd = app.add_subcommand("report", "full diagnostic report as JSON");
    report_cmd->add_option("file", file, "process description (JSON)")->required();
    report_cmd->add_flag("--laws", laws, "law reports (and composition results when 'next' is given)");
    report_cmd->add_flag("--entropy", entropy, "entropy profiles, bounds, third law, reversibility");
    report_cmd->add_flag("--quantum", quantum, "quantum section (diagonal embedding when no 'quantum' block)");
    report_cmd->add_flag("--kgs", kgs, "open-process decomposition (needs 'open')");
    report_cmd->add_flag("--all", all, "every section (default)");
    report_cmd->add_option("--json", json_out, "write the report here instead of stdout");

    auto* simulate_cmd = app.add_subcommand("simulate", "iterate the kernel and tabulate per-generation law slacks");
    simulate_cmd->add_option("file", file, "process description (JSON)")->required();
    simulate_cmd->add_option("--generations,-T", generations, "number of generations (1..64)")->check(CLI::Range(1, 64));
    simulate_cmd->add_option("--out", csv_out, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate_cmd) return cmd_validate(file);
        if (*report_cmd) {
            io::ReportSections s;
            if (!all && (laws || entropy || quantum || kgs)) s = {laws, entropy, quantum, kgs};
            return cmd_report(file, s, json_out);
        }
        if (*simulate_cmd) return cmd_simulate(file, generations, csv_out);
    } catch (const io::SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
