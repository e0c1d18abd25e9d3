#pragma once

// Command implementations behind the `nhqc` executable. Kept in a header so
// the test suite can drive every subcommand in-process.
//
// Exit codes: 0 success, 2 validation, 3 tolerance breach, 4 I/O, 5 parse.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nhqc/entanglement.hpp"
#include "nhqc/holonomy.hpp"
#include "nhqc/noise.hpp"
#include "nhqc/report_io.hpp"
#include "nhqc/spin_model.hpp"

namespace nhqc::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kToleranceBreach = 3,
    kIo = 4,
    kParse = 5,
};

inline constexpr double kBreachTolerance = 1e-8;
inline constexpr const char* kOutputDirEnv = "NHQC_OUTPUT_DIR";

struct Failure {
    int code;
    std::string message;
};

struct OutputOptions {
    std::string format = "json";
    std::string path;
};

namespace detail {

[[noreturn]] inline void fail(int code, std::string message) {
    throw Failure{code, std::move(message)};
}

inline void require(bool condition, const std::string& flag, const std::string& message) {
    if (!condition) {
        fail(kValidation, flag + ": " + message);
    }
}

inline void emit(const OutputOptions& opts, const std::string& default_name,
                 const std::string& content, std::ostream& out) {
    std::filesystem::path target;
    if (!opts.path.empty()) {
        target = opts.path;
    } else if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
        target = std::filesystem::path(dir) / (default_name + "." + opts.format);
    } else {
        out << content;
        return;
    }
    std::ofstream file(target, std::ios::binary | std::ios::trunc);
    if (!file) {
        fail(kIo, "cannot open '" + target.string() + "' for writing");
    }
    file << content;
    file.flush();
    if (!file) {
        fail(kIo, "write to '" + target.string() + "' failed");
    }
}

inline std::string render(const json& doc, const std::string& format) {
    std::ostringstream s;
    if (format == "csv") {
        write_flat_csv(doc, s);
    } else {
        s << doc.dump(2) << '\n';
    }
    return s.str();
}

inline void add_output_options(CLI::App* cmd, OutputOptions& opts,
                               std::vector<std::string> formats) {
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember(std::move(formats)));
    cmd->add_option("-o,--output", opts.path,
                    std::string("Output file (default: $") + kOutputDirEnv +
                        "/<command>.<format>, else stdout)");
}

inline bool breached(const GateReport& r) {
    return !r.analytic_distance || !(*r.analytic_distance <= kBreachTolerance);
}

} // namespace detail

// ---------------------------------------------------------------- synth-1q

struct Synth1QArgs {
    std::string gate;
    std::optional<double> theta;
    std::optional<double> gamma;
    int m = 1;
    double omega = 1.0;
    int samples = 101;
    OutputOptions output;
};

inline json synth_1q_report(const Synth1QArgs& a, bool& breach) {
    double theta = 0.0, gamma = 0.0;
    if (!a.gate.empty()) {
        detail::require(!a.theta && !a.gamma, "--gate", "cannot be combined with --theta/--gamma");
        const GateTarget t = a.gate == "hadamard" ? GateTarget::hadamard() : GateTarget::pi8();
        theta = t.theta;
        gamma = t.gamma;
    } else {
        detail::require(a.theta.has_value(), "--theta", "required unless --gate is given");
        detail::require(a.gamma.has_value(), "--gamma", "required unless --gate is given");
        theta = *a.theta;
        gamma = *a.gamma;
    }
    detail::require(theta >= 0.0 && theta <= kPi, "--theta", "must lie in [0, pi]");
    detail::require(gamma >= 0.0, "--gamma", "must be non-negative");
    detail::require(a.m >= 1, "--m", "must be a positive integer");
    detail::require(a.omega > 0.0 && std::isfinite(a.omega), "--omega", "must be positive");
    detail::require(a.samples >= 2, "--samples", "must be >= 2");

    GateParams1Q g;
    try {
        g = params_for_rotation(theta, gamma, a.m, a.omega);
    } catch (const PreconditionError& e) {
        detail::fail(kValidation, std::string("--gamma: ") + e.what());
    }
    const ComplexMatrix ideal = analytic_gate_1q(theta, gamma);
    const CouplingParams1Q c = g.couplings();

    const SubspaceFrame logical = logical_frame_1q();
    const SubspaceFrame effective_logical = coordinates_in(logical, dfs_frame(3, 1));
    const GateReport eff = evolve_and_project(lambda_hamiltonian(c), effective_logical,
                                              g.duration(), a.samples, ideal);
    const GateReport full = evolve_and_project(build_h1(c), logical, g.duration(), a.samples, ideal);
    breach = detail::breached(eff) || detail::breached(full);

    json doc;
    doc["command"] = "synth-1q";
    doc["target"] = {{"preset", a.gate.empty() ? json(nullptr) : json(a.gate)},
                     {"theta", theta},
                     {"gamma", gamma},
                     {"axis", {std::sin(theta), 0.0, -std::cos(theta)}}};
    doc["params"] = {{"theta", g.theta}, {"phi", g.phi},   {"m", g.m},     {"omega", g.omega},
                     {"tau", g.duration()}, {"j1a", c.j1a}, {"j2a", c.j2a}, {"b", c.b}};
    doc["analytic_gate"] = to_json(ideal);
    doc["effective"] = to_json(eff);
    doc["full"] = to_json(full);
    doc["tolerances"] = tolerances_json();
    return doc;
}

// ---------------------------------------------------------------- synth-2q

struct Synth2QArgs {
    double theta_tilde = kPi / 4.0;
    int m_tilde = 1;
    double omega_tilde = 1.0;
    int samples = 101;
    std::int64_t mc_samples = 100000;
    std::uint64_t seed = 0;
    double cnot_tol = 1e-6;
    OutputOptions output;
};

inline json synth_2q_report(const Synth2QArgs& a, bool& breach) {
    detail::require(a.theta_tilde > 0.0 && a.theta_tilde < kPi / 2.0, "--theta-tilde",
                    "must lie in (0, pi/2)");
    detail::require(a.m_tilde >= 1 && a.m_tilde % 2 == 1, "--m-tilde",
                    "must be a positive odd integer (even windings give the identity)");
    detail::require(a.omega_tilde > 0.0 && std::isfinite(a.omega_tilde), "--omega-tilde",
                    "must be positive");
    detail::require(a.samples >= 2, "--samples", "must be >= 2");
    detail::require(a.mc_samples >= 1000, "--mc-samples", "must be >= 1000");

    const GateParams2Q g = params_for_entangler(a.theta_tilde, a.m_tilde, a.omega_tilde);
    const CouplingParams2Q c = g.couplings();
    const ComplexMatrix ideal = analytic_gate_2q(g.theta_tilde);

    const SubspaceFrame logical = logical_frame_2q();
    const SubspaceFrame effective_logical = coordinates_in(logical, dfs_frame(4, 2));
    const ComplexMatrix h_eff = kron(double_lambda_factor(c), ComplexMatrix::Identity(2, 2));
    const GateReport eff =
        evolve_and_project(h_eff, effective_logical, g.duration(), a.samples, ideal);
    const GateReport full = evolve_and_project(build_h2(c), logical, g.duration(), a.samples, ideal);
    breach = detail::breached(eff) || detail::breached(full);

    const EntanglementReport ent = classify(full.holonomy, a.mc_samples, a.seed, a.cnot_tol);

    json doc;
    doc["command"] = "synth-2q";
    doc["params"] = {{"theta_tilde", g.theta_tilde}, {"m_tilde", g.m_tilde},
                     {"omega_tilde", g.omega_tilde}, {"tau", g.duration()},
                     {"j32", c.j32},                 {"j42", c.j42}};
    doc["analytic_gate"] = to_json(ideal);
    doc["effective"] = to_json(eff);
    doc["full"] = to_json(full);
    doc["entanglement"] = to_json(ent);
    doc["entanglement"]["ep_analytic"] = entangling_power_analytic(g.theta_tilde);
    doc["entanglement"]["mc_samples"] = a.mc_samples;
    doc["entanglement"]["seed"] = a.seed;
    doc["tolerances"] = tolerances_json();
    return doc;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    double theta = 3.0 * kPi / 4.0;
    double phi = kPi / 2.0;
    int m = 1;
    double theta_tilde = kPi / 4.0;
    int m_tilde = 1;
    int samples = 101;
    OutputOptions output;
};

inline json verify_report(const VerifyArgs& a, bool& breach) {
    detail::require(a.theta >= 0.0 && a.theta <= kPi, "--theta", "must lie in [0, pi]");
    detail::require(a.phi >= 0.0 && a.phi <= kPi, "--phi", "must lie in [0, pi]");
    detail::require(a.m >= 1, "--m", "must be a positive integer");
    detail::require(a.theta_tilde > 0.0 && a.theta_tilde < kPi / 2.0, "--theta-tilde",
                    "must lie in (0, pi/2)");
    detail::require(a.m_tilde >= 1 && a.m_tilde % 2 == 1, "--m-tilde",
                    "must be a positive odd integer");
    detail::require(a.samples >= 2, "--samples", "must be >= 2");

    json checks = json::array();
    breach = false;
    auto check = [&](const std::string& name, double value, double tolerance) {
        const bool pass = value <= tolerance;
        breach = breach || !pass;
        checks.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", pass}});
    };

    const GateParams1Q g1{a.theta, a.phi, a.m, 1.0};
    const CouplingParams1Q c1 = g1.couplings();
    const ComplexMatrix h1 = build_h1(c1);
    const RestrictedOperator r1 = restrict_to(h1, dfs_frame(3, 1));
    check("h1_effective_vs_lambda_form", max_abs(r1.effective - lambda_hamiltonian(c1)), 1e-13);
    check("h1_dfs_invariance_residual", r1.invariance_residual, 1e-13);
    check("h1_total_sz_commutator", commutator(h1, total_sz(3)).norm(), tol::construction);
    StateVector dark(3);
    dark << std::cos(a.theta / 2.0), -std::sin(a.theta / 2.0), 0.0;
    check("h1_dark_state_residual", (r1.effective * dark).norm(), tol::construction);
    const ComplexMatrix ideal1 = analytic_gate_1q(a.theta, g1.gamma());
    const GateReport rep1 =
        evolve_and_project(h1, logical_frame_1q(), g1.duration(), a.samples, ideal1);
    check("h1_parallel_transport", rep1.max_dynamical_norm, tol::construction);
    check("h1_cyclicity_residual", rep1.cyclicity_residual, tol::gate);
    check("h1_gate_distance", *rep1.analytic_distance, tol::gate);

    const GateParams2Q g2{a.theta_tilde, a.m_tilde, 1.0};
    const CouplingParams2Q c2 = g2.couplings();
    const ComplexMatrix h2 = build_h2(c2);
    const RestrictedOperator r2 = restrict_to(h2, dfs_frame(4, 2));
    const ComplexMatrix double_lambda =
        kron(double_lambda_factor(c2), ComplexMatrix::Identity(2, 2));
    check("h2_effective_vs_double_lambda", max_abs(r2.effective - double_lambda), 1e-13);
    check("h2_dfs_invariance_residual", r2.invariance_residual, 1e-13);
    check("h2_total_sz_commutator", commutator(h2, total_sz(4)).norm(), tol::construction);
    const ComplexMatrix ideal2 = analytic_gate_2q(a.theta_tilde);
    const GateReport rep2 =
        evolve_and_project(h2, logical_frame_2q(), g2.duration(), a.samples, ideal2);
    check("h2_parallel_transport", rep2.max_dynamical_norm, tol::construction);
    check("h2_cyclicity_residual", rep2.cyclicity_residual, tol::gate);
    check("h2_gate_distance", *rep2.analytic_distance, tol::gate);
    check("h2_gate_entrywise", max_abs(rep2.holonomy - ideal2), 1e-9);

    json doc;
    doc["command"] = "verify";
    doc["params"] = {{"theta", a.theta},           {"phi", a.phi},
                     {"m", a.m},                   {"theta_tilde", a.theta_tilde},
                     {"m_tilde", a.m_tilde},       {"samples", a.samples}};
    doc["checks"] = std::move(checks);
    doc["all_pass"] = !breach;
    doc["tolerances"] = tolerances_json();
    return doc;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
    std::string input;
    std::string pointer;
    std::int64_t mc_samples = 100000;
    std::uint64_t seed = 0;
    double cnot_tol = 1e-6;
    OutputOptions output;
};

inline ComplexMatrix load_matrix(const std::string& path, const std::string& pointer) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        detail::fail(kIo, "--input: cannot open '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(file);
        if (!pointer.empty()) {
            doc = doc.at(json::json_pointer(pointer));
        } else if (doc.is_object() && doc.contains("holonomy")) {
            doc = doc["holonomy"];
        }
        return matrix_from_json(doc);
    } catch (const json::exception& e) {
        detail::fail(kParse, "--input: " + std::string(e.what()));
    } catch (const ParseError& e) {
        detail::fail(kParse, "--input: " + std::string(e.what()));
    }
}

inline json classify_report(const ClassifyArgs& a) {
    detail::require(a.mc_samples >= 1000, "--mc-samples", "must be >= 1000");
    detail::require(a.cnot_tol > 0.0, "--cnot-tol", "must be positive");
    const ComplexMatrix u = load_matrix(a.input, a.pointer);
    if (u.rows() != 4) {
        detail::fail(kParse, "--input: expected a 4x4 matrix, got " + std::to_string(u.rows()) +
                                 "x" + std::to_string(u.cols()));
    }
    const double defect = unitarity_defect(u);
    detail::require(defect <= 1e-8, "--input",
                    "matrix is not unitary (max |U^dagger U - 1| = " + format_number(defect) + ")");
    const EntanglementReport ent = classify(u, a.mc_samples, a.seed, a.cnot_tol);
    json doc;
    doc["command"] = "classify";
    doc["unitarity_defect"] = defect;
    doc["entanglement"] = to_json(ent);
    doc["entanglement"]["mc_samples"] = a.mc_samples;
    doc["entanglement"]["seed"] = a.seed;
    doc["tolerances"] = tolerances_json();
    return doc;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    std::string gate = "hadamard";
    std::optional<double> theta;
    std::optional<double> gamma;
    double theta_tilde = kPi / 4.0;
    double min = 1.0;
    double max = 100.0;
    int steps = 50;
    bool log = false;
    bool linear = false;
    int m = 1;
    unsigned threads = 1;
    OutputOptions output{"csv", ""};
};

inline SweepSpec sweep_spec(const SweepArgs& a) {
    SweepSpec spec;
    if (a.gate == "hadamard") {
        spec.target = GateTarget::hadamard();
    } else if (a.gate == "pi8") {
        spec.target = GateTarget::pi8();
    } else if (a.gate == "custom") {
        detail::require(a.theta.has_value(), "--theta", "required for --gate custom");
        detail::require(a.gamma.has_value(), "--gamma", "required for --gate custom");
        spec.target = GateTarget::custom(*a.theta, *a.gamma);
    } else {
        detail::require(a.theta_tilde > 0.0 && a.theta_tilde < kPi / 2.0, "--theta-tilde",
                        "must lie in (0, pi/2)");
        spec.target = GateTarget::two_qubit(a.theta_tilde);
    }
    detail::require(a.min > 0.0 && std::isfinite(a.min), "--min", "must be positive");
    detail::require(a.max >= a.min && std::isfinite(a.max), "--max", "must be >= --min");
    detail::require(a.steps >= 2, "--steps", "must be >= 2");
    detail::require(!(a.log && a.linear), "--linear", "cannot be combined with --log");
    detail::require(a.m >= 1, "--m", "must be a positive integer");
    detail::require(a.gate != "two-qubit" || a.m % 2 == 1, "--m",
                    "two-qubit loops need an odd winding");
    detail::require(a.threads >= 1, "--threads", "must be >= 1");
    spec.ratio_min = a.min;
    spec.ratio_max = a.max;
    spec.steps_per_axis = a.steps;
    spec.log_scale = !a.linear;
    spec.winding = a.m;
    spec.threads = a.threads;
    if (spec.target.kind != GateTarget::Kind::two_qubit) {
        try {
            (void)params_for_rotation(spec.target.theta, spec.target.gamma, spec.winding);
        } catch (const PreconditionError& e) {
            detail::fail(kValidation, std::string("--gamma: ") + e.what());
        }
    }
    return spec;
}

inline std::string sweep_output(const SweepArgs& a) {
    const SweepTable table = run_sweep(sweep_spec(a));
    std::ostringstream s;
    if (a.output.format == "json") {
        json doc = to_json(table);
        doc["command"] = "sweep";
        doc["gate"] = a.gate;
        doc["tolerances"] = tolerances_json();
        s << doc.dump(2) << '\n';
    } else {
        write_sweep_csv(table, s);
    }
    return s.str();
}

// ---------------------------------------------------------------- dispatch

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Holonomic gates in decoherence-free subspaces of XY qubit chains", "nhqc"};
    app.require_subcommand(1);

    Synth1QArgs s1;
    auto* synth1 = app.add_subcommand("synth-1q", "Synthesize and verify a single-qubit gate");
    synth1->add_option("--gate", s1.gate, "Preset target")
        ->check(CLI::IsMember({"hadamard", "pi8"}));
    synth1->add_option("--theta", s1.theta, "Axis angle: n = (sin theta, 0, -cos theta)");
    synth1->add_option("--gamma", s1.gamma, "Rotation angle");
    synth1->add_option("--m", s1.m, "Winding number");
    synth1->add_option("--omega", s1.omega, "Energy scale");
    synth1->add_option("--samples", s1.samples, "Time samples for the parallel-transport check");
    detail::add_output_options(synth1, s1.output, {"json", "csv"});

    Synth2QArgs s2;
    auto* synth2 = app.add_subcommand("synth-2q", "Synthesize, verify and classify the entangler");
    synth2->add_option("--theta-tilde", s2.theta_tilde, "Coupling angle, 2 atan(J32/J42)");
    synth2->add_option("--m-tilde", s2.m_tilde, "Odd winding number");
    synth2->add_option("--omega-tilde", s2.omega_tilde, "Energy scale");
    synth2->add_option("--samples", s2.samples, "Time samples for the parallel-transport check");
    synth2->add_option("--mc-samples", s2.mc_samples, "Monte-Carlo entangling-power samples");
    synth2->add_option("--seed", s2.seed, "Monte-Carlo seed");
    synth2->add_option("--cnot-tol", s2.cnot_tol, "Weyl distance accepted as CNOT class");
    detail::add_output_options(synth2, s2.output, {"json", "csv"});

    VerifyArgs v;
    auto* verify = app.add_subcommand("verify", "Structural checks of both constructions");
    verify->add_option("--theta", v.theta, "Single-qubit axis angle");
    verify->add_option("--phi", v.phi, "Single-qubit mixing angle");
    verify->add_option("--m", v.m, "Single-qubit winding");
    verify->add_option("--theta-tilde", v.theta_tilde, "Two-qubit coupling angle");
    verify->add_option("--m-tilde", v.m_tilde, "Two-qubit odd winding");
    verify->add_option("--samples", v.samples, "Time samples");
    detail::add_output_options(verify, v.output, {"json", "csv"});

    ClassifyArgs c;
    auto* cls = app.add_subcommand("classify", "Classify a 4x4 unitary read from JSON");
    cls->add_option("-i,--input", c.input, "Matrix file")->required();
    cls->add_option("--pointer", c.pointer, "JSON pointer to the matrix inside the document");
    cls->add_option("--mc-samples", c.mc_samples, "Monte-Carlo entangling-power samples");
    cls->add_option("--seed", c.seed, "Monte-Carlo seed");
    cls->add_option("--cnot-tol", c.cnot_tol, "Weyl distance accepted as CNOT class");
    detail::add_output_options(cls, c.output, {"json", "csv"});

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Fidelity over a grid of DM noise ratios");
    sweep->add_option("--gate", sw.gate, "Target")
        ->check(CLI::IsMember({"hadamard", "pi8", "custom", "two-qubit"}));
    sweep->add_option("--theta", sw.theta, "Axis angle for --gate custom");
    sweep->add_option("--gamma", sw.gamma, "Rotation angle for --gate custom");
    sweep->add_option("--theta-tilde", sw.theta_tilde, "Coupling angle for --gate two-qubit");
    sweep->add_option("--min", sw.min, "Smallest omega/D ratio");
    sweep->add_option("--max", sw.max, "Largest omega/D ratio");
    sweep->add_option("--steps", sw.steps, "Grid points per axis");
    sweep->add_flag("--log", sw.log, "Log-spaced ratios (default)");
    sweep->add_flag("--linear", sw.linear, "Linearly spaced ratios");
    sweep->add_option("--m", sw.m, "Winding number");
    sweep->add_option("--threads", sw.threads, "Worker threads");
    detail::add_output_options(sweep, sw.output, {"csv", "json"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kValidation;
    }

    try {
        bool breach = false;
        if (*synth1) {
            const json doc = synth_1q_report(s1, breach);
            detail::emit(s1.output, "synth-1q", detail::render(doc, s1.output.format), out);
        } else if (*synth2) {
            const json doc = synth_2q_report(s2, breach);
            detail::emit(s2.output, "synth-2q", detail::render(doc, s2.output.format), out);
        } else if (*verify) {
            const json doc = verify_report(v, breach);
            detail::emit(v.output, "verify", detail::render(doc, v.output.format), out);
        } else if (*cls) {
            const json doc = classify_report(c);
            detail::emit(c.output, "classify", detail::render(doc, c.output.format), out);
        } else if (*sweep) {
            detail::emit(sw.output, "sweep", sweep_output(sw), out);
        }
        if (breach) {
            err << "tolerance breach: see report\n";
            return kToleranceBreach;
        }
        return kOk;
    } catch (const Failure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kToleranceBreach;
    }
}

} // namespace nhqc::cli
