// Command-line front end.
//
//   yamabe certify   --n {6|7|8} [--curv FILE | --random SEED] [--A RATIONAL] [--json PATH] [--quadrature]
//   yamabe integrals --n N [--check] [--json PATH]
//   yamabe quotient  --n N [--curv FILE | --random SEED] [--sweep] [--samples K] [--csv PATH] [--json PATH]
//
// Exit codes:
//   0   success (certificate holds / residuals within tolerance / improvement property holds)
//   1   certificate, residual or improvement check failed; internal cancellation failure
//   2   precondition violated (W(x0) = 0, n outside the certified range)
//   3   sampler tolerance not met
//   64  usage error or malformed input

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "yamabe/yamabe.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_precondition = 2;
constexpr int exit_tolerance = 3;
constexpr int exit_usage = 64;

struct CommonOptions {
    int n = 0;
    std::string curv_path;
    std::optional<unsigned long long> random_seed;
    std::string json_path;
    bool timing = false;
};

unsigned long long default_seed() {
    if (const char* env = std::getenv("YAMABE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw yamabe::ParseError("YAMABE_SEED is not an unsigned integer");
        }
    }
    return 1;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw yamabe::ParseError("cannot write '" + path + "'");
    out << text;
}

void emit_json(const CommonOptions& opt, nlohmann::json report, double seconds) {
    if (opt.timing) report["wall_time_s"] = {{"value", seconds}, {"provenance", "measured"}};
    if (!opt.json_path.empty()) write_file(opt.json_path, yamabe::dump_report(report));
}

nlohmann::json curvature_source(const CommonOptions& opt, unsigned long long seed) {
    if (!opt.curv_path.empty()) return {{"curv", opt.curv_path}};
    return {{"random", seed}};
}

int run_certify(const CommonOptions& opt, const std::string& A_text, bool quadrature) {
    const auto start = std::chrono::steady_clock::now();
    const yamabe::Rational A = yamabe::parse_rational(A_text);
    const unsigned long long seed = opt.random_seed.value_or(default_seed());
    const auto curv = opt.curv_path.empty() ? yamabe::random_admissible(opt.n, seed) : yamabe::read_curvature_file(opt.curv_path);
    if (curv.n != opt.n) throw yamabe::ParseError("curvature file is for n = " + std::to_string(curv.n));
    yamabe::validate(curv);

    const auto cert = yamabe::certify(opt.n, curv, A, quadrature);
    const auto rep = yamabe::apply_cancellation(yamabe::assemble_expansion(opt.n));

    std::cout << "n = " << cert.n << "   A = " << yamabe::to_string(cert.A_used) << "   normalization "
              << cert.normalization << '\n';
    std::cout << "P(A)          = " << yamabe::to_string(cert.P_value) << '\n';
    std::cout << "P(1)          = " << yamabe::to_string(cert.optimum.P_at_1) << '\n';
    std::cout << "optimal A     = " << yamabe::to_string(cert.optimum.A) << "   P = " << yamabe::to_string(cert.optimum.P_at_A)
              << '\n';
    std::cout << "channel  " << std::setw(30) << "A^0" << std::setw(30) << "A^1" << std::setw(30) << "A^2" << '\n';
    for (yamabe::Channel ch : {yamabe::Channel::S, yamabe::Channel::D, yamabe::Channel::N2, yamabe::Channel::W2}) {
        const auto& p = rep.channel(ch);
        std::cout << std::left << std::setw(9) << yamabe::channel_name(ch) << std::right;
        for (const auto& v : p.c) std::cout << std::setw(30) << v.str();
        std::cout << '\n';
    }
    std::cout << "S = " << yamabe::to_string(cert.S) << "   W2 = " << yamabe::to_string(cert.W2) << '\n';
    std::cout << "error class " << yamabe::error_class_name(cert.error_class) << '\n';
    for (const auto& r : cert.quadrature_residuals)
        std::cout << "  " << r.integral << "  exact " << r.exact << "  numeric " << r.numeric << "  rel " << r.relative << '\n';
    std::cout << cert.justification << '\n';
    std::cout << "verdict: " << (cert.verdict ? "CERTIFIED" : "NOT CERTIFIED") << '\n';

    const int code = cert.verdict ? exit_ok : exit_failed;
    nlohmann::json inputs = curvature_source(opt, seed);
    inputs["n"] = opt.n;
    inputs["A"] = yamabe::to_string(A);
    inputs["quadrature"] = quadrature;
    inputs["curvature"] = yamabe::curvature_to_json(curv);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_json(opt, yamabe::run_report("certify", inputs, yamabe::certificate_json(cert), cert.verdict, code), secs);
    if (opt.timing) std::cerr << "wall time " << secs << " s\n";
    return code;
}

/// Residual tolerance for the integral check: values for n >= 7, log slopes for n = 6.
double residual_tolerance(int n) { return n == 6 ? 1e-2 : 1e-6; }

int run_integrals(const CommonOptions& opt, bool check) {
    const auto start = std::chrono::steady_clock::now();
    if (opt.n < 6) {
        std::cerr << "integrals: n = " << opt.n
                  << " is refused; the closed forms carry a factor (n-5)(n-6) in their denominators; "
                     "only n >= 6 is supported\n";
        return exit_usage;
    }
    std::vector<yamabe::QuadratureResidual> residuals;
    if (check) residuals = yamabe::integral_residuals(opt.n);
    std::cout << (opt.n == 6 ? "log(delta/eps) coefficients" : "closed forms") << ", n = " << opt.n << '\n';
    bool pass = true;
    for (const auto& pi : yamabe::expansion_integrals(opt.n)) {
        std::cout << std::left << std::setw(4) << pi.name << std::setw(20) << pi.spec.str() << std::right << std::setw(28)
                  << (pi.bounded ? std::string("bounded (no log)") : pi.value.str());
        for (const auto& r : residuals) {
            if (r.integral != pi.name) continue;
            const bool ok = r.relative < residual_tolerance(opt.n);
            pass = pass && ok;
            std::cout << "   numeric " << std::setprecision(12) << r.numeric << "  rel " << std::setprecision(3) << r.relative
                      << (ok ? "  ok" : "  FAIL");
        }
        std::cout << '\n';
    }
    const int code = pass ? exit_ok : exit_failed;
    const nlohmann::json inputs{{"n", opt.n}, {"check", check}};
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_json(opt, yamabe::run_report("integrals", inputs, yamabe::integrals_json(opt.n, check ? &residuals : nullptr), pass, code),
              secs);
    if (opt.timing) std::cerr << "wall time " << secs << " s\n";
    return code;
}

int run_quotient(const CommonOptions& opt, bool full_sweep, long long samples, double delta, const std::string& csv_path,
                 bool flat) {
    const auto start = std::chrono::steady_clock::now();
    const unsigned long long seed = opt.random_seed.value_or(default_seed());
    yamabe::BoundaryCurvature<yamabe::Rational> curv;
    if (flat) {
        curv = yamabe::zero_curvature<yamabe::Rational>(opt.n);
    } else if (!opt.curv_path.empty()) {
        curv = yamabe::read_curvature_file(opt.curv_path);
    } else {
        yamabe::RandomCurvatureOptions ro;
        ro.anisotropic_jets = false;
        curv = yamabe::random_admissible(opt.n, seed, yamabe::rat(1, 10), ro);
    }
    if (curv.n != opt.n) throw yamabe::ParseError("curvature file is for n = " + std::to_string(curv.n));
    yamabe::validate(curv);

    auto cfg = yamabe::default_quotient_config(yamabe::to_double(curv));
    cfg.delta = delta;
    cfg.eps_list = full_sweep ? std::vector<double>{delta / 8, delta / 16, delta / 32} : std::vector<double>{delta / 32};
    cfg.sampler.mc_samples = static_cast<std::size_t>(samples);
    cfg.sampler.seed = seed;
    const auto table = yamabe::sweep(cfg);

    std::cout << "n = " << table.n << "   delta = " << table.delta << "   sharp constant " << std::setprecision(8)
              << table.sharp_constant << '\n';
    std::cout << std::setw(12) << "eps" << std::setw(6) << "A" << std::setw(16) << "Q" << std::setw(12) << "+-"
              << std::setw(16) << "Q(A)-Q(0)" << std::setw(12) << "+-" << '\n';
    for (const auto& r : table.rows) {
        std::cout << std::setprecision(6) << std::setw(12) << r.eps << std::setw(6) << r.A << std::setprecision(8)
                  << std::setw(16) << r.quotient.value << std::setprecision(2) << std::setw(12) << r.quotient.error
                  << std::setprecision(6) << std::setw(16) << r.quotient_drop.value << std::setprecision(2) << std::setw(12)
                  << r.quotient_drop.error << '\n';
    }
    for (const auto& f : table.fits) {
        std::cout << std::setprecision(6) << "A = " << f.A << ": drop coefficient measured " << f.measured << " predicted "
                  << f.predicted << " (deviation " << f.relative_deviation << "), exponent " << f.exponent << '\n';
    }
    const bool pass = !table.curved || table.monotone_improvement;
    std::cout << (table.curved ? (table.monotone_improvement ? "Q(A=1) < Q(A=0) at the two smallest eps"
                                                             : "improvement NOT observed at the two smallest eps")
                               : "flat data: no improvement claimed")
              << '\n';

    if (!csv_path.empty()) write_file(csv_path, yamabe::sweep_csv(table));
    const int code = pass ? exit_ok : exit_failed;
    nlohmann::json inputs = curvature_source(opt, seed);
    inputs["n"] = opt.n;
    inputs["flat"] = flat;
    inputs["sweep"] = full_sweep;
    inputs["samples"] = samples;
    inputs["delta"] = delta;
    inputs["curvature"] = yamabe::curvature_to_json(curv);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_json(opt, yamabe::run_report("quotient", inputs, yamabe::sweep_json(table), pass, code), secs);
    if (opt.timing) std::cerr << "wall time " << secs << " s\n";
    return code;
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_curvature) {
    cmd->add_option("--n", opt.n, "dimension of the manifold")->required();
    cmd->add_option("--json", opt.json_path, "write the JSON report to PATH");
    cmd->add_flag("--timing", opt.timing, "report wall time (stderr and JSON)");
    if (with_curvature) {
        auto* curv = cmd->add_option("--curv", opt.curv_path, "curvature JSON file");
        auto* rnd = cmd->add_option("--random", opt.random_seed, "random admissible curvature with this seed");
        curv->excludes(rnd);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-Yamabe test-function energy expansion: certificates and checks"};
    app.require_subcommand(1);

    CommonOptions certify_opt;
    std::string A_text = "1";
    bool quadrature = false;
    auto* certify = app.add_subcommand("certify", "exact sign certificate for the eps^4 energy coefficient");
    add_common(certify, certify_opt, true);
    certify->add_option("--A", A_text, "coefficient A of the correction phi (rational)");
    certify->add_flag("--quadrature", quadrature, "also confirm every integral by quadrature");

    CommonOptions integrals_opt;
    bool check = false;
    auto* integrals = app.add_subcommand("integrals", "closed-form integral table");
    add_common(integrals, integrals_opt, false);
    integrals->add_flag("--check", check, "compare against quadrature");

    CommonOptions quotient_opt;
    bool full_sweep = false, flat = false;
    long long samples = 2000000;
    double delta = 0.25;
    std::string csv_path;
    auto* quotient = app.add_subcommand("quotient", "numerical Sobolev quotient of the perturbed bubble");
    add_common(quotient, quotient_opt, true);
    quotient->add_flag("--sweep", full_sweep, "sweep eps over delta/8, delta/16, delta/32 (default: delta/32 only)");
    quotient->add_flag("--flat", flat, "use the flat (zero) curvature data");
    quotient->add_option("--samples", samples, "quasi-Monte Carlo samples per replicate set")->check(CLI::PositiveNumber);
    quotient->add_option("--delta", delta, "cut-off radius delta")->check(CLI::PositiveNumber);
    quotient->add_option("--csv", csv_path, "write the sweep table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*certify) return run_certify(certify_opt, A_text, quadrature);
        if (*integrals) return run_integrals(integrals_opt, check);
        if (*quotient) return run_quotient(quotient_opt, full_sweep, samples, delta, csv_path, flat);
    } catch (const yamabe::PreconditionViolation& e) {
        std::cerr << "precondition violated: " << e.what() << '\n';
        return exit_precondition;
    } catch (const yamabe::ToleranceNotMet& e) {
        std::cerr << "tolerance not met: " << e.what() << '\n';
        return exit_tolerance;
    } catch (const yamabe::CancellationFailure& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_failed;
    } catch (const yamabe::ParseError& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return exit_usage;
    } catch (const yamabe::SymmetryViolation& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
