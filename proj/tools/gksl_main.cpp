// Command-line surface for the scattering-generator library.
// Exit codes: 0 ok, 1 usage/input error, 2 numeric non-convergence,
// 3 invariant-suite failure.

#include <clocale>
#include <cstdio>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gksl/coefficients.hpp"
#include "gksl/config.hpp"
#include "gksl/density.hpp"
#include "gksl/fock.hpp"
#include "gksl/kernels.hpp"
#include "gksl/lindblad.hpp"
#include "gksl/probability.hpp"
#include "gksl/symmetry.hpp"

namespace {

using namespace gksl;

constexpr double kPi = 3.14159265358979323846;

struct CommonOpts {
    double lambda{1.0};
    double ms{1.0};
    double me{1.0};
    std::uint64_t samples{1'000'000};
    std::uint64_t seed{12345};
    double tol{1e-8};
    std::string eps_schedule;
    std::string units{"me"};
};

std::string g_config_path;  // consumed by the pre-pass below

void add_common(CLI::App* cmd, CommonOpts& o, bool require_masses) {
    cmd->add_option("--config", g_config_path,
                    "flat `key = value` file; command-line flags win");
    auto* lam = cmd->add_option("--lambda", o.lambda, "coupling");
    auto* ms = cmd->add_option("--ms", o.ms, "system-field mass");
    auto* me = cmd->add_option("--me", o.me, "environment-field mass");
    if (require_masses) {
        lam->required();
        ms->required();
        me->required();
    }
    cmd->add_option("--samples", o.samples, "Monte Carlo samples");
    cmd->add_option("--seed", o.seed, "Monte Carlo seed");
    cmd->add_option("--tol", o.tol, "quadrature relative tolerance");
    cmd->add_option("--eps-schedule", o.eps_schedule,
                    "comma-separated i*eps schedule in units of me^2");
    cmd->add_option("--units", o.units, "input unit convention: me | absolute")
        ->check(CLI::IsMember({"me", "absolute"}));
}

ModelParams to_params(const CommonOpts& o) {
    ModelParams p;
    p.lambda = o.lambda;
    p.m_s = o.ms;
    p.m_E = o.me;
    p.mc_samples = o.samples;
    p.seed = o.seed;
    p.simplex_tol = o.tol;
    if (!o.eps_schedule.empty()) {
        p.epsilon_schedule.clear();
        std::stringstream ss(o.eps_schedule);
        std::string tok;
        while (std::getline(ss, tok, ',')) p.epsilon_schedule.push_back(std::stod(tok));
    }
    p.validate();
    return p;
}

void echo(const ModelParams& p, const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ostringstream os;
    os << io::echo_config(p, extra);
    std::istringstream is(os.str());
    std::string line;
    while (std::getline(is, line)) std::cout << "# " << line << "\n";
}

int cmd_decay(const CommonOpts& o) {
    const ModelParams p = to_params(o);
    echo(p, {{"command", "decay"}});
    const double closed = coeff::decay_rate_closed(p);
    const FourVector rest = on_shell({0, 0, 0}, p.m_s);
    const LoopValue numeric = coeff::decay_rate_numeric(p, rest);
    std::cout << "decay_rate_closed = " << io::format_sci(closed) << "\n";
    std::cout << "decay_rate_numeric = " << io::format_sci(numeric.value.real()) << " +- "
              << io::format_sci(numeric.abs_error) << "\n";
    const double ratio = closed != 0.0 ? numeric.value.real() / closed : 0.0;
    std::cout << "numeric_over_closed = " << io::format_sci(ratio) << "\n";
    std::cout << "closed_over_phase_space_constant = "
              << io::format_sci(coeff::kDecayClosedOverPhaseSpaceRatio) << "\n";
    return numeric.converged ? 0 : 2;
}

int cmd_loop_a(const CommonOpts& o, double s, double t, double u) {
    const ModelParams p = to_params(o);
    echo(p, {{"command", "loop-a"},
             {"s", io::format_sci(s)},
             {"t", io::format_sci(t)},
             {"u", io::format_sci(u)}});
    const Mandelstam m{s, t, u};
    // per-epsilon diagnostics
    for (double eps_rel : p.epsilon_schedule) {
        const double eps = eps_rel * p.m_E * p.m_E;
        const LoopValue v = coeff::detail::box_sum_reduced(m, p, eps, p.simplex_tol);
        std::cout << "# eps/me^2 = " << io::format_sci(eps_rel) << " raw = ("
                  << io::format_sci(v.value.real()) << ", " << io::format_sci(v.value.imag())
                  << ") +- " << io::format_sci(v.abs_error)
                  << (v.converged ? "" : " [not converged]") << "\n";
    }
    const LoopValue a = coeff::box_loop(m, p);
    std::cout << "re_a = " << io::format_sci(a.value.real()) << "\n";
    std::cout << "im_a = " << io::format_sci(a.value.imag()) << "\n";
    std::cout << "abs_error = " << io::format_sci(a.abs_error) << "\n";
    return a.converged ? 0 : 2;
}

int cmd_sigma_scan(const CommonOpts& o, double x_min, double x_max, int steps,
                   const std::string& deltas_csv, const std::string& out_path,
                   const std::string& route_name) {
    const ModelParams p = to_params(o);
    std::vector<double> deltas;
    std::stringstream ss(deltas_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) deltas.push_back(std::stod(tok));

    echo(p, {{"command", "sigma-scan"},
             {"x-min", io::format_sci(x_min)},
             {"x-max", io::format_sci(x_max)},
             {"steps", std::to_string(steps)},
             {"deltas", deltas_csv},
             {"route", route_name},
             {"out", out_path}});

    const prob::KernelRoute route = route_name == "cm" ? prob::KernelRoute::cm_quadrature
                                                       : prob::KernelRoute::monte_carlo;
    const auto rows = prob::sigma_scan(x_min, x_max, steps, deltas, p, route);

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot open output path: " << out_path << "\n";
        return 1;
    }
    out << "x,delta_rad,sigma_closed,sigma_numeric,numeric_error\n";
    for (const auto& r : rows)
        out << io::format_sci(r.x) << "," << io::format_sci(r.delta) << ","
            << io::format_sci(r.sigma_closed) << "," << io::format_sci(r.sigma_numeric) << ","
            << io::format_sci(r.numeric_error) << "\n";
    if (!out.good()) {
        std::cerr << "error: write failed: " << out_path << "\n";
        return 1;
    }
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return 0;
}

int cmd_evolve(const CommonOpts& o, double grid_l, int n_max, const std::string& state_path,
               int steps, double dt, double t_eff, const std::string& generator_name,
               const std::string& out_path) {
    const ModelParams p = to_params(o);
    echo(p, {{"command", "evolve"},
             {"grid-l", io::format_sci(grid_l)},
             {"n-max", std::to_string(n_max)},
             {"state", state_path},
             {"steps", std::to_string(steps)},
             {"dt", io::format_sci(dt)},
             {"t-eff", io::format_sci(t_eff)},
             {"generator", generator_name}});

    const fock::MomentumGrid grid(grid_l, n_max);
    const fock::FockBasis basis(grid, p.m_s);
    Eigen::VectorXcd amps;
    try {
        amps = io::parse_state_file(state_path, basis);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    DensityMatrix rho = DensityMatrix::pure(amps);

    std::string gen_choice = generator_name;
    if (gen_choice == "auto") gen_choice = p.m_s > 2.0 * p.m_E ? "decay" : "pair";
    lind::GeneratorMatrices gen;
    if (gen_choice == "decay") {
        lind::DecayOptions d;
        d.t_eff = t_eff;
        gen = lind::assemble_decay(basis, p, d);
    } else {
        lind::PairOptions q;
        q.t_eff = t_eff;
        gen = lind::assemble_pair(basis, p, q);
    }

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "error: cannot open output path: " << out_path << "\n";
            return 1;
        }
        os = &file;
    }

    const auto write_row = [&](int step, const DensityMatrix& r, double trace) {
        const auto& m = r.matrix();
        double pop_vac = m(0, 0).real();
        double pop_one = 0.0, pop_two = 0.0;
        for (std::size_t i = 0; i < basis.n_modes(); ++i)
            pop_one += m(basis.one_particle_index(i), basis.one_particle_index(i)).real();
        for (std::size_t b = 0; b < basis.n_pairs(); ++b) {
            const auto idx = static_cast<Eigen::Index>(basis.pair_sector_offset() + b);
            pop_two += m(idx, idx).real();
        }
        (*os) << step << "," << io::format_sci(trace) << "," << io::format_sci(r.purity()) << ","
              << io::format_sci(pop_vac) << "," << io::format_sci(pop_one) << ","
              << io::format_sci(pop_two) << "\n";
    };

    (*os) << "step,trace,purity,pop_vacuum,pop_one,pop_two\n";
    write_row(0, rho, 1.0);
    for (int s = 1; s <= steps; ++s) {
        lind::StepDiagnostics diag;
        rho = lind::evolve_step(gen, rho, dt, &diag);
        if (diag.eigenvalue_warning)
            std::cerr << "warning: step " << s << " eigenvalue floor "
                      << io::format_sci(diag.min_eigenvalue) << "\n";
        write_row(s, rho, diag.trace_before_renorm);
    }
    return 0;
}

int run_check_gksl(const ModelParams& base, std::ostream& os) {
    bool ok = true;
    // decay generator on an open-decay parameter set, pair generator on a
    // stable one; trace/hermiticity/kernel positivity on random states
    ModelParams pd = base;
    pd.m_s = 3.0 * base.m_E;
    fock::MomentumGrid grid(6.0 / base.m_E, 1);
    fock::FockBasis basis_d(grid, pd.m_s);
    lind::DecayOptions dopt;
    const auto gen_d = lind::assemble_decay(basis_d, pd, dopt);

    ModelParams pp = base;
    pp.m_s = 0.5 * base.m_E;
    pp.mc_samples = std::max<std::uint64_t>(base.mc_samples / 10, 10000);
    fock::FockBasis basis_p(grid, pp.m_s);
    lind::PairOptions popt;
    popt.loop_tol = 1e-4;
    const auto gen_p = lind::assemble_pair(basis_p, pp, popt);

    const int n_states = 20;
    double worst_trace = 0.0, worst_herm = 0.0;
    for (int i = 0; i < n_states; ++i) {
        for (const auto* gen : {&gen_d, &gen_p}) {
            const auto rho = DensityMatrix::random(gen->full_dim, 777 + i);
            const Eigen::MatrixXcd l = lind::apply_generator(*gen, rho.matrix());
            worst_trace = std::max(worst_trace, std::abs(l.trace().real()) + std::abs(l.trace().imag()));
            worst_herm = std::max(worst_herm, (l - l.adjoint()).cwiseAbs().maxCoeff());
        }
    }
    const bool trace_ok = worst_trace <= 1e-10;
    const bool herm_ok = worst_herm <= 1e-10;
    const bool psd_ok = gen_p.min_eigenvalue >= -1e-8 * std::max(gen_p.max_eigenvalue, 0.0) &&
                        gen_d.min_eigenvalue >= -1e-8 * std::max(gen_d.max_eigenvalue, 0.0);
    os << "CHECK gksl.trace " << (trace_ok ? "PASS" : "FAIL") << " worst="
       << io::format_sci(worst_trace) << "\n";
    os << "CHECK gksl.hermitian " << (herm_ok ? "PASS" : "FAIL") << " worst="
       << io::format_sci(worst_herm) << "\n";
    os << "CHECK gksl.kernel_psd " << (psd_ok ? "PASS" : "FAIL") << " min_eig="
       << io::format_sci(gen_p.min_eigenvalue) << "\n";
    ok = trace_ok && herm_ok && psd_ok;
    return ok ? 0 : 3;
}

int run_check_sumrule(const ModelParams& base, std::ostream& os) {
    const auto rep = lind::sum_rule_check(base, std::max<std::uint64_t>(base.mc_samples, 100000));
    const bool pass = rep.below_threshold ? std::abs(rep.lhs) <= 1e-10
                                          : rep.relative_deviation <= 0.02;
    os << "CHECK sumrule " << (pass ? "PASS" : "FAIL") << " lhs=" << io::format_sci(rep.lhs)
       << " rhs=" << io::format_sci(rep.rhs)
       << " rel_dev=" << io::format_sci(rep.relative_deviation)
       << (rep.below_threshold ? " (below threshold)" : "") << "\n";
    return pass ? 0 : 3;
}

int run_check_poincare(const ModelParams& base, std::ostream& os) {
    bool ok = true;
    const int elements = 5, trials = 2;
    for (int e = 0; e < elements; ++e) {
        const auto g = sym::PoincareElement::random(1000 + e);
        ModelParams pd = base;
        pd.m_s = 3.0 * base.m_E;
        pd.mc_samples = std::max<std::uint64_t>(base.mc_samples / 10, 20000);
        const auto rep_d = sym::check_decay_invariance(g, pd, trials, 50 + e);
        ModelParams pp = base;
        pp.m_s = 0.5 * base.m_E;
        pp.mc_samples = pd.mc_samples;
        const auto rep_p = sym::check_pair_invariance(g, pp, trials, 90 + e);
        const bool pass = rep_d.all_pass && rep_p.all_pass;
        os << "CHECK poincare.element" << e << " " << (pass ? "PASS" : "FAIL") << " ("
           << rep_d.checks.size() << " decay, " << rep_p.checks.size() << " pair checks)\n";
        if (!pass) {
            for (const auto& c : rep_d.checks)
                if (!c.pass)
                    os << "  FAIL " << c.label << " lhs=" << io::format_sci(c.lhs)
                       << " rhs=" << io::format_sci(c.rhs) << " tol=" << io::format_sci(c.tolerance)
                       << "\n";
            for (const auto& c : rep_p.checks)
                if (!c.pass)
                    os << "  FAIL " << c.label << " lhs=" << io::format_sci(c.lhs)
                       << " rhs=" << io::format_sci(c.rhs) << " tol=" << io::format_sci(c.tolerance)
                       << "\n";
        }
        ok = ok && pass;
    }
    return ok ? 0 : 3;
}

int cmd_check(const CommonOpts& o, const std::string& suite) {
    const ModelParams p = to_params(o);
    echo(p, {{"command", "check"}, {"suite", suite}});
    int rc = 0;
    if (suite == "gksl" || suite == "all") rc = std::max(rc, run_check_gksl(p, std::cout));
    if (suite == "sumrule" || suite == "all") rc = std::max(rc, run_check_sumrule(p, std::cout));
    if (suite == "poincare" || suite == "all") rc = std::max(rc, run_check_poincare(p, std::cout));
    return rc;
}

// Resolution order: built-in defaults, then the --config file, then explicit
// flags (rightmost wins). Implemented as an argv pre-pass: file entries are
// appended as flags only when the flag is absent from the command line.
std::vector<std::string> merge_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) continue;
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (!present) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"GKSL generators from relativistic scattering: coefficients, Fock-space "
                 "evolution and invariance checks"};
    app.require_subcommand(1);

    CommonOpts decay_o;
    auto* c_decay = app.add_subcommand("decay", "decay coefficient, closed form and phase-space route");
    add_common(c_decay, decay_o, true);

    CommonOpts loop_o;
    loop_o.ms = 1.0;
    double s = 0.0, t = 0.0, u = 0.0;
    auto* c_loop = app.add_subcommand("loop-a", "one-loop box coefficient at (s, t, u)");
    c_loop->add_option("--s", s, "Mandelstam s")->required();
    c_loop->add_option("--t", t, "Mandelstam t")->required();
    c_loop->add_option("--u", u, "Mandelstam u")->required();
    add_common(c_loop, loop_o, false);

    CommonOpts scan_o;
    scan_o.lambda = 0.2;
    scan_o.ms = 0.02;
    scan_o.me = 1.0;
    scan_o.samples = 100000;
    double x_min = 0.5, x_max = 5.0;
    int steps = 50;
    std::string deltas = "0,1.5707963267948966,3.141592653589793";
    std::string scan_out = "sigma_scan.csv";
    std::string route = "mc";
    auto* c_scan = app.add_subcommand("sigma-scan", "annihilation probability scan over x = sqrt(-s)/2 m_E");
    c_scan->add_option("--x-min", x_min);
    c_scan->add_option("--x-max", x_max);
    c_scan->add_option("--steps", steps)->check(CLI::Range(2, 100000));
    c_scan->add_option("--deltas", deltas, "comma-separated relative phases in radians");
    c_scan->add_option("--out", scan_out, "output CSV path");
    c_scan->add_option("--route", route, "kernel route: mc | cm")->check(CLI::IsMember({"mc", "cm"}));
    add_common(c_scan, scan_o, false);

    CommonOpts evolve_o;
    double grid_l = 6.0, dt = 0.01, t_eff = 10.0;
    int n_max = 1, ev_steps = 10;
    std::string state_path, ev_out, generator = "auto";
    auto* c_evolve = app.add_subcommand("evolve", "apply the scattering map to a state file");
    c_evolve->add_option("--grid-l", grid_l, "box length");
    c_evolve->add_option("--n-max", n_max, "max mode index per axis");
    c_evolve->add_option("--state", state_path, "initial state file")->required();
    c_evolve->add_option("--steps", ev_steps);
    c_evolve->add_option("--dt", dt, "effective step scale");
    c_evolve->add_option("--t-eff", t_eff, "time regulator");
    c_evolve->add_option("--generator", generator)->check(CLI::IsMember({"auto", "decay", "pair"}));
    c_evolve->add_option("--out", ev_out, "output CSV path (default stdout)");
    add_common(c_evolve, evolve_o, false);

    CommonOpts check_o;
    std::string suite = "all";
    auto* c_check = app.add_subcommand("check", "run invariant suites");
    c_check->add_option("--suite", suite)->check(CLI::IsMember({"all", "sumrule", "poincare", "gksl"}));
    add_common(c_check, check_o, false);

    try {
        std::vector<std::string> args = merge_config_args(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11 consumes in reverse
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (c_decay->parsed()) return cmd_decay(decay_o);
        if (c_loop->parsed()) return cmd_loop_a(loop_o, s, t, u);
        if (c_scan->parsed())
            return cmd_sigma_scan(scan_o, x_min, x_max, steps, deltas, scan_out, route);
        if (c_evolve->parsed())
            return cmd_evolve(evolve_o, grid_l, n_max, state_path, ev_steps, dt, t_eff, generator,
                              ev_out);
        if (c_check->parsed()) return cmd_check(check_o, suite);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
