// Command-line front end: single-state measure evaluation, named theorem
// suites over random ensembles, parameter sweeps, and instance replay.

#include "qadd/io.hpp"
#include "qadd/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QADD_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<double> parse_alpha_grid(const std::string& s) {
    // start:stop:step
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() != 3 || parts[2] <= 0.0) {
        throw std::runtime_error("alpha grid must be start:stop:step with step > 0");
    }
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (int i = 0; i <= n; ++i) {
        out.push_back(std::min(std::max(parts[0] + i * parts[2], 0.0), 1.0));
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

struct SolverFlags {
    std::string solver = "nm";
    double tol = 1e-6;
    double grid_step = 0.0;
    int multistart = 20;
    int max_iters = 0;

    qadd::CqaOptions options() const {
        qadd::CqaOptions opts;
        opts.solver = qadd::solver_from_string(solver);
        opts.tol = tol;
        opts.grid_step = grid_step;
        opts.multistart_count = multistart;
        opts.max_iters = max_iters;
        return opts;
    }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
    cmd->add_option("--solver", flags.solver, "grid, nm or multistart")
        ->check(CLI::IsMember({"grid", "nm", "nelder_mead", "multistart"}));
    cmd->add_option("--tol", flags.tol, "solver tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--grid-step", flags.grid_step,
                    "grid spacing per coordinate (0 = per-dimension default)");
    cmd->add_option("--multistart", flags.multistart, "number of multistart runs");
    cmd->add_option("--max-iters", flags.max_iters,
                    "iteration cap for the simplex search (0 = automatic)");
}

nlohmann::json cqa_result_json(const qadd::CqaResult& res, const std::string& log_base) {
    const double scale = log_base == "bits" ? kLn2 : 1.0;
    nlohmann::json j;
    j["value"] = res.value / scale;
    j["log_base"] = log_base;
    j["alpha"] = res.alpha;
    j["solver"] = qadd::to_string(res.solver);
    std::vector<double> w(res.minimizer.weights().data(),
                          res.minimizer.weights().data() + res.minimizer.dim());
    j["minimizer"] = w;
    j["n_evals"] = res.n_evals;
    j["converged"] = res.converged;
    j["n_candidates"] = res.n_candidates;
    j["best_value"] = res.best_value / scale;
    j["dual_path_gap"] = res.dual_path_gap;
    j["degenerate_basis"] = res.degenerate_basis;
    return j;
}

int run_cqa_command(const std::string& state_path, double alpha,
                    const std::string& basis_path, const SolverFlags& flags,
                    const std::string& log_base, const std::string& out_path) {
    qadd::DensityMatrix rho = [&] {
        try {
            return qadd::io::read_density(state_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            std::exit(2);
        }
    }();

    qadd::CqaResult res = [&] {
        try {
            if (!basis_path.empty()) {
                const auto obs = qadd::io::read_observable(basis_path);
                return qadd::cqa_in_basis(rho, obs, alpha, flags.options());
            }
            return qadd::cqa(rho, alpha, flags.options());
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            std::exit(2);
        }
    }();

    emit(cqa_result_json(res, log_base).dump(2) + "\n", out_path);
    if (!res.converged) {
        std::cerr << "solver did not converge\n";
        return 3;
    }
    return 0;
}

int run_check_command(const std::string& theorem, const qadd::EnsembleSpec& spec,
                      const SolverFlags& flags, int workers, const std::string& format,
                      const std::string& out_path) {
    qadd::TheoremReport report;
    try {
        report = qadd::run_suite(theorem, spec, flags.options(), workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const std::string text =
        format == "csv" ? qadd::report_to_csv(report) : qadd::report_to_json(report, true);
    if (!out_path.empty()) {
        emit(text, out_path);
    } else if (format == "csv") {
        emit(text, "");
    }
    std::cout << (report.n_fail == 0 ? "PASS" : "FAIL") << " " << theorem
              << " worst_margin=" << qadd::io::format_float(report.worst_margin)
              << " n_pass=" << report.n_pass << " n_fail=" << report.n_fail
              << " n_flagged=" << report.n_flagged << "\n";
    return report.n_fail == 0 ? 0 : 1;
}

int run_sweep_command(const std::string& quantity, const std::vector<double>& alphas,
                      const std::string& state_path, const std::vector<int>& dims, int n_samples,
                      const std::string& kind_name, std::uint64_t seed, const SolverFlags& flags,
                      const std::string& log_base, const std::string& out_path) {
    using qadd::io::format_float;
    const double scale = log_base == "bits" ? kLn2 : 1.0;
    const qadd::CqaOptions opts = flags.options();
    const qadd::StateKind kind = qadd::state_kind_from_string(kind_name);

    std::vector<std::pair<std::uint64_t, qadd::DensityMatrix>> states;
    if (!state_path.empty()) {
        states.emplace_back(0, qadd::io::read_density(state_path));
    } else {
        for (const int d : dims) {
            for (int k = 0; k < n_samples; ++k) {
                const std::uint64_t s =
                    qadd::seed_mix(seed, states.size());
                states.emplace_back(s, qadd::random_density(d, kind, s));
            }
        }
    }

    std::ostringstream csv;
    if (quantity == "cqa") {
        csv << "instance_seed,dim,alpha,value,best_value,converged,n_evals\n";
        for (const auto& [s, rho] : states) {
            for (double a : alphas) {
                const auto res = qadd::cqa(rho, a, opts);
                csv << s << "," << rho.dim() << "," << format_float(a) << ","
                    << format_float(res.value / scale) << ","
                    << format_float(res.best_value / scale) << "," << (res.converged ? 1 : 0)
                    << "," << res.n_evals << "\n";
            }
        }
    } else if (quantity == "bound_gap") {
        csv << "instance_seed,dim,alpha,value,cr_coherence,bound,gap\n";
        for (const auto& [s, rho] : states) {
            const double cr = qadd::rel_entropy_coherence(rho);
            for (double a : alphas) {
                const auto res = qadd::cqa(rho, a, opts);
                const double bound =
                    qadd::binary_entropy(a) / std::sqrt(2.0) * std::sqrt(std::max(cr, 0.0));
                csv << s << "," << rho.dim() << "," << format_float(a) << ","
                    << format_float(res.value / scale) << "," << format_float(cr / scale) << ","
                    << format_float(bound / scale) << ","
                    << format_float((bound - res.value) / scale) << "\n";
            }
        }
    } else if (quantity == "uncertainty_margin") {
        csv << "instance_seed,dim,alpha,lhs,rhs_paper,rhs_derived,margin_paper,margin_derived\n";
        for (const auto& [s, rho] : states) {
            const int d = rho.dim();
            Eigen::MatrixXcd ma(d, d), mb(d, d);
            if (d == 2) {
                ma << 0, 1, 1, 0;
                mb << 1, 0, 0, -1;
            } else {
                throw std::runtime_error("uncertainty sweep supports qubit states only");
            }
            const qadd::HermitianObservable a_obs(ma), b_obs(mb);
            for (double a : alphas) {
                const auto rep = qadd::uncertainty_relation(rho, a_obs, b_obs, a, opts);
                csv << s << "," << d << "," << format_float(a) << "," << format_float(rep.lhs)
                    << "," << format_float(rep.rhs_paper) << ","
                    << format_float(rep.rhs_derived) << "," << format_float(rep.margin_paper)
                    << "," << format_float(rep.margin_derived) << "\n";
            }
        }
    } else {
        throw std::runtime_error("unknown sweep quantity: " + quantity);
    }
    emit(csv.str(), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qudit quantum-addition toolkit"};
    app.require_subcommand(1);

    // ---- cqa ----
    std::string cqa_state, cqa_basis, cqa_log_base = "nats", cqa_out;
    double cqa_alpha = 0.5;
    SolverFlags cqa_flags;
    CLI::App* cmd_cqa = app.add_subcommand("cqa", "evaluate the measure for one state");
    cmd_cqa->add_option("--state", cqa_state, "density matrix JSON file")->required();
    cmd_cqa->add_option("--alpha", cqa_alpha, "addition weight")->required();
    cmd_cqa->add_option("--basis", cqa_basis, "observable file fixing the coherence basis");
    cmd_cqa->add_option("--log-base", cqa_log_base, "nats or bits")
        ->check(CLI::IsMember({"nats", "bits"}));
    cmd_cqa->add_option("--out", cqa_out, "output path (stdout if omitted)");
    add_solver_flags(cmd_cqa, cqa_flags);

    // ---- check ----
    std::string check_theorem, check_dims = "2,3", check_alphas = "0.25,0.5,0.75";
    std::string check_kind = "ginibre", check_format = "json", check_out;
    int check_n = 100, check_workers = 0;
    std::uint64_t check_seed = default_seed();
    SolverFlags check_flags;
    CLI::App* cmd_check = app.add_subcommand("check", "run a named theorem suite");
    cmd_check->add_option("theorem", check_theorem, "suite id (or 'list')")->required();
    cmd_check->add_option("--dims", check_dims, "comma-separated dimensions");
    cmd_check->add_option("--n", check_n, "samples per (dim, alpha) cell");
    cmd_check->add_option("--seed", check_seed, "ensemble seed (default from QADD_SEED)");
    cmd_check->add_option("--alphas", check_alphas, "comma-separated addition weights");
    cmd_check->add_option("--kind", check_kind, "haar, ginibre or diagonal");
    cmd_check->add_option("--format", check_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd_check->add_option("--out", check_out, "report output path");
    cmd_check->add_option("--workers", check_workers, "worker threads (0 = hardware)");
    add_solver_flags(cmd_check, check_flags);

    // ---- sweep ----
    std::string sweep_quantity, sweep_state, sweep_alphas, sweep_alpha_grid;
    std::string sweep_dims = "2", sweep_kind = "ginibre", sweep_log_base = "nats", sweep_out;
    int sweep_n = 10;
    std::uint64_t sweep_seed = default_seed();
    SolverFlags sweep_flags;
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "emit per-(alpha, instance) CSV data");
    cmd_sweep->add_option("--quantity", sweep_quantity, "cqa, bound_gap or uncertainty_margin")
        ->required()
        ->check(CLI::IsMember({"cqa", "bound_gap", "uncertainty_margin"}));
    cmd_sweep->add_option("--alphas", sweep_alphas, "comma-separated alpha list");
    cmd_sweep->add_option("--alpha-grid", sweep_alpha_grid, "start:stop:step");
    cmd_sweep->add_option("--state", sweep_state, "fixed input state file");
    cmd_sweep->add_option("--dims", sweep_dims, "ensemble dimensions");
    cmd_sweep->add_option("--n", sweep_n, "ensemble samples per dimension");
    cmd_sweep->add_option("--kind", sweep_kind, "haar, ginibre or diagonal");
    cmd_sweep->add_option("--seed", sweep_seed, "ensemble seed (default from QADD_SEED)");
    cmd_sweep->add_option("--log-base", sweep_log_base, "nats or bits")
        ->check(CLI::IsMember({"nats", "bits"}));
    cmd_sweep->add_option("--out", sweep_out, "CSV output path (stdout if omitted)");
    add_solver_flags(cmd_sweep, sweep_flags);

    // ---- replay ----
    std::string replay_theorem, replay_kind = "ginibre", replay_out;
    std::uint64_t replay_seed = 0;
    int replay_dim = 2;
    double replay_alpha = 0.5;
    SolverFlags replay_flags;
    CLI::App* cmd_replay = app.add_subcommand("replay", "re-evaluate and dump a single instance");
    cmd_replay->add_option("theorem", replay_theorem, "suite id")->required();
    cmd_replay->add_option("--seed", replay_seed, "instance seed from a report")->required();
    cmd_replay->add_option("--dim", replay_dim, "instance dimension")->required();
    cmd_replay->add_option("--alpha", replay_alpha, "instance alpha")->required();
    cmd_replay->add_option("--kind", replay_kind, "haar, ginibre or diagonal");
    cmd_replay->add_option("--out", replay_out, "output path (stdout if omitted)");
    add_solver_flags(cmd_replay, replay_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_cqa->parsed()) {
            return run_cqa_command(cqa_state, cqa_alpha, cqa_basis, cqa_flags, cqa_log_base,
                                   cqa_out);
        }
        if (cmd_check->parsed()) {
            if (check_theorem == "list") {
                for (const auto& id : qadd::suite_ids()) {
                    std::cout << id << ": " << qadd::suite_claim(id) << "\n";
                }
                return 0;
            }
            if (!qadd::is_suite(check_theorem)) {
                std::cerr << "error: unknown theorem id '" << check_theorem << "'\n";
                return 2;
            }
            qadd::EnsembleSpec spec;
            spec.dims = parse_int_list(check_dims);
            spec.n_samples = check_n;
            spec.state_kind = qadd::state_kind_from_string(check_kind);
            spec.alphas = parse_double_list(check_alphas);
            spec.seed = check_seed;
            return run_check_command(check_theorem, spec, check_flags, check_workers,
                                     check_format, check_out);
        }
        if (cmd_sweep->parsed()) {
            std::vector<double> alphas;
            if (!sweep_alpha_grid.empty()) {
                alphas = parse_alpha_grid(sweep_alpha_grid);
            } else if (!sweep_alphas.empty()) {
                alphas = parse_double_list(sweep_alphas);
            } else {
                alphas = parse_alpha_grid("0:1:0.1");
            }
            return run_sweep_command(sweep_quantity, alphas, sweep_state,
                                     parse_int_list(sweep_dims), sweep_n, sweep_kind, sweep_seed,
                                     sweep_flags, sweep_log_base, sweep_out);
        }
        if (cmd_replay->parsed()) {
            if (!qadd::is_suite(replay_theorem)) {
                std::cerr << "error: unknown theorem id '" << replay_theorem << "'\n";
                return 2;
            }
            const auto dump =
                qadd::replay(replay_theorem, replay_seed, replay_dim, replay_alpha,
                             qadd::state_kind_from_string(replay_kind), replay_flags.options());
            emit(dump.dump(2) + "\n", replay_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
