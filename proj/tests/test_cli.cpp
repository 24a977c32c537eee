#include "qadd/cqa.hpp"
#include "qadd/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace qadd;
using Catch::Approx;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    static const fs::path tmp = [] {
        fs::path p = fs::temp_directory_path() / "qadd_cli_tests";
        fs::create_directories(p);
        return p;
    }();
    const fs::path out = tmp / "stdout.txt";
    const std::string cmd =
        std::string(QADD_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WEXITSTATUS(status);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    return res;
}

fs::path temp_dir() {
    const fs::path p = fs::temp_directory_path() / "qadd_cli_tests";
    fs::create_directories(p);
    return p;
}

fs::path write_state(const std::string& name, const DensityMatrix& rho) {
    const fs::path p = temp_dir() / name;
    io::write_density(p.string(), rho);
    return p;
}

DensityMatrix plus_proj() {
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return DensityMatrix(m);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_runtime(std::string text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("\"runtime_ms\"") == std::string::npos) out << line << "\n";
    }
    return out.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TEST_CASE("state files round-trip losslessly") {
    const DensityMatrix rho = random_density(3, StateKind::ginibre_mixed, 71);
    const fs::path p = write_state("roundtrip.json", rho);
    const DensityMatrix back = io::read_density(p.string());
    REQUIRE((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("cqa command") {
    SECTION("diagonal state evaluates to zero") {
        const fs::path p = write_state("diag.json", random_density(2, StateKind::diagonal, 72));
        const auto res = run_cli("cqa --state " + p.string() + " --alpha 0.5 --solver grid");
        REQUIRE(res.exit_code == 0);
        const auto j = nlohmann::json::parse(res.output);
        REQUIRE(j.at("value").get<double>() <= 1e-10);
        REQUIRE(j.at("converged").get<bool>());
    }

    SECTION("matches the in-process grid oracle") {
        const fs::path p = write_state("plus.json", plus_proj());
        const auto res = run_cli("cqa --state " + p.string() +
                                 " --alpha 0.5 --solver grid --grid-step 1e-3");
        REQUIRE(res.exit_code == 0);
        const auto j = nlohmann::json::parse(res.output);

        CqaOptions opts;
        opts.solver = Solver::grid;
        opts.grid_step = 1e-3;
        const auto oracle = cqa(plus_proj(), 0.5, opts);
        REQUIRE(j.at("value").get<double>() == oracle.value);
        REQUIRE(j.at("n_evals").get<long>() == oracle.n_evals);
    }

    SECTION("bits display divides by ln 2") {
        const fs::path p = write_state("plus2.json", plus_proj());
        const auto nats = run_cli("cqa --state " + p.string() + " --alpha 0.5 --solver grid");
        const auto bits = run_cli("cqa --state " + p.string() +
                                  " --alpha 0.5 --solver grid --log-base bits");
        const double vn = nlohmann::json::parse(nats.output).at("value").get<double>();
        const double vb = nlohmann::json::parse(bits.output).at("value").get<double>();
        REQUIRE(vb == Approx(vn / 0.6931471805599453).epsilon(1e-12));
    }

    SECTION("malformed state file exits 2") {
        const fs::path p = temp_dir() / "broken.json";
        std::ofstream(p) << "{ not json";
        const auto res = run_cli("cqa --state " + p.string() + " --alpha 0.5");
        REQUIRE(res.exit_code == 2);
        REQUIRE(res.output.find("error") != std::string::npos);
    }

    SECTION("non-state matrix exits 2") {
        const fs::path p = temp_dir() / "notpsd.json";
        Eigen::MatrixXcd m(2, 2);
        m << 1.5, 0, 0, -0.5;
        std::ofstream(p) << io::matrix_to_json(m).dump() << "\n";
        const auto res = run_cli("cqa --state " + p.string() + " --alpha 0.5");
        REQUIRE(res.exit_code == 2);
    }

    SECTION("solver non-convergence exits 3") {
        const fs::path p = write_state("noconv.json",
                                       random_density(3, StateKind::ginibre_mixed, 73));
        const auto res =
            run_cli("cqa --state " + p.string() + " --alpha 0.5 --solver nm --max-iters 1");
        REQUIRE(res.exit_code == 3);
    }

    SECTION("coherence basis from an observable file") {
        const fs::path state = write_state("plus_basis.json", plus_proj());
        const fs::path obs = temp_dir() / "sigma_x.json";
        Eigen::MatrixXcd sx(2, 2);
        sx << 0, 1, 1, 0;
        std::ofstream(obs) << io::matrix_to_json(sx).dump() << "\n";
        // |+><+| is incoherent in the sigma_x eigenbasis
        const auto res = run_cli("cqa --state " + state.string() + " --basis " + obs.string() +
                                 " --alpha 0.5 --solver grid");
        REQUIRE(res.exit_code == 0);
        const auto j = nlohmann::json::parse(res.output);
        REQUIRE(j.at("value").get<double>() <= 1e-10);
    }
}

TEST_CASE("check command") {
    SECTION("passing suite exits zero with a summary line") {
        const auto res = run_cli("check reverse_ep --dims 2,3 --n 20 --seed 7");
        REQUIRE(res.exit_code == 0);
        REQUIRE(res.output.find("PASS reverse_ep worst_margin=") != std::string::npos);
    }

    SECTION("commuting diagonal ensemble sits on the equality") {
        const fs::path out = temp_dir() / "corollary.csv";
        const auto res = run_cli("check corollary --kind diagonal --dims 2 --n 20 --seed 3 "
                                 "--format csv --out " +
                                 out.string());
        REQUIRE(res.exit_code == 0);
        const auto rows = parse_csv(read_file(out));
        REQUIRE(rows.at(0).at(3) == "margin");
        for (size_t r = 1; r < rows.size(); ++r) {
            REQUIRE(std::abs(std::stod(rows[r][3])) <= 1e-12);
        }
    }

    SECTION("unknown suite exits 2") {
        REQUIRE(run_cli("check nosuch").exit_code == 2);
    }

    SECTION("reports are byte-identical across runs and worker counts") {
        const fs::path a = temp_dir() / "det_a.json";
        const fs::path b = temp_dir() / "det_b.json";
        REQUIRE(run_cli("check epi --dims 2 --n 15 --seed 11 --workers 1 --out " + a.string())
                    .exit_code == 0);
        REQUIRE(run_cli("check epi --dims 2 --n 15 --seed 11 --workers 4 --out " + b.string())
                    .exit_code == 0);
        REQUIRE(strip_runtime(read_file(a)) == strip_runtime(read_file(b)));

        const fs::path ca = temp_dir() / "det_a.csv";
        const fs::path cb = temp_dir() / "det_b.csv";
        REQUIRE(run_cli("check epi --dims 2 --n 15 --seed 11 --format csv --out " + ca.string())
                    .exit_code == 0);
        REQUIRE(run_cli("check epi --dims 2 --n 15 --seed 11 --format csv --out " + cb.string())
                    .exit_code == 0);
        REQUIRE(read_file(ca) == read_file(cb));
    }

    SECTION("QADD_SEED provides the default seed") {
        const fs::path a = temp_dir() / "env_a.json";
        const fs::path b = temp_dir() / "env_b.json";
        REQUIRE(run_cli("check epi --dims 2 --n 10 --seed 99 --out " + a.string()).exit_code ==
                0);
        const std::string cmd = std::string("QADD_SEED=99 ") + QADD_CLI_PATH +
                                " check epi --dims 2 --n 10 --out " + b.string() +
                                " > /dev/null 2>&1";
        REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
        REQUIRE(strip_runtime(read_file(a)) == strip_runtime(read_file(b)));
    }
}

TEST_CASE("sweep command") {
    SECTION("alpha endpoints evaluate to exactly zero") {
        const fs::path p = write_state("sweep_state.json", plus_proj());
        const fs::path out = temp_dir() / "sweep.csv";
        const auto res = run_cli("sweep --quantity cqa --state " + p.string() +
                                 " --alpha-grid 0:1:0.1 --solver grid --out " + out.string());
        REQUIRE(res.exit_code == 0);
        const auto rows = parse_csv(read_file(out));
        REQUIRE(rows.at(0).at(0) == "instance_seed");
        bool saw_zero = false, saw_one = false;
        for (size_t r = 1; r < rows.size(); ++r) {
            const double alpha = std::stod(rows[r][2]);
            const double value = std::stod(rows[r][3]);
            if (alpha == 0.0 || alpha == 1.0) {
                REQUIRE(value == 0.0);
                (alpha == 0.0 ? saw_zero : saw_one) = true;
            }
        }
        REQUIRE(saw_zero);
        REQUIRE(saw_one);
    }

    SECTION("bound gap stays above the solver slack") {
        const fs::path out = temp_dir() / "gap.csv";
        const auto res = run_cli(
            "sweep --quantity bound_gap --dims 2 --n 5 --seed 5 --alphas 0.1,0.5,0.9 "
            "--solver grid --out " +
            out.string());
        REQUIRE(res.exit_code == 0);
        const auto rows = parse_csv(read_file(out));
        REQUIRE(rows.at(0).back() == "gap");
        for (size_t r = 1; r < rows.size(); ++r) {
            REQUIRE(std::stod(rows[r].back()) >= -1e-6);
        }
    }

    SECTION("uncertainty margins per alpha") {
        const fs::path out = temp_dir() / "unc.csv";
        const auto res = run_cli(
            "sweep --quantity uncertainty_margin --dims 2 --n 3 --seed 6 --alphas 0.25,0.5 "
            "--solver grid --out " +
            out.string());
        REQUIRE(res.exit_code == 0);
        const auto rows = parse_csv(read_file(out));
        REQUIRE(rows.at(0).back() == "margin_derived");
        for (size_t r = 1; r < rows.size(); ++r) {
            REQUIRE(std::stod(rows[r].back()) >= -1e-6);
        }
    }
}

TEST_CASE("replay command") {
    const fs::path report = temp_dir() / "replay_report.json";
    REQUIRE(run_cli("check reverse_ep --dims 3 --n 20 --seed 13 --alphas 0.6 --out " +
                    report.string())
                .exit_code == 0);
    const auto j = nlohmann::json::parse(read_file(report));
    const auto seed = j.at("worst_instance_seed").get<std::uint64_t>();
    const double worst = j.at("worst_margin").get<double>();

    const auto rep =
        run_cli("replay reverse_ep --seed " + std::to_string(seed) + " --dim 3 --alpha 0.6");
    REQUIRE(rep.exit_code == 0);
    const auto dump = nlohmann::json::parse(rep.output);
    REQUIRE(std::abs(dump.at("margin").get<double>() - worst) <= 1e-14);
    REQUIRE(dump.contains("rho"));

    REQUIRE(run_cli("replay nosuch --seed 1 --dim 2 --alpha 0.5").exit_code == 2);
}
