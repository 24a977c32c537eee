#include "qadd/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qadd;
using Catch::Approx;

namespace {

EnsembleSpec small_spec(std::vector<int> dims, int n, StateKind kind, std::vector<double> alphas,
                        std::uint64_t seed) {
    EnsembleSpec spec;
    spec.dims = std::move(dims);
    spec.n_samples = n;
    spec.state_kind = kind;
    spec.alphas = std::move(alphas);
    spec.seed = seed;
    return spec;
}

CqaOptions grid_opts() {
    CqaOptions o;
    o.solver = Solver::grid;
    return o;
}

}  // namespace

TEST_CASE("suite registry is exhaustive over the verified claims") {
    const std::vector<std::string> expected = {
        "epi",           "reverse_ep",    "corollary",     "lemma_sio",
        "monotonicity",  "direct_sum",    "upper_bound_cr", "upper_bound_l1",
        "pinsker_lower", "uncertainty",   "faithfulness",  "convexity",
    };
    REQUIRE(suite_ids() == expected);
    for (const auto& id : expected) {
        REQUIRE(is_suite(id));
        REQUIRE_FALSE(suite_claim(id).empty());
    }
    REQUIRE_FALSE(is_suite("nosuch"));
    REQUIRE_THROWS_AS(suite_claim("nosuch"), std::invalid_argument);
}

TEST_CASE("reverse equality suite passes on full-rank ensembles") {
    const auto spec = small_spec({2, 3}, 40, StateKind::ginibre_mixed, {0.3, 0.7}, 7);
    const auto report = run_suite("reverse_ep", spec, {});
    REQUIRE(report.n_fail == 0);
    REQUIRE(report.n_pass + report.n_fail + report.n_flagged ==
            static_cast<int>(spec.dims.size() * spec.alphas.size() * spec.n_samples));
    REQUIRE(report.worst_margin >= -1e-8);
    REQUIRE(report.extra_columns.front() == "residual");
}

TEST_CASE("entropy inequality suites pass") {
    const auto spec = small_spec({2, 3, 4}, 30, StateKind::ginibre_mixed, {0.25, 0.75}, 11);
    REQUIRE(run_suite("epi", spec, {}).n_fail == 0);
    REQUIRE(run_suite("corollary", spec, {}).n_fail == 0);
}

TEST_CASE("commuting diagonal ensembles sit exactly on the equality") {
    const auto spec = small_spec({2, 3}, 30, StateKind::diagonal, {0.5}, 13);
    const auto report = run_suite("corollary", spec, {});
    REQUIRE(report.n_fail == 0);
    for (const auto& rec : report.instances) {
        REQUIRE(std::abs(rec.margin) <= 1e-12);
    }
}

TEST_CASE("channel commutation suite passes") {
    const auto spec = small_spec({2, 3, 4}, 30, StateKind::ginibre_mixed, {0.5}, 17);
    const auto report = run_suite("lemma_sio", spec, {});
    REQUIRE(report.n_fail == 0);
    REQUIRE(report.worst_margin >= -1e-9);
}

TEST_CASE("measure suites pass with the grid oracle") {
    const auto qubits = small_spec({2}, 20, StateKind::ginibre_mixed, {0.5}, 19);

    SECTION("monotonicity") {
        const auto report = run_suite("monotonicity", qubits, grid_opts());
        REQUIRE(report.n_fail == 0);
        REQUIRE(report.worst_margin > -1e-5);
    }

    SECTION("direct sum") {
        const auto report = run_suite("direct_sum", qubits, grid_opts());
        REQUIRE(report.n_fail == 0);
    }

    SECTION("upper bounds and the Pinsker floor") {
        REQUIRE(run_suite("upper_bound_cr", qubits, grid_opts()).n_fail == 0);
        REQUIRE(run_suite("upper_bound_l1", qubits, grid_opts()).n_fail == 0);
        REQUIRE(run_suite("pinsker_lower", qubits, grid_opts()).n_fail == 0);
    }

    SECTION("convexity") {
        REQUIRE(run_suite("convexity", qubits, grid_opts()).n_fail == 0);
    }
}

TEST_CASE("faithfulness suite covers both directions") {
    const auto diag = small_spec({2, 3}, 20, StateKind::diagonal, {0.3, 0.7}, 23);
    const auto rep_diag = run_suite("faithfulness", diag, {});
    REQUIRE(rep_diag.n_fail == 0);
    for (const auto& rec : rep_diag.instances) {
        REQUIRE(rec.extras.at(0) <= 1e-10);  // value column
    }

    CqaOptions fine = grid_opts();
    fine.grid_step = 1e-4;
    const auto coh = small_spec({2}, 20, StateKind::ginibre_mixed, {0.5}, 29);
    const auto rep_coh = run_suite("faithfulness", coh, fine);
    REQUIRE(rep_coh.n_fail == 0);
    for (const auto& rec : rep_coh.instances) {
        if (rec.status == InstanceStatus::pass) {
            REQUIRE(rec.margin > 1e-8);
        }
    }
}

TEST_CASE("uncertainty suite records both constants") {
    CqaOptions fine = grid_opts();
    fine.grid_step = 1e-4;
    const auto spec = small_spec({2}, 30, StateKind::ginibre_mixed, {0.5}, 31);
    const auto report = run_suite("uncertainty", spec, fine);
    REQUIRE(report.n_fail == 0);
    REQUIRE(report.summary.count("worst_margin_paper") == 1);
    REQUIRE(report.summary.count("paper_constant_violations") == 1);
    REQUIRE(report.extra_columns.at(0) == "margin_paper");
}

TEST_CASE("reports are deterministic and worker-independent") {
    const auto spec = small_spec({2, 3}, 25, StateKind::ginibre_mixed, {0.4}, 37);
    const auto a = run_suite("reverse_ep", spec, {}, 1);
    const auto b = run_suite("reverse_ep", spec, {}, 4);
    REQUIRE(report_to_json(a, false) == report_to_json(b, false));
    REQUIRE(report_to_csv(a) == report_to_csv(b));

    const auto c = run_suite("upper_bound_cr", small_spec({2}, 10, StateKind::ginibre_mixed,
                                                          {0.5}, 41),
                             grid_opts(), 1);
    const auto d = run_suite("upper_bound_cr", small_spec({2}, 10, StateKind::ginibre_mixed,
                                                          {0.5}, 41),
                             grid_opts(), 3);
    REQUIRE(report_to_json(c, false) == report_to_json(d, false));
}

TEST_CASE("replay reproduces recorded instances") {
    const auto spec = small_spec({3}, 30, StateKind::ginibre_mixed, {0.6}, 43);
    const auto report = run_suite("reverse_ep", spec, {});

    const auto dump = replay("reverse_ep", report.worst_instance_seed, 3, 0.6,
                             StateKind::ginibre_mixed, {});
    REQUIRE(std::abs(dump.at("margin").get<double>() - report.worst_margin) <= 1e-14);
    REQUIRE(dump.contains("rho"));
    REQUIRE(dump.contains("sigma"));
    REQUIRE(dump.contains("mixture_entropy"));
    REQUIRE(dump.contains("addition_entropy"));

    // determinism of the dump itself
    const auto dump2 = replay("reverse_ep", report.worst_instance_seed, 3, 0.6,
                              StateKind::ginibre_mixed, {});
    REQUIRE(dump.dump() == dump2.dump());
}

TEST_CASE("csv serialization carries the mandatory columns") {
    const auto spec = small_spec({2}, 5, StateKind::ginibre_mixed, {0.5}, 47);
    const auto report = run_suite("epi", spec, {});
    const std::string csv = report_to_csv(report);
    REQUIRE(csv.rfind("instance_seed,dim,alpha,margin,status,entropy_margin,exp_margin\n", 0) ==
            0);
    const auto rows = std::count(csv.begin(), csv.end(), '\n');
    REQUIRE(rows == 1 + 5);
}

TEST_CASE("invalid suite configurations are rejected") {
    const auto spec = small_spec({2}, 10, StateKind::ginibre_mixed, {0.5}, 53);
    REQUIRE_THROWS_AS(run_suite("nosuch", spec, {}), std::invalid_argument);

    auto bad_dim = spec;
    bad_dim.dims = {1};
    REQUIRE_THROWS_AS(run_suite("epi", bad_dim, {}), std::invalid_argument);

    auto bad_alpha = spec;
    bad_alpha.alphas = {1.5};
    REQUIRE_THROWS_AS(run_suite("epi", bad_alpha, {}), std::invalid_argument);

    auto big = spec;
    big.dims = {6};
    REQUIRE_THROWS_AS(run_suite("upper_bound_cr", big, grid_opts()), std::invalid_argument);

    auto ds = spec;
    ds.dims = {3};  // blocks of 3 need a d=6 grid
    REQUIRE_THROWS_AS(run_suite("direct_sum", ds, grid_opts()), std::invalid_argument);
}
