#include "qadd/verify.hpp"

#include "qadd/io.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace qadd {

std::string to_string(InstanceStatus s) {
    switch (s) {
        case InstanceStatus::pass: return "pass";
        case InstanceStatus::fail: return "fail";
        case InstanceStatus::flagged: return "flagged";
    }
    return "?";
}

namespace {

struct InstanceCtx {
    std::uint64_t seed = 0;
    int dim = 0;
    double alpha = 0.0;
    StateKind kind = StateKind::ginibre_mixed;
    CqaOptions opts;
};

DensityMatrix draw_state(const InstanceCtx& c, std::uint64_t sub) {
    return random_density(c.dim, c.kind, seed_mix(c.seed, sub));
}

void dump_state(nlohmann::json* dump, const char* key, const Eigen::MatrixXcd& m) {
    if (dump != nullptr) (*dump)[key] = io::matrix_to_json(m);
}

void dump_value(nlohmann::json* dump, const char* key, double v) {
    if (dump != nullptr) (*dump)[key] = v;
}

InstanceRecord make_record(const InstanceCtx& c, double margin, bool failed, bool flagged,
                           std::vector<double> extras) {
    InstanceRecord rec;
    rec.instance_seed = c.seed;
    rec.dim = c.dim;
    rec.alpha = c.alpha;
    rec.margin = margin;
    rec.status = flagged ? InstanceStatus::flagged
                         : (failed ? InstanceStatus::fail : InstanceStatus::pass);
    rec.extras = std::move(extras);
    return rec;
}

// ---- per-claim instance evaluators -----------------------------------------

InstanceRecord eval_epi(const InstanceCtx& c, nlohmann::json* dump) {
    const DensityMatrix rho = draw_state(c, 1);
    const DensityMatrix sig = draw_state(c, 2);
    const DensityMatrix added = quantum_add(rho, sig, c.alpha);
    const double s_add = von_neumann_entropy(added).value;
    const double s_rho = von_neumann_entropy(rho).value;
    const double s_sig = von_neumann_entropy(sig).value;
    const double entropy_margin = s_add - c.alpha * s_rho - (1.0 - c.alpha) * s_sig;
    const double exp_margin =
        std::exp(s_add) - c.alpha * std::exp(s_rho) - (1.0 - c.alpha) * std::exp(s_sig);
    const double margin = std::min(entropy_margin, exp_margin);

    dump_state(dump, "rho", rho.matrix());
    dump_state(dump, "sigma", sig.matrix());
    dump_state(dump, "added", added.matrix());
    dump_value(dump, "entropy_margin", entropy_margin);
    dump_value(dump, "exp_margin", exp_margin);
    return make_record(c, margin, margin < -1e-9, false, {entropy_margin, exp_margin});
}

InstanceRecord eval_reverse_ep(const InstanceCtx& c, nlohmann::json* dump) {
    const DensityMatrix rho = draw_state(c, 1);
    const DensityMatrix sig = draw_state(c, 2);
    const ReverseEpDetail det = reverse_ep_detail(rho, sig, c.alpha);
    const TraceTermDetail tt = commutator_trace_detail(rho, sig, c.alpha);
    const double eq9 = log_mixture_commutation_residual(rho, sig, c.alpha);

    const DensityMatrix mixture(c.alpha * rho.matrix() + (1.0 - c.alpha) * sig.matrix());
    const double min_eig = hermitian_eig(mixture.matrix()).eigenvalues(0);
    // singular mixtures are reported, not asserted: the identity's proof
    // manipulates log(mixture)
    const bool flagged = min_eig < 1e-9 || det.rel_entropy_infinite;
    const bool failed = !flagged && (det.residual > 1e-8 || tt.value > 1e-9);

    dump_state(dump, "rho", rho.matrix());
    dump_state(dump, "sigma", sig.matrix());
    dump_value(dump, "mixture_entropy", det.mixture_entropy);
    dump_value(dump, "addition_entropy", det.addition_entropy);
    dump_value(dump, "relative_term", det.relative_term);
    dump_value(dump, "residual", det.residual);
    dump_value(dump, "trace_term", tt.value);
    dump_value(dump, "log_commutation_residual", eq9);
    dump_value(dump, "mixture_min_eig", min_eig);
    return make_record(c, -det.residual, failed, flagged,
                       {det.residual, tt.value, eq9, min_eig});
}

InstanceRecord eval_corollary(const InstanceCtx& c, nlohmann::json* dump) {
    const DensityMatrix rho = draw_state(c, 1);
    const DensityMatrix sig = draw_state(c, 2);
    const DensityMatrix added = quantum_add(rho, sig, c.alpha);
    const DensityMatrix mixture(c.alpha * rho.matrix() + (1.0 - c.alpha) * sig.matrix());
    const double gap =
        von_neumann_entropy(mixture).value - von_neumann_entropy(added).value;
    const double comm_norm = trace_norm(commutator(rho.matrix(), sig.matrix()));
    const bool strict = comm_norm > 1e-3 && c.alpha >= 0.1 && c.alpha <= 0.9;
    const bool failed = gap < -1e-9 || (strict && gap <= 1e-6);

    dump_state(dump, "rho", rho.matrix());
    dump_state(dump, "sigma", sig.matrix());
    dump_value(dump, "gap", gap);
    dump_value(dump, "commutator_norm", comm_norm);
    return make_record(c, gap, failed, false, {comm_norm});
}

InstanceRecord eval_lemma_sio(const InstanceCtx& c, nlohmann::json* dump) {
    const DensityMatrix rho = draw_state(c, 1);
    const DensityMatrix sig = random_density(c.dim, StateKind::diagonal, seed_mix(c.seed, 2));
    const int n_kraus = 1 + static_cast<int>(seed_mix(c.seed, 3) % 4);
    const IncoherentChannel ch = random_sio(c.dim, n_kraus, seed_mix(c.seed, 4));
    const double residual = lemma_commutation_residual(rho, sig, ch, c.alpha);

    // incoherent channels outside the strictly incoherent class are reported,
    // not asserted; they generally break the commutation identity
    const IncoherentChannel io_ch = random_io(c.dim, seed_mix(c.seed, 5));
    const double io_residual = lemma_commutation_residual(rho, sig, io_ch, c.alpha);

    dump_state(dump, "rho", rho.matrix());
    dump_state(dump, "sigma", sig.matrix());
    dump_value(dump, "residual", residual);
    dump_value(dump, "n_kraus", n_kraus);
    dump_value(dump, "io_residual", io_residual);
    return make_record(c, -residual, residual > 1e-9, false,
                       {residual, static_cast<double>(n_kraus), io_residual});
}

InstanceRecord eval_monotonicity(const InstanceCtx& c, nlohmann::json* dump) {
    const DensityMatrix rho = draw_state(c, 1);
    const int n_kraus = 1 + static_cast<int>(seed_mix(c.seed, 3) % 4);
    const IncoherentChannel ch = random_sio(c.dim, n_kraus, seed_mix(c.seed, 2));
    const MonotonicityDetail det = monotonicity_detail(rho, ch, c.alpha, c.opts);
    const bool flagged = !det.converged;
    const bool failed = !flagged && det.margin < -10.0 * c.opts.tol;

    dump_state(dump, "rho", rho.matrix());
    dump_value(dump, "cqa_input", det.cqa_input);
    dump_value(dump, "cqa_output", det.cqa_output);
    return make_record(c, det.margin, failed, flagged, {det.cqa_input, det.cqa_output});
}

InstanceRecord eval_direct_sum(const InstanceCtx& c, nlohmann::json* dump) {
    const DensityMatrix rho1 = draw_state(c, 1);
    const DensityMatrix rho2 = draw_state(c, 2);
    const double ps[3] = {0.3, 0.5, 0.7};
    const double p = ps[seed_mix(c.seed, 3) % 3];
    const DirectSumDetail det = direct_sum_detail(rho1, rho2, p, c.alpha, c.opts);
    const double threshold = c.opts.solver == Solver::grid ? 5e-4 : 10.0 * c.opts.tol;
    const bool flagged = !det.converged;
    const bool failed = !flagged && det.residual >= threshold;

    dump_state(dump, "rho1", rho1.matrix());
    dump_state(dump, "rho2", rho2.matrix());
    dump_value(dump, "p", p);
    dump_value(dump, "residual", det.residual);
    dump_value(dump, "lhs_value", det.lhs_value);
    dump_value(dump, "lhs_block_value", det.lhs_block_value);
    dump_value(dump, "rhs_value", det.rhs_value);
    return make_record(c, -det.residual, failed, flagged,
                       {det.residual, det.lhs_value, det.lhs_block_value, det.rhs_value, p});
}

InstanceRecord eval_upper_bound(const InstanceCtx& c, nlohmann::json* dump, bool use_l1) {
    const DensityMatrix rho = draw_state(c, 1);
    const CqaResult res = cqa(rho, c.alpha, c.opts);
    const double coh = use_l1 ? l1_coherence(rho) : rel_entropy_coherence(rho);
    const double bound =
        binary_entropy(c.alpha) / std::sqrt(2.0) * std::sqrt(std::max(coh, 0.0));
    const double margin = bound - res.value;
    const bool flagged = !res.converged;
    const bool failed = !flagged && margin < -c.opts.tol;

    dump_state(dump, "rho", rho.matrix());
    dump_value(dump, "value", res.value);
    dump_value(dump, "coherence", coh);
    dump_value(dump, "bound", bound);
    return make_record(c, margin, failed, flagged, {res.value, coh, bound});
}

InstanceRecord eval_upper_bound_cr(const InstanceCtx& c, nlohmann::json* dump) {
    return eval_upper_bound(c, dump, false);
}

InstanceRecord eval_upper_bound_l1(const InstanceCtx& c, nlohmann::json* dump) {
    return eval_upper_bound(c, dump, true);
}

InstanceRecord eval_pinsker_lower(const InstanceCtx& c, nlohmann::json* dump) {
    const DensityMatrix rho = draw_state(c, 1);
    const CqaResult res = cqa(rho, c.alpha, c.opts);
    const double lower = pinsker_lower_bound(rho, res.minimizer, c.alpha);
    const double margin = res.value - lower;
    const bool flagged = !res.converged;
    const bool failed = !flagged && margin < -1e-8;

    dump_state(dump, "rho", rho.matrix());
    dump_value(dump, "value", res.value);
    dump_value(dump, "lower_bound", lower);
    return make_record(c, margin, failed, flagged, {res.value, lower});
}

InstanceRecord eval_uncertainty(const InstanceCtx& c, nlohmann::json* dump) {
    const DensityMatrix rho = draw_state(c, 1);
    Eigen::MatrixXcd ma, mb;
    if (c.dim == 2) {
        ma.resize(2, 2);
        ma << 0, 1, 1, 0;
        mb.resize(2, 2);
        mb << 1, 0, 0, -1;
    } else {
        auto gue = [&](std::uint64_t sub) {
            std::mt19937_64 rng(seed_mix(c.seed, sub));
            std::normal_distribution<double> g(0.0, 1.0);
            Eigen::MatrixXcd m(c.dim, c.dim);
            for (int i = 0; i < c.dim; ++i)
                for (int j = 0; j < c.dim; ++j) m(i, j) = cxd(g(rng), g(rng));
            return Eigen::MatrixXcd(0.5 * (m + m.adjoint().eval()));
        };
        ma = gue(40);
        mb = gue(41);
    }
    const UncertaintyReport rep =
        uncertainty_relation(rho, HermitianObservable(ma), HermitianObservable(mb), c.alpha,
                             c.opts);
    const bool converged = rep.result_a.converged && rep.result_b.converged;
    const bool inconsistent_zero = rep.lhs <= 1e-8 && rep.rhs_paper > 1e-8;
    const bool flagged = !converged || inconsistent_zero;
    const bool failed = !flagged && rep.margin_derived < -1e-6;

    dump_state(dump, "rho", rho.matrix());
    dump_state(dump, "observable_a", ma);
    dump_state(dump, "observable_b", mb);
    dump_value(dump, "lhs", rep.lhs);
    dump_value(dump, "rhs_paper", rep.rhs_paper);
    dump_value(dump, "rhs_derived", rep.rhs_derived);
    dump_value(dump, "margin_paper", rep.margin_paper);
    dump_value(dump, "margin_derived", rep.margin_derived);
    return make_record(c, rep.margin_derived, failed, flagged,
                       {rep.margin_paper, rep.lhs, rep.rhs_paper, rep.rhs_derived});
}

InstanceRecord eval_faithfulness(const InstanceCtx& c, nlohmann::json* dump) {
    if (c.kind == StateKind::diagonal) {
        const DensityMatrix rho = random_density(c.dim, StateKind::diagonal, seed_mix(c.seed, 1));
        const CqaResult res = cqa(rho, c.alpha, c.opts);
        dump_state(dump, "rho", rho.matrix());
        dump_value(dump, "value", res.value);
        return make_record(c, -res.value, res.value > 1e-10, false,
                           {res.value, l1_coherence(rho)});
    }
    // coherent direction: resample until the state is visibly coherent
    DensityMatrix rho = random_density(c.dim, c.kind, seed_mix(c.seed, 50));
    for (int attempt = 1; attempt < 100 && l1_coherence(rho) <= 1e-2; ++attempt) {
        rho = random_density(c.dim, c.kind, seed_mix(c.seed, 50 + attempt));
    }
    const double coh = l1_coherence(rho);
    const CqaResult res = cqa(rho, c.alpha, c.opts);
    const bool flagged = !res.converged || coh <= 1e-2;
    const bool failed = !flagged && !(res.value > 1e-8);

    dump_state(dump, "rho", rho.matrix());
    dump_value(dump, "value", res.value);
    dump_value(dump, "l1_coherence", coh);
    return make_record(c, res.value, failed, flagged, {res.value, coh});
}

InstanceRecord eval_convexity(const InstanceCtx& c, nlohmann::json* dump) {
    const DensityMatrix rho1 = draw_state(c, 1);
    const DensityMatrix rho2 = draw_state(c, 2);
    std::mt19937_64 rng(seed_mix(c.seed, 3));
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const DensityMatrix mixed(lambda * rho1.matrix() + (1.0 - lambda) * rho2.matrix());

    const double c1 = cqa(rho1, c.alpha, c.opts).value;
    const double c2 = cqa(rho2, c.alpha, c.opts).value;
    const CqaResult cm = cqa(mixed, c.alpha, c.opts);
    const double margin = lambda * c1 + (1.0 - lambda) * c2 - cm.value;
    const bool flagged = !cm.converged;
    const bool failed = !flagged && margin < -10.0 * c.opts.tol;

    dump_state(dump, "rho1", rho1.matrix());
    dump_state(dump, "rho2", rho2.matrix());
    dump_value(dump, "lambda", lambda);
    dump_value(dump, "cqa_mixture", cm.value);
    return make_record(c, margin, failed, flagged, {c1, c2, cm.value, lambda});
}

// ---- registry ---------------------------------------------------------------

using EvalFn = InstanceRecord (*)(const InstanceCtx&, nlohmann::json*);

struct SuiteDef {
    const char* id;
    const char* claim;
    std::vector<std::string> extra_columns;
    EvalFn eval;
};

const std::vector<SuiteDef>& registry() {
    static const std::vector<SuiteDef> defs = {
        {"epi",
         "entropy of the addition output dominates the weighted input entropies, "
         "for S and exp(S)",
         {"entropy_margin", "exp_margin"},
         eval_epi},
        {"reverse_ep",
         "mixture entropy equals relative entropy of addition to mixture plus addition entropy",
         {"residual", "trace_term", "log_commutation_residual", "mixture_min_eig"},
         eval_reverse_ep},
        {"corollary",
         "addition entropy never exceeds mixture entropy, strictly below for "
         "noncommuting inputs",
         {"commutator_norm"},
         eval_corollary},
        {"lemma_sio",
         "strictly incoherent channels commute with quantum addition against "
         "incoherent second arguments",
         {"residual", "n_kraus", "io_residual"},
         eval_lemma_sio},
        {"monotonicity",
         "the measure does not increase under strictly incoherent channels",
         {"cqa_input", "cqa_output"},
         eval_monotonicity},
        {"direct_sum",
         "the measure is additive over weighted direct sums",
         {"residual", "lhs_value", "lhs_block_value", "rhs_value", "p"},
         eval_direct_sum},
        {"upper_bound_cr",
         "the measure is bounded by h(alpha)/sqrt(2) times the square root of the "
         "relative entropy of coherence",
         {"value", "coherence", "bound"},
         eval_upper_bound_cr},
        {"upper_bound_l1",
         "the measure is bounded by h(alpha)/sqrt(2) times the square root of the "
         "l1 coherence",
         {"value", "coherence", "bound"},
         eval_upper_bound_l1},
        {"pinsker_lower",
         "the measure dominates half alpha(1-alpha) times the squared trace norm of "
         "[rho, minimizer]",
         {"value", "lower_bound"},
         eval_pinsker_lower},
        {"uncertainty",
         "sum of root measures for two observables dominates the commutator term; "
         "both constants evaluated",
         {"margin_paper", "lhs", "rhs_paper", "rhs_derived"},
         eval_uncertainty},
        {"faithfulness",
         "the measure vanishes exactly on incoherent states and its reported value "
         "is positive on coherent ones",
         {"value", "l1_coherence"},
         eval_faithfulness},
        {"convexity",
         "the measure is convex under mixing of states",
         {"c1", "c2", "cqa_mixture", "lambda"},
         eval_convexity},
    };
    return defs;
}

const SuiteDef& find_suite(const std::string& theorem_id) {
    for (const auto& def : registry()) {
        if (theorem_id == def.id) return def;
    }
    throw std::invalid_argument("unknown theorem id: " + theorem_id);
}

void validate_spec(const SuiteDef& def, const EnsembleSpec& spec, const CqaOptions& opts) {
    if (spec.n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    if (spec.dims.empty()) throw std::invalid_argument("dims must be non-empty");
    for (int d : spec.dims) {
        if (d < 2) throw std::invalid_argument("dims must all be >= 2");
    }
    if (spec.alphas.empty()) throw std::invalid_argument("alphas must be non-empty");
    for (double a : spec.alphas) {
        if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("alphas must lie in [0,1]");
    }
    if (opts.solver == Solver::grid) {
        const bool doubles_dim = std::string(def.id) == "direct_sum";
        for (int d : spec.dims) {
            if ((doubles_dim ? 2 * d : d) > 4) {
                throw std::invalid_argument("grid solver supports d <= 4 (blocks <= 2 for "
                                            "direct_sum)");
            }
        }
    }
}

}  // namespace

const std::vector<std::string>& suite_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& def : registry()) v.push_back(def.id);
        return v;
    }();
    return ids;
}

bool is_suite(const std::string& theorem_id) {
    for (const auto& def : registry()) {
        if (theorem_id == def.id) return true;
    }
    return false;
}

std::string suite_claim(const std::string& theorem_id) {
    return find_suite(theorem_id).claim;
}

TheoremReport run_suite(const std::string& theorem_id, const EnsembleSpec& spec,
                        const CqaOptions& opts, int n_workers) {
    const SuiteDef& def = find_suite(theorem_id);
    validate_spec(def, spec, opts);

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t total = spec.dims.size() * spec.alphas.size() *
                              static_cast<std::size_t>(spec.n_samples);
    std::vector<InstanceRecord> records(total);

    auto ctx_for = [&](std::size_t idx) {
        const std::size_t per_dim = spec.alphas.size() * spec.n_samples;
        InstanceCtx ctx;
        ctx.dim = spec.dims[idx / per_dim];
        ctx.alpha = spec.alphas[(idx % per_dim) / spec.n_samples];
        ctx.seed = seed_mix(spec.seed, idx);
        ctx.kind = spec.state_kind;
        ctx.opts = opts;
        return ctx;
    };

    int workers = n_workers > 0 ? n_workers
                                : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(total)));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> poisoned{false};
    std::exception_ptr first_error;
    std::mutex error_lock;

    auto worker = [&] {
        std::size_t idx;
        while (!poisoned.load(std::memory_order_relaxed) &&
               (idx = next.fetch_add(1)) < total) {
            try {
                records[idx] = def.eval(ctx_for(idx), nullptr);
            } catch (...) {
                std::lock_guard<std::mutex> g(error_lock);
                if (!first_error) first_error = std::current_exception();
                poisoned.store(true);
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    TheoremReport report;
    report.theorem_id = theorem_id;
    report.ensemble = spec;
    report.solver = to_string(opts.solver);
    report.tol = opts.tol;
    report.extra_columns = def.extra_columns;
    report.instances = std::move(records);

    double worst = std::numeric_limits<double>::infinity();
    std::uint64_t worst_seed = 0;
    bool have_worst = false;
    for (const auto& rec : report.instances) {
        switch (rec.status) {
            case InstanceStatus::pass: ++report.n_pass; break;
            case InstanceStatus::fail: ++report.n_fail; break;
            case InstanceStatus::flagged: ++report.n_flagged; break;
        }
        if (rec.status != InstanceStatus::flagged && rec.margin < worst) {
            worst = rec.margin;
            worst_seed = rec.instance_seed;
            have_worst = true;
        }
    }
    if (!have_worst && !report.instances.empty()) {
        for (const auto& rec : report.instances) {
            if (rec.margin < worst) {
                worst = rec.margin;
                worst_seed = rec.instance_seed;
            }
        }
    }
    report.worst_margin = worst;
    report.worst_instance_seed = worst_seed;

    if (theorem_id == "uncertainty") {
        // adjudicate the stated constant against the derived one
        double worst_paper = std::numeric_limits<double>::infinity();
        int violations = 0;
        for (const auto& rec : report.instances) {
            const double mp = rec.extras.at(0);
            worst_paper = std::min(worst_paper, mp);
            if (mp < 0.0) ++violations;
        }
        report.summary["worst_margin_paper"] = worst_paper;
        report.summary["paper_constant_violations"] = static_cast<double>(violations);
    }
    if (theorem_id == "lemma_sio") {
        double worst_io = 0.0;
        for (const auto& rec : report.instances) {
            worst_io = std::max(worst_io, rec.extras.at(2));
        }
        report.summary["max_io_residual"] = worst_io;
    }

    report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return report;
}

nlohmann::json replay(const std::string& theorem_id, std::uint64_t instance_seed, int dim,
                      double alpha, StateKind kind, const CqaOptions& opts) {
    const SuiteDef& def = find_suite(theorem_id);
    InstanceCtx ctx;
    ctx.seed = instance_seed;
    ctx.dim = dim;
    ctx.alpha = alpha;
    ctx.kind = kind;
    ctx.opts = opts;

    nlohmann::json dump;
    const InstanceRecord rec = def.eval(ctx, &dump);
    dump["theorem_id"] = theorem_id;
    dump["instance_seed"] = instance_seed;
    dump["dim"] = dim;
    dump["alpha"] = alpha;
    dump["state_kind"] = to_string(kind);
    dump["margin"] = rec.margin;
    dump["status"] = to_string(rec.status);
    nlohmann::json extras = nlohmann::json::object();
    for (std::size_t i = 0; i < def.extra_columns.size() && i < rec.extras.size(); ++i) {
        extras[def.extra_columns[i]] = rec.extras[i];
    }
    dump["extras"] = extras;
    return dump;
}

std::string report_to_json(const TheoremReport& report, bool include_runtime) {
    nlohmann::json j;
    j["theorem_id"] = report.theorem_id;
    j["claim"] = suite_claim(report.theorem_id);
    j["n_pass"] = report.n_pass;
    j["n_fail"] = report.n_fail;
    j["n_flagged"] = report.n_flagged;
    j["n_instances"] = report.instances.size();
    j["worst_margin"] = report.worst_margin;
    j["worst_instance_seed"] = report.worst_instance_seed;
    if (include_runtime) j["runtime_ms"] = report.runtime_ms;
    j["solver"] = report.solver;
    j["tol"] = report.tol;
    j["ensemble"] = {
        {"dims", report.ensemble.dims},
        {"n_samples", report.ensemble.n_samples},
        {"state_kind", to_string(report.ensemble.state_kind)},
        {"alphas", report.ensemble.alphas},
        {"seed", report.ensemble.seed},
    };
    j["summary"] = report.summary;
    return j.dump(2);
}

std::string report_to_csv(const TheoremReport& report) {
    std::ostringstream out;
    out << "instance_seed,dim,alpha,margin,status";
    for (const auto& col : report.extra_columns) out << "," << col;
    out << "\n";
    for (const auto& rec : report.instances) {
        out << rec.instance_seed << "," << rec.dim << "," << io::format_float(rec.alpha) << ","
            << io::format_float(rec.margin) << "," << to_string(rec.status);
        for (double v : rec.extras) out << "," << io::format_float(v);
        out << "\n";
    }
    return out.str();
}

}  // namespace qadd
