#include "qadd/cqa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace qadd {

namespace {

void check_alpha_range(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha outside [0,1]");
    }
}

/// Fast CQA objective: S(mix) - S(add) from eigenvalues only. The commutator
/// with a diagonal matrix is formed entrywise, so a single evaluation costs
/// two small Hermitian eigenvalue solves.
class Objective {
public:
    Objective(const Eigen::MatrixXcd& rho, double alpha)
        : rho_(rho),
          alpha_(alpha),
          beta_(std::sqrt(alpha * (1.0 - alpha))),
          d_(static_cast<int>(rho.rows())),
          mix_(d_, d_),
          add_(d_, d_) {}

    double operator()(const Eigen::VectorXd& q) const {
        mix_ = alpha_ * rho_;
        for (int i = 0; i < d_; ++i) {
            mix_(i, i) += (1.0 - alpha_) * q(i);
        }
        add_ = mix_;
        for (int i = 0; i < d_; ++i) {
            for (int j = 0; j < d_; ++j) {
                if (i != j) {
                    // [rho, diag(q)]_{ij} = rho_ij (q_j - q_i)
                    add_(i, j) -= cxd(0.0, 1.0) * beta_ * rho_(i, j) * (q(j) - q(i));
                }
            }
        }
        return entropy_of_hermitian(mix_).value - entropy_of_hermitian(add_).value;
    }

    int dim() const { return d_; }

private:
    const Eigen::MatrixXcd& rho_;
    double alpha_;
    double beta_;
    int d_;
    mutable Eigen::MatrixXcd mix_;
    mutable Eigen::MatrixXcd add_;
};

bool lex_greater(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) > b(i)) return true;
        if (a(i) < b(i)) return false;
    }
    return false;
}

/// Tracks every evaluated point whose objective lies within `window` of the
/// running best, so the deterministic tie-broken representative can be
/// extracted afterwards.
class CandidateSet {
public:
    explicit CandidateSet(double window) : window_(window) {}

    void add(const Eigen::VectorXd& q, double f) {
        ++n_evals_;
        if (f < best_) best_ = f;
        if (f <= best_ + window_) {
            items_.emplace_back(f, q);
            if (items_.size() > 1u << 20) prune();
        }
    }

    double best() const { return best_; }
    long n_evals() const { return n_evals_; }

    struct Pick {
        Eigen::VectorXd q;
        double value = 0.0;
        int multiplicity = 0;
    };

    Pick finalize() {
        prune();
        Pick pick;
        pick.multiplicity = static_cast<int>(items_.size());
        bool first = true;
        for (const auto& [f, q] : items_) {
            if (first || lex_greater(q, pick.q)) {
                pick.q = q;
                pick.value = f;
                first = false;
            }
        }
        return pick;
    }

private:
    void prune() {
        std::vector<std::pair<double, Eigen::VectorXd>> kept;
        kept.reserve(items_.size() / 2 + 1);
        for (auto& it : items_) {
            if (it.first <= best_ + window_) kept.push_back(std::move(it));
        }
        items_.swap(kept);
    }

    double window_;
    double best_ = std::numeric_limits<double>::infinity();
    long n_evals_ = 0;
    std::vector<std::pair<double, Eigen::VectorXd>> items_;
};

double default_grid_step(int d) {
    switch (d) {
        case 2: return 1e-3;
        case 3: return 5e-3;
        default: return 1.0 / 60.0;
    }
}

/// Enumerates all points of the simplex grid {q : q_i = n_i / N}.
void scan_simplex_grid(int d, int n_ticks, const Objective& f, CandidateSet& cands) {
    Eigen::VectorXd q(d);
    std::function<void(int, int)> rec = [&](int coord, int left) {
        if (coord == d - 1) {
            q(coord) = static_cast<double>(left) / n_ticks;
            cands.add(q, f(q));
            return;
        }
        for (int n = 0; n <= left; ++n) {
            q(coord) = static_cast<double>(n) / n_ticks;
            rec(coord + 1, left - n);
        }
    };
    rec(0, n_ticks);
}

/// Local zero-sum offsets around `center` with spacing `step`, up to
/// `span` ticks per coordinate.
void scan_local_grid(const Eigen::VectorXd& center, double step, int span, const Objective& f,
                     CandidateSet& cands) {
    const int d = static_cast<int>(center.size());
    Eigen::VectorXi m(d);
    std::function<void(int, int)> rec = [&](int coord, int partial) {
        if (coord == d - 1) {
            m(coord) = -partial;
            if (std::abs(m(coord)) > span) return;
            Eigen::VectorXd q = center;
            for (int i = 0; i < d; ++i) q(i) += m(i) * step;
            if ((q.array() < 0.0).any()) return;
            cands.add(q, f(q));
            return;
        }
        for (int n = -span; n <= span; ++n) {
            m(coord) = n;
            rec(coord + 1, partial + n);
        }
    };
    rec(0, 0);
}

Eigen::VectorXd softmax_point(const Eigen::VectorXd& z) {
    Eigen::VectorXd full(z.size() + 1);
    full.head(z.size()) = z;
    full(z.size()) = 0.0;
    const double m = full.maxCoeff();
    Eigen::VectorXd e = (full.array() - m).exp();
    return e / e.sum();
}

Eigen::VectorXd logits_of(const Eigen::VectorXd& q) {
    const int d = static_cast<int>(q.size());
    Eigen::VectorXd z(d - 1);
    const double ref = std::log(std::max(q(d - 1), 1e-12));
    for (int i = 0; i < d - 1; ++i) {
        z(i) = std::log(std::max(q(i), 1e-12)) - ref;
    }
    return z;
}

struct NmOutcome {
    double best = std::numeric_limits<double>::infinity();
    bool converged = false;
};

/// Nelder-Mead over the softmax parametrization of the simplex. Every
/// objective evaluation is funneled through the candidate set.
NmOutcome nelder_mead_minimize(const Objective& f, const Eigen::VectorXd& q_start, double tol,
                               int max_iters, CandidateSet& cands) {
    const int n = static_cast<int>(q_start.size()) - 1;
    auto eval = [&](const Eigen::VectorXd& z) {
        const Eigen::VectorXd q = softmax_point(z);
        const double v = f(q);
        cands.add(q, v);
        return v;
    };

    std::vector<Eigen::VectorXd> zs;
    std::vector<double> fs;
    Eigen::VectorXd z0 = logits_of(q_start);
    zs.push_back(z0);
    fs.push_back(eval(z0));
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd z = z0;
        z(i) += 0.5;
        zs.push_back(z);
        fs.push_back(eval(z));
    }

    auto order = [&]() {
        std::vector<int> idx(zs.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::vector<Eigen::VectorXd> zs2;
        std::vector<double> fs2;
        for (int i : idx) {
            zs2.push_back(zs[i]);
            fs2.push_back(fs[i]);
        }
        zs.swap(zs2);
        fs.swap(fs2);
    };

    NmOutcome out;
    for (int iter = 0; iter < max_iters; ++iter) {
        order();
        if (fs.back() - fs.front() < tol) {
            out.converged = true;
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += zs[i];
        centroid /= n;

        const Eigen::VectorXd zr = centroid + (centroid - zs.back());
        const double fr = eval(zr);
        if (fr < fs.front()) {
            const Eigen::VectorXd ze = centroid + 2.0 * (centroid - zs.back());
            const double fe = eval(ze);
            if (fe < fr) {
                zs.back() = ze;
                fs.back() = fe;
            } else {
                zs.back() = zr;
                fs.back() = fr;
            }
        } else if (fr < fs[n - 1]) {
            zs.back() = zr;
            fs.back() = fr;
        } else {
            const Eigen::VectorXd zc = centroid + 0.5 * (zs.back() - centroid);
            const double fc = eval(zc);
            if (fc < fs.back()) {
                zs.back() = zc;
                fs.back() = fc;
            } else {
                for (size_t i = 1; i < zs.size(); ++i) {
                    zs[i] = zs[0] + 0.5 * (zs[i] - zs[0]);
                    fs[i] = eval(zs[i]);
                }
            }
        }
    }
    order();
    out.best = fs.front();
    return out;
}

Eigen::VectorXd diagonal_weights(const Eigen::MatrixXcd& rho) {
    Eigen::VectorXd w = rho.diagonal().real().cwiseMax(0.0);
    w /= w.sum();
    return w;
}

}  // namespace

ProbabilityVector::ProbabilityVector(Eigen::VectorXd w) : weights_(std::move(w)) {
    if (weights_.size() < 1) {
        throw std::invalid_argument("ProbabilityVector: empty");
    }
    if ((weights_.array() < -1e-12).any()) {
        throw std::invalid_argument("ProbabilityVector: negative weight");
    }
    if (std::abs(weights_.sum() - 1.0) > 1e-12) {
        throw std::invalid_argument("ProbabilityVector: weights do not sum to 1");
    }
}

DensityMatrix ProbabilityVector::to_state() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
    m.diagonal() = weights_.cwiseMax(0.0).cast<cxd>();
    m /= m.trace();
    return DensityMatrix(m);
}

Solver solver_from_string(const std::string& s) {
    if (s == "grid") return Solver::grid;
    if (s == "nm" || s == "nelder_mead") return Solver::nelder_mead;
    if (s == "multistart") return Solver::multistart;
    throw std::invalid_argument("unknown solver: " + s);
}

std::string to_string(Solver s) {
    switch (s) {
        case Solver::grid: return "grid";
        case Solver::nelder_mead: return "nelder_mead";
        case Solver::multistart: return "multistart";
    }
    return "?";
}

CqaObjectivePaths cqa_objective_paths(const DensityMatrix& rho, const ProbabilityVector& q,
                                      double alpha) {
    if (rho.dim() != q.dim()) {
        throw std::invalid_argument("cqa_objective: dimension mismatch");
    }
    check_alpha_range(alpha);
    CqaObjectivePaths out;
    const Objective f(rho.matrix(), alpha);
    out.entropy_diff_path = f(q.weights());

    const DensityMatrix sigma = q.to_state();
    const DensityMatrix added = quantum_add(rho, sigma, alpha);
    const DensityMatrix mixture(alpha * rho.matrix() + (1.0 - alpha) * sigma.matrix());
    const RelEntropyValue rel = relative_entropy(added, mixture);
    out.rel_entropy_path =
        rel.infinite ? std::numeric_limits<double>::infinity() : rel.value;
    return out;
}

double cqa_objective(const DensityMatrix& rho, const ProbabilityVector& q, double alpha) {
    return cqa_objective_paths(rho, q, alpha).rel_entropy_path;
}

CqaResult cqa(const DensityMatrix& rho, double alpha, const CqaOptions& opts) {
    check_alpha_range(alpha);
    const int d = rho.dim();
    const Objective f(rho.matrix(), alpha);
    CandidateSet cands(opts.tol);
    bool converged = true;

    switch (opts.solver) {
        case Solver::grid: {
            if (d > 4) {
                throw std::invalid_argument("cqa: grid solver supports d <= 4");
            }
            double step = opts.grid_step > 0.0 ? opts.grid_step : default_grid_step(d);
            const int n_ticks = std::max(1, static_cast<int>(std::lround(1.0 / step)));
            scan_simplex_grid(d, n_ticks, f, cands);
            double local = 1.0 / n_ticks;
            Eigen::VectorXd center = cands.finalize().q;
            for (int round = 0; round < opts.refine_rounds; ++round) {
                local /= 10.0;
                scan_local_grid(center, local, 10, f, cands);
                center = cands.finalize().q;
            }
            break;
        }
        case Solver::nelder_mead: {
            const int max_iters = opts.max_iters > 0 ? opts.max_iters : 400 * std::max(1, d - 1);
            const NmOutcome nm = nelder_mead_minimize(
                f, Eigen::VectorXd::Constant(d, 1.0 / d), opts.tol, max_iters, cands);
            converged = nm.converged;
            break;
        }
        case Solver::multistart: {
            const int max_iters = opts.max_iters > 0 ? opts.max_iters : 400 * std::max(1, d - 1);
            std::vector<Eigen::VectorXd> starts;
            starts.push_back(Eigen::VectorXd::Constant(d, 1.0 / d));
            starts.push_back(diagonal_weights(rho.matrix()));
            for (int s = 2; s < opts.multistart_count; ++s) {
                std::mt19937_64 rng(seed_mix(opts.seed, static_cast<std::uint64_t>(s)));
                std::exponential_distribution<double> ex(1.0);
                Eigen::VectorXd w(d);
                for (int i = 0; i < d; ++i) w(i) = ex(rng);
                w /= w.sum();
                starts.push_back(w);
            }
            bool any = false;
            for (const auto& st : starts) {
                const NmOutcome nm = nelder_mead_minimize(f, st, opts.tol, max_iters, cands);
                any = any || nm.converged;
            }
            converged = any;
            break;
        }
    }

    CandidateSet::Pick pick = cands.finalize();
    CqaResult res{.value = pick.value,
                  .minimizer = ProbabilityVector(pick.q),
                  .alpha = alpha,
                  .solver = opts.solver,
                  .n_evals = cands.n_evals(),
                  .converged = converged,
                  .n_candidates = pick.multiplicity,
                  .best_value = cands.best(),
                  .dual_path_gap = 0.0,
                  .degenerate_basis = false};
    const CqaObjectivePaths paths = cqa_objective_paths(rho, res.minimizer, alpha);
    res.dual_path_gap = paths.gap();
    return res;
}

namespace {

/// Eigenbasis of an observable with the deterministic phase convention:
/// ascending eigenvalues, largest-magnitude entry of each column made real
/// positive.
Eigen::MatrixXcd observable_basis(const HermitianObservable& obs, bool* degenerate) {
    EigenDecomposition ed = hermitian_eig(obs.matrix());
    if (degenerate != nullptr) {
        *degenerate = false;
        for (Eigen::Index i = 0; i + 1 < ed.eigenvalues.size(); ++i) {
            if (ed.eigenvalues(i + 1) - ed.eigenvalues(i) < 1e-10) *degenerate = true;
        }
    }
    for (Eigen::Index c = 0; c < ed.eigenvectors.cols(); ++c) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < ed.eigenvectors.rows(); ++r) {
            const double a = std::abs(ed.eigenvectors(r, c));
            if (a > best) {
                best = a;
                imax = r;
            }
        }
        const cxd pivot = ed.eigenvectors(imax, c);
        if (std::abs(pivot) > 0.0) {
            ed.eigenvectors.col(c) *= std::conj(pivot) / std::abs(pivot);
        }
    }
    return ed.eigenvectors;
}

}  // namespace

CqaResult cqa_in_basis(const DensityMatrix& rho, const HermitianObservable& obs, double alpha,
                       const CqaOptions& opts) {
    if (rho.dim() != obs.dim()) {
        throw std::invalid_argument("cqa_in_basis: dimension mismatch");
    }
    bool degenerate = false;
    const Eigen::MatrixXcd v = observable_basis(obs, &degenerate);
    const DensityMatrix rotated(v.adjoint() * rho.matrix() * v);
    CqaResult res = cqa(rotated, alpha, opts);
    res.degenerate_basis = degenerate;
    return res;
}

UncertaintyReport uncertainty_relation(const DensityMatrix& rho, const HermitianObservable& a,
                                       const HermitianObservable& b, double alpha,
                                       const CqaOptions& opts) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("uncertainty_relation: alpha must lie in (0,1)");
    }
    UncertaintyReport rep;
    rep.result_a = cqa_in_basis(rho, a, alpha, opts);
    rep.result_b = cqa_in_basis(rho, b, alpha, opts);

    const Eigen::MatrixXcd va = observable_basis(a, nullptr);
    const Eigen::MatrixXcd vb = observable_basis(b, nullptr);
    const Eigen::MatrixXcd sigma_a =
        va * rep.result_a.minimizer.weights().cast<cxd>().asDiagonal().toDenseMatrix() * va.adjoint();
    const Eigen::MatrixXcd sigma_b =
        vb * rep.result_b.minimizer.weights().cast<cxd>().asDiagonal().toDenseMatrix() * vb.adjoint();

    rep.commutator_norm = trace_norm(commutator(commutator(sigma_a, sigma_b), rho.matrix()));
    const double prefactor = std::sqrt(alpha * (1.0 - alpha));
    rep.rhs_paper = 0.5 * prefactor * rep.commutator_norm;
    rep.rhs_derived = rep.rhs_paper / std::sqrt(2.0);
    rep.lhs = std::sqrt(std::max(rep.result_a.value, 0.0)) +
              std::sqrt(std::max(rep.result_b.value, 0.0));
    rep.margin_paper = rep.lhs - rep.rhs_paper;
    rep.margin_derived = rep.lhs - rep.rhs_derived;
    return rep;
}

DirectSumDetail direct_sum_detail(const DensityMatrix& rho1, const DensityMatrix& rho2, double p,
                                  double alpha, const CqaOptions& opts) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("direct_sum_detail: p must lie in (0,1)");
    }
    DirectSumDetail out;
    const DensityMatrix combined = direct_sum(rho1, rho2, p);
    const CqaResult joint = cqa(combined, alpha, opts);
    const CqaResult c1 = cqa(rho1, alpha, opts);
    const CqaResult c2 = cqa(rho2, alpha, opts);

    out.lhs_value = joint.value;
    out.rhs_value = p * c1.value + (1.0 - p) * c2.value;
    out.residual = std::abs(out.lhs_value - out.rhs_value);
    out.converged = joint.converged && c1.converged && c2.converged;

    // product-form feasible point assembled from the per-block minimizers
    Eigen::VectorXd block(combined.dim());
    block.head(rho1.dim()) = p * c1.minimizer.weights();
    block.tail(rho2.dim()) = (1.0 - p) * c2.minimizer.weights();
    block /= block.sum();
    const Objective f(combined.matrix(), alpha);
    out.lhs_block_value = f(block);
    return out;
}

double direct_sum_residual(const DensityMatrix& rho1, const DensityMatrix& rho2, double p,
                           double alpha, const CqaOptions& opts) {
    return direct_sum_detail(rho1, rho2, p, alpha, opts).residual;
}

MonotonicityDetail monotonicity_detail(const DensityMatrix& rho, const IncoherentChannel& ch,
                                       double alpha, const CqaOptions& opts) {
    MonotonicityDetail out;
    const CqaResult before = cqa(rho, alpha, opts);
    const CqaResult after = cqa(apply_channel(ch.kraus, rho), alpha, opts);
    out.cqa_input = before.value;
    out.cqa_output = after.value;
    out.margin = before.value - after.value;
    out.converged = before.converged && after.converged;
    return out;
}

double monotonicity_margin(const DensityMatrix& rho, const IncoherentChannel& ch, double alpha,
                           const CqaOptions& opts) {
    return monotonicity_detail(rho, ch, alpha, opts).margin;
}

double pinsker_lower_bound(const DensityMatrix& rho, const ProbabilityVector& q, double alpha) {
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(q.dim(), q.dim());
    sigma.diagonal() = q.weights().cast<cxd>();
    const double tn = trace_norm(commutator(rho.matrix(), sigma));
    return 0.5 * alpha * (1.0 - alpha) * tn * tn;
}

}  // namespace qadd
