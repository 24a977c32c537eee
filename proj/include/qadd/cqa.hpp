#pragma once

#include "qadd/channel.hpp"
#include "qadd/entropy.hpp"
#include "qadd/matcore.hpp"

#include <string>

namespace qadd {

/// A point on the probability simplex (weights >= 0, summing to 1 within
/// 1e-12). Parametrizes incoherent states through their diagonals.
class ProbabilityVector {
public:
    /// Trivial one-outcome distribution.
    ProbabilityVector() : weights_(Eigen::VectorXd::Ones(1)) {}
    explicit ProbabilityVector(Eigen::VectorXd w);

    int dim() const { return static_cast<int>(weights_.size()); }
    const Eigen::VectorXd& weights() const { return weights_; }
    double operator[](int i) const { return weights_(i); }

    /// The diagonal density matrix diag(weights).
    DensityMatrix to_state() const;

private:
    Eigen::VectorXd weights_;
};

enum class Solver { grid, nelder_mead, multistart };

Solver solver_from_string(const std::string& s);
std::string to_string(Solver s);

struct CqaOptions {
    Solver solver = Solver::nelder_mead;
    /// Convergence tolerance on the objective; doubles as the window within
    /// which near-optimal points count as minimizer candidates.
    double tol = 1e-6;
    /// Grid spacing per simplex coordinate; 0 selects a per-dimension default
    /// (1e-3 for d=2, 5e-3 for d=3, 1/60 for d=4).
    double grid_step = 0.0;
    /// Local grid refinement passes after the coarse scan, shrinking the step
    /// tenfold around the incumbent each time.
    int refine_rounds = 2;
    int multistart_count = 20;
    /// Seed of the multistart perturbation stream. Fixed by default so that
    /// identical inputs give identical results.
    std::uint64_t seed = 0x9a5eedULL;
    /// Nelder-Mead iteration cap; 0 selects 400 * (d-1).
    int max_iters = 0;
};

/// Result of a CQA minimization.
///
/// `minimizer` is the deterministic representative of the near-optimal set:
/// the lexicographically largest weight vector among all evaluated points
/// whose objective lies within `tol` of the best value found. `value` is the
/// objective at that representative (so the pair is self-consistent), and
/// `best_value` is the raw minimum encountered.
struct CqaResult {
    double value = 0.0;
    ProbabilityVector minimizer;
    double alpha = 0.0;
    Solver solver = Solver::grid;
    long n_evals = 0;
    bool converged = false;
    int n_candidates = 0;      ///< near-optimal points within tol (tie multiplicity)
    double best_value = 0.0;   ///< raw best objective found by the solver
    double dual_path_gap = 0.0;  ///< |relative-entropy path - entropy-difference path| at minimizer
    bool degenerate_basis = false;  ///< set by cqa_in_basis when the observable spectrum is degenerate
};

/// Both evaluation routes of the CQA objective at a fixed incoherent state:
/// the defining relative entropy S(rho boxplus diag(q) || mix) and the
/// entropy difference S(mix) - S(rho boxplus diag(q)) that equals it.
struct CqaObjectivePaths {
    double rel_entropy_path = 0.0;
    double entropy_diff_path = 0.0;
    double gap() const { return std::abs(rel_entropy_path - entropy_diff_path); }
};

CqaObjectivePaths cqa_objective_paths(const DensityMatrix& rho, const ProbabilityVector& q,
                                      double alpha);

/// S(rho boxplus_alpha diag(q) || alpha rho + (1-alpha) diag(q)).
double cqa_objective(const DensityMatrix& rho, const ProbabilityVector& q, double alpha);

/// Minimizes the CQA objective over the probability simplex.
CqaResult cqa(const DensityMatrix& rho, double alpha, const CqaOptions& opts = {});

/// CQA with respect to the eigenbasis of an observable: rotates rho into that
/// basis (ascending eigenvalues, each eigenvector's largest-magnitude entry
/// made real positive) and minimizes there. The minimizer is reported in the
/// observable's eigenbasis.
CqaResult cqa_in_basis(const DensityMatrix& rho, const HermitianObservable& obs, double alpha,
                       const CqaOptions& opts = {});

/// Evaluation of the state-dependent uncertainty relation for two observables.
/// rhs_paper uses the prefactor sqrt(alpha(1-alpha))/2, rhs_derived the
/// prefactor sqrt(alpha(1-alpha))/(2 sqrt(2)) obtained by chaining the
/// Pinsker, Bianchi and Kittaneh steps; both margins are reported.
struct UncertaintyReport {
    double lhs = 0.0;
    double rhs_paper = 0.0;
    double rhs_derived = 0.0;
    double margin_paper = 0.0;
    double margin_derived = 0.0;
    double commutator_norm = 0.0;  ///< ||[[sigma_A, sigma_B], rho]||_1
    CqaResult result_a;
    CqaResult result_b;
};

UncertaintyReport uncertainty_relation(const DensityMatrix& rho, const HermitianObservable& a,
                                       const HermitianObservable& b, double alpha,
                                       const CqaOptions& opts = {});

struct DirectSumDetail {
    double residual = 0.0;
    double lhs_value = 0.0;        ///< CQA of the combined state, full simplex
    double lhs_block_value = 0.0;  ///< objective at the product-form point built
                                   ///< from the per-block minimizers
    double rhs_value = 0.0;        ///< p C(rho1) + (1-p) C(rho2)
    bool converged = false;
};

/// Probes C(p rho1 (+) (1-p) rho2) = p C(rho1) + (1-p) C(rho2), using the
/// same solver for all three minimizations.
DirectSumDetail direct_sum_detail(const DensityMatrix& rho1, const DensityMatrix& rho2, double p,
                                  double alpha, const CqaOptions& opts = {});
double direct_sum_residual(const DensityMatrix& rho1, const DensityMatrix& rho2, double p,
                           double alpha, const CqaOptions& opts = {});

struct MonotonicityDetail {
    double margin = 0.0;  ///< C(rho) - C(channel(rho))
    double cqa_input = 0.0;
    double cqa_output = 0.0;
    bool converged = false;
};

MonotonicityDetail monotonicity_detail(const DensityMatrix& rho, const IncoherentChannel& ch,
                                       double alpha, const CqaOptions& opts = {});
double monotonicity_margin(const DensityMatrix& rho, const IncoherentChannel& ch, double alpha,
                           const CqaOptions& opts = {});

/// 0.5 alpha (1-alpha) ||[rho, diag(q)]||_1^2 — the Pinsker lower bound on
/// the objective at q.
double pinsker_lower_bound(const DensityMatrix& rho, const ProbabilityVector& q, double alpha);

}  // namespace qadd
