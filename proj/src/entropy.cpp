#include "qadd/entropy.hpp"

#include "qadd/channel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace qadd {

namespace {

EntropyValue entropy_of_spectrum(const Eigen::VectorXd& ev, double clip_eps) {
    EntropyValue out;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double lam = ev(i);
        if (lam < clip_eps) {
            ++out.clip_events;
            continue;
        }
        out.value -= lam * std::log(lam);
    }
    return out;
}

}  // namespace

EntropyValue entropy_of_hermitian(const Eigen::MatrixXcd& m, double clip_eps) {
    if (m.rows() == 2) {
        // closed form for 2x2 Hermitian spectra; this sits on the optimizer's
        // hot path
        const double a = m(0, 0).real();
        const double d = m(1, 1).real();
        const double mean = 0.5 * (a + d);
        const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
        Eigen::Vector2d ev(mean - rad, mean + rad);
        return entropy_of_spectrum(ev, clip_eps);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return entropy_of_spectrum(es.eigenvalues(), clip_eps);
}

EntropyValue von_neumann_entropy(const DensityMatrix& rho, double clip_eps) {
    return entropy_of_hermitian(rho.matrix(), clip_eps);
}

RelEntropyValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& tau,
                                 double clip_eps) {
    if (rho.dim() != tau.dim()) {
        throw std::invalid_argument("relative_entropy: dimension mismatch");
    }
    RelEntropyValue out;
    const EigenDecomposition tau_ed = hermitian_eig(tau.matrix());
    // support check: tau-null directions must carry no rho weight
    for (Eigen::Index i = 0; i < tau_ed.eigenvalues.size(); ++i) {
        if (tau_ed.eigenvalues(i) < clip_eps) {
            const Eigen::VectorXcd v = tau_ed.eigenvectors.col(i);
            const double w = (v.adjoint() * rho.matrix() * v)(0, 0).real();
            if (w > 1e-8) {
                out.infinite = true;
                out.support_violation = true;
                out.value = std::numeric_limits<double>::infinity();
                return out;
            }
        }
    }
    const EntropyValue s_rho = von_neumann_entropy(rho, clip_eps);
    Eigen::VectorXd logs(tau_ed.eigenvalues.size());
    for (Eigen::Index i = 0; i < logs.size(); ++i) {
        logs(i) = std::log(std::max(tau_ed.eigenvalues(i), clip_eps));
    }
    const Eigen::MatrixXcd log_tau =
        tau_ed.eigenvectors * logs.asDiagonal() * tau_ed.eigenvectors.adjoint();
    const double cross = (rho.matrix() * log_tau).trace().real();
    out.value = -s_rho.value - cross;
    return out;
}

double binary_entropy(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("binary_entropy: argument outside [0,1]");
    }
    double h = 0.0;
    if (alpha > 0.0) h -= alpha * std::log(alpha);
    if (alpha < 1.0) h -= (1.0 - alpha) * std::log(1.0 - alpha);
    return h;
}

double exp_entropy(const DensityMatrix& rho) {
    return std::exp(von_neumann_entropy(rho).value);
}

double rel_entropy_coherence(const DensityMatrix& rho) {
    return von_neumann_entropy(dephase(rho)).value - von_neumann_entropy(rho).value;
}

double l1_coherence(const DensityMatrix& rho) {
    double s = 0.0;
    const Eigen::MatrixXcd& m = rho.matrix();
    for (int i = 0; i < rho.dim(); ++i) {
        for (int j = 0; j < rho.dim(); ++j) {
            if (i != j) s += std::abs(m(i, j));
        }
    }
    return s;
}

ReverseEpDetail reverse_ep_detail(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  double alpha, double clip_eps) {
    ReverseEpDetail out;
    const DensityMatrix added = quantum_add(rho, sigma, alpha);
    const DensityMatrix mixture(alpha * rho.matrix() + (1.0 - alpha) * sigma.matrix());

    const EntropyValue s_mix = von_neumann_entropy(mixture, clip_eps);
    const EntropyValue s_add = von_neumann_entropy(added, clip_eps);
    const RelEntropyValue rel = relative_entropy(added, mixture, clip_eps);

    out.mixture_entropy = s_mix.value;
    out.addition_entropy = s_add.value;
    out.relative_term = rel.value;
    out.clip_events = s_mix.clip_events + s_add.clip_events;
    out.rel_entropy_infinite = rel.infinite;
    out.residual = rel.infinite ? std::numeric_limits<double>::infinity()
                                : std::abs(s_mix.value - rel.value - s_add.value);
    return out;
}

double reverse_ep_residual(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha) {
    return reverse_ep_detail(rho, sigma, alpha).residual;
}

TraceTermDetail commutator_trace_detail(const DensityMatrix& rho, const DensityMatrix& sigma,
                                        double alpha, double clip_eps) {
    TraceTermDetail out;
    const Eigen::MatrixXcd mix = alpha * rho.matrix() + (1.0 - alpha) * sigma.matrix();
    const Eigen::MatrixXcd log_mix = matrix_log(mix, clip_eps, &out.clip_events);
    const Eigen::MatrixXcd comm = commutator(rho.matrix(), sigma.matrix());
    out.value = std::abs((comm * log_mix).trace());
    return out;
}

double commutator_trace_term(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha) {
    return commutator_trace_detail(rho, sigma, alpha).value;
}

double log_mixture_commutation_residual(const DensityMatrix& rho, const DensityMatrix& sigma,
                                        double alpha, double clip_eps) {
    const Eigen::MatrixXcd mix = alpha * rho.matrix() + (1.0 - alpha) * sigma.matrix();
    const Eigen::MatrixXcd k = matrix_log(mix, clip_eps);
    const Eigen::MatrixXcd resid = alpha * commutator(k, rho.matrix()) +
                                   (1.0 - alpha) * commutator(k, sigma.matrix());
    return resid.cwiseAbs().maxCoeff();
}

double pinsker_margin(const DensityMatrix& rho, const DensityMatrix& tau) {
    const RelEntropyValue rel = relative_entropy(rho, tau);
    if (rel.infinite) {
        return std::numeric_limits<double>::infinity();
    }
    const double tn = trace_norm(rho.matrix() - tau.matrix());
    return rel.value - 0.5 * tn * tn;
}

}  // namespace qadd
