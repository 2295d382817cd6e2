#pragma once

// Quantum channels in three interchangeable forms: Kraus sets, column-stacked
// superoperators, and Pauli-Liouville transfer matrices over the Weyl basis.
//
// Conventions, fixed once here and relied on everywhere else:
//   vec(rho)[j*D + i] = rho(i, j)                    (column stacking)
//   vec(A rho B)      = (B^T kron A) vec(rho)
//   kraus_to_super    = sum_k conj(A_k) kron A_k
//   Gamma_kl          = tr(W_k^dagger E(W_l)) / D    (so Gamma(identity) = I)
//   state coords      c_k = tr(W_k^dagger rho) / sqrt(D)
// With these, <<c(rho), Gamma c(sigma)>> = tr(rho^dagger E(sigma)), and the
// survival probabilities of the simulator are plain inner products.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrb/rng.hpp"
#include "qrb/weyl.hpp"

namespace qrb {

// ------------------------------------------------------------ vectorisation

inline CVec vectorise(const CMat& rho) {
    return Eigen::Map<const CVec>(rho.data(), rho.size());
}

inline CMat unvectorise(const CVec& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim)
        throw std::invalid_argument("unvectorise: length is not dim^2");
    return Eigen::Map<const CMat>(v.data(), dim, dim);
}

inline CVec apply(const CMat& superop, const CVec& v) { return superop * v; }

// ------------------------------------------------------------------- states

inline CVec basis_state(int dim, int k) {
    CVec v = CVec::Zero(dim);
    v(k) = 1.0;
    return v;
}

// F^{tensor n} |0...0>, the uniform superposition.
inline CVec plus_state(int dim) {
    return CVec::Constant(dim, Cx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

inline CMat density(const CVec& psi) { return psi * psi.adjoint(); }

struct StateCheck {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;
};

inline StateCheck check_density(const CMat& rho) {
    StateCheck c;
    c.hermiticity_defect = (rho - rho.adjoint()).norm();
    c.trace_defect = std::abs(rho.trace() - Cx(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<CMat> es((rho + rho.adjoint()) / 2.0);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

// ------------------------------------------------------------------- Kraus

struct KrausSet {
    int dim = 0;
    std::vector<CMat> ops;

    // Frobenius norm of sum A^dagger A - I.
    double completeness_defect() const {
        CMat s = CMat::Zero(dim, dim);
        for (const CMat& a : ops) s += a.adjoint() * a;
        return (s - CMat::Identity(dim, dim)).norm();
    }
};

inline CMat kraus_to_super(const KrausSet& k) {
    const int D = k.dim;
    CMat s = CMat::Zero(D * D, D * D);
    for (const CMat& a : k.ops) s += kron(a.conjugate(), a);
    return s;
}

inline CMat unitary_channel(const CMat& u) {
    return kron(u.conjugate(), u);
}

// Choi matrix by reshuffling the superoperator:
//   C[(i*D+a), (j*D+b)] = E(|i><j|)_{ab} = S[(b*D+a), (j*D+i)].
// Complete positivity of the channel is positive semidefiniteness of C.
inline CMat choi_matrix(const CMat& superop) {
    const int D = static_cast<int>(std::lround(std::sqrt(static_cast<double>(superop.rows()))));
    if (static_cast<Eigen::Index>(D) * D != superop.rows() || superop.rows() != superop.cols())
        throw std::invalid_argument("choi_matrix: superoperator must be D^2 x D^2");
    CMat c(D * D, D * D);
    for (int i = 0; i < D; ++i)
        for (int a = 0; a < D; ++a)
            for (int j = 0; j < D; ++j)
                for (int b = 0; b < D; ++b)
                    c(i * D + a, j * D + b) = superop(b * D + a, j * D + i);
    return c;
}

inline double choi_min_eigenvalue(const CMat& superop) {
    const CMat c = choi_matrix(superop);
    Eigen::SelfAdjointEigenSolver<CMat> es((c + c.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

// --------------------------------------------------------- Pauli-Liouville

// Transfer matrix over the Weyl basis: Gamma = V^dagger S V / D with V the
// stacked vec(W_k) columns.
inline CMat pauli_liouville(const CMat& superop, const WeylBasis& basis) {
    const CMat& v = basis.vec_columns();
    return (v.adjoint() * superop * v) / static_cast<double>(basis.dim);
}

// Coordinates of a density operator in the same normalisation.
inline CVec pl_coords(const CMat& rho, const WeylBasis& basis) {
    const CMat& v = basis.vec_columns();
    return v.adjoint() * vectorise(rho) / std::sqrt(static_cast<double>(basis.dim));
}

// ------------------------------------------------------------------ fidelity

// Average gate fidelity of a channel against an ideal unitary,
//   F = (Re tr(S_U^dagger S) + D) / (D^2 + D).
inline double average_gate_fidelity(const CMat& superop, const CMat& ideal_unitary) {
    const int D = static_cast<int>(ideal_unitary.rows());
    const CMat su = unitary_channel(ideal_unitary);
    const double overlap = (su.adjoint() * superop).trace().real();
    return (overlap + D) / (static_cast<double>(D) * D + D);
}

// Same quantity for a noise channel alone (ideal = identity).
inline double average_channel_fidelity(const CMat& superop) {
    const int D = static_cast<int>(std::lround(std::sqrt(static_cast<double>(superop.rows()))));
    return (superop.trace().real() + D) / (static_cast<double>(D) * D + D);
}

// -------------------------------------------------------------- noise models

enum class NoiseKind { none, depolarizing, amplitude_damping, phase_damping, random_cptp, composite };

// A serialisable recipe for a noise channel. `composite` composes factors in
// listed order (factors[0] acts first). For random_cptp, `identity_mix` w
// blends toward the identity: E = w * Id + (1 - w) * E_random, which is how a
// target average fidelity is dialled in.
struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double param = 0.0;
    std::uint64_t seed = 0;
    int kraus_rank = 0;  // 0 means full rank D^2
    double identity_mix = 0.0;
    std::vector<NoiseModel> factors;

    static NoiseModel none() { return {}; }
    static NoiseModel depolarizing(double p) { return {NoiseKind::depolarizing, p, 0, 0, 0.0, {}}; }
    static NoiseModel amplitude_damping(double g) { return {NoiseKind::amplitude_damping, g, 0, 0, 0.0, {}}; }
    static NoiseModel phase_damping(double l) { return {NoiseKind::phase_damping, l, 0, 0, 0.0, {}}; }
    static NoiseModel random_cptp(std::uint64_t seed, int rank = 0, double identity_mix = 0.0) {
        return {NoiseKind::random_cptp, 0.0, seed, rank, identity_mix, {}};
    }
    static NoiseModel composite(std::vector<NoiseModel> fs) {
        NoiseModel m;
        m.kind = NoiseKind::composite;
        m.factors = std::move(fs);
        return m;
    }
};

// Haar-ish random CPTP channel from a QR-orthonormalised Gaussian isometry
// (Stinespring dilation with an environment of size `rank`).
inline KrausSet random_cptp_kraus(int dim, int rank, std::uint64_t seed) {
    if (rank < 1 || rank > dim * dim)
        throw std::invalid_argument("random_cptp: rank must lie in [1, D^2]");
    Rng rng(derive_seed(seed, 0xC4A5u));
    CMat g(dim * rank, dim);
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = Cx(rng.normal(), rng.normal());
    Eigen::HouseholderQR<CMat> qr(g);
    const CMat q = qr.householderQ() * CMat::Identity(dim * rank, dim);
    KrausSet k;
    k.dim = dim;
    for (int e = 0; e < rank; ++e) k.ops.push_back(q.block(e * dim, 0, dim, dim));
    return k;
}

inline KrausSet compile_noise(const NoiseModel& m, int dim) {
    KrausSet k;
    k.dim = dim;
    switch (m.kind) {
        case NoiseKind::none:
            k.ops.push_back(CMat::Identity(dim, dim));
            return k;
        case NoiseKind::depolarizing: {
            const double p = m.param;
            if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing: p must lie in [0,1]");
            // (1-p) rho + p I/D as a Weyl mixture.
            const WeylBasis basis(dim, 1);
            const double dd = static_cast<double>(dim) * dim;
            for (int w = 0; w < basis.size(); ++w) {
                const double c = (w == 0) ? 1.0 - p + p / dd : p / dd;
                k.ops.push_back(std::sqrt(c) * basis.op(w));
            }
            return k;
        }
        case NoiseKind::amplitude_damping: {
            const double g = m.param;
            if (g < 0.0 || g > 1.0) throw std::invalid_argument("amplitude_damping: gamma must lie in [0,1]");
            CMat k0 = CMat::Identity(dim, dim);
            for (int j = 1; j < dim; ++j) k0(j, j) = std::sqrt(1.0 - g);
            k.ops.push_back(k0);
            for (int j = 1; j < dim; ++j) {
                CMat jump = CMat::Zero(dim, dim);
                jump(j - 1, j) = std::sqrt(g);
                k.ops.push_back(jump);
            }
            return k;
        }
        case NoiseKind::phase_damping: {
            const double l = m.param;
            if (l < 0.0 || l > 1.0) throw std::invalid_argument("phase_damping: lambda must lie in [0,1]");
            k.ops.push_back(std::sqrt(1.0 - l) * CMat::Identity(dim, dim));
            for (int j = 0; j < dim; ++j) {
                CMat proj = CMat::Zero(dim, dim);
                proj(j, j) = std::sqrt(l);
                k.ops.push_back(proj);
            }
            return k;
        }
        case NoiseKind::random_cptp: {
            const int rank = (m.kraus_rank == 0) ? dim * dim : m.kraus_rank;
            KrausSet base = random_cptp_kraus(dim, rank, m.seed);
            const double w = m.identity_mix;
            if (w < 0.0 || w > 1.0) throw std::invalid_argument("random_cptp: identity_mix must lie in [0,1]");
            if (w == 0.0) return base;
            k.ops.push_back(std::sqrt(w) * CMat::Identity(dim, dim));
            for (CMat& a : base.ops) k.ops.push_back(std::sqrt(1.0 - w) * a);
            return k;
        }
        case NoiseKind::composite: {
            if (m.factors.empty()) throw std::invalid_argument("composite: needs at least one factor");
            k = compile_noise(m.factors.front(), dim);
            for (std::size_t f = 1; f < m.factors.size(); ++f) {
                const KrausSet next = compile_noise(m.factors[f], dim);
                if (k.ops.size() * next.ops.size() > 20000)
                    throw std::invalid_argument("composite: Kraus product too large");
                std::vector<CMat> prod;
                prod.reserve(k.ops.size() * next.ops.size());
                for (const CMat& b : next.ops)
                    for (const CMat& a : k.ops) prod.push_back(b * a);
                k.ops = std::move(prod);
            }
            return k;
        }
    }
    throw std::logic_error("compile_noise: unreachable");
}

inline std::string describe(const NoiseModel& m) {
    switch (m.kind) {
        case NoiseKind::none: return "none";
        case NoiseKind::depolarizing: return "depolarizing(" + std::to_string(m.param) + ")";
        case NoiseKind::amplitude_damping: return "amplitude_damping(" + std::to_string(m.param) + ")";
        case NoiseKind::phase_damping: return "phase_damping(" + std::to_string(m.param) + ")";
        case NoiseKind::random_cptp:
            return "random_cptp(seed=" + std::to_string(m.seed) + ",rank=" + std::to_string(m.kraus_rank) +
                   ",identity_mix=" + std::to_string(m.identity_mix) + ")";
        case NoiseKind::composite: {
            std::string s = "composite[";
            for (std::size_t i = 0; i < m.factors.size(); ++i)
                s += (i ? " then " : "") + describe(m.factors[i]);
            return s + "]";
        }
    }
    return "?";
}

}  // namespace qrb
