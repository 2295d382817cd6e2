#pragma once

// Block structure of the gate-set group action on the space of operators.
//
// In the Weyl transfer basis the group representation splits into three
// invariant blocks: the identity word, the diagonal (Z-only) words, and the
// off-diagonal remainder, with dimensions 1, D-1, D^2-D. Twirling a channel
// over the group therefore compresses it to one decay rate per block,
//   eta_block = tr(Gamma Pi_block) / dim(block),
// and the blocks are honest irreducible components exactly when the group
// average of the squared transfer character equals 3. character_suite()
// certifies that condition with exact integer arithmetic.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrb/channels.hpp"
#include "qrb/gateset.hpp"
#include "qrb/weyl.hpp"

namespace qrb {

// ---------------------------------------------------------------- projectors

struct IrrepProjectors {
    int d = 0;
    int n = 0;
    int dim = 0;                  // D = d^n
    std::vector<int> block;       // per Weyl word: 0 trivial, 1 diagonal, 2 off-diagonal

    int block_dim(int which) const {
        if (which == 0) return 1;
        if (which == 1) return dim - 1;
        return dim * dim - dim;
    }

    CMat matrix(int which) const {
        CMat p = CMat::Zero(block.size(), block.size());
        for (std::size_t k = 0; k < block.size(); ++k)
            if (block[k] == which) p(k, k) = 1.0;
        return p;
    }
};

inline IrrepProjectors build_projectors(int d, int n = 1) {
    const WeylBasis basis(d, n);  // enforces d^n <= 9
    IrrepProjectors p;
    p.d = d;
    p.n = n;
    p.dim = basis.dim;
    p.block.resize(basis.size());
    for (int k = 0; k < basis.size(); ++k)
        p.block[k] = basis.is_identity_word(k) ? 0 : (basis.is_diagonal_word(k) ? 1 : 2);
    return p;
}

// Largest transfer-matrix element connecting different blocks; zero for any
// operator commuting with all three projectors.
inline double block_leakage(const CMat& pl, const IrrepProjectors& p) {
    double worst = 0.0;
    for (Eigen::Index r = 0; r < pl.rows(); ++r)
        for (Eigen::Index c = 0; c < pl.cols(); ++c)
            if (p.block[static_cast<std::size_t>(r)] != p.block[static_cast<std::size_t>(c)])
                worst = std::max(worst, std::abs(pl(r, c)));
    return worst;
}

// -------------------------------------------------------------------- twirl

struct TwirledChannel {
    double eta_trivial = 0.0;
    double eta_diag = 0.0;
    double eta_offdiag = 0.0;
    double max_imag = 0.0;  // imaginary residue of the block traces, diagnostics

    double eta(int which) const {
        return which == 0 ? eta_trivial : which == 1 ? eta_diag : eta_offdiag;
    }
};

inline TwirledChannel twirl(const CMat& pl, const IrrepProjectors& p) {
    if (pl.rows() != static_cast<Eigen::Index>(p.block.size()))
        throw std::invalid_argument("twirl: transfer matrix does not match projectors");
    Cx sums[3] = {0.0, 0.0, 0.0};
    for (Eigen::Index k = 0; k < pl.rows(); ++k) sums[p.block[static_cast<std::size_t>(k)]] += pl(k, k);
    TwirledChannel t;
    t.eta_trivial = sums[0].real();
    t.eta_diag = sums[1].real() / p.block_dim(1);
    t.eta_offdiag = sums[2].real() / p.block_dim(2);
    t.max_imag = std::max({std::abs(sums[0].imag()), std::abs(sums[1].imag()) / p.block_dim(1),
                           std::abs(sums[2].imag()) / p.block_dim(2)});
    return t;
}

// The twirled channel as a transfer matrix, sum of eta-weighted projectors.
inline CMat twirl_matrix(const TwirledChannel& t, const IrrepProjectors& p) {
    CMat m = CMat::Zero(p.block.size(), p.block.size());
    for (std::size_t k = 0; k < p.block.size(); ++k) m(k, k) = t.eta(p.block[k]);
    return m;
}

// Average gate fidelity from the three decay rates,
//   F = (D * (eta_I + (D-1) eta_0 + (D^2-D) eta_+) + D^2) / (D^2 (D+1)).
inline double agf_from_eta(const TwirledChannel& t, int dim) {
    const double D = static_cast<double>(dim);
    const double tr = t.eta_trivial + (D - 1.0) * t.eta_diag + (D * D - D) * t.eta_offdiag;
    return (D * tr + D * D) / (D * D * (D + 1.0));
}

// Norms of a state's coordinates inside each block. The computational basis
// state |0> has no off-diagonal component; the uniform superposition has no
// diagonal component. These two states therefore each isolate one decay.
struct StateProjections {
    double norm_trivial = 0.0;
    double norm_diag = 0.0;
    double norm_offdiag = 0.0;
};

inline StateProjections state_projections(const CMat& rho, const WeylBasis& basis,
                                          const IrrepProjectors& p) {
    const CVec c = pl_coords(rho, basis);
    double acc[3] = {0.0, 0.0, 0.0};
    for (Eigen::Index k = 0; k < c.size(); ++k) acc[p.block[static_cast<std::size_t>(k)]] += std::norm(c(k));
    return {std::sqrt(acc[0]), std::sqrt(acc[1]), std::sqrt(acc[2])};
}

// ------------------------------------------------------------ transfer reps

inline CMat pl_of_unitary(const CMat& u, const WeylBasis& basis) {
    return pauli_liouville(unitary_channel(u), basis);
}

// Group-average twirl by explicit summation, the oracle the projector-based
// twirl is checked against: avg_g Gamma(g)^dagger Lambda Gamma(g).
inline CMat group_average_twirl(const CMat& pl, const std::vector<CMat>& group_pl) {
    if (group_pl.empty()) throw std::invalid_argument("group_average_twirl: empty group");
    CMat acc = CMat::Zero(pl.rows(), pl.cols());
    for (const CMat& g : group_pl) acc += g.adjoint() * pl * g;
    return acc / static_cast<double>(group_pl.size());
}

// -------------------------------------------------------------- Bell numbers

// B_r via the cycle-type expansion of the r-th moment of fixed points over
// the symmetric group S_r: sum over partitions of r of class_size * c1^r,
// divided by r!.
inline std::vector<long long> bell_numbers_by_partition(int max_r) {
    std::vector<long long> out;
    for (int r = 1; r <= max_r; ++r) {
        long long factorial = 1;
        for (int j = 2; j <= r; ++j) factorial *= j;

        long long total = 0;
        // Enumerate partitions of r as non-increasing part lists.
        std::vector<int> parts;
        const std::function<void(int, int)> rec = [&](int remaining, int max_part) {
            if (remaining == 0) {
                std::map<int, int> mult;
                for (int x : parts) ++mult[x];
                long long denom = 1;
                for (const auto& [l, c] : mult) {
                    for (int e = 0; e < c; ++e) denom *= l;
                    for (int e = 2; e <= c; ++e) denom *= e;
                }
                const long long class_size = factorial / denom;
                long long fixed_pow = 1;
                const long long c1 = mult.count(1) ? mult.at(1) : 0;
                for (int e = 0; e < r; ++e) fixed_pow *= c1;
                total += class_size * fixed_pow;
                return;
            }
            for (int next = std::min(remaining, max_part); next >= 1; --next) {
                parts.push_back(next);
                rec(remaining - next, next);
                parts.pop_back();
            }
        };
        rec(r, r);
        if (total % factorial != 0)
            throw std::logic_error("bell_numbers_by_partition: moment sum not divisible by r!");
        out.push_back(total / factorial);
    }
    return out;
}

// ---------------------------------------------------------- character suite

// Exact verification data for the three-block decomposition. For each
// permutation cycle type, the average over the diagonal subgroup of the
// squared transfer character |tr gamma|^4 is an integer: the number of
// exponent-difference patterns annihilating every diagonal generator. The
// decomposition into three multiplicity-one blocks holds iff the group
// average of those integers is 3.
struct CharacterClassRow {
    std::string cycle_type;       // e.g. "1+1+1", "2+1"
    int fixed_points = 0;
    long long class_size = 0;
    long long exact_average = 0;  // integer average of |tr gamma|^4 over the class
    long long maximal_expected = 0;  // f (2 f - 1)
};

struct CharacterReport {
    int d = 0;
    Residue phase_order = 0;
    DiagMode mode = DiagMode::maximal;
    std::vector<CharacterClassRow> classes;
    long long average_numerator = 0;    // sum over permutations of class averages
    long long average_denominator = 0;  // d!
    bool decomposition_holds = false;   // average == 3
    bool matches_maximal_formula = false;
    double enumerated_average = -1.0;   // numeric |tr gamma|^4 average, -1 if skipped
};

namespace detail {

inline std::string cycle_type_of(const Permutation& p) {
    std::vector<bool> done(p.size(), false);
    std::vector<int> lens;
    for (int i = 0; i < p.size(); ++i) {
        if (done[i]) continue;
        int len = 0, j = i;
        do {
            done[j] = true;
            j = p(j);
            ++len;
        } while (j != i);
        lens.push_back(len);
    }
    std::sort(lens.rbegin(), lens.rend());
    std::string s;
    for (std::size_t k = 0; k < lens.size(); ++k) s += (k ? "+" : "") + std::to_string(lens[k]);
    return s;
}

// Number of (i,j,u,v) in J^4 whose exponent pattern kills every generator:
// sum_x c_x g[x] = 0 mod order for c = e_i - e_j + e_u - e_v.
inline long long annihilating_quadruples(const std::vector<int>& fixed,
                                         const std::vector<ResidueVector>& gens, Residue order) {
    long long count = 0;
    for (int i : fixed)
        for (int j : fixed)
            for (int u : fixed)
                for (int v : fixed) {
                    bool ok = true;
                    for (const auto& g : gens) {
                        const Residue s = mod_reduce(g[i] - g[j] + g[u] - g[v], order);
                        if (s != 0) {
                            ok = false;
                            break;
                        }
                    }
                    count += ok;
                }
    return count;
}

}  // namespace detail

inline CharacterReport character_suite(const GateSetSpec& s, bool enumerate_numeric = false) {
    CharacterReport rep;
    rep.d = s.d;
    rep.phase_order = s.phase_order;
    rep.mode = s.mode;

    std::map<std::string, CharacterClassRow> by_type;
    long long numerator = 0, perms = 0;
    for (const Permutation& p : all_permutations(s.d)) {
        ++perms;
        std::vector<int> fixed;
        for (int i = 0; i < s.d; ++i)
            if (p(i) == i) fixed.push_back(i);
        const long long avg = detail::annihilating_quadruples(fixed, s.diag_generators, s.phase_order);
        numerator += avg;

        const std::string type = detail::cycle_type_of(p);
        auto [it, fresh] = by_type.try_emplace(type);
        CharacterClassRow& row = it->second;
        if (fresh) {
            row.cycle_type = type;
            row.fixed_points = static_cast<int>(fixed.size());
            row.exact_average = avg;
            const long long f = static_cast<long long>(fixed.size());
            row.maximal_expected = f * (2 * f - 1);
        } else if (row.exact_average != avg) {
            throw std::logic_error("character_suite: class average differs within a cycle type");
        }
        ++row.class_size;
    }

    rep.average_numerator = numerator;
    rep.average_denominator = perms;
    rep.decomposition_holds = (numerator == 3 * perms);
    rep.matches_maximal_formula = true;
    for (const auto& [type, row] : by_type) {
        rep.classes.push_back(row);
        rep.matches_maximal_formula &= (row.exact_average == row.maximal_expected);
    }

    if (enumerate_numeric) {
        // Average of |tr gamma|^4 over the whole group, from the matrices.
        double acc = 0.0;
        const std::vector<GroupElement> all = enumerate_group(s);
        for (const GroupElement& g : all) {
            const ResidueVector w = s.phase_vector(g);
            Cx tr = 0.0;
            for (int i = 0; i < s.d; ++i)
                if (g.sigma(i) == i) tr += root_of_unity(s.phase_order, w[i]);
            const double sq = std::norm(tr);
            acc += sq * sq;
        }
        rep.enumerated_average = acc / static_cast<double>(all.size());
    }
    return rep;
}

}  // namespace qrb
