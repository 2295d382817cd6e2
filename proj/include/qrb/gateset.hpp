#pragma once

// The benchmarking gate set: monomial unitaries P(sigma) * Delta(w), where
// P(sigma) permutes basis states and Delta(w) = diag(omega^w_0, ..., omega^w_{d-1})
// for omega a primitive root of unity of order `phase_order`. Group elements
// multiply by the semidirect rule
//
//   P(s1) D(w1) P(s2) D(w2) = P(s1 s2) D(w1 o s2) D(w2),   (w o s)[i] = w[s(i)]
//
// so all group algebra happens on integer exponent vectors, exactly. The
// diagonal subgroup is either the full lattice (Z_o)^d ("maximal") or the
// subgroup generated by the permutation orbit of the defining T-gate phases
// ("minimal", via minimal_generators over Z_o).

#include <Eigen/Dense>

#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qrb/residue.hpp"
#include "qrb/rng.hpp"

namespace qrb {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline Cx root_of_unity(Residue order, Residue power) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::polar(1.0, two_pi * static_cast<double>(mod_reduce(power, order)) / static_cast<double>(order));
}

// ---------------------------------------------------------------- Permutation

struct Permutation {
    std::vector<int> img;  // img[i] is the image of i

    Permutation() = default;
    explicit Permutation(std::vector<int> images) : img(std::move(images)) {
        std::vector<bool> seen(img.size(), false);
        for (int v : img) {
            if (v < 0 || v >= static_cast<int>(img.size()) || seen[v])
                throw std::invalid_argument("Permutation: images are not a bijection");
            seen[v] = true;
        }
    }
    static Permutation identity(int d) {
        std::vector<int> v(d);
        std::iota(v.begin(), v.end(), 0);
        return Permutation(std::move(v));
    }

    int size() const { return static_cast<int>(img.size()); }
    int operator()(int i) const { return img[i]; }

    // (a * b)(i) = a(b(i)), matching matrix order P(a) P(b) = P(a * b).
    friend Permutation operator*(const Permutation& a, const Permutation& b) {
        std::vector<int> v(a.img.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.img[b.img[i]];
        Permutation p;
        p.img = std::move(v);
        return p;
    }
    Permutation inverse() const {
        std::vector<int> v(img.size());
        for (std::size_t i = 0; i < img.size(); ++i) v[img[i]] = static_cast<int>(i);
        Permutation p;
        p.img = std::move(v);
        return p;
    }
    bool is_identity() const {
        for (std::size_t i = 0; i < img.size(); ++i)
            if (img[i] != static_cast<int>(i)) return false;
        return true;
    }
    bool operator==(const Permutation& o) const { return img == o.img; }

    int fixed_points() const {
        int f = 0;
        for (std::size_t i = 0; i < img.size(); ++i) f += (img[i] == static_cast<int>(i));
        return f;
    }

    std::string cycle_string() const {
        std::string out;
        std::vector<bool> done(img.size(), false);
        for (std::size_t i = 0; i < img.size(); ++i) {
            if (done[i] || img[i] == static_cast<int>(i)) continue;
            out += '(';
            std::size_t j = i;
            bool first = true;
            do {
                if (!first) out += ' ';
                out += std::to_string(j);
                done[j] = true;
                j = static_cast<std::size_t>(img[j]);
                first = false;
            } while (j != i);
            out += ')';
        }
        return out.empty() ? "e" : out;
    }
};

// All permutations of [d], ordered lexicographically by image tuple. This is
// the column order used when reducing phase orbits, so it is pinned here.
inline std::vector<Permutation> all_permutations(int d) {
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation(idx));
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

// --------------------------------------------------------------- Gate set

enum class DiagMode { maximal, minimal };

// Phase order of the default T-gate family. Cubing phases need a lift to
// order 9 for d = 3 (and 18 for d = 6); the qubit case follows the two-level
// factor diag(1, omega_8) used in the two-qubit construction, since an
// order-2 diagonal cannot support the three-block decomposition.
inline Residue default_phase_order(int d) {
    if (d == 2) return 8;
    if (d == 3) return 9;
    if (d == 6) return 18;
    return d;
}

inline ResidueVector default_t_phases(int d) {
    const Residue o = default_phase_order(d);
    if (d == 2) return {0, 1};
    ResidueVector t(d);
    for (int j = 0; j < d; ++j) {
        const Residue jj = static_cast<Residue>(j);
        t[j] = mod_reduce(jj * jj * jj, o);
    }
    return t;
}

struct GroupElement {
    Permutation sigma;
    ResidueVector alpha;  // exponents over the diagonal generators
    bool operator==(const GroupElement& o) const { return sigma == o.sigma && alpha == o.alpha; }
};

class GateSetSpec {
  public:
    int d = 0;
    int n = 1;  // qudit count; group algebra below is the single-qudit case
    Residue phase_order = 0;
    DiagMode mode = DiagMode::maximal;
    ResidueVector t_phases;
    std::vector<ResidueVector> diag_generators;  // phase vectors, length d
    std::vector<Residue> diag_orders;            // cyclic order of each generator

    long long diag_subgroup_order() const {
        long long p = 1;
        for (Residue k : diag_orders) p *= k;
        return p;
    }
    long long group_order() const {
        long long f = 1;
        for (int j = 2; j <= d; ++j) f *= j;
        return f * diag_subgroup_order();
    }

    // Phase vector w of Delta = prod_i gen_i^{alpha_i}.
    ResidueVector phase_vector(const GroupElement& g) const {
        if (static_cast<int>(g.alpha.size()) != static_cast<int>(diag_generators.size()))
            throw std::invalid_argument("phase_vector: alpha length mismatch");
        if (mode == DiagMode::maximal) {
            ResidueVector w(g.alpha);
            for (auto& x : w) x = mod_reduce(x, phase_order);
            return w;
        }
        ResidueVector w(d, 0);
        for (std::size_t i = 0; i < diag_generators.size(); ++i)
            for (int j = 0; j < d; ++j)
                w[j] = mod_reduce(w[j] + g.alpha[i] * diag_generators[i][j], phase_order);
        return w;
    }

    // Generator exponents of a phase vector; the inverse of phase_vector.
    // Membership failure means the caller left the diagonal subgroup, which
    // the group operations never do, hence logic_error.
    ResidueVector alpha_from_phase(const ResidueVector& w) const {
        if (mode == DiagMode::maximal) {
            ResidueVector a(w);
            for (auto& x : a) x = mod_reduce(x, phase_order);
            return a;
        }
        const auto it = coords_.find(encode(w));
        if (it == coords_.end())
            throw std::logic_error("alpha_from_phase: phase vector outside the diagonal subgroup");
        return it->second;
    }

    friend GateSetSpec build_gateset(int d, DiagMode mode, std::optional<ResidueVector> t_phases,
                                     std::optional<Residue> order);

  private:
    std::unordered_map<std::uint64_t, ResidueVector> coords_;  // minimal mode only

    std::uint64_t encode(const ResidueVector& w) const {
        std::uint64_t key = 0;
        for (int j = 0; j < d; ++j) key = key * 64 + static_cast<std::uint64_t>(mod_reduce(w[j], phase_order));
        return key;
    }

    void build_minimal_lookup() {
        const std::size_t count = static_cast<std::size_t>(diag_subgroup_order());
        coords_.reserve(count);
        ResidueVector alpha(diag_generators.size(), 0);
        for (std::size_t it = 0; it < count; ++it) {
            GroupElement g{Permutation::identity(d), alpha};
            const ResidueVector w = phase_vector(g);
            if (!coords_.emplace(encode(w), alpha).second)
                throw std::logic_error("gate set generators are not independent");
            // odometer over (Z_k0) x (Z_k1) x ...
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                alpha[i] = mod_reduce(alpha[i] + 1, diag_orders[i]);
                if (alpha[i] != 0) break;
            }
        }
    }
};

inline GateSetSpec build_gateset(int d, DiagMode mode = DiagMode::maximal,
                                 std::optional<ResidueVector> t_phases = std::nullopt,
                                 std::optional<Residue> order = std::nullopt) {
    if (d < 2 || d > 9)
        throw std::invalid_argument("build_gateset: dimension must be between 2 and 9");
    GateSetSpec s;
    s.d = d;
    s.mode = mode;
    s.phase_order = order.value_or(t_phases ? static_cast<Residue>(0) : default_phase_order(d));
    if (t_phases && !order)
        throw std::invalid_argument("build_gateset: explicit t_phases need an explicit order");
    if (s.phase_order < 2)
        throw std::invalid_argument("build_gateset: phase order must be >= 2");
    s.t_phases = t_phases.value_or(default_t_phases(d));
    if (static_cast<int>(s.t_phases.size()) != d)
        throw std::invalid_argument("build_gateset: t_phases must have length d");
    for (auto& x : s.t_phases) x = mod_reduce(x, s.phase_order);
    if (vector_order(s.t_phases, s.phase_order) < 2)
        throw std::invalid_argument("build_gateset: T gate must have order at least 2");

    if (mode == DiagMode::maximal) {
        for (int i = 0; i < d; ++i) {
            ResidueVector e(d, 0);
            e[i] = 1;
            s.diag_generators.push_back(std::move(e));
            s.diag_orders.push_back(s.phase_order);
        }
    } else {
        std::vector<ResidueVector> orbit;
        for (const Permutation& p : all_permutations(d)) {
            ResidueVector w(d);
            for (int i = 0; i < d; ++i) w[i] = s.t_phases[p(i)];
            orbit.push_back(std::move(w));
        }
        GeneratorSet gs = minimal_generators(orbit, s.phase_order);
        s.diag_generators = std::move(gs.generators);
        s.diag_orders = std::move(gs.orders);
        s.build_minimal_lookup();
    }
    return s;
}

// --------------------------------------------------------------- group ops

inline GroupElement identity_element(const GateSetSpec& s) {
    return {Permutation::identity(s.d), ResidueVector(s.diag_generators.size(), 0)};
}

// w o sigma, the phase vector of P(sigma)^dagger Delta(w) P(sigma).
inline ResidueVector conjugate_phases(const ResidueVector& w, const Permutation& sigma) {
    ResidueVector out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[sigma(static_cast<int>(i))];
    return out;
}

inline GroupElement multiply(const GateSetSpec& s, const GroupElement& a, const GroupElement& b) {
    const ResidueVector wa = s.phase_vector(a);
    const ResidueVector wb = s.phase_vector(b);
    ResidueVector w = conjugate_phases(wa, b.sigma);
    for (int j = 0; j < s.d; ++j) w[j] = mod_reduce(w[j] + wb[j], s.phase_order);
    return {a.sigma * b.sigma, s.alpha_from_phase(w)};
}

inline GroupElement inverse(const GateSetSpec& s, const GroupElement& a) {
    const ResidueVector w = s.phase_vector(a);
    const Permutation inv = a.sigma.inverse();
    ResidueVector wi(s.d);
    for (int j = 0; j < s.d; ++j) wi[j] = mod_reduce(-w[inv(j)], s.phase_order);
    return {inv, s.alpha_from_phase(wi)};
}

// Inverse of the product of a gate sequence given in application order
// (g[0] acts first), i.e. the element undoing U = rep(g.back()) ... rep(g[0]).
inline GroupElement invert_sequence(const GateSetSpec& s, const std::vector<GroupElement>& seq) {
    GroupElement total = identity_element(s);
    for (const GroupElement& g : seq) total = multiply(s, g, total);
    return inverse(s, total);
}

inline GroupElement sample_uniform(const GateSetSpec& s, Rng& rng) {
    // Fisher-Yates for the permutation part.
    std::vector<int> img(s.d);
    std::iota(img.begin(), img.end(), 0);
    for (int i = s.d - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i + 1)));
        std::swap(img[i], img[j]);
    }
    ResidueVector alpha(s.diag_generators.size());
    for (std::size_t i = 0; i < alpha.size(); ++i)
        alpha[i] = static_cast<Residue>(rng.uniform_index(static_cast<std::uint64_t>(s.diag_orders[i])));
    return {Permutation(std::move(img)), std::move(alpha)};
}

// Full enumeration; intended for the small groups used in exhaustive checks.
inline std::vector<GroupElement> enumerate_group(const GateSetSpec& s, long long cap = 2000000) {
    const long long total = s.group_order();
    if (total > cap)
        throw std::invalid_argument("enumerate_group: group order " + std::to_string(total) + " exceeds cap");
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(total));
    for (const Permutation& p : all_permutations(s.d)) {
        ResidueVector alpha(s.diag_generators.size(), 0);
        const long long diag = s.diag_subgroup_order();
        for (long long it = 0; it < diag; ++it) {
            out.push_back({p, alpha});
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                alpha[i] = mod_reduce(alpha[i] + 1, s.diag_orders[i]);
                if (alpha[i] != 0) break;
            }
        }
    }
    return out;
}

inline std::string to_string(const GateSetSpec& s, const GroupElement& g) {
    std::ostringstream os;
    os << '(' << g.sigma.cycle_string() << "; ";
    for (std::size_t i = 0; i < g.alpha.size(); ++i) os << (i ? "," : "") << g.alpha[i];
    os << ')';
    return os.str();
}

// ------------------------------------------------------ monomial matrices

// U|i> = omega^{phase_exp[i]} |perm[i]>. Every gate-set element, and every
// product of such, has this shape; circuit algebra stays in exact integers.
struct MonomialOp {
    std::vector<int> perm;
    ResidueVector phase_exp;
    Residue order = 1;

    int dim() const { return static_cast<int>(perm.size()); }

    static MonomialOp identity(int dim, Residue order) {
        MonomialOp m;
        m.perm.resize(dim);
        std::iota(m.perm.begin(), m.perm.end(), 0);
        m.phase_exp.assign(dim, 0);
        m.order = order;
        return m;
    }

    // Matrix product this * other (other acts first).
    MonomialOp after(const MonomialOp& other) const {
        if (dim() != other.dim() || order != other.order)
            throw std::invalid_argument("MonomialOp: incompatible composition");
        MonomialOp out;
        out.order = order;
        out.perm.resize(perm.size());
        out.phase_exp.resize(perm.size());
        for (int i = 0; i < dim(); ++i) {
            const int mid = other.perm[i];
            out.perm[i] = perm[mid];
            out.phase_exp[i] = mod_reduce(other.phase_exp[i] + phase_exp[mid], order);
        }
        return out;
    }

    MonomialOp inverse() const {
        MonomialOp out;
        out.order = order;
        out.perm.resize(perm.size());
        out.phase_exp.resize(perm.size());
        for (int i = 0; i < dim(); ++i) {
            out.perm[perm[i]] = i;
            out.phase_exp[perm[i]] = mod_reduce(-phase_exp[i], order);
        }
        return out;
    }

    CMat to_matrix() const {
        CMat m = CMat::Zero(dim(), dim());
        for (int i = 0; i < dim(); ++i) m(perm[i], i) = root_of_unity(order, phase_exp[i]);
        return m;
    }
};

inline MonomialOp monomial(const GateSetSpec& s, const GroupElement& g) {
    MonomialOp m;
    m.order = s.phase_order;
    m.perm = g.sigma.img;
    m.phase_exp = s.phase_vector(g);
    return m;
}

// P(sigma) Delta(w) as a dense matrix.
inline CMat representative(const GateSetSpec& s, const GroupElement& g) {
    return monomial(s, g).to_matrix();
}

// ------------------------------------------------------------- multi-qudit

inline CMat fourier_matrix(int d) {
    CMat f(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) f(j, k) = norm * root_of_unity(d, static_cast<Residue>(j) * k);
    return f;
}

// Generators of the n-qudit gate set on (C^d)^{tensor n}: one entangling
// CSUM per neighbouring pair, a cyclic shift X on every site, and the T gate
// on site 0. Site 0 is the leftmost tensor factor; basis index
// i = sum_s digit_s * d^{n-1-s}.
struct MultiQuditGenerators {
    int d = 0;
    int n = 0;
    Residue phase_order = 0;
    std::vector<MonomialOp> ops;
    std::vector<std::string> names;
};

inline MultiQuditGenerators multiqudit_generators(int d, int n,
                                                  std::optional<ResidueVector> t_phases = std::nullopt,
                                                  std::optional<Residue> order = std::nullopt) {
    if (d < 2) throw std::invalid_argument("multiqudit_generators: dimension must be >= 2");
    if (n < 2) throw std::invalid_argument("multiqudit_generators: need at least two qudits");
    double dim_check = std::pow(static_cast<double>(d), n);
    if (dim_check > 512.0) throw std::invalid_argument("multiqudit_generators: d^n too large");
    const int D = static_cast<int>(dim_check + 0.5);
    if (t_phases && !order)
        throw std::invalid_argument("multiqudit_generators: explicit t_phases need an explicit order");
    const Residue o = order.value_or(default_phase_order(d));
    ResidueVector t = t_phases.value_or(default_t_phases(d));
    if (static_cast<int>(t.size()) != d)
        throw std::invalid_argument("multiqudit_generators: t_phases must have length d");

    MultiQuditGenerators out;
    out.d = d;
    out.n = n;
    out.phase_order = o;

    const auto digit = [d, n](int index, int site) {
        int rest = index;
        for (int s = n - 1; s > site; --s) rest /= d;
        return rest % d;
    };
    const auto with_digit = [d, n](int index, int site, int value) {
        int weight = 1;
        for (int s = n - 1; s > site; --s) weight *= d;
        const int old = (index / weight) % d;
        return index + (value - old) * weight;
    };

    for (int s = 0; s + 1 < n; ++s) {
        MonomialOp m = MonomialOp::identity(D, o);
        for (int i = 0; i < D; ++i) {
            const int a = digit(i, s), b = digit(i, s + 1);
            m.perm[i] = with_digit(i, s + 1, (a + b) % d);
        }
        out.ops.push_back(std::move(m));
        out.names.push_back("CSUM_" + std::to_string(s) + std::to_string(s + 1));
    }
    for (int s = 0; s < n; ++s) {
        MonomialOp m = MonomialOp::identity(D, o);
        for (int i = 0; i < D; ++i) m.perm[i] = with_digit(i, s, (digit(i, s) + 1) % d);
        out.ops.push_back(std::move(m));
        out.names.push_back("X_" + std::to_string(s));
    }
    {
        MonomialOp m = MonomialOp::identity(D, o);
        for (int i = 0; i < D; ++i) m.phase_exp[i] = t[digit(i, 0)];
        out.ops.push_back(std::move(m));
        out.names.push_back("T_0");
    }
    return out;
}

}  // namespace qrb
