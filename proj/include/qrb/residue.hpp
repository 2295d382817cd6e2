#pragma once

// Linear algebra over the residue ring Z_n.
//
// The central routine is howell_form(), the strong echelon form of Howell
// (1986) as described by Storjohann and Mulders. Over Z_n, row echelon alone
// does not characterise the row span because pivots can be zero divisors; the
// Howell form fixes this by adjoining, for every pivot row, the annihilator
// multiple (n / pivot) * row and re-reducing until closure. The result is a
// canonical representative of the row span: two matrices have equal row span
// over Z_n iff their Howell forms are identical.
//
// minimal_generators() uses the form the way Gaussian elimination is used
// over a field: reduce the matrix whose columns are the input vectors, read
// off the pivot columns, and keep the original columns at those positions as
// generators of the column span. Over Z_n that shortcut can return a
// redundant set (pivots may be zero divisors, and annihilator rows add
// pivots), so the result is certified against the exact span size and, when
// the certificate fails, a genuinely independent basis is rebuilt from the
// prime-power components of the span.

#include <algorithm>
#include <array>
#include <complex>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrb {

using Residue = long long;
using ResidueVector = std::vector<Residue>;

inline Residue mod_reduce(Residue x, Residue n) {
    x %= n;
    return x < 0 ? x + n : x;
}

// Extended gcd over the integers: returns g = gcd(a, b) and coefficients
// with x*a + y*b = g. Inputs may be any integers; g >= 0.
inline Residue egcd(Residue a, Residue b, Residue& x, Residue& y) {
    if (b == 0) {
        x = (a < 0) ? -1 : 1;
        y = 0;
        return a < 0 ? -a : a;
    }
    Residue x1, y1;
    const Residue g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline Residue mod_inverse(Residue a, Residue n) {
    Residue x, y;
    const Residue g = egcd(mod_reduce(a, n), n, x, y);
    if (g != 1) throw std::invalid_argument("mod_inverse: not a unit mod " + std::to_string(n));
    return mod_reduce(x, n);
}

// A unit u mod n with u*a = gcd(a, n) (mod n). Existence is classical: with
// g = gcd(a, n), a/g is invertible mod n/g, and any preimage of that inverse
// that is coprime to n works. The search over the residue class is tiny
// because each step fixes one more prime factor of n.
inline Residue lifting_unit(Residue a, Residue n) {
    a = mod_reduce(a, n);
    if (a == 0) return 1;
    const Residue g = std::gcd(a, n);
    const Residue m = n / g;
    Residue u = (m == 1) ? 1 : mod_inverse(a / g, m);
    while (std::gcd(u, n) != 1) u += m;
    return mod_reduce(u, n);
}

struct ResidueMatrix {
    Residue mod = 0;
    int rows = 0;
    int cols = 0;
    std::vector<Residue> a;  // row-major

    ResidueMatrix() = default;
    ResidueMatrix(int r, int c, Residue n) : mod(n), rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {
        if (n < 2) throw std::invalid_argument("ResidueMatrix: modulus must be >= 2");
        if (r < 0 || c < 0) throw std::invalid_argument("ResidueMatrix: negative shape");
    }
    ResidueMatrix(std::initializer_list<std::initializer_list<Residue>> init, Residue n) {
        mod = n;
        if (n < 2) throw std::invalid_argument("ResidueMatrix: modulus must be >= 2");
        rows = static_cast<int>(init.size());
        cols = rows ? static_cast<int>(init.begin()->size()) : 0;
        a.reserve(static_cast<std::size_t>(rows) * cols);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols)
                throw std::invalid_argument("ResidueMatrix: ragged initializer");
            for (Residue v : row) a.push_back(mod_reduce(v, n));
        }
    }

    Residue& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    Residue at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    ResidueVector row(int r) const {
        return ResidueVector(a.begin() + static_cast<std::size_t>(r) * cols,
                             a.begin() + static_cast<std::size_t>(r + 1) * cols);
    }
    ResidueVector col(int c) const {
        ResidueVector v(rows);
        for (int r = 0; r < rows; ++r) v[r] = at(r, c);
        return v;
    }

    bool operator==(const ResidueMatrix& o) const {
        return mod == o.mod && rows == o.rows && cols == o.cols && a == o.a;
    }
};

namespace detail {

// Weak echelon pass over a list of rows, in place. Pivots are normalised to
// gcd(pivot, mod) by a unit multiple, so every pivot divides the modulus.
// Trailing all-zero rows are dropped. Returns (row, col) pivot positions.
inline std::vector<std::pair<int, int>> echelonise(std::vector<ResidueVector>& R, int cols, Residue n) {
    std::vector<std::pair<int, int>> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < static_cast<int>(R.size()); ++c) {
        int sel = -1;
        for (int i = r; i < static_cast<int>(R.size()); ++i)
            if (R[i][c] != 0) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(R[r], R[sel]);
        for (int i = r + 1; i < static_cast<int>(R.size()); ++i) {
            if (R[i][c] == 0) continue;
            Residue x, y;
            const Residue g = egcd(R[r][c], R[i][c], x, y);
            const Residue af = R[r][c] / g;
            const Residue bf = R[i][c] / g;
            ResidueVector nr(cols), ni(cols);
            for (int j = 0; j < cols; ++j) {
                nr[j] = mod_reduce(x * R[r][j] + y * R[i][j], n);
                ni[j] = mod_reduce(bf * R[r][j] - af * R[i][j], n);
            }
            R[r] = std::move(nr);
            R[i] = std::move(ni);
        }
        const Residue u = lifting_unit(R[r][c], n);
        for (int j = 0; j < cols; ++j) R[r][j] = mod_reduce(u * R[r][j], n);
        pivots.emplace_back(r, c);
        ++r;
    }
    R.resize(r);
    return pivots;
}

}  // namespace detail

// Howell normal form. The output has the same column count and modulus as
// the input and at least as many rows (annihilator rows can outnumber the
// originals); all-zero padding keeps the original row count when the form
// needs fewer rows, matching the shape convention of the reference data.
inline ResidueMatrix howell_form(const ResidueMatrix& m) {
    const Residue n = m.mod;
    std::vector<ResidueVector> R;
    R.reserve(m.rows);
    for (int r = 0; r < m.rows; ++r) {
        ResidueVector row = m.row(r);
        bool nonzero = false;
        for (auto& v : row) {
            v = mod_reduce(v, n);
            nonzero |= (v != 0);
        }
        if (nonzero) R.push_back(std::move(row));
    }

    std::vector<std::pair<int, int>> pivots;
    for (;;) {
        pivots = detail::echelonise(R, m.cols, n);
        // Annihilator rows (n / pivot) * row, reduced against the current
        // pivots. Whatever survives the reduction is genuinely new span
        // content; re-echelonising it strictly shrinks some pivot value, so
        // the closure terminates.
        std::vector<ResidueVector> fresh;
        for (const auto& [pr, pc] : pivots) {
            const Residue p = R[pr][pc];
            if (p == 0 || n % p != 0) throw std::logic_error("howell_form: pivot does not divide modulus");
            const Residue f = n / p;
            ResidueVector ann(m.cols);
            for (int j = 0; j < m.cols; ++j) ann[j] = mod_reduce(f * R[pr][j], n);
            for (const auto& [qr, qc] : pivots) {
                const Residue q = ann[qc] / R[qr][qc];
                if (q == 0) continue;
                for (int j = 0; j < m.cols; ++j) ann[j] = mod_reduce(ann[j] - q * R[qr][j], n);
            }
            if (std::any_of(ann.begin(), ann.end(), [](Residue v) { return v != 0; }))
                fresh.push_back(std::move(ann));
        }
        if (fresh.empty()) break;
        for (auto& row : fresh) R.push_back(std::move(row));
    }

    // Reduce entries above each pivot into [0, pivot).
    for (const auto& [pr, pc] : pivots) {
        const Residue p = R[pr][pc];
        for (int k = 0; k < pr; ++k) {
            const Residue q = R[k][pc] / p;
            if (q == 0) continue;
            for (int j = 0; j < m.cols; ++j) R[k][j] = mod_reduce(R[k][j] - q * R[pr][j], n);
        }
    }

    const int out_rows = std::max<int>(m.rows, static_cast<int>(R.size()));
    ResidueMatrix out(out_rows, m.cols, n);
    for (int r = 0; r < static_cast<int>(R.size()); ++r)
        for (int c = 0; c < m.cols; ++c) out.at(r, c) = R[r][c];
    return out;
}

// Additive order of v in (Z_n)^len: the least r >= 1 with r*v = 0. Computed
// from gcds, with order(0) = 1.
inline Residue vector_order(const ResidueVector& v, Residue n) {
    if (n < 2) throw std::invalid_argument("vector_order: modulus must be >= 2");
    Residue g = n;
    for (Residue x : v) g = std::gcd(g, mod_reduce(x, n));
    return n / g;
}

struct GeneratorSet {
    Residue mod = 0;
    std::vector<ResidueVector> generators;
    std::vector<Residue> orders;
    std::vector<int> pivot_columns;  // input positions carrying the canonical form's pivots
};

// Number of elements in the subgroup of (Z_n)^L generated by the inputs.
// Read off the Howell form of the matrix whose rows are the inputs: every
// span element is uniquely sum_i c_i h_i with 0 <= c_i < n / p_i, where p_i
// is the leading entry of row i, so the size is the product of those ranges.
inline long long span_size(const std::vector<ResidueVector>& vectors, Residue n) {
    if (n < 2) throw std::invalid_argument("span_size: modulus must be >= 2");
    if (vectors.empty()) return 1;
    const int L = static_cast<int>(vectors.front().size());
    ResidueMatrix m(static_cast<int>(vectors.size()), L, n);
    for (int r = 0; r < m.rows; ++r) {
        if (static_cast<int>(vectors[r].size()) != L)
            throw std::invalid_argument("span_size: inputs must share a length");
        for (int c = 0; c < L; ++c) m.at(r, c) = mod_reduce(vectors[r][c], n);
    }
    const ResidueMatrix h = howell_form(m);
    long long count = 1;
    for (int r = 0; r < h.rows; ++r) {
        for (int c = 0; c < h.cols; ++c) {
            if (h.at(r, c) != 0) {
                count *= n / h.at(r, c);
                break;
            }
        }
    }
    return count;
}

namespace detail {

// Multiplicity of the prime p in gcd(x, p^e) for x taken mod p^e, so
// valuation(0) = e.
inline int p_valuation(Residue x, Residue p, int e) {
    int v = 0;
    while (v < e && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

// Independent cyclic generators of the p-primary component of the subgroup
// of (Z_n)^L generated by the inputs, where q = p^e is the full power of p
// dividing n. The component is lam * S for the idempotent lam (1 mod q,
// 0 mod n/q), so every working row stays a multiple of n/q and integer
// coefficients act on it purely through their residue mod q. Gaussian
// elimination with pivots of minimal p-adic valuation then yields rows of
// order q / p^v that vanish at the pivot columns of all rows extracted
// before them, which makes them independent; the orders come out
// non-increasing.
inline void primary_component_basis(const std::vector<ResidueVector>& inputs, Residue n, Residue p,
                                    Residue q, int e, std::vector<ResidueVector>& gens,
                                    std::vector<Residue>& orders) {
    const Residue m = n / q;
    const Residue lam = (m == 1) ? 1 : mod_reduce(m * mod_inverse(m % q, q), n);
    const std::size_t L = inputs.front().size();
    std::vector<ResidueVector> rows;
    for (const auto& v : inputs) {
        ResidueVector r(L);
        bool nonzero = false;
        for (std::size_t j = 0; j < L; ++j) {
            r[j] = mod_reduce(lam * mod_reduce(v[j], n), n);
            nonzero |= (r[j] != 0);
        }
        if (nonzero) rows.push_back(std::move(r));
    }
    for (;;) {
        int bi = -1, bj = -1, bv = e;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i)
            for (int j = 0; j < static_cast<int>(L); ++j) {
                const int v = p_valuation(mod_reduce(rows[i][j], q), p, e);
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        Residue pv = 1;
        for (int t = 0; t < bv; ++t) pv *= p;
        const Residue unit = mod_reduce(rows[bi][bj], q) / pv;
        const Residue uinv = mod_inverse(unit, q);
        for (auto& x : rows[bi]) x = mod_reduce(x * uinv, n);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == bi) continue;
            const Residue c = mod_reduce(rows[i][bj], q) / pv;
            if (c == 0) continue;
            for (std::size_t j = 0; j < L; ++j)
                rows[i][j] = mod_reduce(rows[i][j] - c * rows[bi][j], n);
        }
        gens.push_back(rows[bi]);
        orders.push_back(q / pv);
        rows.erase(rows.begin() + bi);
    }
}

}  // namespace detail

// Extracts an independent generating set of the subgroup of (Z_n)^L spanned
// by the inputs, so the subgroup is exactly the direct product of cyclic
// groups of the returned orders. The inputs form the columns of a matrix,
// the matrix is Howell-reduced, and the original columns at the pivot
// positions are kept when they certify as a basis (they span the subgroup
// and their order product equals its size). When that shortcut fails, the
// basis is rebuilt from the prime-power components of the span and merged
// back into invariant factors, largest order first. An all-zero input list
// yields no generators.
inline GeneratorSet minimal_generators(const std::vector<ResidueVector>& vectors, Residue n) {
    GeneratorSet out;
    out.mod = n;
    if (vectors.empty()) return out;
    const int L = static_cast<int>(vectors.front().size());
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != L)
            throw std::invalid_argument("minimal_generators: inputs must share a length");

    ResidueMatrix m(L, static_cast<int>(vectors.size()), n);
    for (int c = 0; c < m.cols; ++c)
        for (int r = 0; r < L; ++r) m.at(r, c) = mod_reduce(vectors[c][r], n);

    const ResidueMatrix h = howell_form(m);
    for (int r = 0; r < h.rows; ++r) {
        for (int c = 0; c < h.cols; ++c) {
            if (h.at(r, c) != 0) {
                out.pivot_columns.push_back(c);
                break;
            }
        }
    }
    for (int c : out.pivot_columns) {
        ResidueVector g = m.col(c);
        out.orders.push_back(vector_order(g, n));
        out.generators.push_back(std::move(g));
    }

    const long long size = span_size(vectors, n);
    long long prod = 1;
    for (Residue k : out.orders) prod *= k;
    if (prod == size && span_size(out.generators, n) == size) return out;

    out.generators.clear();
    out.orders.clear();
    std::vector<std::array<Residue, 3>> primes;  // {p, q = p^e, e}
    Residue rem = n;
    for (Residue p = 2; p * p <= rem; ++p) {
        if (rem % p != 0) continue;
        Residue q = 1, e = 0;
        while (rem % p == 0) {
            rem /= p;
            q *= p;
            ++e;
        }
        primes.push_back({p, q, e});
    }
    if (rem > 1) primes.push_back({rem, rem, 1});

    std::vector<std::vector<ResidueVector>> pgens(primes.size());
    std::vector<std::vector<Residue>> porders(primes.size());
    std::size_t factors = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        detail::primary_component_basis(vectors, n, primes[i][0], primes[i][1],
                                        static_cast<int>(primes[i][2]), pgens[i], porders[i]);
        factors = std::max(factors, pgens[i].size());
    }
    // The t-th invariant factor combines the t-th largest cyclic factor of
    // every prime component; coprime orders keep the sum independent.
    for (std::size_t t = 0; t < factors; ++t) {
        ResidueVector g(L, 0);
        Residue order = 1;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (t >= pgens[i].size()) continue;
            for (int j = 0; j < L; ++j) g[j] = mod_reduce(g[j] + pgens[i][t][j], n);
            order *= porders[i][t];
        }
        out.generators.push_back(std::move(g));
        out.orders.push_back(order);
    }
    return out;
}

// Maps unit-modulus phases to exponents of the primitive n-th root of unity,
// i.e. z_j = exp(2*pi*i*k_j/n). Throws if an entry is not an n-th root of
// unity (or not unit modulus) within tol.
inline ResidueVector to_ring(const std::vector<std::complex<double>>& diag, Residue n, double tol = 1e-9) {
    if (n < 2) throw std::invalid_argument("to_ring: order must be >= 2");
    constexpr double two_pi = 6.283185307179586476925286766559;
    ResidueVector out(diag.size());
    for (std::size_t j = 0; j < diag.size(); ++j) {
        const std::complex<double> z = diag[j];
        if (std::abs(std::abs(z) - 1.0) > tol)
            throw std::invalid_argument("to_ring: entry " + std::to_string(j) + " is not unit modulus");
        const double turns = std::arg(z) / two_pi * static_cast<double>(n);
        const double k = std::round(turns);
        if (std::abs(turns - k) > tol * static_cast<double>(n))
            throw std::invalid_argument("to_ring: entry " + std::to_string(j) +
                                        " is not a root of unity of order " + std::to_string(n));
        out[j] = mod_reduce(static_cast<Residue>(k), n);
    }
    return out;
}

// Same conversion from angles given directly (radians).
inline ResidueVector to_ring_angles(const std::vector<double>& angles, Residue n, double tol = 1e-9) {
    std::vector<std::complex<double>> diag(angles.size());
    for (std::size_t j = 0; j < angles.size(); ++j)
        diag[j] = std::polar(1.0, angles[j]);
    return to_ring(diag, n, tol);
}

}  // namespace qrb
