#pragma once

// Heisenberg-Weyl (clock and shift) operator basis. For a single qudit the
// basis is W_{d*i+j} = X^i Z^j with tr(W_a^dagger W_b) = d * delta_ab; for n
// qudits it is the tensor-product family ordered lexicographically by site.
// Index 0 is always the identity word, and a word is "diagonal" when every
// site carries no X factor. The irreducible blocks of the benchmarking group
// are unions of these words, which is why the basis metadata lives here.

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "qrb/gateset.hpp"

namespace qrb {

inline CMat shift_matrix(int d) {
    CMat x = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i) x((i + 1) % d, i) = 1.0;
    return x;
}

inline CMat clock_matrix(int d) {
    CMat z = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i) z(i, i) = root_of_unity(d, i);
    return z;
}

inline CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

class WeylBasis {
  public:
    int d = 0;
    int n = 0;
    int dim = 0;  // D = d^n

    WeylBasis(int d_, int n_ = 1) : d(d_), n(n_) {
        if (d < 2 || n < 1) throw std::invalid_argument("WeylBasis: need d >= 2, n >= 1");
        long long D = 1;
        for (int s = 0; s < n; ++s) D *= d;
        if (D > 9) throw std::invalid_argument("WeylBasis: d^n must be at most 9");
        dim = static_cast<int>(D);

        std::vector<CMat> singles(static_cast<std::size_t>(d) * d);
        const CMat x = shift_matrix(d), z = clock_matrix(d);
        CMat xp = CMat::Identity(d, d);
        for (int i = 0; i < d; ++i) {
            CMat w = xp;
            for (int j = 0; j < d; ++j) {
                singles[static_cast<std::size_t>(d) * i + j] = w;
                w = w * z;
            }
            xp = x * xp;
        }

        const int count = dim * dim;
        ops_.reserve(count);
        diagonal_.resize(count);
        for (int k = 0; k < count; ++k) {
            // Decode the word: site 0 is the most significant base-d^2 digit.
            int rest = k;
            std::vector<int> word(n);
            for (int s = n - 1; s >= 0; --s) {
                word[s] = rest % (d * d);
                rest /= d * d;
            }
            CMat w = singles[word[0]];
            bool diag = word[0] < d;
            for (int s = 1; s < n; ++s) {
                w = kron(w, singles[word[s]]);
                diag = diag && (word[s] < d);
            }
            ops_.push_back(std::move(w));
            diagonal_[k] = diag;
        }

        // Stacked vec(W_k) columns; the change of basis used by the
        // Pauli-Liouville transform. Satisfies V^dagger V = dim * I.
        vecs_.resize(dim * dim, count);
        for (int k = 0; k < count; ++k)
            vecs_.col(k) = Eigen::Map<const CVec>(ops_[k].data(), dim * dim);
    }

    int size() const { return dim * dim; }
    const CMat& op(int k) const { return ops_[k]; }
    bool is_identity_word(int k) const { return k == 0; }
    bool is_diagonal_word(int k) const { return diagonal_[k]; }
    const CMat& vec_columns() const { return vecs_; }

  private:
    std::vector<CMat> ops_;
    std::vector<bool> diagonal_;
    CMat vecs_;
};

}  // namespace qrb
