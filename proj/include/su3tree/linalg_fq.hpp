#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "su3tree/fq.hpp"

namespace su3tree {

// Dense matrix over F_q, row-major.  Workhorse for the linearized
// stabilizer/transporter searches, so kept deliberately simple.
class FqMatrix {
public:
    FqMatrix() = default;
    FqMatrix(const FqContext& ctx, int rows, int cols)
        : ctx_(&ctx), rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const FqContext& ctx() const { return *ctx_; }

    uint16_t at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
    void set(int i, int j, uint16_t v) { a_[size_t(i) * cols_ + j] = v; }

    void append_row(const std::vector<uint16_t>& row);

    // Reduced row echelon form in place; returns rank.
    int rref();
    int rank() const;

    // Basis of the right nullspace (each element a vector of length cols()).
    std::vector<std::vector<uint16_t>> nullspace() const;

    // One solution x of Ax = b, if any.
    std::optional<std::vector<uint16_t>> solve(const std::vector<uint16_t>& b) const;

private:
    const FqContext* ctx_ = nullptr;
    int rows_ = 0, cols_ = 0;
    std::vector<uint16_t> a_;
};

// Affine solution set of Ax = b: a particular solution plus a basis of the
// homogeneous nullspace.
struct AffineSpace {
    std::vector<uint16_t> origin;
    std::vector<std::vector<uint16_t>> basis;

    long long size(int q) const {
        long long n = 1;
        for (size_t i = 0; i < basis.size(); ++i) n *= q;
        return n;
    }
};

std::optional<AffineSpace> solve_affine(const FqMatrix& A, const std::vector<uint16_t>& b);

// Visit every point of an affine space; f returns false to stop early.
// Returns false iff stopped early.  Incremental: wrapping a digit adds the
// basis vector q times, and q*v = 0 in characteristic p | q.
template <typename F>
bool enumerate_affine(const FqContext& ctx, const AffineSpace& sp, F&& f) {
    size_t n = sp.origin.size();
    std::vector<uint16_t> x = sp.origin;
    size_t k = sp.basis.size();
    std::vector<int> digits(k, 0);
    while (true) {
        if (!f(x)) return false;
        size_t i = 0;
        for (; i < k; ++i) {
            digits[i]++;
            for (size_t j = 0; j < n; ++j) x[j] = ctx.add(x[j], sp.basis[i][j]);
            if (digits[i] < ctx.q()) break;
            digits[i] = 0;
        }
        if (i == k) return true;
    }
}

}  // namespace su3tree
