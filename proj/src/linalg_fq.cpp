#include "su3tree/linalg_fq.hpp"

#include "su3tree/errors.hpp"

namespace su3tree {

void FqMatrix::append_row(const std::vector<uint16_t>& row) {
    SU3_CHECK((int)row.size() == cols_, "linalg: row length mismatch");
    a_.insert(a_.end(), row.begin(), row.end());
    rows_++;
}

int FqMatrix::rref() {
    const FqContext& F = *ctx_;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
        int piv = -1;
        for (int i = r; i < rows_; ++i)
            if (at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < cols_; ++j) {
                uint16_t tmp = at(r, j);
                set(r, j, at(piv, j));
                set(piv, j, tmp);
            }
        uint16_t inv = F.inv(at(r, c));
        for (int j = c; j < cols_; ++j) set(r, j, F.mul(inv, at(r, j)));
        for (int i = 0; i < rows_; ++i) {
            if (i == r || at(i, c) == 0) continue;
            uint16_t f = at(i, c);
            for (int j = c; j < cols_; ++j)
                set(i, j, F.sub(at(i, j), F.mul(f, at(r, j))));
        }
        r++;
    }
    return r;
}

int FqMatrix::rank() const {
    FqMatrix m = *this;
    return m.rref();
}

std::vector<std::vector<uint16_t>> FqMatrix::nullspace() const {
    const FqContext& F = *ctx_;
    FqMatrix m = *this;
    int r = m.rref();
    // pivot column of each of the r leading rows
    std::vector<int> pivcol(r, -1);
    std::vector<int> colpiv(cols_, -1);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < cols_; ++j)
            if (m.at(i, j) != 0) { pivcol[i] = j; colpiv[j] = i; break; }
    }
    std::vector<std::vector<uint16_t>> basis;
    for (int j = 0; j < cols_; ++j) {
        if (colpiv[j] >= 0) continue;
        std::vector<uint16_t> v(cols_, 0);
        v[j] = F.one();
        for (int i = 0; i < r; ++i) v[pivcol[i]] = F.neg(m.at(i, j));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<uint16_t>> FqMatrix::solve(const std::vector<uint16_t>& b) const {
    auto sp = solve_affine(*this, b);
    if (!sp) return std::nullopt;
    return sp->origin;
}

std::optional<AffineSpace> solve_affine(const FqMatrix& A, const std::vector<uint16_t>& b) {
    SU3_CHECK((int)b.size() == A.rows(), "linalg: rhs length mismatch");
    const FqContext& F = A.ctx();
    FqMatrix m(F, A.rows(), A.cols() + 1);
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) m.set(i, j, A.at(i, j));
        m.set(i, A.cols(), b[i]);
    }
    int r = m.rref();
    std::vector<int> colpiv(A.cols() + 1, -1);
    std::vector<int> pivcol(r, -1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j <= A.cols(); ++j)
            if (m.at(i, j) != 0) { pivcol[i] = j; colpiv[j] = i; break; }
    if (colpiv[A.cols()] >= 0) return std::nullopt;  // pivot in rhs column: inconsistent
    AffineSpace sp;
    sp.origin.assign(A.cols(), 0);
    for (int i = 0; i < r; ++i) sp.origin[pivcol[i]] = m.at(i, A.cols());
    for (int j = 0; j < A.cols(); ++j) {
        if (colpiv[j] >= 0) continue;
        std::vector<uint16_t> v(A.cols(), 0);
        v[j] = F.one();
        for (int i = 0; i < r; ++i) v[pivcol[i]] = F.neg(m.at(i, j));
        sp.basis.push_back(std::move(v));
    }
    return sp;
}

}  // namespace su3tree
