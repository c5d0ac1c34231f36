#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "su3tree/local_field.hpp"
#include "su3tree/unitary.hpp"

namespace su3tree {

using LVec = std::array<LocalElem, 3>;

// 3x3 matrix over the local field E, row-major.
struct LMat {
    std::array<LocalElem, 9> e;
    const LocalElem& at(int i, int j) const { return e[static_cast<size_t>(3 * i + j)]; }
    LocalElem& at(int i, int j) { return e[static_cast<size_t>(3 * i + j)]; }
    LVec col(int j) const { return {at(0, j), at(1, j), at(2, j)}; }
    const FqContext& fq() const { return e[0].fq(); }
    std::string to_string() const;
};

LMat lmat_identity(const FqContext& F, int prec);
LMat lmat_embed(const LocalContext& model, const Mat3& g);
LMat operator*(const LMat& a, const LMat& b);
LVec operator*(const LMat& a, const LVec& x);
LocalElem lmat_det(const LMat& m);
LMat lmat_inverse(const LMat& m);

// Hermitian Gram matrix conj(B)^T H B of the lattice spanned by the columns
// of B, with H the antidiagonal unit form.
LMat gram_matrix(const LMat& B);
LMat dual_basis(const LMat& B);  // basis of the dual lattice, = B * G^{-1}

// True when every entry has valuation >= 0; throws precision_error when an
// entry is zero to a negative precision (undecidable).
bool lmat_integral(const LMat& m);

// A vertex of the Bruhat-Tits tree: the canonical Hermite basis of the unique
// almost-self-dual representative of a lattice class.  The basis is upper
// triangular with diagonal rho^{pivots[i]} and the (i,j) entry supported on
// exponents < pivots[i]; this is exact finite data and `key` serializes it.
// parity 0 = self-dual representative, parity 1 = almost self-dual.
struct TreeVertex {
    LMat basis;
    std::array<int, 3> pivots;
    int parity;
    std::string key;
};

// Canonical column Hermite form over O = F_q[[rho]] of a full-rank generating
// set (at least 3 columns).  Returns the canonical 3x3 basis; pivot exponents
// in *pivots.
LMat hermite_columns(std::vector<LVec> cols, std::array<int, 3>* pivots);

// Scale the lattice by the unique power of rho making it almost self-dual,
// then canonicalize.  Throws domain_error when no scaling works (the class is
// not a tree vertex) and precision_error when the data cannot certify the
// result exactly.
TreeVertex vertex_normalize(std::vector<LVec> cols);
TreeVertex vertex_normalize(const LMat& B);

TreeVertex base_vertex(const FqContext& F, int prec);  // class of O^3
// Vertex diag(rho^-floor(i/2), 1, rho^ceil(i/2)) O^3 of the standard apartment.
TreeVertex apartment_vertex(const LocalContext& model, int i);
TreeVertex tree_act(const LocalContext& model, const Mat3& g, const TreeVertex& v);

// All tree neighbors, sorted by key: classes of sublattices rho L < M < L
// whose residual subspace has dimension 1 or 2 and which normalize to tree
// vertices.  The valence is a measured quantity, not assumed here.
std::vector<TreeVertex> tree_neighbors(const TreeVertex& v);

// BFS distance; throws window_error if w is not within max_radius of v.
int tree_distance(const TreeVertex& v, const TreeVertex& w, int max_radius);

struct Ball {
    int radius = 0;
    std::vector<TreeVertex> verts;             // verts[0] = base
    std::vector<int> depth;
    std::vector<int> parent;                   // -1 at the base
    std::vector<std::vector<int>> adj;         // sorted, in-ball only
    std::unordered_map<std::string, int> index;  // key -> vertex id
    int id_of(const std::string& key) const;   // -1 when absent
};

Ball build_ball(const LocalContext& model, int R);

}  // namespace su3tree
