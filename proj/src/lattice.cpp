#include "su3tree/lattice.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "su3tree/errors.hpp"

namespace su3tree {

std::string LMat::to_string() const {
    std::ostringstream os;
    for (int i = 0; i < 3; ++i) {
        os << "[ ";
        for (int j = 0; j < 3; ++j) os << at(i, j).to_string() << (j < 2 ? " | " : " ");
        os << "]\n";
    }
    return os.str();
}

LMat lmat_identity(const FqContext& F, int prec) {
    LMat m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m.at(i, j) = (i == j) ? LocalElem::one(F, prec) : LocalElem::zero(F, prec);
    return m;
}

LMat lmat_embed(const LocalContext& model, const Mat3& g) {
    LMat m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = model.embed(g.at(i, j));
    return m;
}

LMat operator*(const LMat& a, const LMat& b) {
    LMat m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            LocalElem acc = a.at(i, 0) * b.at(0, j);
            acc = acc + a.at(i, 1) * b.at(1, j);
            acc = acc + a.at(i, 2) * b.at(2, j);
            m.at(i, j) = acc;
        }
    return m;
}

LVec operator*(const LMat& a, const LVec& x) {
    LVec y;
    for (int i = 0; i < 3; ++i) {
        LocalElem acc = a.at(i, 0) * x[0];
        acc = acc + a.at(i, 1) * x[1];
        acc = acc + a.at(i, 2) * x[2];
        y[static_cast<size_t>(i)] = acc;
    }
    return y;
}

LocalElem lmat_det(const LMat& m) {
    LocalElem d = m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1));
    d = d - m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0));
    d = d + m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
    return d;
}

LMat lmat_inverse(const LMat& m) {
    LocalElem dinv = lmat_det(m).inv();
    LMat out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
            int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            // cofactor C_{ji}; the cyclic index choice absorbs the sign
            LocalElem cof = m.at(r0, c0) * m.at(r1, c1) - m.at(r0, c1) * m.at(r1, c0);
            out.at(i, j) = cof * dinv;
        }
    return out;
}

LMat gram_matrix(const LMat& B) {
    LMat g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            LocalElem acc = B.at(0, i).conj() * B.at(2, j);
            acc = acc + B.at(1, i).conj() * B.at(1, j);
            acc = acc + B.at(2, i).conj() * B.at(0, j);
            g.at(i, j) = acc;
        }
    return g;
}

LMat dual_basis(const LMat& B) { return B * lmat_inverse(gram_matrix(B)); }

namespace {

bool entry_integral(const LocalElem& x) {
    if (x.is_zero_to_prec()) {
        if (x.prec() >= 0) return true;
        throw precision_error("cannot certify integrality of a series known only to negative precision");
    }
    return x.val() >= 0;
}

}  // namespace

bool lmat_integral(const LMat& m) {
    for (const auto& x : m.e)
        if (!entry_integral(x)) return false;
    return true;
}

LMat hermite_columns(std::vector<LVec> cols, std::array<int, 3>* pivots) {
    SU3_CHECK(cols.size() >= 3, "need at least 3 generating columns");
    const size_t n = cols.size();
    std::vector<bool> used(n, false);
    std::array<int, 3> pivot_col{-1, -1, -1};
    std::array<int, 3> a{0, 0, 0};

    for (int row = 2; row >= 0; --row) {
        int best = -1;
        int best_val = 0;
        for (size_t c = 0; c < n; ++c) {
            if (used[c] || cols[c][static_cast<size_t>(row)].is_zero_to_prec()) continue;
            int v = cols[c][static_cast<size_t>(row)].val();
            if (best < 0 || v < best_val) {
                best = static_cast<int>(c);
                best_val = v;
            }
        }
        if (best < 0) throw precision_error("no usable pivot in Hermite reduction (rank deficit or precision loss)");
        // columns indistinguishable from zero at this row must certify val >= pivot val
        for (size_t c = 0; c < n; ++c) {
            if (used[c] || static_cast<int>(c) == best) continue;
            const LocalElem& x = cols[c][static_cast<size_t>(row)];
            if (x.is_zero_to_prec() && x.prec() < best_val)
                throw precision_error("pivot choice not certified at current precision");
        }
        // normalize pivot to exactly rho^a
        LocalElem unit_inv = cols[static_cast<size_t>(best)][static_cast<size_t>(row)].shifted(-best_val).inv();
        for (int r = 0; r < 3; ++r)
            cols[static_cast<size_t>(best)][static_cast<size_t>(r)] =
                cols[static_cast<size_t>(best)][static_cast<size_t>(r)] * unit_inv;
        // clear this row in every other unused column
        for (size_t c = 0; c < n; ++c) {
            if (used[c] || static_cast<int>(c) == best) continue;
            const LocalElem& x = cols[c][static_cast<size_t>(row)];
            if (x.is_zero_to_prec()) continue;
            LocalElem f = x.shifted(-best_val);  // in O since val >= pivot val
            for (int r = 0; r < 3; ++r)
                cols[c][static_cast<size_t>(r)] =
                    cols[c][static_cast<size_t>(r)] - f * cols[static_cast<size_t>(best)][static_cast<size_t>(r)];
        }
        used[static_cast<size_t>(best)] = true;
        pivot_col[static_cast<size_t>(row)] = best;
        a[static_cast<size_t>(row)] = best_val;
    }

    LMat m;
    for (int j = 0; j < 3; ++j)
        for (int r = 0; r < 3; ++r)
            m.at(r, j) = cols[static_cast<size_t>(pivot_col[static_cast<size_t>(j)])][static_cast<size_t>(r)];

    // reduce above-diagonal entries modulo the pivot of their row
    for (int j = 1; j < 3; ++j) {
        for (int i = j - 1; i >= 0; --i) {
            LocalElem f = m.at(i, j).floor_div_pow(a[static_cast<size_t>(i)]);
            if (f.is_zero_to_prec()) continue;
            for (int r = 0; r <= i; ++r)
                m.at(r, j) = m.at(r, j) - f * m.at(r, i);
        }
    }

    // exactness: entries must be fully known below their reduction bound
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            const LocalElem& x = m.at(i, j);
            if (i > j) {
                SU3_INVARIANT(x.is_zero_to_prec(), "Hermite form not upper triangular");
            } else if (i == j) {
                SU3_INVARIANT(!x.is_zero_to_prec() && x.val() == a[static_cast<size_t>(i)] && x.digits() == std::vector<uint16_t>{1},
                              "Hermite pivot is not an exact power of rho");
            } else {
                if (x.prec() < a[static_cast<size_t>(i)])
                    throw precision_error("Hermite entry not exact at current precision");
                if (!x.is_zero_to_prec())
                    SU3_INVARIANT(x.val() + static_cast<int>(x.digits().size()) <= a[static_cast<size_t>(i)],
                                  "Hermite entry not reduced below pivot");
            }
        }
    }
    if (pivots) *pivots = a;
    return m;
}

namespace {

std::string vertex_key(const LMat& m, const std::array<int, 3>& pivots, int parity) {
    std::ostringstream os;
    os << "p" << parity;
    for (int i = 0; i < 3; ++i) os << "|" << pivots[static_cast<size_t>(i)];
    for (int j = 1; j < 3; ++j)
        for (int i = 0; i < j; ++i) {
            const LocalElem& x = m.at(i, j);
            os << "|";
            if (x.is_zero_to_prec()) {
                os << "z";
            } else {
                os << x.val() << ":";
                for (uint16_t d : x.digits()) os << d << ",";
            }
        }
    return os.str();
}

}  // namespace

TreeVertex vertex_normalize(std::vector<LVec> cols) {
    std::array<int, 3> piv{};
    LMat B = hermite_columns(std::move(cols), &piv);
    LMat G = gram_matrix(B);
    LocalElem dG = lmat_det(G);
    if (dG.is_zero_to_prec()) throw precision_error("Gram determinant is zero to precision");
    int v = dG.val();
    SU3_INVARIANT(v % 2 == 0, "Gram determinant has odd valuation");
    int r = ((v % 6) + 6) % 6;
    int j;
    if (r == 0) j = -v / 6;
    else if (r == 2) j = (2 - v) / 6;
    else throw domain_error("lattice class admits no almost-self-dual scaling (not a tree vertex)");
    if (j != 0) {
        for (auto& x : B.e) x = x.shifted(j);
        for (auto& p : piv) p += j;
        G = gram_matrix(B);
    }
    if (!lmat_integral(G)) throw domain_error("scaled lattice is not integral (not a tree vertex)");
    LMat Ginv = lmat_inverse(G);
    for (auto& x : Ginv.e) x = x.shifted(1);
    if (!lmat_integral(Ginv)) throw domain_error("rho * dual not contained in lattice (not a tree vertex)");
    int parity = (v + 6 * j) / 2;
    SU3_INVARIANT(parity == 0 || parity == 1, "vertex parity out of range");
    int pivsum = piv[0] + piv[1] + piv[2];
    SU3_INVARIANT(((pivsum % 2) + 2) % 2 == parity, "pivot valuation sum disagrees with parity");
    TreeVertex out{B, piv, parity, vertex_key(B, piv, parity)};
    return out;
}

TreeVertex vertex_normalize(const LMat& B) {
    return vertex_normalize(std::vector<LVec>{B.col(0), B.col(1), B.col(2)});
}

TreeVertex base_vertex(const FqContext& F, int prec) {
    return vertex_normalize(lmat_identity(F, prec));
}

TreeVertex apartment_vertex(const LocalContext& model, int i) {
    const FqContext& F = model.ext().fq();
    int prec = model.prec();
    int fl = (i >= 0) ? i / 2 : -((-i + 1) / 2);  // floor(i/2)
    int ce = i - fl;                              // ceil(i/2)
    LMat m = lmat_identity(F, prec);
    m.at(0, 0) = LocalElem::monomial(F, 1, -fl, prec);
    m.at(2, 2) = LocalElem::monomial(F, 1, ce, prec);
    return vertex_normalize(m);
}

TreeVertex tree_act(const LocalContext& model, const Mat3& g, const TreeVertex& v) {
    return vertex_normalize(lmat_embed(model, g) * v.basis);
}

std::vector<TreeVertex> tree_neighbors(const TreeVertex& v) {
    const FqContext& F = v.basis.fq();
    uint16_t q = F.q();
    std::vector<std::vector<std::vector<uint16_t>>> subspaces;
    // dimension 1: first nonzero coordinate scaled to 1
    for (int lead = 0; lead < 3; ++lead) {
        std::vector<uint16_t> w(3, 0);
        w[static_cast<size_t>(lead)] = 1;
        size_t free1 = static_cast<size_t>(2 - lead);
        std::vector<uint16_t> digits(free1, 0);
        while (true) {
            for (size_t i = 0; i < free1; ++i) w[static_cast<size_t>(lead) + 1 + i] = digits[i];
            subspaces.push_back({w});
            size_t k = 0;
            while (k < free1 && digits[k] == q - 1) digits[k++] = 0;
            if (k == free1) break;
            ++digits[k];
        }
    }
    // dimension 2: reduced row-echelon bases, by pivot column pair
    for (int p0 = 0; p0 < 3; ++p0)
        for (int p1 = p0 + 1; p1 < 3; ++p1) {
            // free entries: row 0 at cols right of p0 (excluding p1), row 1 right of p1
            std::vector<std::pair<int, int>> slots;  // (row, col)
            for (int c = p0 + 1; c < 3; ++c)
                if (c != p1) slots.emplace_back(0, c);
            for (int c = p1 + 1; c < 3; ++c) slots.emplace_back(1, c);
            std::vector<uint16_t> digits(slots.size(), 0);
            while (true) {
                std::vector<std::vector<uint16_t>> rows(2, std::vector<uint16_t>(3, 0));
                rows[0][static_cast<size_t>(p0)] = 1;
                rows[1][static_cast<size_t>(p1)] = 1;
                for (size_t s = 0; s < slots.size(); ++s)
                    rows[static_cast<size_t>(slots[s].first)][static_cast<size_t>(slots[s].second)] = digits[s];
                subspaces.push_back(rows);
                size_t k = 0;
                while (k < digits.size() && digits[k] == q - 1) digits[k++] = 0;
                if (k == digits.size()) break;
                ++digits[k];
            }
        }

    std::vector<TreeVertex> out;
    std::vector<std::string> seen;
    for (const auto& rows : subspaces) {
        std::vector<LVec> cols;
        for (const auto& w : rows) {
            LVec lift;
            for (int r = 0; r < 3; ++r) {
                LocalElem acc = LocalElem::zero(F, 1 << 28);
                for (int c = 0; c < 3; ++c) {
                    if (w[static_cast<size_t>(c)] == 0) continue;
                    acc = acc + v.basis.at(r, c).scaled(w[static_cast<size_t>(c)]);
                }
                lift[static_cast<size_t>(r)] = acc;
            }
            cols.push_back(lift);
        }
        for (int c = 0; c < 3; ++c) {
            LVec rc;
            for (int r = 0; r < 3; ++r) rc[static_cast<size_t>(r)] = v.basis.at(r, c).shifted(1);
            cols.push_back(rc);
        }
        try {
            TreeVertex w = vertex_normalize(std::move(cols));
            if (w.key == v.key) continue;
            if (std::find(seen.begin(), seen.end(), w.key) != seen.end()) continue;
            seen.push_back(w.key);
            out.push_back(std::move(w));
        } catch (const domain_error&) {
            // candidate sublattice is not a tree vertex; skip
        }
    }
    std::sort(out.begin(), out.end(), [](const TreeVertex& a, const TreeVertex& b) { return a.key < b.key; });
    return out;
}

int tree_distance(const TreeVertex& v, const TreeVertex& w, int max_radius) {
    if (v.key == w.key) return 0;
    std::unordered_map<std::string, int> dist{{v.key, 0}};
    std::deque<TreeVertex> frontier{v};
    while (!frontier.empty()) {
        TreeVertex cur = std::move(frontier.front());
        frontier.pop_front();
        int d = dist[cur.key];
        if (d >= max_radius) continue;
        for (auto& n : tree_neighbors(cur)) {
            if (dist.count(n.key)) continue;
            if (n.key == w.key) return d + 1;
            dist[n.key] = d + 1;
            frontier.push_back(std::move(n));
        }
    }
    throw window_error("vertices are farther apart than the search radius " + std::to_string(max_radius));
}

int Ball::id_of(const std::string& key) const {
    auto it = index.find(key);
    return it == index.end() ? -1 : it->second;
}

Ball build_ball(const LocalContext& model, int R) {
    Ball ball;
    ball.radius = R;
    TreeVertex base = base_vertex(model.ext().fq(), model.prec());
    ball.index.emplace(base.key, 0);
    ball.verts.push_back(std::move(base));
    ball.depth.push_back(0);
    ball.parent.push_back(-1);
    ball.adj.emplace_back();
    size_t head = 0;
    while (head < ball.verts.size()) {
        int u = static_cast<int>(head++);
        if (ball.depth[static_cast<size_t>(u)] >= R) continue;
        for (auto& n : tree_neighbors(ball.verts[static_cast<size_t>(u)])) {
            int id = ball.id_of(n.key);
            if (id < 0) {
                id = static_cast<int>(ball.verts.size());
                ball.index.emplace(n.key, id);
                ball.verts.push_back(std::move(n));
                ball.depth.push_back(ball.depth[static_cast<size_t>(u)] + 1);
                ball.parent.push_back(u);
                ball.adj.emplace_back();
            }
            auto& au = ball.adj[static_cast<size_t>(u)];
            if (std::find(au.begin(), au.end(), id) == au.end()) {
                au.push_back(id);
                ball.adj[static_cast<size_t>(id)].push_back(u);
            }
        }
    }
    for (auto& a : ball.adj) std::sort(a.begin(), a.end());
    return ball;
}

}  // namespace su3tree
