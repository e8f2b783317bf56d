#include "g2/k3_lattice.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace g2::k3 {

namespace {

ZMat zmat_identity(int n) {
    ZMat m(static_cast<size_t>(n), ZVec(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

ZMat zmat_mul(const ZMat& a, const ZMat& b) {
    size_t n = a.size();
    ZMat c(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (size_t j = 0; j < n; ++j)
                if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

ZMat zmat_transpose(const ZMat& a) {
    size_t n = a.size();
    ZMat t(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) t[j][i] = a[i][j];
    return t;
}

// Bareiss fraction-free determinant.
mpz_class zmat_det(ZMat a) {
    size_t n = a.size();
    mpz_class prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                mpz_class num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_class q;
                mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = q;
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

ZMat gram_as_zmat(const IntegerLattice& L) {
    ZMat g(static_cast<size_t>(L.rank), ZVec(static_cast<size_t>(L.rank), 0));
    for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j) g[i][j] = L.gram[i][j];
    return g;
}

// Exact inverse of an integer matrix with det +-1.
ZMat zmat_unimodular_inverse(const ZMat& a) {
    size_t n = a.size();
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(2 * n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) m[i][j] = Rat(a[i][j]);
        m[i][n + i] = Rat(1);
    }
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && sgn(m[p][c]) == 0) ++p;
        if (p == n) throw std::domain_error("matrix is singular");
        std::swap(m[p], m[c]);
        Rat piv = m[c][c];
        for (size_t j = 0; j < 2 * n; ++j) m[c][j] /= piv;
        for (size_t r = 0; r < n; ++r) {
            if (r == c || sgn(m[r][c]) == 0) continue;
            Rat f = m[r][c];
            for (size_t j = 0; j < 2 * n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    ZMat inv(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Rat x = m[i][n + j];
            x.canonicalize();
            if (x.get_den() != 1)
                throw std::domain_error("inverse is not integral");
            inv[i][j] = x.get_num();
        }
    return inv;
}

} // namespace

void IntegerLattice::validate() const {
    if (rank <= 0 || static_cast<int>(gram.size()) != rank)
        throw std::invalid_argument("lattice gram size mismatch");
    for (int i = 0; i < rank; ++i) {
        if (static_cast<int>(gram[i].size()) != rank)
            throw std::invalid_argument("lattice gram size mismatch");
        for (int j = 0; j < rank; ++j)
            if (gram[i][j] != gram[j][i]) throw std::invalid_argument("gram must be symmetric");
    }
    if (determinant(*this) == 0) throw std::invalid_argument("gram must be nondegenerate");
}

mpz_class inner(const IntegerLattice& L, const ZVec& v, const ZVec& w) {
    mpz_class acc = 0;
    for (int i = 0; i < L.rank; ++i) {
        if (v[static_cast<size_t>(i)] == 0) continue;
        for (int j = 0; j < L.rank; ++j)
            if (L.gram[i][j] != 0)
                acc += v[static_cast<size_t>(i)] * L.gram[i][j] * w[static_cast<size_t>(j)];
    }
    return acc;
}

Rat inner(const IntegerLattice& L, const QVec& v, const QVec& w) {
    Rat acc(0);
    for (int i = 0; i < L.rank; ++i) {
        if (sgn(v[static_cast<size_t>(i)]) == 0) continue;
        for (int j = 0; j < L.rank; ++j)
            if (L.gram[i][j] != 0)
                acc += v[static_cast<size_t>(i)] * Rat(L.gram[i][j]) * w[static_cast<size_t>(j)];
    }
    return acc;
}

ZVec Isometry::apply(const ZVec& v) const {
    size_t n = m.size();
    ZVec out(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (m[i][j] != 0 && v[j] != 0) out[i] += m[i][j] * v[j];
    return out;
}

QVec Isometry::apply(const QVec& v) const {
    size_t n = m.size();
    QVec out(n, Rat(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (m[i][j] != 0 && sgn(v[j]) != 0) out[i] += Rat(m[i][j]) * v[j];
    return out;
}

Isometry make_isometry(const IntegerLattice& L, ZMat m) {
    ZMat g = gram_as_zmat(L);
    ZMat check = zmat_mul(zmat_mul(zmat_transpose(m), g), m);
    if (check != g) throw std::invalid_argument("matrix does not preserve the bilinear form");
    mpz_class d = zmat_det(m);
    if (d != 1 && d != -1) throw std::invalid_argument("isometry determinant must be +-1");
    return Isometry{std::move(m)};
}

Isometry identity_isometry(int rank) { return Isometry{zmat_identity(rank)}; }

Isometry compose(const Isometry& a, const Isometry& b) { return Isometry{zmat_mul(a.m, b.m)}; }

Isometry isometry_inverse(const IntegerLattice& L, const Isometry& a) {
    (void)L;
    return Isometry{zmat_unimodular_inverse(a.m)};
}

IntegerLattice k3_lattice() {
    IntegerLattice L;
    L.rank = 22;
    L.gram.assign(22, std::vector<long>(22, 0));
    for (int b = 0; b < 3; ++b) {
        L.gram[2 * b][2 * b + 1] = 1;
        L.gram[2 * b + 1][2 * b] = 1;
    }
    // Bourbaki E8 chain 1-3-4-5-6-7-8 with 2 attached to 4 (0-based within
    // the block: 0-2, 2-3, 3-4, 4-5, 5-6, 6-7, 1-3).
    const int bonds[7][2] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
    for (int blk = 0; blk < 2; ++blk) {
        int base = 6 + 8 * blk;
        for (int i = 0; i < 8; ++i) L.gram[base + i][base + i] = -2;
        for (auto& b : bonds) {
            L.gram[base + b[0]][base + b[1]] = 1;
            L.gram[base + b[1]][base + b[0]] = 1;
        }
    }
    return L;
}

bool is_even(const IntegerLattice& L) {
    for (int i = 0; i < L.rank; ++i)
        if (L.gram[i][i] % 2 != 0) return false;
    return true;
}

mpz_class determinant(const IntegerLattice& L) { return zmat_det(gram_as_zmat(L)); }

std::pair<int, int> signature(const IntegerLattice& L) {
    // Symmetric congruence diagonalization over Q.
    int n = L.rank;
    std::vector<std::vector<Rat>> a(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = Rat(L.gram[i][j]);
    int pos = 0, neg = 0;
    for (int k = 0; k < n; ++k) {
        if (sgn(a[k][k]) == 0) {
            int p = -1;
            for (int r = k + 1; r < n; ++r)
                if (sgn(a[r][r]) != 0) {
                    p = r;
                    break;
                }
            if (p >= 0) {
                std::swap(a[k], a[p]);
                for (int r = 0; r < n; ++r) std::swap(a[r][k], a[r][p]);
            } else {
                // all remaining diagonal entries vanish; find off-diagonal
                int pi = -1, pj = -1;
                for (int r = k; r < n && pi < 0; ++r)
                    for (int c = r + 1; c < n; ++c)
                        if (sgn(a[r][c]) != 0) {
                            pi = r;
                            pj = c;
                            break;
                        }
                if (pi < 0) break; // rest is zero
                // row/col add: makes diagonal entry 2 a[pi][pj]
                for (int c = 0; c < n; ++c) a[pi][c] += a[pj][c];
                for (int r = 0; r < n; ++r) a[r][pi] += a[r][pj];
                if (pi != k) {
                    std::swap(a[k], a[pi]);
                    for (int r = 0; r < n; ++r) std::swap(a[r][k], a[r][pi]);
                }
            }
        }
        if (sgn(a[k][k]) == 0) continue;
        if (sgn(a[k][k]) > 0)
            ++pos;
        else
            ++neg;
        for (int r = k + 1; r < n; ++r) {
            if (sgn(a[r][k]) == 0) continue;
            Rat f = a[r][k] / a[k][k];
            for (int c = 0; c < n; ++c) a[r][c] -= f * a[k][c];
            for (int c = 0; c < n; ++c) a[c][r] -= f * a[c][k];
        }
    }
    return {pos, neg};
}

bool is_primitive(const ZVec& v) {
    mpz_class g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) throw std::invalid_argument("is_primitive: zero vector");
    return g == 1;
}

namespace {

ZMat transvection_matrix(const IntegerLattice& L, const ZVec& e, const ZVec& a) {
    if (inner(L, e, e) != 0) throw std::invalid_argument("transvection base must be isotropic");
    if (inner(L, e, a) != 0) throw std::invalid_argument("transvection requires e . a = 0");
    mpz_class aa = inner(L, a, a);
    if (aa % 2 != 0) throw std::invalid_argument("transvection requires even a . a");
    mpz_class half_aa = aa / 2;
    int n = L.rank;
    ZMat m = zmat_identity(n);
    // column j = image of basis vector b_j (identity already seeded)
    for (int j = 0; j < n; ++j) {
        ZVec bj(static_cast<size_t>(n), 0);
        bj[static_cast<size_t>(j)] = 1;
        mpz_class be = inner(L, bj, e), ba = inner(L, bj, a);
        for (int i = 0; i < n; ++i)
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] +=
                be * a[static_cast<size_t>(i)] - (ba + half_aa * be) * e[static_cast<size_t>(i)];
    }
    return m;
}

} // namespace

Isometry transvection(const IntegerLattice& L, const ZVec& e, const ZVec& a) {
    return make_isometry(L, transvection_matrix(L, e, a));
}

namespace {

// Reduction state: v plus accumulated matrix acc with v = acc * v0.
struct Reducer {
    const IntegerLattice* L;
    ZVec v;
    ZMat acc;
    long steps = 0;
    long max_steps = 0;

    Reducer(const IntegerLattice& l, ZVec vec, long cap)
        : L(&l), v(std::move(vec)), acc(zmat_identity(l.rank)), max_steps(cap) {}

    bool budget_ok() const { return steps < max_steps; }

    void apply(const ZMat& t) {
        Isometry iso{t};
        v = iso.apply(v);
        acc = zmat_mul(t, acc);
        ++steps;
    }

    void apply(const Isometry& t) { apply(t.m); }

    void apply_transvection(const ZVec& e, const ZVec& a) { apply(transvection_matrix(*L, e, a)); }

    mpz_class pair_with_basis(int idx) const {
        ZVec b(static_cast<size_t>(L->rank), 0);
        b[static_cast<size_t>(idx)] = 1;
        return inner(*L, b, v);
    }
};

ZVec scaled_basis(int rank, int idx, const mpz_class& k) {
    ZVec b(static_cast<size_t>(rank), 0);
    b[static_cast<size_t>(idx)] = k;
    return b;
}

// Permutation isometry from a coordinate permutation (must preserve gram).
Isometry coordinate_permutation(const IntegerLattice& L, const std::vector<int>& perm) {
    int n = L.rank;
    ZMat m(static_cast<size_t>(n), ZVec(static_cast<size_t>(n), 0));
    for (int j = 0; j < n; ++j) m[static_cast<size_t>(perm[static_cast<size_t>(j)])][static_cast<size_t>(j)] = 1;
    return make_isometry(L, std::move(m));
}

Isometry swap_ef(const IntegerLattice& L, int block) {
    std::vector<int> p(static_cast<size_t>(L.rank));
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[static_cast<size_t>(2 * block)], p[static_cast<size_t>(2 * block + 1)]);
    return coordinate_permutation(L, p);
}

Isometry swap_blocks(const IntegerLattice& L, int b1, int b2) {
    std::vector<int> p(static_cast<size_t>(L.rank));
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[static_cast<size_t>(2 * b1)], p[static_cast<size_t>(2 * b2)]);
    std::swap(p[static_cast<size_t>(2 * b1 + 1)], p[static_cast<size_t>(2 * b2 + 1)]);
    return coordinate_permutation(L, p);
}

Isometry negate_block(const IntegerLattice& L, int block) {
    ZMat m = zmat_identity(L.rank);
    m[static_cast<size_t>(2 * block)][static_cast<size_t>(2 * block)] = -1;
    m[static_cast<size_t>(2 * block + 1)][static_cast<size_t>(2 * block + 1)] = -1;
    return make_isometry(L, std::move(m));
}

int sgn_int(const mpz_class& x) { return mpz_sgn(x.get_mpz_t()); }

mpz_class nearest_quotient(const mpz_class& num, const mpz_class& den) {
    // round(num/den) with ties toward zero
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class absden = ::abs(den);
    if (2 * r > absden) q += 1;
    return q;
}

} // namespace

IsometryResult reduce_to_canonical(const IntegerLattice& L, const ZVec& v, long max_steps) {
    if (static_cast<int>(v.size()) != L.rank)
        throw std::invalid_argument("vector length does not match lattice rank");
    if (!is_primitive(v)) throw std::invalid_argument("reduction requires a primitive vector");
    const int n = L.rank;
    Reducer red(L, v, max_steps);

    auto a1 = [&]() -> const mpz_class& { return red.v[0]; };
    auto b1 = [&]() -> const mpz_class& { return red.v[1]; };
    auto outside_zero = [&]() {
        for (int i = 2; i < n; ++i)
            if (red.v[static_cast<size_t>(i)] != 0) return false;
        return true;
    };

    while (red.budget_ok()) {
        if (outside_zero()) break;

        // make b1 nonzero
        if (b1() == 0) {
            if (a1() != 0) {
                red.apply(swap_ef(L, 0));
            } else {
                int t = -1;
                for (int i = 2; i < n; ++i)
                    if (red.pair_with_basis(i) != 0) {
                        t = i;
                        break;
                    }
                if (t < 0) return {SearchStatus::NotFound, std::nullopt, red.steps,
                                   "degenerate vector"};
                red.apply_transvection(scaled_basis(n, 1, 1), scaled_basis(n, t, 1));
            }
            continue;
        }

        // reduce every outside coordinate mod |b1| using E(e1, k b_t)
        for (int t = 2; t < n; ++t) {
            const mpz_class& ct = red.v[static_cast<size_t>(t)];
            if (ct == 0) continue;
            mpz_class k = -nearest_quotient(ct, b1());
            if (k != 0) red.apply_transvection(scaled_basis(n, 0, 1), scaled_basis(n, t, k));
            if (!red.budget_ok()) break;
        }
        if (outside_zero()) break;
        if (!red.budget_ok()) break;

        // choose the smallest nonzero outside hyperbolic coordinate and use it
        // to shrink b1 (Euclid step); prefer hyperbolic slots
        int best = -1;
        for (int t = 2; t < 6; ++t) {
            const mpz_class& ct = red.v[static_cast<size_t>(t)];
            if (ct == 0) continue;
            if (best < 0 || ::abs(ct) < ::abs(red.v[static_cast<size_t>(best)])) best = t;
        }
        if (best >= 0) {
            // pairing partner: v . f_j = e_j coefficient, v . e_j = f_j coefficient
            int block = best / 2;
            bool is_e = (best % 2 == 0);
            int partner = is_e ? 2 * block + 1 : 2 * block; // basis whose pairing reads c[best]
            mpz_class c = red.v[static_cast<size_t>(best)];
            mpz_class k = nearest_quotient(b1(), c);
            if (k == 0) k = 1;
            // Landing on zero would stall the dance; step to +-c instead,
            // which the next mod pass absorbs (|c| <= |b1|/2 keeps this a
            // strict decrease of |b1|).
            if (b1() == k * c) k -= sgn_int(k);
            if (k != 0)
                red.apply_transvection(scaled_basis(n, 1, 1), scaled_basis(n, partner, k));
            continue;
        }

        // only E8 coordinates remain; transfer one into block 2 via E(e2, b_t)
        bool transferred = false;
        for (int t = 6; t < n && !transferred; ++t) {
            mpz_class dt = red.pair_with_basis(t);
            if (dt % b1() == 0) continue; // cannot create a useful residue from this slot
            for (int target = 2; target <= 3 && !transferred; ++target) {
                // E(b_target, k b_t) writes -k dt (+ quadratic term) into the
                // target coordinate itself (the base vector is isotropic)
                for (int kk : {1, -1, 2, -2}) {
                    Reducer trial = red;
                    trial.apply_transvection(scaled_basis(n, target, 1), scaled_basis(n, t, kk));
                    mpz_class newc = trial.v[static_cast<size_t>(target)];
                    if (newc % b1() != 0) {
                        red = trial;
                        transferred = true;
                        break;
                    }
                }
            }
        }
        if (!transferred) {
            // last resort: direct b1 update through an E8 slot
            bool done = false;
            for (int t = 6; t < n && !done; ++t) {
                mpz_class dt = red.pair_with_basis(t);
                if (dt == 0) continue;
                for (int kk : {1, -1, 2, -2}) {
                    Reducer trial = red;
                    trial.apply_transvection(scaled_basis(n, 1, 1), scaled_basis(n, t, kk));
                    if (trial.v[1] != 0 && ::abs(trial.v[1]) < ::abs(b1())) {
                        red = trial;
                        done = true;
                        break;
                    }
                }
            }
            if (!done)
                return {SearchStatus::NotFound, std::nullopt, red.steps,
                        "reduction stalled (search budget exhausted)"};
        }
    }

    if (!red.budget_ok() && !outside_zero())
        return {SearchStatus::NotFound, std::nullopt, red.steps, "step budget exhausted"};

    // Step C: v = a1 e1 + b1 f1 with gcd(a1, b1) = 1.
    if (red.v[1] == 0) red.apply(swap_ef(L, 0));
    {
        mpz_class a = red.v[0], b = red.v[1], g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        if (g != 1)
            return {SearchStatus::NotFound, std::nullopt, red.steps, "vector is not primitive"};
        if (x != 0) red.apply_transvection(scaled_basis(n, 1, 1), scaled_basis(n, 2, x));
        if (y != 0) red.apply_transvection(scaled_basis(n, 0, 1), scaled_basis(n, 2, y));
        // now e2 coefficient is 1; clear block 1
        mpz_class a1v = red.v[0], b1v = red.v[1];
        if (a1v != 0) red.apply_transvection(scaled_basis(n, 3, 1), scaled_basis(n, 0, -a1v));
        b1v = red.v[1];
        if (b1v != 0) red.apply_transvection(scaled_basis(n, 3, 1), scaled_basis(n, 1, -b1v));
        red.apply(swap_blocks(L, 0, 1));
    }

    // canonical form check: e1 + n f1
    mpz_class sq = inner(L, red.v, red.v);
    if (red.v[0] != 1 || 2 * red.v[1] != sq)
        return {SearchStatus::NotFound, std::nullopt, red.steps, "canonical form not reached"};
    for (int i = 2; i < n; ++i)
        if (red.v[static_cast<size_t>(i)] != 0)
            return {SearchStatus::NotFound, std::nullopt, red.steps, "canonical form not reached"};

    return {SearchStatus::Found, Isometry{red.acc}, red.steps, ""};
}

IsometryResult find_isometry(const IntegerLattice& L, const ZVec& v, const ZVec& w,
                             long max_steps) {
    if (!is_primitive(v) || !is_primitive(w))
        throw std::invalid_argument("find_isometry requires primitive vectors");
    if (inner(L, v, v) != inner(L, w, w))
        throw std::invalid_argument("find_isometry requires equal squares");
    IsometryResult rv = reduce_to_canonical(L, v, max_steps);
    if (rv.status != SearchStatus::Found) return rv;
    IsometryResult rw = reduce_to_canonical(L, w, max_steps);
    if (rw.status != SearchStatus::Found) return rw;
    Isometry m = compose(isometry_inverse(L, *rw.isometry), *rv.isometry);
    if (m.apply(v) != w) throw std::logic_error("isometry construction failed to map v to w");
    (void)make_isometry(L, m.m); // re-validate
    return {SearchStatus::Found, m, rv.steps + rw.steps, ""};
}

void HyperKahlerClasses::validate(const IntegerLattice& L) const {
    if (static_cast<int>(cI.size()) != L.rank || static_cast<int>(cJ.size()) != L.rank ||
        static_cast<int>(cK.size()) != L.rank)
        throw std::invalid_argument("class vector length does not match lattice rank");
    if (sgn(inner(L, cI, cJ)) != 0 || sgn(inner(L, cI, cK)) != 0 || sgn(inner(L, cJ, cK)) != 0)
        throw std::invalid_argument("hyper-Kahler classes must be pairwise orthogonal");
    if (sgn(inner(L, cI, cI)) <= 0 || sgn(inner(L, cJ, cJ)) <= 0 || sgn(inner(L, cK, cK)) <= 0)
        throw std::invalid_argument("hyper-Kahler classes must have positive squares");
    if (!(inner(L, cJ, cJ) == inner(L, cK, cK)))
        throw std::invalid_argument("cJ and cK must have equal squares");
}

namespace {

bool triple_matches(const IntegerLattice& L, const Isometry& h, const HyperKahlerClasses& c1,
                    const HyperKahlerClasses& c2) {
    QVec i2 = h.apply(c2.cI), j2 = h.apply(c2.cJ), k2 = h.apply(c2.cK);
    for (int i = 0; i < L.rank; ++i) {
        if (!(i2[static_cast<size_t>(i)] == c1.cJ[static_cast<size_t>(i)])) return false;
        if (!(j2[static_cast<size_t>(i)] == c1.cI[static_cast<size_t>(i)])) return false;
        if (!(k2[static_cast<size_t>(i)] == -c1.cK[static_cast<size_t>(i)])) return false;
    }
    return true;
}

// Rational vector as q * primitive integer vector; returns q.
Rat primitive_scale(const QVec& v) {
    mpz_class den_lcm = 1;
    for (const auto& x : v) {
        Rat c = x;
        c.canonicalize();
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    mpz_class g = 0;
    for (const auto& x : v) {
        Rat scaled_q = x * Rat(den_lcm);
        scaled_q.canonicalize();
        mpz_class scaled = scaled_q.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled.get_mpz_t());
    }
    if (g == 0) throw std::invalid_argument("zero class vector");
    Rat q(g, den_lcm);
    q.canonicalize();
    return q;
}

} // namespace

MatchResult donaldson_match(const IntegerLattice& L, const HyperKahlerClasses& c1,
                            const HyperKahlerClasses& c2, std::uint64_t seed, long budget) {
    c1.validate(L);
    c2.validate(L);

    // Necessary conditions: isometries preserve squares and primitive scales.
    if (!(inner(L, c2.cI, c2.cI) == inner(L, c1.cJ, c1.cJ)) ||
        !(inner(L, c2.cJ, c2.cJ) == inner(L, c1.cI, c1.cI)) ||
        !(inner(L, c2.cK, c2.cK) == inner(L, c1.cK, c1.cK)))
        return {SearchStatus::Infeasible, std::nullopt, 0, "square conditions fail"};
    if (!(primitive_scale(c2.cI) == primitive_scale(c1.cJ)) ||
        !(primitive_scale(c2.cJ) == primitive_scale(c1.cI)) ||
        !(primitive_scale(c2.cK) == primitive_scale(c1.cK)))
        return {SearchStatus::Infeasible, std::nullopt, 0, "primitive scale conditions fail"};

    long tried = 0;

    // Stage 1: deterministic scan over hyperbolic block moves.
    std::vector<Isometry> moves;
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& p : perms) {
        // block permutation as product of swaps
        std::vector<int> cur{0, 1, 2};
        Isometry perm_iso = identity_isometry(L.rank);
        // simple selection: bring p[i] into place
        for (int i = 0; i < 3; ++i) {
            int want = p[i];
            int where = static_cast<int>(std::find(cur.begin(), cur.end(), want) - cur.begin());
            if (where != i) {
                perm_iso = compose(swap_blocks(L, i, where), perm_iso);
                std::swap(cur[static_cast<size_t>(i)], cur[static_cast<size_t>(where)]);
            }
        }
        for (int ef = 0; ef < 8; ++ef)
            for (int ng = 0; ng < 8; ++ng) {
                Isometry h = perm_iso;
                for (int blk = 0; blk < 3; ++blk) {
                    if (ef & (1 << blk)) h = compose(swap_ef(L, blk), h);
                    if (ng & (1 << blk)) h = compose(negate_block(L, blk), h);
                }
                ++tried;
                if (triple_matches(L, h, c1, c2)) return {SearchStatus::Found, h, tried, ""};
                if (tried >= budget)
                    return {SearchStatus::NotFound, std::nullopt, tried, "budget exhausted"};
            }
    }

    // Stage 2: seeded randomized words in block moves and small transvections.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_iso(0, 5), pick_block(0, 2), coeff(-2, 2);
    auto random_generator = [&]() -> Isometry {
        switch (pick_iso(rng)) {
            case 0: return swap_ef(L, pick_block(rng));
            case 1: return swap_blocks(L, pick_block(rng), pick_block(rng) == 0 ? 1 : 0);
            case 2: return negate_block(L, pick_block(rng));
            default: {
                // E(e or f of one block, small vector supported outside it)
                int blk = pick_block(rng);
                int iso_idx = 2 * blk + (rng() & 1);
                ZVec a(static_cast<size_t>(L.rank), 0);
                for (int tries = 0; tries < 4; ++tries) {
                    int idx = static_cast<int>(rng() % static_cast<unsigned>(L.rank));
                    if (idx / 2 == blk && idx < 6) continue;
                    a[static_cast<size_t>(idx)] = coeff(rng);
                }
                ZVec e = scaled_basis(L.rank, iso_idx, 1);
                if (inner(L, e, a) != 0) return identity_isometry(L.rank);
                return transvection(L, e, a);
            }
        }
    };
    Isometry word = identity_isometry(L.rank);
    while (tried < budget) {
        word = compose(random_generator(), word);
        ++tried;
        if (triple_matches(L, word, c1, c2)) return {SearchStatus::Found, word, tried, ""};
        if ((tried & 63) == 0) word = identity_isometry(L.rank); // restart
    }
    return {SearchStatus::NotFound, std::nullopt, tried, "budget exhausted"};
}

void Polarization::validate(const IntegerLattice& L) const {
    n.validate();
    if (n.rank > 22) throw std::invalid_argument("polarization rank exceeds 22");
    if (static_cast<int>(embedding.size()) != n.rank)
        throw std::invalid_argument("embedding size does not match polarization rank");
    for (int i = 0; i < n.rank; ++i)
        for (int j = 0; j < n.rank; ++j)
            if (inner(L, embedding[static_cast<size_t>(i)], embedding[static_cast<size_t>(j)]) !=
                n.gram[i][j])
                throw std::invalid_argument("embedding does not realize the polarization gram");
}

bool matching_feasible_rank(const Polarization& n1, const Polarization& n2) {
    return n1.n.rank <= 5 && n2.n.rank <= 5;
}

ZVec random_hyperbolic_primitive(const IntegerLattice& L, std::uint64_t seed, long max_square) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> c(-4, 4);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        ZVec v(static_cast<size_t>(L.rank), 0);
        for (int i = 0; i < 6; ++i) v[static_cast<size_t>(i)] = c(rng);
        bool zero = true;
        for (int i = 0; i < 6; ++i)
            if (v[static_cast<size_t>(i)] != 0) zero = false;
        if (zero) continue;
        mpz_class g = 0;
        for (int i = 0; i < 6; ++i) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[static_cast<size_t>(i)].get_mpz_t());
        for (int i = 0; i < 6; ++i) {
            mpz_class q;
            mpz_divexact(q.get_mpz_t(), v[static_cast<size_t>(i)].get_mpz_t(), g.get_mpz_t());
            v[static_cast<size_t>(i)] = q;
        }
        mpz_class sq = inner(L, v, v);
        if (::abs(sq) <= max_square) return v;
    }
    throw std::runtime_error("failed to sample a primitive vector in budget");
}

ZVec basis_vector(int rank, int index) {
    ZVec v(static_cast<size_t>(rank), 0);
    v[static_cast<size_t>(index)] = 1;
    return v;
}

ZVec hyperbolic_vector(int block, long e_coeff, long f_coeff) {
    ZVec v(22, 0);
    v[static_cast<size_t>(2 * block)] = e_coeff;
    v[static_cast<size_t>(2 * block + 1)] = f_coeff;
    return v;
}

} // namespace g2::k3
