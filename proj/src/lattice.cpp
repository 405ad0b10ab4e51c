#include "genusavg/lattice.hpp"

#include "genusavg/errors.hpp"
#include "genusavg/localdensity.hpp"

#include <algorithm>
#include <sstream>

namespace genusavg {

GramMatrix GramMatrix::diag(const Int& x, const Int& y, const Int& z) {
    GramMatrix g;
    g.a[0][0] = x;
    g.a[1][1] = y;
    g.a[2][2] = z;
    return g;
}

GramMatrix GramMatrix::from_form(const Int& q11, const Int& q22, const Int& q33,
                                 const Int& q12, const Int& q13, const Int& q23,
                                 bool& doubled) {
    doubled = (q12 % 2 != 0) || (q13 % 2 != 0) || (q23 % 2 != 0);
    // B(v_i, v_j) = q_ij / 2 for i != j; double everything when a cross
    // coefficient is odd so the result is the Gram of the integral form 2Q.
    Int m = doubled ? 2 : 1;
    GramMatrix g;
    g.a[0][0] = m * q11;
    g.a[1][1] = m * q22;
    g.a[2][2] = m * q33;
    g.a[0][1] = g.a[1][0] = m * q12 / 2;
    g.a[0][2] = g.a[2][0] = m * q13 / 2;
    g.a[1][2] = g.a[2][1] = m * q23 / 2;
    return g;
}

Int GramMatrix::det() const {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Int GramMatrix::content() const {
    Int g = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g = gcd(g, a[i][j]);
    return g;
}

Int GramMatrix::norm_gen() const {
    Int g = 0;
    for (int i = 0; i < 3; ++i) {
        g = gcd(g, a[i][i]);
        for (int j = i + 1; j < 3; ++j) g = gcd(g, 2 * a[i][j]);
    }
    return g;
}

std::string GramMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < 3; ++i) {
        os << (i ? ";" : "");
        for (int j = 0; j < 3; ++j) os << (j ? "," : "") << a[i][j].get_str();
    }
    return os.str();
}

void validate(const GramMatrix& g) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (g.a[i][j] != g.a[j][i])
                throw NotSymmetric("Gram matrix is not symmetric");
    Int m1 = g.a[0][0];
    Int m2 = g.a[0][0] * g.a[1][1] - g.a[0][1] * g.a[1][0];
    Int m3 = g.det();
    if (m1 <= 0 || m2 <= 0 || m3 <= 0)
        throw NotPositiveDefinite("Gram matrix is not positive definite");
}

std::pair<GramMatrix, Int> rescale_to_primitive(const GramMatrix& g) {
    Int c = g.content();
    if (c <= 1) return {g, Int(1)};
    GramMatrix out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.a[i][j] = g.a[i][j] / c;
    return {out, c};
}

// ---------------------------------------------------------------- Jordan ---

Rat JordanBlock::unimodular_det() const {
    if (rank == 1) return unit;
    return b11 * b22 - b12 * b12;
}

bool JordanBlock::is_odd_two() const {
    if (rank == 1) return valuation_rat(unit, 2) == 0;
    return valuation_rat(b11, 2) == 0 ||
           (b22 != 0 && valuation_rat(b22, 2) == 0);
}

long JordanSplitting::rank() const {
    long r = 0;
    for (const auto& b : blocks) r += b.rank;
    return r;
}

long JordanSplitting::det_valuation() const {
    long v = 0;
    for (const auto& b : blocks) v += b.rank * b.scale_exp;
    return v;
}

namespace {

constexpr long kInfVal = 1L << 30;

long val_or_inf(const Rat& x, const Int& p) {
    return x == 0 ? kInfVal : valuation_rat(x, p);
}

// Residue of a p-integral rational mod m (m a power of p).
Int rat_mod(const Rat& x, const Int& m) {
    Int den = x.get_den();
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
        throw InvalidArgument("rat_mod: denominator not invertible");
    Int r = (x.get_num() % m) * inv % m;
    if (r < 0) r += m;
    return r;
}

using RatMat = std::array<std::array<Rat, 3>, 3>;

// v_i <- v_i + v_j (symmetric row/column update).
void add_row(RatMat& m, int i, int j) {
    for (int k = 0; k < 3; ++k) m[i][k] += m[j][k];
    for (int k = 0; k < 3; ++k) m[k][i] += m[k][j];
}

// v_k <- v_k + c * v_i.
void axpy_row(RatMat& m, int k, const Rat& c, int i) {
    for (int l = 0; l < 3; ++l) m[k][l] += c * m[i][l];
    for (int l = 0; l < 3; ++l) m[l][k] += c * m[l][i];
}

} // namespace

JordanSplitting jordan_decompose(const GramMatrix& g, const Int& p) {
    validate(g);
    if (!is_prime(p)) throw InvalidArgument("jordan_decompose: p must be prime");
    RatMat m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = Rat(g.a[i][j]);
    std::vector<int> idx{0, 1, 2};
    JordanSplitting js;
    js.p = p;

    while (!idx.empty()) {
        // Minimal valuations on the remaining diagonal / off-diagonal.
        long vd = kInfVal, vo = kInfVal;
        int di = -1, oi = -1, oj = -1;
        for (int i : idx) {
            long v = val_or_inf(m[i][i], p);
            if (v < vd) {
                vd = v;
                di = i;
            }
        }
        for (std::size_t s = 0; s < idx.size(); ++s)
            for (std::size_t t = s + 1; t < idx.size(); ++t) {
                long v = val_or_inf(m[idx[s]][idx[t]], p);
                if (v < vo) {
                    vo = v;
                    oi = idx[s];
                    oj = idx[t];
                }
            }

        if (p != 2 && vd > vo) {
            // Odd p: 2 is a unit, so adding the row brings the off-diagonal
            // valuation onto the diagonal.
            add_row(m, oi, oj);
            vd = val_or_inf(m[oi][oi], p);
            di = oi;
        }

        if (p != 2 || vd <= vo) {
            // Rank-1 pivot at di.
            JordanBlock b;
            b.rank = 1;
            b.scale_exp = vd;
            b.unit = m[di][di] / rat_pow(p, vd);
            for (int k : idx)
                if (k != di && m[k][di] != 0)
                    axpy_row(m, k, -m[k][di] / m[di][di], di);
            js.blocks.push_back(b);
            idx.erase(std::find(idx.begin(), idx.end(), di));
        } else {
            // p = 2, even binary block on (oi, oj).
            JordanBlock b;
            b.rank = 2;
            b.scale_exp = vo;
            Rat det2 = m[oi][oi] * m[oj][oj] - m[oi][oj] * m[oi][oj];
            for (int k : idx) {
                if (k == oi || k == oj) continue;
                Rat x = (-m[k][oi] * m[oj][oj] + m[k][oj] * m[oi][oj]) / det2;
                Rat y = (-m[k][oj] * m[oi][oi] + m[k][oi] * m[oi][oj]) / det2;
                if (x != 0) axpy_row(m, k, x, oi);
                // m[k][oj] changed if x != 0; recompute via the stored y,
                // which was solved from the original 2x2 system.
                if (y != 0) axpy_row(m, k, y, oj);
            }
            Rat sc = rat_pow(2, vo);
            b.b11 = m[oi][oi] / sc;
            b.b12 = m[oi][oj] / sc;
            b.b22 = m[oj][oj] / sc;
            Int u8 = rat_mod(b.b11 * b.b22 - b.b12 * b.b12, 8);
            if (u8 == 3)
                b.sym = 'A';
            else if (u8 == 7)
                b.sym = 'H';
            else
                throw InvalidArgument("jordan_decompose: invalid even binary block");
            js.blocks.push_back(b);
            idx.erase(std::find(idx.begin(), idx.end(), oi));
            idx.erase(std::find(idx.begin(), idx.end(), oj));
        }
    }

    std::stable_sort(js.blocks.begin(), js.blocks.end(),
                     [](const JordanBlock& x, const JordanBlock& y) {
                         return x.scale_exp < y.scale_exp;
                     });
    if (js.det_valuation() != valuation(g.det(), p))
        throw InvalidArgument("jordan_decompose: determinant valuation mismatch");
    return js;
}

std::pair<int, Rat> unimodular_part(const GramMatrix& g, const Int& p) {
    JordanSplitting js = jordan_decompose(g, p);
    int rank = 0;
    Rat det = 1;
    for (const auto& b : js.blocks)
        if (b.scale_exp == 0) {
            rank += b.rank;
            det *= b.unimodular_det();
        }
    return {rank, det};
}

// ----------------------------------------------------------------- Hasse ---

namespace {

std::array<Rat, 3> rational_diagonal(const GramMatrix& g) {
    RatMat m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = Rat(g.a[i][j]);
    // Positive definite: every leading pivot stays nonzero.
    for (int i = 0; i < 3; ++i)
        for (int k = i + 1; k < 3; ++k)
            if (m[k][i] != 0) axpy_row(m, k, -m[k][i] / m[i][i], i);
    return {m[0][0], m[1][1], m[2][2]};
}

} // namespace

int hasse_symbol(const GramMatrix& g, const Int& p) {
    validate(g);
    auto d = rational_diagonal(g);
    int s = 1;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) s *= hilbert_symbol(d[i], d[j], p);
    return s;
}

int hasse_symbol_star(const GramMatrix& g, const Int& p) {
    return (p == 2 ? -1 : 1) * hasse_symbol(g, p);
}

// ------------------------------------------------------------- stability ---

bool is_stable_at(const GramMatrix& g, const Int& p) {
    validate(g);
    if (g.content() != 1)
        throw NotPrimitive("is_stable_at: lattice is not primitive");
    Int d = g.det();
    long ord = valuation(d, p);
    if (p == 2) {
        bool even = (g.norm_gen() % 2 == 0);
        return ord <= 1 && ((ord == 1) == even);
    }
    return ord <= 1;
}

bool is_stable(const GramMatrix& g) {
    validate(g);
    if (g.content() != 1)
        throw NotPrimitive("is_stable: lattice is not primitive");
    Int d = g.det();
    if (!is_stable_at(g, 2)) return false;
    for (const auto& [p, e] : factorize(d))
        if (p != 2 && e > 1) return false;
    return true;
}

// ---------------------------------------------------------------- profile --

LatticeProfile profile(const GramMatrix& g) {
    validate(g);
    LatticeProfile lp;
    lp.gram = g;
    auto [prim, c] = rescale_to_primitive(g);
    lp.prim = prim;
    lp.scale_gen = c;
    lp.is_primitive = (c == 1);
    lp.d_L = prim.det();
    lp.norm_gen = (prim.norm_gen() % 2 == 0) ? 2 : 1;
    lp.even = (lp.norm_gen == 2);
    lp.s_L = squarefree_split(lp.d_L).first;
    auto st = squarefree_split(4 * lp.d_L);
    lp.s4 = st.first;
    lp.t4 = st.second;

    std::set<Int> support{Int(2)};
    for (const auto& [p, e] : factorize(lp.d_L)) {
        (void)e;
        support.insert(p);
    }
    for (const Int& p : support) lp.hasse_star[p] = hasse_symbol_star(prim, p);

    long ord2 = valuation(lp.d_L, 2);
    for (const Int& p : support) {
        bool in_P;
        if (p == 2)
            in_P = is_stable_at(prim, 2);
        else
            in_P = (valuation(lp.d_L, p) == 1);
        if (in_P)
            lp.P.insert(p);
        else
            lp.Pprime.insert(p);
    }
    lp.frakP = 1;
    for (const Int& p : lp.P) lp.frakP *= p;
    if (lp.P.count(2)) {
        for (long i = 0; i < ord2; ++i) lp.frakP /= 2;
    }
    lp.frakD = 1;
    if (!lp.P.count(2)) lp.frakD = int_pow(2, ord2);
    for (const auto& [p, e] : factorize(lp.d_L))
        if (p != 2) lp.frakD *= int_pow(p, e - 1);
    lp.k_L = 0;
    for (const auto& [p, e] : factorize(lp.frakD)) {
        (void)p;
        lp.k_L += e;
    }
    lp.stable = (lp.k_L == 0);
    return lp;
}

// --------------------------------------------------- local representation --

namespace {

// Is n in (-d) * (squares of Z_p)?  (excluded set at anisotropic primes)
bool in_minus_d_square_class(const Int& n, const Int& d, const Int& p) {
    long vn = valuation(n, p);
    long vd = valuation(d, p);
    long delta = vn - vd;
    if (delta < 0 || delta % 2 != 0) return false;
    Int un = n / int_pow(p, vn);
    Int ud = -(d / int_pow(p, vd));
    if (p == 2) {
        Int inv;
        Int m = 8;
        Int udm = ((ud % m) + m) % m;
        mpz_invert(inv.get_mpz_t(), udm.get_mpz_t(), m.get_mpz_t());
        Int ratio = ((un % m) * inv) % m;
        if (ratio < 0) ratio += m;
        return ratio == 1;
    }
    return kronecker(un * ud, p) == 1;
}

} // namespace

bool locally_represented(const GramMatrix& g, const Int& n) {
    validate(g);
    if (n < 1) throw InvalidArgument("locally_represented: n must be >= 1");
    auto [prim, c] = rescale_to_primitive(g);
    if (c != 1) {
        if (n % c != 0) return false;
        return locally_represented(prim, n / c);
    }
    Int d = prim.det();
    std::set<Int> support{Int(2)};
    for (const auto& [p, e] : factorize(d)) {
        (void)e;
        support.insert(p);
    }
    for (const Int& p : support) {
        if (is_stable_at(prim, p)) {
            int star = hasse_symbol_star(prim, p);
            if (star == 1) {
                // Isotropic: everything (odd p), or 2 Z_2 for even lattices.
                if (p == 2 && prim.norm_gen() % 2 == 0 && n % 2 != 0)
                    return false;
                continue;
            }
            if (in_minus_d_square_class(n, d, p)) return false;
        } else {
            if (alpha_count(prim, p, n) == 0) return false;
        }
    }
    return true;
}

// --------------------------------------------------------- basis utility ---

BasisMatrix hnf_basis(const std::vector<std::array<Int, 3>>& gens) {
    std::vector<std::array<Int, 3>> v = gens;
    std::array<std::array<Int, 3>, 3> basis{};
    int row = 0;
    for (int coord = 0; coord < 3; ++coord) {
        // gcd-eliminate coordinate `coord` down to one vector.
        while (true) {
            int best = -1;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i][coord] != 0 &&
                    (best < 0 || abs(v[i][coord]) < abs(v[best][coord])))
                    best = static_cast<int>(i);
            if (best < 0) break;
            bool reduced_any = false;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (static_cast<int>(i) == best || v[i][coord] == 0) continue;
                Int q;
                // Round-to-floor division keeps the loop monotone.
                mpz_fdiv_q(q.get_mpz_t(), v[i][coord].get_mpz_t(),
                           v[best][coord].get_mpz_t());
                for (int k = 0; k < 3; ++k) v[i][k] -= q * v[best][k];
                if (v[i][coord] != 0) reduced_any = true;
            }
            if (!reduced_any) {
                // All other entries in this coordinate are zero: pivot found.
                if (v[best][coord] < 0)
                    for (int k = 0; k < 3; ++k) v[best][k] = -v[best][k];
                basis[row] = v[best];
                v.erase(v.begin() + best);
                ++row;
                break;
            }
        }
    }
    if (row != 3) throw InvalidArgument("hnf_basis: generators are not full rank");
    // Normalize off-pivot entries: 0 <= basis[i][coord_j] < pivot_j for later
    // pivots j > i (pivot of basis[i] is at coordinate i by construction).
    for (int i = 2; i >= 0; --i)
        for (int j = i + 1; j < 3; ++j) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), basis[i][j].get_mpz_t(),
                       basis[j][j].get_mpz_t());
            for (int k = 0; k < 3; ++k) basis[i][k] -= q * basis[j][k];
        }
    BasisMatrix u{};
    // Columns of u are the basis vectors.
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r) u[r][c] = basis[c][r];
    return u;
}

GramMatrix transform(const GramMatrix& g, const BasisMatrix& u) {
    GramMatrix out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Int s = 0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    s += u[k][i] * g.a[k][l] * u[l][j];
            out.a[i][j] = s;
        }
    return out;
}

// ----------------------------------------------------- canonical reduce ----

namespace {

Int eval_q(const GramMatrix& g, const std::array<Int, 3>& x) {
    Int s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += g.a[i][j] * x[i] * x[j];
    return s;
}

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// All x with 0 < Q(x) <= bound, up to sign (first nonzero coordinate > 0).
std::vector<std::array<Int, 3>> short_vectors(const GramMatrix& g,
                                              const Int& bound) {
    Int det = g.det();
    std::array<Int, 3> lim;
    // x_i^2 <= bound * (G^{-1})_{ii} = bound * cof_ii / det.
    Int cof0 = g.a[1][1] * g.a[2][2] - g.a[1][2] * g.a[2][1];
    Int cof1 = g.a[0][0] * g.a[2][2] - g.a[0][2] * g.a[2][0];
    Int cof2 = g.a[0][0] * g.a[1][1] - g.a[0][1] * g.a[1][0];
    lim[0] = isqrt(bound * cof0 / det) + 1;
    lim[1] = isqrt(bound * cof1 / det) + 1;
    lim[2] = isqrt(bound * cof2 / det) + 1;
    std::vector<std::array<Int, 3>> out;
    for (Int x0 = 0; x0 <= lim[0]; ++x0)
        for (Int x1 = (x0 == 0 ? Int(0) : -lim[1]); x1 <= lim[1]; ++x1)
            for (Int x2 = ((x0 == 0 && x1 == 0) ? Int(0) : -lim[2]);
                 x2 <= lim[2]; ++x2) {
                if (x0 == 0 && x1 == 0 && x2 == 0) continue;
                std::array<Int, 3> x{x0, x1, x2};
                Int q = eval_q(g, x);
                if (q <= bound) out.push_back(x);
            }
    return out;
}

Int det_basis(const std::array<std::array<Int, 3>, 3>& v) {
    return v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1]) -
           v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0]) +
           v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
}

bool flat_less(const GramMatrix& a, const GramMatrix& b) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (a.a[i][j] != b.a[i][j]) return a.a[i][j] < b.a[i][j];
        }
    return false;
}

// Lexicographically minimal Gram over the 48 signed permutations.
GramMatrix signed_perm_min(const GramMatrix& g) {
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    GramMatrix best = g;
    bool first = true;
    for (const auto& pm : perms)
        for (int sgn = 0; sgn < 8; ++sgn) {
            GramMatrix t;
            int s[3] = {(sgn & 1) ? -1 : 1, (sgn & 2) ? -1 : 1,
                        (sgn & 4) ? -1 : 1};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    t.a[i][j] = Int(s[i] * s[j]) * g.a[pm[i]][pm[j]];
            if (first || flat_less(t, best)) {
                best = t;
                first = false;
            }
        }
    return best;
}

// Greedy size reduction to shrink entries before enumeration.
GramMatrix greedy_reduce(GramMatrix g) {
    for (int pass = 0; pass < 60; ++pass) {
        bool changed = false;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                // v_j <- v_j - t v_i with t = round(G_ij / G_ii).
                Rat q(g.a[i][j] * 2 + g.a[i][i], g.a[i][i] * 2);
                Int t;
                mpz_fdiv_q(t.get_mpz_t(), q.get_num().get_mpz_t(),
                           q.get_den().get_mpz_t());
                if (t == 0) continue;
                Int new_jj =
                    g.a[j][j] - 2 * t * g.a[i][j] + t * t * g.a[i][i];
                if (new_jj < g.a[j][j]) {
                    for (int k = 0; k < 3; ++k) g.a[j][k] -= t * g.a[i][k];
                    for (int k = 0; k < 3; ++k) g.a[k][j] -= t * g.a[k][i];
                    changed = true;
                }
            }
        if (!changed) break;
    }
    return g;
}

} // namespace

namespace {

Int cross_is_zero(const std::array<Int, 3>& x, const std::array<Int, 3>& y) {
    Int c0 = x[1] * y[2] - x[2] * y[1];
    Int c1 = x[2] * y[0] - x[0] * y[2];
    Int c2 = x[0] * y[1] - x[1] * y[0];
    return (c0 == 0 && c1 == 0 && c2 == 0) ? 1 : 0;
}

} // namespace

GramMatrix canonical_reduce(const GramMatrix& g) {
    validate(g);
    GramMatrix red = greedy_reduce(g);
    // max diagonal bounds the third successive minimum (the reduced basis
    // spans, so vectors of norm <= max diag already have full rank).
    Int bound = std::max({red.a[0][0], red.a[1][1], red.a[2][2]});
    auto vecs = short_vectors(red, bound);
    std::sort(vecs.begin(), vecs.end(),
              [&](const std::array<Int, 3>& x, const std::array<Int, 3>& y) {
                  Int qx = eval_q(red, x), qy = eval_q(red, y);
                  if (qx != qy) return qx < qy;
                  return x < y;
              });
    // Successive minima m1 <= m2 <= m3: scan in norm order, recording the
    // norms at which the accumulated span first reaches rank 1, 2, 3.
    Int m[3];
    int rank = 0;
    std::array<Int, 3> b1{}, b2{};
    for (const auto& v : vecs) {
        if (rank == 0) {
            m[0] = eval_q(red, v);
            b1 = v;
            rank = 1;
        } else if (rank == 1) {
            if (cross_is_zero(b1, v)) continue;
            m[1] = eval_q(red, v);
            b2 = v;
            rank = 2;
        } else {
            std::array<std::array<Int, 3>, 3> t{b1, b2, v};
            if (det_basis(t) == 0) continue;
            m[2] = eval_q(red, v);
            rank = 3;
            break;
        }
    }
    if (rank != 3) return signed_perm_min(red); // cannot happen for pos. def.
    // Candidate vectors per slot: those attaining the respective minimum.
    std::array<std::vector<std::array<Int, 3>>, 3> cand;
    for (const auto& v : vecs) {
        Int q = eval_q(red, v);
        for (int s = 0; s < 3; ++s)
            if (q == m[s]) cand[s].push_back(v);
    }
    // A successive-minima basis exists in rank 3; pick the triple whose Gram
    // (after signed-permutation normalization) is lexicographically least.
    GramMatrix best;
    bool have = false;
    std::size_t triples =
        cand[0].size() * cand[1].size() * cand[2].size();
    if (triples <= 500000) {
        for (const auto& v1 : cand[0])
            for (const auto& v2 : cand[1])
                for (const auto& v3 : cand[2]) {
                    std::array<std::array<Int, 3>, 3> v{v1, v2, v3};
                    if (abs(det_basis(v)) != 1) continue;
                    BasisMatrix u{};
                    for (int c = 0; c < 3; ++c)
                        for (int r = 0; r < 3; ++r) u[r][c] = v[c][r];
                    GramMatrix gg = signed_perm_min(transform(red, u));
                    if (!have || flat_less(gg, best)) {
                        best = gg;
                        have = true;
                    }
                }
    }
    if (!have) return signed_perm_min(red);
    return best;
}

} // namespace genusavg
