#include "genusavg/localdensity.hpp"

#include "genusavg/config.hpp"
#include "genusavg/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace genusavg {

namespace {

// Residue of a p-integral rational mod m (m a prime power).
Int rat_mod(const Rat& x, const Int& m) {
    Int den = x.get_den();
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
        throw InvalidArgument("rat_mod: denominator not invertible");
    Int r = (x.get_num() % m) * inv % m;
    if (r < 0) r += m;
    return r;
}

} // namespace

Rat alpha_stable_odd(const LatticeProfile& L, const Int& p, const Int& n) {
    if (p == 2 || !is_prime(p))
        throw InvalidArgument("alpha_stable_odd: p must be an odd prime");
    if (n < 1) throw InvalidArgument("alpha_stable_odd: n must be >= 1");
    if (!is_stable_at(L.prim, p))
        throw NotStableAtP("alpha_stable_odd: lattice is not stable at p");
    long ord_d = valuation(L.d_L, p);
    long nu = valuation(n, p);
    if (ord_d == 0) {
        if (nu % 2 == 0) {
            Rat u = Rat(-n * L.d_L) * rat_pow(p, -nu); // unit
            return 1 + rat_pow(p, -1) - rat_pow(p, -(nu + 2) / 2) +
                   Rat(kronecker_rat(u, p)) * rat_pow(p, -(nu + 2) / 2);
        }
        return 1 + rat_pow(p, -1) - rat_pow(p, -(nu + 1) / 2) -
               rat_pow(p, -(nu + 3) / 2);
    }
    // ord_p(d_L) = 1: unimodular part M_p has rank 2.
    auto [rank, d_M] = unimodular_part(L.prim, p);
    if (rank != 2)
        throw NotStableAtP("alpha_stable_odd: unexpected Jordan shape");
    Rat chi(kronecker_rat(-d_M, p));
    if (nu % 2 == 0)
        return 1 + (1 - rat_pow(p, -nu / 2) - rat_pow(p, -(nu + 2) / 2)) * chi;
    Rat u = Rat(-n * L.d_L) * rat_pow(p, -(nu + 1)); // unit
    return 1 + (1 - rat_pow(p, -(nu + 1) / 2) +
                Rat(kronecker_rat(u, p)) * rat_pow(p, -(nu + 1) / 2)) *
                   chi;
}

Rat alpha_stable_two(const LatticeProfile& L, const Int& n) {
    if (n < 1) throw InvalidArgument("alpha_stable_two: n must be >= 1");
    if (!is_stable_at(L.prim, Int(2)))
        throw NotStableAtP("alpha_stable_two: lattice is not stable at 2");
    long a = valuation(n, 2);
    Int beta = n >> static_cast<unsigned long>(a);
    if (!L.even) {
        // d_L odd.  Classify beta * d_L^{-1} mod 8 via beta*d_L (d_L^2 = 1).
        Int cls = (beta * L.d_L) % 8;
        int iso = L.hasse_star.at(2); // +1 isotropic, -1 anisotropic
        Rat t;
        if (a % 2 == 1)
            t = 3 * rat_pow(2, -(a + 1) / 2);
        else if (cls == 1 || cls == 5)
            t = 3 * rat_pow(2, -(a + 2) / 2); // beta = d_L mod 4
        else if (cls == 3)
            t = rat_pow(2, -a / 2); // beta = 3 d_L mod 8
        else
            t = 0; // beta = 7 d_L mod 8
        return iso == 1 ? 2 - t : t;
    }
    // Even lattice: d_L / 2 is odd; the shape is always isotropic at 2.
    Int half = L.d_L / 2;
    Int cls = (beta * half) % 8;
    if (a % 2 == 0) return 3 - 3 * rat_pow(2, -a / 2);
    if (cls == 1 || cls == 5) return 3 - 3 * rat_pow(2, -(a + 1) / 2);
    if (cls == 3) return 3 - rat_pow(2, -(a - 1) / 2);
    return 3;
}

// ------------------------------------------------------- counting oracle ---

namespace {

std::mutex g_dist_mutex;

struct DistKey {
    std::string gram;
    Int p;
    long r;
    bool operator<(const DistKey& o) const {
        return std::tie(gram, p, r) < std::tie(o.gram, o.p, o.r);
    }
};

struct CachedDist {
    // head = convolution of the value distributions of all Jordan blocks but
    // the last; tail = distribution of the last block.  The count of x with
    // Q(x) = n mod p^r is sum_t head[t] * tail[(n - t) mod p^r].
    std::vector<std::uint64_t> head;
    std::vector<std::uint64_t> tail;
};

std::map<DistKey, CachedDist> g_dist_cache;

std::vector<std::uint64_t> block_distribution(const JordanBlock& b,
                                              const Int& p, long r,
                                              std::uint64_t m) {
    std::vector<std::uint64_t> dist(m, 0);
    Int mi(static_cast<unsigned long>(m));
    if (b.rank == 1) {
        if (b.scale_exp >= r) {
            dist[0] = m; // the block contributes 0 mod p^r for every x
            return dist;
        }
        std::uint64_t c =
            rat_mod(b.unit * rat_pow(p, b.scale_exp), mi).get_ui();
        for (std::uint64_t x = 0; x < m; ++x)
            dist[(c * ((x * x) % m)) % m] += 1;
        return dist;
    }
    // rank 2 (p = 2 only): Q = b11 x^2 + 2 b12 xy + b22 y^2, scaled.
    if (b.scale_exp >= r) {
        dist[0] = m * m;
        return dist;
    }
    Rat sc = rat_pow(p, b.scale_exp);
    std::uint64_t a11 = rat_mod(b.b11 * sc, mi).get_ui();
    std::uint64_t a12 = rat_mod(2 * b.b12 * sc, mi).get_ui();
    std::uint64_t a22 = rat_mod(b.b22 * sc, mi).get_ui();
    for (std::uint64_t x = 0; x < m; ++x) {
        std::uint64_t tx = (a11 * ((x * x) % m)) % m;
        std::uint64_t cx = (a12 * x) % m;
        for (std::uint64_t y = 0; y < m; ++y)
            dist[(tx + cx * y + a22 * ((y * y) % m)) % m] += 1;
    }
    return dist;
}

std::vector<std::uint64_t> convolve(const std::vector<std::uint64_t>& a,
                                    const std::vector<std::uint64_t>& b) {
    std::size_t m = a.size();
    std::vector<std::uint64_t> out(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] == 0) continue;
        std::uint64_t ai = a[i];
        std::size_t split = m - i;
        for (std::size_t j = 0; j < split; ++j) out[i + j] += ai * b[j];
        for (std::size_t j = split; j < m; ++j) out[i + j - m] += ai * b[j];
    }
    return out;
}

// Requires g_dist_mutex to be held by the caller.
const CachedDist& get_dist_locked(const GramMatrix& gram, const Int& p,
                                  long r) {
    DistKey key{gram.str(), p, r};
    auto it = g_dist_cache.find(key);
    if (it != g_dist_cache.end()) return it->second;

    Int mi = int_pow(p, r);
    std::uint64_t m = mi.get_ui();
    JordanSplitting js = jordan_decompose(gram, p);
    std::vector<std::vector<std::uint64_t>> dists;
    for (const auto& b : js.blocks)
        dists.push_back(block_distribution(b, p, r, m));
    // Keep the densest distribution as the tail and fold the others (sparsest
    // first) into the head: convolve skips zero entries of its first
    // argument, so this ordering minimizes the quadratic work.
    std::vector<std::size_t> nnz(dists.size(), 0);
    for (std::size_t i = 0; i < dists.size(); ++i)
        for (auto v : dists[i])
            if (v != 0) ++nnz[i];
    std::size_t tail_idx = 0;
    for (std::size_t i = 1; i < dists.size(); ++i)
        if (nnz[i] > nnz[tail_idx]) tail_idx = i;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < dists.size(); ++i)
        if (i != tail_idx) rest.push_back(i);
    std::sort(rest.begin(), rest.end(),
              [&](std::size_t a, std::size_t b) { return nnz[a] < nnz[b]; });
    CachedDist cd;
    cd.tail = std::move(dists[tail_idx]);
    cd.head = std::move(dists[rest.front()]);
    for (std::size_t i = 1; i < rest.size(); ++i)
        cd.head = convolve(cd.head, dists[rest[i]]);
    // Rank-2 tails carry m^2 samples already; keep head sample count so that
    // total = m^3 (checked below).
    std::uint64_t total_head = 0, total_tail = 0;
    for (auto v : cd.head) total_head += v;
    for (auto v : cd.tail) total_tail += v;
    if (total_head * total_tail != m * m * m)
        throw InvalidArgument("alpha_count: internal distribution mismatch");
    if (g_dist_cache.size() >= 64) g_dist_cache.clear();
    auto [pos, ok] = g_dist_cache.emplace(std::move(key), std::move(cd));
    (void)ok;
    return pos->second;
}

Rat alpha_at_depth(const GramMatrix& gram, const Int& p, long r,
                   const Int& n) {
    std::lock_guard<std::mutex> lock(g_dist_mutex);
    const CachedDist& cd = get_dist_locked(gram, p, r);
    std::uint64_t m = cd.head.size();
    std::uint64_t nm = Int(n % Int(static_cast<unsigned long>(m))).get_ui();
    // Count of x mod p^r with Q(x) = n, as the split convolution at nm.
    std::uint64_t count = 0;
    for (std::uint64_t t = 0; t < m; ++t) {
        if (cd.head[t] == 0) continue;
        std::uint64_t u = (nm >= t) ? nm - t : nm + m - t;
        count += cd.head[t] * cd.tail[u];
    }
    Rat alpha = Rat(Int(count)) * rat_pow(p, -2 * r);
    return alpha;
}

} // namespace

Rat alpha_count(const GramMatrix& gram, const Int& p, const Int& n) {
    validate(gram);
    if (!is_prime(p)) throw InvalidArgument("alpha_count: p must be prime");
    if (n < 1) throw InvalidArgument("alpha_count: n must be >= 1");
    long r = valuation(4 * gram.det() * n, p) + 1;
    if (r < 1) r = 1;
    const Int cap(static_cast<unsigned long>(config().depth_cap));
    if (int_pow(p, r) > cap)
        throw DepthLimitExceeded("alpha_count: depth cap below the "
                                 "stabilization floor");
    Rat prev = alpha_at_depth(gram, p, r, n);
    while (true) {
        ++r;
        // The value at the floor depth is already exact (densities of
        // nondegenerate ternary forms stabilize once p^r exceeds
        // ord_p(4 det n)); deeper passes only re-confirm it, so stop quietly
        // when the next confirmation depth is beyond the cap.
        if (int_pow(p, r) > cap) return prev;
        Rat cur = alpha_at_depth(gram, p, r, n);
        if (cur == prev) return cur;
        prev = cur;
    }
}

DensityValue alpha_best(const LatticeProfile& L, const Int& p, const Int& n) {
    if (is_stable_at(L.prim, p)) {
        if (p == 2) return {alpha_stable_two(L, n), "stable_two_lemma"};
        return {alpha_stable_odd(L, p, n), "stable_odd_lemma"};
    }
    if (p != 2 && valuation(n, p) == 0) {
        // Coprime shortcut via the unimodular Jordan component.
        auto [rank, d_M] = unimodular_part(L.prim, p);
        if (rank == 2)
            return {1 - Rat(kronecker_rat(-d_M, p), p), "generic_unimodular"};
        if (rank == 1)
            return {Rat(1 + kronecker_rat(Rat(n) * d_M, p)),
                    "generic_unimodular"};
    }
    return {alpha_count(L.prim, p, n), "counting_oracle"};
}

Rat c_factor(const LatticeProfile& L, const Int& p, const Int& n) {
    if (!is_prime(p)) throw InvalidArgument("c_factor: p must be prime");
    if ((2 * L.d_L) % p != 0)
        throw InvalidArgument("c_factor: p must divide 2 d_L");
    Int d = fundamental_discriminant(-4 * L.d_L * n).first;
    Rat alpha = alpha_best(L, p, n).value;
    Rat chi(kronecker(d, p), p);
    chi.canonicalize();
    return alpha * (1 - chi) / (1 - Rat(1, p * p));
}

void localdensity_clear_cache() {
    std::lock_guard<std::mutex> lock(g_dist_mutex);
    g_dist_cache.clear();
}

} // namespace genusavg
