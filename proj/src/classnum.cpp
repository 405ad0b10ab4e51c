#include "genusavg/classnum.hpp"

#include "genusavg/config.hpp"
#include "genusavg/errors.hpp"

#include <map>
#include <mutex>

namespace genusavg {

namespace {

std::mutex g_mutex;
std::map<Int, Int> g_h_cache;
std::map<Int, Rat> g_H_cache;

template <typename Map, typename Key, typename Val>
void cache_put(Map& m, const Key& k, const Val& v) {
    if (m.size() >= config().memo_cap) m.clear();
    m.emplace(k, v);
}

// w_d / 2 for a discriminant d < 0.
int half_units(const Int& d) {
    if (d == -3) return 3;
    if (d == -4) return 2;
    return 1;
}

Int h_primitive_impl(const Int& d) {
    Int count = 0;
    for (Int a = 1; 3 * a * a <= -d; ++a) {
        // b must have the parity of d; scan |b| <= a.
        for (Int b = -a; b <= a; ++b) {
            if (((b - d) % 2) != 0) continue;
            Int num = b * b - d;
            if (num % (4 * a) != 0) continue;
            Int c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && (-b == a || a == c)) continue; // boundary convention
            Int g = gcd(a, b);
            g = gcd(g, c);
            if (g != 1) continue;
            ++count;
        }
    }
    return count;
}

} // namespace

Int h_primitive(const Int& d) {
    if (d >= 0) throw InvalidArgument("h_primitive: d must be negative");
    Int r4 = ((d % 4) + 4) % 4;
    if (r4 != 0 && r4 != 1)
        throw InvalidArgument("h_primitive: d must be 0 or 1 mod 4");
    std::lock_guard<std::mutex> lock(g_mutex);
    auto it = g_h_cache.find(d);
    if (it != g_h_cache.end()) return it->second;
    Int h = h_primitive_impl(d);
    cache_put(g_h_cache, d, h);
    return h;
}

Rat hurwitz(const Rat& x) {
    if (x.get_den() != 1) return 0;
    const Int N = x.get_num();
    if (N <= 0) return 0;
    Int r4 = N % 4;
    if (r4 == 1 || r4 == 2) return 0;
    {
        std::lock_guard<std::mutex> lock(g_mutex);
        auto it = g_H_cache.find(N);
        if (it != g_H_cache.end()) return it->second;
    }
    Rat sum = 0;
    for (Int f = 1; f * f <= N; ++f) {
        if (N % (f * f) != 0) continue;
        Int m = N / (f * f);
        Int m4 = m % 4;
        if (m4 != 0 && m4 != 3) continue; // -m must be 0 or 1 mod 4
        sum += Rat(h_primitive(-m), half_units(-m));
    }
    std::lock_guard<std::mutex> lock(g_mutex);
    cache_put(g_H_cache, N, sum);
    return sum;
}

Rat hurwitz_fast(const Int& N) {
    if (N < 1) throw InvalidArgument("hurwitz_fast: N must be >= 1");
    auto [d, F] = fundamental_discriminant(-N);
    Rat value(h_primitive(d), half_units(d));
    // The Euler-type product is 1 except at primes dividing the conductor;
    // ord_2(F) = -1 when F is a half-integer (then (d|2) = 0 and H(N) = 0).
    std::vector<std::pair<Int, long>> places;
    for (const auto& [p, e] : factorize(F.get_num()))
        places.emplace_back(p, e);
    if (F.get_den() == 2) places.emplace_back(2, -1);
    for (const auto& [p, m] : places) {
        Rat term = (rat_pow(p, m + 1) - 1 -
                    Rat(kronecker(d, p)) * (rat_pow(p, m) - 1)) /
                   Rat(p - 1);
        value *= term;
    }
    return value;
}

Rat hurwitz_reduce_q(const Int& N, const Int& q) {
    if (N < 1) throw InvalidArgument("hurwitz_reduce_q: N must be >= 1");
    if (!is_prime(q)) throw InvalidArgument("hurwitz_reduce_q: q must be prime");
    Int d = fundamental_discriminant(-N).first;
    long delta = (q == 2 && d % 4 == 0) ? 1 : 0;
    long mu = valuation(N, q) - 2 * delta;
    long fl = (mu >= 0) ? mu / 2 : -((-mu + 1) / 2); // floor(mu/2)
    Rat Nred = Rat(N) * rat_pow(q, -2 * fl);
    // fl = floor(mu/2) = ord_q(F) >= -1, so Nred is a positive integer.
    if (Nred.get_den() != 1)
        throw InvalidArgument("hurwitz_reduce_q: internal non-integral reduction");
    Int Nr = Nred.get_num();
    Rat bracket = (rat_pow(q, fl + 1) - 1 -
                   Rat(kronecker(-Nr, q)) * (rat_pow(q, fl) - 1)) /
                  Rat(q - 1);
    return hurwitz_fast(Nr) * bracket;
}

Int h_via_conductor(const Int& d, const Int& f) {
    if (f < 1) throw InvalidArgument("h_via_conductor: f must be >= 1");
    Int df2 = d * f * f;
    Rat value(h_primitive(d) * f * half_units(df2), half_units(d));
    value.canonicalize();
    for (const auto& [p, e] : factorize(f)) {
        (void)e;
        Rat chi(kronecker(d, p), p);
        chi.canonicalize();
        value *= 1 - chi;
    }
    if (value.get_den() != 1)
        throw InvalidArgument("h_via_conductor: non-integral result");
    return value.get_num();
}

void classnum_clear_cache() {
    std::lock_guard<std::mutex> lock(g_mutex);
    g_h_cache.clear();
    g_H_cache.clear();
}

} // namespace genusavg
