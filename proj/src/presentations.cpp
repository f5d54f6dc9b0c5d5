#include "qpinf/presentations.hpp"

#include "qpinf/errors.hpp"

#include <numeric>

namespace qpinf {

BasicOpen QPPresentation::base(std::size_t i) const {
    auto [a, k] = cantor_unpair(i);
    return nbhd_base(point(a), k);
}

std::optional<BasicOpen> restrict_to_skeleton(const BasicOpen& o, std::size_t n) {
    if (o.chart < n || o.empty()) return std::nullopt;
    BasicOpen r;
    r.chart = o.chart - n;
    for (const auto& [i, iv] : o.constraints) {
        if (i < n) {
            if (!iv.contains(Rational(0))) return std::nullopt;
        } else {
            r.constraints[i - n] = iv;
        }
    }
    return r;
}

std::optional<ProjPoint> QPPresentation::meets_in(const BasicOpen& a, const BasicOpen& b, std::size_t n) const {
    auto ra = restrict_to_skeleton(a, n), rb = restrict_to_skeleton(b, n);
    if (!ra || !rb) return std::nullopt;
    auto w = meets(*ra, *rb);
    if (!w) return std::nullopt;
    return shift(*w, n);
}

std::optional<ProjPoint> QPPresentation::sample_in(const BasicOpen& o, std::size_t n, std::size_t i) const {
    auto z = meets_in(o, o, n);
    if (!z) return std::nullopt;
    ProjPoint q = i == 0 ? unit(n) : shift(point(i - 1), n + i % 3);
    if (i == 0 && z->level() == n) return z;
    for (long t = 1; t <= 256; ++t) {
        ProjPoint c = perturb(*z, q, pow2(-t));
        if (qpinf::member(c, o) && c.level() >= n) return c;
    }
    return z;
}

RationalEnum::RationalEnum()
    : e_([](unsigned w) { return w == 1 ? std::vector<Rational>{Rational(0)} : rationals_of_weight(w); }, 1) {}

Interval QLinePresentation::base(std::size_t i) const {
    auto [a, k] = cantor_unpair(i);
    return centered(point(a), clopen_radius(k));
}

std::optional<Rational> QLinePresentation::meets_in(const Interval& a, const Interval& b, std::size_t n) const {
    if (n > 0) return std::nullopt;
    Interval c{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (c.empty()) return std::nullopt;
    return c.pick();
}

std::optional<Rational> QLinePresentation::sample_in(const Interval& o, std::size_t n, std::size_t i) const {
    if (n > 0 || o.empty()) return std::nullopt;
    if (i == 0) return o.pick();
    QuadIrrational width = o.hi - o.lo;
    QuadIrrational a = o.lo + width / QuadIrrational(static_cast<long>(i + 2));
    QuadIrrational b = o.lo + width / QuadIrrational(static_cast<long>(i + 1));
    return rational_between(a, b);
}

std::optional<Rational> QLinePresentation::skeleton_sample(std::size_t n, std::size_t i) const {
    if (n > 0) return std::nullopt;
    return point(i);
}

QLinePresentation qline_presentation() { return {}; }

namespace {

bool is_squarefree(const mpz_class& b) {
    mpz_class x = b;
    for (mpz_class q = 2; q * q <= x; ++q) {
        if (x % q != 0) continue;
        x /= q;
        if (x % q == 0) return false;
    }
    return true;
}

mpz_class coprime_part(mpz_class b, const mpz_class& p) {
    for (;;) {
        mpz_class g = gcd(b, p);
        if (g == 1) return b;
        b /= g;
    }
}

mpz_class residue(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

bool is_prime(unsigned long q) {
    if (q < 2) return false;
    for (unsigned long f = 2; f * f <= q; ++f)
        if (q % f == 0) return false;
    return true;
}

}  // namespace

mpz_class prime_radical(const mpz_class& b) {
    mpz_class x = b, r = 1;
    for (mpz_class q = 2; q * q <= x; ++q) {
        if (x % q != 0) continue;
        r *= q;
        while (x % q == 0) x /= q;
    }
    if (x > 1) r *= x;
    return r;
}

std::optional<mpz_class> crt(const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d) {
    mpz_class g = gcd(b, d);
    if (residue(c - a, g) != 0) return std::nullopt;
    mpz_class l = lcm(b, d), inv, bg = b / g, dg = d / g;
    if (dg == 1) {
        inv = 0;
    } else {
        mpz_invert(inv.get_mpz_t(), bg.get_mpz_t(), dg.get_mpz_t());
    }
    mpz_class t = residue(mpz_class((c - a) / g * inv), dg);
    mpz_class x = residue(mpz_class(a + b * t), l);
    if (x <= 0) x += l;
    return x;
}

Progression ProgressionPresentation::base(std::size_t i) const {
    for (unsigned long b = 1;; ++b) {
        if (squarefree_ && !is_squarefree(mpz_class(b))) continue;
        for (unsigned long a = 1; a <= b; ++a) {
            if (std::gcd(a, b) != 1) continue;
            if (i-- == 0) return {mpz_class(a), mpz_class(b)};
        }
    }
}

bool ProgressionPresentation::member(const mpz_class& p, const Progression& o) const {
    return p >= 1 && residue(mpz_class(p - o.a), o.b) == 0;
}

Progression ProgressionPresentation::nbhd(const mpz_class& p, unsigned k) const {
    mpz_class d = 1;
    for (unsigned long q = 2; q <= k + 2; ++q) {
        if (!is_prime(q) || residue(p, mpz_class(q)) == 0) continue;
        mpz_class pw = q;
        if (!squarefree_)
            while (pw * q <= k + 2) pw *= q;
        d *= pw;
    }
    mpz_class a = residue(p, d);
    if (a == 0) a = d;
    return {a, d};
}

std::optional<mpz_class> ProgressionPresentation::meets_in(const Progression& a, const Progression& b, std::size_t n) const {
    if (n > 0) return std::nullopt;
    return crt(a.a, a.b, b.a, b.b);
}

std::optional<mpz_class> ProgressionPresentation::sample_in(const Progression& o, std::size_t n, std::size_t i) const {
    if (n > 0) return std::nullopt;
    mpz_class a = residue(o.a, o.b);
    if (a == 0) a = o.b;
    return mpz_class(a + o.b * static_cast<unsigned long>(i));
}

std::optional<mpz_class> ProgressionPresentation::skeleton_sample(std::size_t n, std::size_t i) const {
    if (n > 0) return std::nullopt;
    return point(i);
}

bool ProgressionPresentation::closure_member(const mpz_class& p, const Progression& o) const {
    mpz_class m = coprime_part(o.b, p);
    if (squarefree_) m = prime_radical(m);
    return residue(mpz_class(o.a - p), m) == 0;
}

bool ProgressionPresentation::is_base(const Progression& o) const {
    if (o.a < 1 || o.b < 1 || gcd(o.a, o.b) != 1) return false;
    return !squarefree_ || is_squarefree(o.b);
}

ProgressionPresentation golomb_presentation() { return ProgressionPresentation(false); }
ProgressionPresentation kirch_presentation() { return ProgressionPresentation(true); }

namespace {

long mod(long x, long m) { return ((x % m) + m) % m; }

// x ≡ a (b), x ≡ c (d) in machine integers; values stay below b*d
std::optional<long> crt_small(long a, long b, long c, long d) {
    long g = std::gcd(b, d);
    if (mod(c - a, g) != 0) return std::nullopt;
    long bg = b / g, dg = d / g, l = b * dg;
    long inv = 0;
    if (dg > 1) {
        long r0 = dg, r1 = mod(bg, dg), s0 = 0, s1 = 1;
        while (r1 != 0) {
            long q = r0 / r1;
            long r2 = r0 - q * r1, s2 = s0 - q * s1;
            r0 = r1, r1 = r2, s0 = s1, s1 = s2;
        }
        inv = mod(s0, dg);
    }
    long t = mod(mod((c - a) / g, dg) * inv, dg);
    long x = mod(a + b * t, l);
    return x == 0 ? l : x;
}

}  // namespace

GolombCertificate golomb_closure_contains(const Progression& u, const mpz_class& t, std::size_t horizon) {
    GolombCertificate cert;
    bool small = u.b.fits_slong_p() && u.a.fits_slong_p() && t.fits_slong_p() && u.b < (1L << 20) && horizon < (1UL << 20);
    for (std::size_t d = 1; d <= horizon; ++d) {
        mpz_class dz(static_cast<unsigned long>(d));
        if (gcd(t, dz) != 1) continue;
        mpz_class c = residue(t, dz);
        if (c == 0) c = dz;
        std::optional<mpz_class> w;
        if (small) {
            if (auto x = crt_small(u.a.get_si(), u.b.get_si(), c.get_si(), static_cast<long>(d))) w = mpz_class(*x);
        } else {
            w = crt(u.a, u.b, c, dz);
        }
        ++cert.neighbourhoods_checked;
        if (!w) {
            cert.refutation = Progression{c, dz};
            return cert;
        }
        if (cert.sample_witnesses.size() < 8) cert.sample_witnesses.push_back({Progression{c, dz}, *w});
    }
    cert.contains = true;
    return cert;
}

}  // namespace qpinf
