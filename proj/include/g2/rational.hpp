#pragma once

// Exact rational scalar domain, backed by GMP.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace g2 {

using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline int sgn(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

inline Rat abs(const Rat& x) { return ::abs(x); }

// Serialized as "num" or "num/den".
inline std::string rat_to_string(const Rat& x) {
    Rat c = x;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("cannot parse rational '" + s + "'");
    r.canonicalize();
    return r;
}

// x reduced into [0,1).
inline Rat mod1(const Rat& x) {
    mpz_class num = x.get_num(), den = x.get_den();
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Rat out(r, den);
    out.canonicalize();
    return out;
}

// Exact n-th root of a positive rational, when it exists.
inline std::optional<Rat> exact_root(const Rat& x, unsigned long n) {
    if (sgn(x) <= 0) return std::nullopt;
    Rat c = x;
    c.canonicalize();
    mpz_class rn, rd;
    int exact_n = mpz_root(rn.get_mpz_t(), c.get_num().get_mpz_t(), n);
    int exact_d = mpz_root(rd.get_mpz_t(), c.get_den().get_mpz_t(), n);
    if (!exact_n || !exact_d) return std::nullopt;
    Rat out(rn, rd);
    out.canonicalize();
    return out;
}

} // namespace g2
