#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cassert>
#include <cstdint>
#include <string>
#include <variant>

#include "qk/common.hpp"

/*
 * Exact coefficient fields.  A field is a small value object exposing the
 * arithmetic of its element type; matrices and subspaces carry one by value
 * so that all downstream code is generic over GF(p) and Q.
 */
namespace qk {

/* Prime field GF(p).  Elements are canonical representatives in [0, p);
 * p must be prime and small enough that (p-1)^2 fits in int64 (p < 2^31). */
struct GF {
    using elem = std::int64_t;
    std::int64_t p = 32003;

    elem zero() const { return 0; }
    elem one() const { return 1 % p; }
    elem from_int(std::int64_t n) const {
        n %= p;
        return n < 0 ? n + p : n;
    }
    elem add(elem a, elem b) const { return (a + b) % p; }
    elem sub(elem a, elem b) const { return (a - b + p) % p; }
    elem mul(elem a, elem b) const { return (a * b) % p; }
    elem neg(elem a) const { return a == 0 ? 0 : p - a; }
    elem inv(elem a) const {
        assert(a != 0 && "division by zero in GF(p)");
        // extended Euclid on (a, p)
        std::int64_t t = 0, new_t = 1, r = p, new_r = a;
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            std::int64_t tmp = t - q * new_t;
            t = new_t; new_t = tmp;
            tmp = r - q * new_r;
            r = new_r; new_r = tmp;
        }
        assert(r == 1 && "modulus not prime or element not invertible");
        return t < 0 ? t + p : t;
    }
    elem div(elem a, elem b) const { return mul(a, inv(b)); }
    bool is_zero(elem a) const { return a == 0; }
    std::string str(elem a) const { return std::to_string(a); }
    bool operator==(const GF& o) const { return p == o.p; }
};

/* Rational numbers, exact. */
struct QQ {
    using elem = boost::multiprecision::cpp_rational;

    elem zero() const { return 0; }
    elem one() const { return 1; }
    elem from_int(std::int64_t n) const { return n; }
    elem add(const elem& a, const elem& b) const { return a + b; }
    elem sub(const elem& a, const elem& b) const { return a - b; }
    elem mul(const elem& a, const elem& b) const { return a * b; }
    elem neg(const elem& a) const { return -a; }
    elem inv(const elem& a) const {
        assert(a != 0 && "division by zero in Q");
        return 1 / a;
    }
    elem div(const elem& a, const elem& b) const { return a / b; }
    bool is_zero(const elem& a) const { return a == 0; }
    std::string str(const elem& a) const { return a.str(); }
    bool operator==(const QQ&) const { return true; }
};

/* Runtime field selection (CLI input: `p = <prime>` or `rational`). */
struct FieldSpec {
    bool rational = false;
    std::int64_t p = 32003;

    std::string str() const { return rational ? "rational" : "GF(" + std::to_string(p) + ")"; }
    bool operator==(const FieldSpec&) const = default;
};

} // namespace qk
