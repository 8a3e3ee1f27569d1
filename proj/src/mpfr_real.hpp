#pragma once

#include <climits>

#include <mpfr.h>

namespace rmedge::detail {

// Minimal RAII value type over mpfr_t; precision of new values is per thread.
class Real {
public:
    static mpfr_prec_t& precision() {
        static thread_local mpfr_prec_t p = 128;
        return p;
    }

    Real() { mpfr_init2(v_, precision()); mpfr_set_zero(v_, 1); }
    Real(double d) { mpfr_init2(v_, precision()); mpfr_set_d(v_, d, MPFR_RNDN); }
    Real(long i) { mpfr_init2(v_, precision()); mpfr_set_si(v_, i, MPFR_RNDN); }
    Real(int i) : Real(static_cast<long>(i)) {}
    Real(const Real& o) { mpfr_init2(v_, precision()); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) { mpfr_set(v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
    Real& operator/=(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long exponent() const { return mpfr_zero_p(v_) ? LONG_MIN / 2 : mpfr_get_exp(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }

    friend Real operator+(Real a, const Real& b) { return a += b; }
    friend Real operator-(Real a, const Real& b) { return a -= b; }
    friend Real operator*(Real a, const Real& b) { return a *= b; }
    friend Real operator/(Real a, const Real& b) { return a /= b; }
    friend Real operator*(Real a, long k) { return a *= k; }
    friend Real operator/(Real a, long k) { return a /= k; }
    friend Real operator-(Real a) { mpfr_neg(a.v_, a.v_, MPFR_RNDN); return a; }
    friend Real exp(const Real& a) { Real r; mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real sqrt(const Real& a) { Real r; mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }

private:
    mpfr_t v_;
};

}  // namespace rmedge::detail
