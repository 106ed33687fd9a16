#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "qcspec/tracemap.hpp"

namespace qcs {

namespace {

// RAII wrapper for mpfr_t.
class Mp {
public:
    explicit Mp(long prec) { mpfr_init2(v_, std::clamp<long>(prec, MPFR_PREC_MIN, MPFR_PREC_MAX)); }
    ~Mp() { mpfr_clear(v_); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

// max(0, binary exponent); |v| < 2^expo(v)
long expo(mpfr_srcptr v) { return mpfr_zero_p(v) ? 0L : std::max(0L, static_cast<long>(mpfr_get_exp(v))); }

// absolute error budget per rounding: 2^-kGuard
constexpr long kGuard = 80;

}  // namespace

// Every stored x_j is rounded to 2 log2|x_j| + guard bits, so its absolute error
// is below 2^-guard / |x_j|; I moves by about |x_j| times that.  Products are
// rounded the same way relative to their size.  I is then evaluated directly as
// x_{k+1} (x_{k+1} - 2 x_k x_{k-1}) + x_k^2 + x_{k-1}^2, where the first factor is
// large times small, so nothing needs more than about 2 log2 max|x| bits.
InvariantAudit audit_fib_invariant(double lambda, double energy, int k_max) {
    if (k_max < 1) throw InvalidArgument("audit needs k_max >= 1");
    if (!std::isfinite(lambda) || !std::isfinite(energy)) throw InvalidArgument("audit needs finite lambda and E");

    InvariantAudit out;
    auto fit = [&](long exp_bits) {
        const long p = 2 * exp_bits + kGuard;
        out.precision_bits = std::max(out.precision_bits, p);
        return p;
    };

    std::vector<std::unique_ptr<Mp>> x;  // x[k + 1] = x_k
    std::vector<std::unique_ptr<Mp>> sq;  // sq[k + 1] = x_k^2
    auto push = [&](std::unique_ptr<Mp> v) {
        auto s = std::make_unique<Mp>(fit(expo(v->get())));
        mpfr_sqr(s->get(), v->get(), MPFR_RNDN);
        x.push_back(std::move(v));
        sq.push_back(std::move(s));
    };
    auto exact = [](double v, int shift) {
        auto r = std::make_unique<Mp>(64);
        mpfr_set_d(r->get(), v, MPFR_RNDN);
        mpfr_div_2ui(r->get(), r->get(), static_cast<unsigned long>(shift), MPFR_RNDN);
        return r;
    };
    push(exact(1.0, 0));
    push(exact(energy, 1));
    {
        auto half_lambda = exact(lambda, 1);
        auto x1 = std::make_unique<Mp>(128);
        mpfr_sub(x1->get(), x[1]->get(), half_lambda->get(), MPFR_RNDN);  // exact: both carry 53 bits
        push(std::move(x1));
    }
    Mp expected(160);
    {
        auto l = exact(lambda, 0);
        mpfr_sqr(expected.get(), l->get(), MPFR_RNDN);
        mpfr_div_2ui(expected.get(), expected.get(), 2, MPFR_RNDN);
        mpfr_add_ui(expected.get(), expected.get(), 1, MPFR_RNDN);
    }

    Mp dev(160), acc(64), d(64);
    // top = x_{k+1}, two = 2 x_k x_{k-1} as computed for the recursion
    auto deviation = [&](std::size_t i, mpfr_srcptr two) {
        mpfr_srcptr top = x[i]->get();
        const long et = expo(top);
        // top - two is of size |x_{k-2}|; keep it to 2^-(et + guard)
        const long ed_guess = expo(x[i - 3]->get()) + 2;
        mpfr_set_prec(d.get(), std::max<long>(ed_guess + et + kGuard, 64));
        mpfr_sub(d.get(), top, two, MPFR_RNDN);
        mpfr_set_prec(acc.get(), fit(std::max(et + expo(d.get()), 2 * expo(x[i - 1]->get())) / 2 + 1));
        mpfr_mul(acc.get(), top, d.get(), MPFR_RNDN);
        mpfr_add(acc.get(), acc.get(), sq[i - 1]->get(), MPFR_RNDN);
        mpfr_add(acc.get(), acc.get(), sq[i - 2]->get(), MPFR_RNDN);
        mpfr_sub(dev.get(), acc.get(), expected.get(), MPFR_RNDN);
        return std::abs(mpfr_get_d(dev.get(), MPFR_RNDN));
    };

    {
        // k = 0: x_1 (x_1 - 2 x_0 x_{-1}) + x_0^2 + x_{-1}^2
        Mp two(256);
        mpfr_mul(two.get(), x[1]->get(), x[0]->get(), MPFR_RNDN);
        mpfr_mul_2ui(two.get(), two.get(), 1, MPFR_RNDN);
        mpfr_set_prec(d.get(), 256);
        mpfr_sub(d.get(), x[2]->get(), two.get(), MPFR_RNDN);
        mpfr_set_prec(acc.get(), 512);
        mpfr_mul(acc.get(), x[2]->get(), d.get(), MPFR_RNDN);
        mpfr_add(acc.get(), acc.get(), sq[1]->get(), MPFR_RNDN);
        mpfr_add(acc.get(), acc.get(), sq[0]->get(), MPFR_RNDN);
        mpfr_sub(dev.get(), acc.get(), expected.get(), MPFR_RNDN);
        out.max_deviation = std::abs(mpfr_get_d(dev.get(), MPFR_RNDN));
    }
    for (int k = 1; k < k_max; ++k) {
        // x_{k+1} = 2 x_k x_{k-1} - x_{k-2}
        mpfr_srcptr a = x[static_cast<std::size_t>(k + 1)]->get();
        mpfr_srcptr b = x[static_cast<std::size_t>(k)]->get();
        mpfr_srcptr c = x[static_cast<std::size_t>(k - 1)]->get();
        const long e_next = expo(a) + expo(b) + 2;
        const long exact_bits = static_cast<long>(mpfr_get_prec(a) + mpfr_get_prec(b));
        Mp two(std::min(exact_bits, fit(e_next) + 8));
        mpfr_mul(two.get(), a, b, MPFR_RNDN);
        mpfr_mul_2ui(two.get(), two.get(), 1, MPFR_RNDN);
        auto next = std::make_unique<Mp>(fit(e_next));
        mpfr_sub(next->get(), two.get(), c, MPFR_RNDN);
        push(std::move(next));
        out.max_deviation = std::max(out.max_deviation, deviation(x.size() - 1, two.get()));
        if (!std::isfinite(out.max_deviation)) break;
    }
    for (const auto& v : x) {
        if (!mpfr_zero_p(v->get()))
            out.max_log2_abs = std::max(out.max_log2_abs, static_cast<double>(mpfr_get_exp(v->get())));
    }
    return out;
}

}  // namespace qcs
