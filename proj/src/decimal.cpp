// Decimal rendering of ExactReal values. This is the only translation unit
// that touches binary floating point (MPFR), and only for display.

#include <mpfr.h>

#include <stdexcept>
#include <string>

#include "mcpc/exactnum.hpp"

namespace mcpc {

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Rounds a directed bound to the nearest integer (half up) in the same direction.
BigInt round_half_up(Mpfr& x, mpfr_rnd_t dir, mpfr_prec_t prec) {
  Mpfr shifted(prec);
  mpfr_add_d(shifted.get(), x.get(), 0.5, dir);
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), shifted.get(), MPFR_RNDD);
  return out;
}

std::string format_fixed(const BigInt& scaled, int digits) {
  bool negative = scaled < 0;
  std::string body = BigInt(abs(scaled)).get_str();
  if (body.size() <= static_cast<std::size_t>(digits)) {
    body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
  }
  body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  return (negative && scaled != 0 ? "-" : "") + body;
}

}  // namespace

std::string exact_to_decimal(const ExactReal& a, int digits) {
  if (digits < 1) throw std::invalid_argument("exact_to_decimal: digits must be >= 1");
  if (a.is_zero()) return format_fixed(0, digits);

  // A non-zero rational combination of logs of primes is the log of a rational
  // other than 1, hence transcendental: it never sits exactly on a rounding tie,
  // so refinement terminates.
  for (mpfr_prec_t prec = 128 + 4 * digits; prec < (1L << 22); prec *= 2) {
    Mpfr lo(prec), hi(prec), ln_lo(prec), ln_hi(prec), t_lo(prec), t_hi(prec);
    mpfr_set_zero(lo.get(), 1);
    mpfr_set_zero(hi.get(), 1);
    for (const auto& [p, c] : a.terms()) {
      mpfr_set_ui(ln_lo.get(), p, MPFR_RNDN);
      mpfr_log(ln_lo.get(), ln_lo.get(), MPFR_RNDD);
      mpfr_set_ui(ln_hi.get(), p, MPFR_RNDN);
      mpfr_log(ln_hi.get(), ln_hi.get(), MPFR_RNDU);
      const bool nonneg = c.get_num() >= 0;
      mpfr_mul_z(t_lo.get(), nonneg ? ln_lo.get() : ln_hi.get(), c.get_num_mpz_t(), MPFR_RNDD);
      mpfr_div_z(t_lo.get(), t_lo.get(), c.get_den_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(t_hi.get(), nonneg ? ln_hi.get() : ln_lo.get(), c.get_num_mpz_t(), MPFR_RNDU);
      mpfr_div_z(t_hi.get(), t_hi.get(), c.get_den_mpz_t(), MPFR_RNDU);
      mpfr_add(lo.get(), lo.get(), t_lo.get(), MPFR_RNDD);
      mpfr_add(hi.get(), hi.get(), t_hi.get(), MPFR_RNDU);
    }
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpfr_mul_z(lo.get(), lo.get(), scale.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(hi.get(), hi.get(), scale.get_mpz_t(), MPFR_RNDU);
    BigInt n_lo = round_half_up(lo, MPFR_RNDD, prec);
    BigInt n_hi = round_half_up(hi, MPFR_RNDU, prec);
    if (n_lo == n_hi) return format_fixed(n_lo, digits);
  }
  throw std::runtime_error("exact_to_decimal: precision limit reached");
}

}  // namespace mcpc
