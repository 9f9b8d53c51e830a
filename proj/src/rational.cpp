#include "merom/rational.hpp"

namespace merom {

Rat parse_rat(const std::string& s) {
    if (s.empty()) fail(errc::parse_error, "empty rational literal");
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && (i == 0 || s[i - 1] == '/'));
        if (!ok) fail(errc::parse_error, "bad rational literal '" + s + "'");
    }
    try {
        Rat r(s);
        if (r.get_den() == 0) fail(errc::division_by_zero, "zero denominator in '" + s + "'");
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        fail(errc::parse_error, "bad rational literal '" + s + "'");
    }
}

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

long rat_floor(const Rat& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    if (!q.fits_slong_p()) fail(errc::precision_loss, "floor out of long range");
    return q.get_si();
}

long rat_ceil(const Rat& r) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    if (!q.fits_slong_p()) fail(errc::precision_loss, "ceil out of long range");
    return q.get_si();
}

long to_long(const Rat& r) {
    if (r.get_den() != 1) fail(errc::shape_mismatch, "expected integer, got " + rat_str(r));
    if (!r.get_num().fits_slong_p()) fail(errc::precision_loss, "integer out of long range");
    return r.get_num().get_si();
}

} // namespace merom
