#include "merom/value.hpp"

#include <optional>

namespace merom {

namespace {
std::optional<Rat>& theta_slot() {
    static std::optional<Rat> slot;
    return slot;
}
} // namespace

void set_theta_sq(const Rat& d) {
    if (sgn(d) <= 0) fail(errc::precondition_violated, "theta_sq must be positive");
    // Square rationals would collapse the value group into Q and break exact
    // sign decisions that assume q*theta irrational for q != 0.
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), d.get_num().get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_den().get_mpz_t());
    if (rn * rn == d.get_num() && rd * rd == d.get_den())
        fail(errc::precondition_violated, "theta_sq must not be a rational square");
    auto& slot = theta_slot();
    if (slot && *slot != d)
        fail(errc::precondition_violated, "theta is write-once per session");
    slot = d;
}

const Rat& theta_sq() {
    auto& slot = theta_slot();
    if (!slot) slot = Rat(2);
    return *slot;
}

void set_theta_token(const std::string& tok) {
    if (tok.rfind("sqrt", 0) != 0 || tok.size() == 4)
        fail(errc::parse_error, "theta token must look like sqrtN, got '" + tok + "'");
    set_theta_sq(parse_rat(tok.substr(4)));
}

int sign(const ValueElt& v) {
    int sp = sgn(v.p), sq = sgn(v.q);
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    // Opposite signs: compare |p| with |q|*theta, i.e. p^2 with q^2*theta_sq.
    Rat lhs = v.p * v.p, rhs = v.q * v.q * theta_sq();
    if (lhs == rhs) fail(errc::invariant_violation, "theta_sq turned out to be a rational square");
    return (lhs > rhs) ? sp : sq;
}

ValueElt mul(const ValueElt& a, const ValueElt& b) {
    return {a.p * b.p + a.q * b.q * theta_sq(), a.p * b.q + a.q * b.p};
}

ValueElt div(const ValueElt& a, const ValueElt& b) {
    Rat n = b.p * b.p - b.q * b.q * theta_sq();
    if (sgn(n) == 0) {
        if (sgn(b.p) == 0 && sgn(b.q) == 0) fail(errc::division_by_zero, "value quotient by zero");
        fail(errc::invariant_violation, "theta_sq turned out to be a rational square");
    }
    ValueElt prod = mul(a, {b.p, -b.q});
    return {prod.p / n, prod.q / n};
}

long floor(const ValueElt& v) {
    if (v.is_rational()) return rat_floor(v.p);
    // Start from a rational estimate of theta good to ~1e-3, then correct by
    // exact comparisons; the walk is a couple of steps at most.
    mpz_class scaled = theta_sq().get_num() * 1000000 / theta_sq().get_den();
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    Rat approx = Rat(root) / 1000;
    long k = rat_floor(v.p + v.q * approx) - 2;
    while (ValueElt(Rat(k + 1)) <= v) ++k;
    while (ValueElt(Rat(k)) > v) --k;
    return k;
}

std::string value_str(const ValueElt& v) {
    if (v.is_rational()) return rat_str(v.p);
    std::string s = rat_str(v.p) + (sgn(v.q) >= 0 ? "+" : "") + rat_str(v.q) + "*theta";
    return s;
}

} // namespace merom
