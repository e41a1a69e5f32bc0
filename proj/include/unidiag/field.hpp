#pragma once

// Exact scalar arithmetic over Q, prime fields F_p and extension fields
// F_{p^k}, plus integer/binomial utilities used throughout the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace unidiag {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct field_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FieldMismatch : field_error {
    FieldMismatch() : field_error("FieldMismatch: operands belong to different fields") {}
};
struct DivisionByZero : field_error {
    DivisionByZero() : field_error("DivisionByZero") {}
};
struct NotPrime : field_error {
    explicit NotPrime(uint64_t p) : field_error("NotPrime: " + std::to_string(p)) {}
};
struct NotPrimePower : field_error {
    explicit NotPrimePower(uint64_t q) : field_error("NotPrimePower: " + std::to_string(q)) {}
};

inline bool is_prime_u32(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// FieldSpec

class FieldSpec {
  public:
    enum class Kind { Char0, Prime, Extension };

    Kind kind() const { return kind_; }
    uint32_t p() const { return p_; }
    uint32_t degree() const { return k_; }
    // Residues of 0 in characteristic 0; q = p^k otherwise.
    uint64_t order() const {
        if (kind_ == Kind::Char0) return 0;
        uint64_t q = 1;
        for (uint32_t i = 0; i < k_; ++i) q *= p_;
        return q;
    }
    uint32_t characteristic() const { return kind_ == Kind::Char0 ? 0 : p_; }
    // Coefficients c_0..c_{k-1} of the monic modulus x^k + sum c_i x^i.
    const std::vector<uint32_t>& modulus() const { return mod_; }

    bool operator==(const FieldSpec& o) const {
        return kind_ == o.kind_ && p_ == o.p_ && k_ == o.k_;
    }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }

    // Grammar: "0" (Q), "p" (prime field), "p^k" (extension field).
    std::string to_string() const {
        if (kind_ == Kind::Char0) return "0";
        if (kind_ == Kind::Prime) return std::to_string(p_);
        return std::to_string(p_) + "^" + std::to_string(k_);
    }

    static const FieldSpec& rationals() { return intern(Kind::Char0, 0, 0); }

    static const FieldSpec& prime(uint32_t p) {
        if (!is_prime_u32(p)) throw NotPrime(p);
        return intern(Kind::Prime, p, 1);
    }

    static const FieldSpec& extension(uint32_t p, uint32_t k) {
        if (!is_prime_u32(p)) throw NotPrime(p);
        if (k == 0) throw field_error("extension degree must be positive");
        if (k == 1) return prime(p);
        return intern(Kind::Extension, p, k);
    }

    // q = p^k by trial factorisation.
    static const FieldSpec& of_order(uint64_t q) {
        if (q < 2) throw NotPrimePower(q);
        uint64_t p = q;
        for (uint64_t d = 2; d * d <= p; ++d)
            while (p % d == 0) { p = d; break; }
        // smallest prime factor
        uint64_t sp = 0;
        for (uint64_t d = 2; d * d <= q; ++d)
            if (q % d == 0) { sp = d; break; }
        if (sp == 0) sp = q;
        uint32_t k = 0;
        uint64_t t = q;
        while (t > 1) {
            if (t % sp != 0) throw NotPrimePower(q);
            t /= sp;
            ++k;
        }
        return extension(static_cast<uint32_t>(sp), k);
    }

    static const FieldSpec& parse(const std::string& s) {
        auto caret = s.find('^');
        if (caret == std::string::npos) {
            long v = std::stol(s);
            if (v == 0) return rationals();
            return prime(static_cast<uint32_t>(v));
        }
        uint32_t p = static_cast<uint32_t>(std::stol(s.substr(0, caret)));
        uint32_t k = static_cast<uint32_t>(std::stol(s.substr(caret + 1)));
        return extension(p, k);
    }

  private:
    Kind kind_;
    uint32_t p_ = 0, k_ = 0;
    std::vector<uint32_t> mod_;

    FieldSpec(Kind kind, uint32_t p, uint32_t k) : kind_(kind), p_(p), k_(k) {
        if (kind_ == Kind::Extension) mod_ = canonical_modulus(p, k);
    }

    static const FieldSpec& intern(Kind kind, uint32_t p, uint32_t k) {
        static std::mutex mtx;
        static std::map<std::pair<uint32_t, uint32_t>, std::unique_ptr<FieldSpec>> cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto key = std::make_pair(kind == Kind::Char0 ? 0u : p, kind == Kind::Char0 ? ~0u : k);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, std::unique_ptr<FieldSpec>(new FieldSpec(kind, p, k))).first;
        return *it->second;
    }

    // The canonical modulus is the lexicographically least monic irreducible,
    // comparing coefficient tuples (c_{k-1}, ..., c_0).
    static std::vector<uint32_t> canonical_modulus(uint32_t p, uint32_t k) {
        std::vector<uint32_t> c(k, 0);
        while (true) {
            if (irreducible(c, p, k)) return c;
            // increment (c_{k-1},...,c_0) as a base-p number with c_0 least significant
            // in the *comparison* order, i.e. bump c_0 last.
            int i = 0;
            while (i < static_cast<int>(k) && c[i] == p - 1) { c[i] = 0; ++i; }
            if (i == static_cast<int>(k)) throw field_error("no irreducible modulus found");
            ++c[i];
        }
    }

    // Trial division by monic polynomials of degree <= k/2, exact over F_p.
    static bool irreducible(const std::vector<uint32_t>& c, uint32_t p, uint32_t k) {
        if (c[0] == 0) return false; // divisible by x
        std::vector<uint32_t> f(c);
        f.push_back(1); // degree k, coefficients f[0..k]
        for (uint32_t d = 1; 2 * d <= k; ++d) {
            std::vector<uint32_t> g(d + 1, 0);
            g[d] = 1;
            // iterate over all monic degree-d polynomials
            while (true) {
                if (divides(g, f, p)) return false;
                uint32_t i = 0;
                while (i < d && g[i] == p - 1) { g[i] = 0; ++i; }
                if (i == d) break;
                ++g[i];
            }
        }
        return true;
    }

    static bool divides(std::vector<uint32_t> g, const std::vector<uint32_t>& f, uint32_t p) {
        std::vector<uint32_t> r(f);
        size_t dg = g.size() - 1;
        while (r.size() >= g.size()) {
            size_t dr = r.size() - 1;
            uint64_t lead = r[dr] % p;
            if (lead != 0) {
                for (size_t i = 0; i <= dg; ++i) {
                    uint64_t sub = (lead * g[i]) % p;
                    uint64_t cur = r[dr - dg + i];
                    r[dr - dg + i] = static_cast<uint32_t>((cur + p - sub % p) % p);
                }
            }
            r.pop_back();
        }
        for (uint32_t x : r)
            if (x % p != 0) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Scalar

class Scalar {
  public:
    Scalar() : f_(&FieldSpec::rationals()) {}
    explicit Scalar(const FieldSpec& f) : f_(&f) {
        if (ext()) e_.assign(f.degree(), 0);
    }

    static Scalar zero(const FieldSpec& f) { return Scalar(f); }
    static Scalar one(const FieldSpec& f) { return from_int(f, 1); }

    static Scalar from_int(const FieldSpec& f, long long v) {
        Scalar s(f);
        switch (f.kind()) {
            case FieldSpec::Kind::Char0: s.q_ = v; break;
            case FieldSpec::Kind::Prime: {
                long long m = v % static_cast<long long>(f.p());
                if (m < 0) m += f.p();
                s.r_ = static_cast<uint64_t>(m);
                break;
            }
            case FieldSpec::Kind::Extension: {
                long long m = v % static_cast<long long>(f.p());
                if (m < 0) m += f.p();
                s.e_[0] = static_cast<uint32_t>(m);
                break;
            }
        }
        return s;
    }

    static Scalar from_big(const FieldSpec& f, const BigInt& v) {
        Scalar s(f);
        switch (f.kind()) {
            case FieldSpec::Kind::Char0: s.q_ = v; break;
            default: {
                BigInt m = v % f.p();
                if (m < 0) m += f.p();
                uint32_t r = m.convert_to<uint32_t>();
                if (f.kind() == FieldSpec::Kind::Prime) s.r_ = r;
                else s.e_[0] = r;
            }
        }
        return s;
    }

    static Scalar from_rational(const FieldSpec& f, const BigRat& v) {
        if (f.kind() != FieldSpec::Kind::Char0) {
            // interpret as numerator * denominator^{-1}
            Scalar num = from_big(f, boost::multiprecision::numerator(v));
            Scalar den = from_big(f, boost::multiprecision::denominator(v));
            return num * den.inv();
        }
        Scalar s(f);
        s.q_ = v;
        return s;
    }

    // Extension field element with coefficient vector c_0..c_{k-1}.
    static Scalar from_poly(const FieldSpec& f, std::vector<uint32_t> coeffs) {
        if (f.kind() != FieldSpec::Kind::Extension)
            throw field_error("from_poly requires an extension field");
        coeffs.resize(f.degree(), 0);
        Scalar s(f);
        for (size_t i = 0; i < coeffs.size(); ++i) s.e_[i] = coeffs[i] % f.p();
        return s;
    }

    const FieldSpec& field() const { return *f_; }

    bool is_zero() const {
        switch (f_->kind()) {
            case FieldSpec::Kind::Char0: return q_ == 0;
            case FieldSpec::Kind::Prime: return r_ == 0;
            default:
                for (uint32_t c : e_)
                    if (c) return false;
                return true;
        }
    }
    bool is_one() const { return *this == one(*f_); }

    bool operator==(const Scalar& o) const {
        if (*f_ != *o.f_) return false;
        switch (f_->kind()) {
            case FieldSpec::Kind::Char0: return q_ == o.q_;
            case FieldSpec::Kind::Prime: return r_ == o.r_;
            default: return e_ == o.e_;
        }
    }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar operator+(const Scalar& o) const {
        check(o);
        Scalar s(*f_);
        switch (f_->kind()) {
            case FieldSpec::Kind::Char0: s.q_ = q_ + o.q_; break;
            case FieldSpec::Kind::Prime: s.r_ = (r_ + o.r_) % f_->p(); break;
            default:
                for (size_t i = 0; i < e_.size(); ++i)
                    s.e_[i] = (e_[i] + o.e_[i]) % f_->p();
        }
        return s;
    }

    Scalar operator-() const {
        Scalar s(*f_);
        switch (f_->kind()) {
            case FieldSpec::Kind::Char0: s.q_ = -q_; break;
            case FieldSpec::Kind::Prime: s.r_ = r_ == 0 ? 0 : f_->p() - r_; break;
            default:
                for (size_t i = 0; i < e_.size(); ++i)
                    s.e_[i] = e_[i] == 0 ? 0 : f_->p() - e_[i];
        }
        return s;
    }

    Scalar operator-(const Scalar& o) const { return *this + (-o); }

    Scalar operator*(const Scalar& o) const {
        check(o);
        Scalar s(*f_);
        switch (f_->kind()) {
            case FieldSpec::Kind::Char0: s.q_ = q_ * o.q_; break;
            case FieldSpec::Kind::Prime: s.r_ = (r_ * o.r_) % f_->p(); break;
            default: s.e_ = mul_mod(e_, o.e_, *f_);
        }
        return s;
    }

    Scalar inv() const {
        if (is_zero()) throw DivisionByZero();
        Scalar s(*f_);
        switch (f_->kind()) {
            case FieldSpec::Kind::Char0: s.q_ = 1 / q_; break;
            case FieldSpec::Kind::Prime: {
                // Fermat: r^(p-2)
                uint64_t base = r_, e = f_->p() - 2, acc = 1, p = f_->p();
                while (e) {
                    if (e & 1) acc = acc * base % p;
                    base = base * base % p;
                    e >>= 1;
                }
                s.r_ = acc;
                break;
            }
            default: s.e_ = inv_mod(e_, *f_);
        }
        return s;
    }

    Scalar operator/(const Scalar& o) const { return *this * o.inv(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    // Canonical textual form: reduced fraction / residue / polynomial coeffs.
    std::string to_string() const {
        std::ostringstream os;
        switch (f_->kind()) {
            case FieldSpec::Kind::Char0: os << q_; break;
            case FieldSpec::Kind::Prime: os << r_; break;
            default: {
                bool first = true;
                for (size_t i = 0; i < e_.size(); ++i) {
                    if (!e_[i]) continue;
                    if (!first) os << "+";
                    first = false;
                    if (i == 0 || e_[i] != 1) os << e_[i];
                    if (i >= 1) os << "x";
                    if (i >= 2) os << "^" << i;
                }
                if (first) os << "0";
            }
        }
        return os.str();
    }

    const BigRat& rational() const { return q_; }
    uint64_t residue() const { return r_; }
    const std::vector<uint32_t>& poly() const { return e_; }

  private:
    const FieldSpec* f_;
    BigRat q_;
    uint64_t r_ = 0;
    std::vector<uint32_t> e_;

    void check(const Scalar& o) const {
        if (*f_ != *o.f_) throw FieldMismatch();
    }

    bool ext() const { return f_->kind() == FieldSpec::Kind::Extension; }

    static std::vector<uint32_t> mul_mod(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b, const FieldSpec& f) {
        uint32_t p = f.p(), k = f.degree();
        std::vector<uint64_t> prod(2 * k - 1, 0);
        for (uint32_t i = 0; i < k; ++i)
            for (uint32_t j = 0; j < k; ++j) prod[i + j] += uint64_t(a[i]) * b[j] % p;
        // reduce by x^k = -modulus tail
        const auto& m = f.modulus();
        for (int d = static_cast<int>(2 * k - 2); d >= static_cast<int>(k); --d) {
            uint64_t c = prod[d] % p;
            if (!c) continue;
            prod[d] = 0;
            for (uint32_t i = 0; i < k; ++i) {
                uint64_t sub = c * m[i] % p;
                prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
            }
        }
        std::vector<uint32_t> out(k);
        for (uint32_t i = 0; i < k; ++i) out[i] = static_cast<uint32_t>(prod[i] % p);
        return out;
    }

    // Extended Euclid over F_p[x] against the modulus.
    static std::vector<uint32_t> inv_mod(const std::vector<uint32_t>& a, const FieldSpec& f) {
        uint32_t p = f.p(), k = f.degree();
        auto trim = [](std::vector<int64_t>& v) {
            while (!v.empty() && v.back() == 0) v.pop_back();
        };
        auto pinv = [p](int64_t x) {
            x %= p; if (x < 0) x += p;
            int64_t b = x, e = p - 2, acc = 1;
            while (e) { if (e & 1) acc = acc * b % p; b = b * b % p; e >>= 1; }
            return acc;
        };
        std::vector<int64_t> r0(f.modulus().begin(), f.modulus().end());
        r0.push_back(1);
        std::vector<int64_t> r1(a.begin(), a.end());
        trim(r1);
        std::vector<int64_t> s0{0}, s1{1};
        while (!r1.empty()) {
            // divide r0 by r1
            std::vector<int64_t> q(std::max<size_t>(r0.size(), r1.size()), 0);
            std::vector<int64_t> rem(r0);
            while (rem.size() >= r1.size() && !rem.empty()) {
                size_t shift = rem.size() - r1.size();
                int64_t c = rem.back() % p * pinv(r1.back()) % p;
                q[shift] = (q[shift] + c) % p;
                for (size_t i = 0; i < r1.size(); ++i)
                    rem[shift + i] = ((rem[shift + i] - c * r1[i]) % p + int64_t(p) * p) % p;
                trim(rem);
            }
            q.resize(r0.size() + 1);
            trim(q);
            // s_next = s0 - q*s1
            std::vector<int64_t> t(std::max(s0.size(), q.size() + s1.size()), 0);
            for (size_t i = 0; i < s0.size(); ++i) t[i] = s0[i];
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < s1.size(); ++j)
                    t[i + j] = ((t[i + j] - q[i] * s1[j]) % p + int64_t(p) * p) % p;
            trim(t);
            s0 = s1; s1 = t;
            r0 = r1; r1 = rem;
        }
        // r0 is gcd (nonzero constant since modulus irreducible)
        if (r0.size() != 1) throw DivisionByZero();
        int64_t c = pinv(r0[0]);
        std::vector<uint32_t> out(k, 0);
        for (size_t i = 0; i < s0.size() && i < k; ++i)
            out[i] = static_cast<uint32_t>(s0[i] * c % p);
        return out;
    }
};

inline Scalar operator*(long long a, const Scalar& s) {
    return Scalar::from_int(s.field(), a) * s;
}

// All elements of a finite field, in lexicographic coefficient order.
inline std::vector<Scalar> field_elements(const FieldSpec& f) {
    if (f.kind() == FieldSpec::Kind::Char0)
        throw field_error("field_elements requires a finite field");
    std::vector<Scalar> out;
    if (f.kind() == FieldSpec::Kind::Prime) {
        for (uint32_t i = 0; i < f.p(); ++i) out.push_back(Scalar::from_int(f, i));
        return out;
    }
    uint32_t k = f.degree(), p = f.p();
    std::vector<uint32_t> c(k, 0);
    while (true) {
        out.push_back(Scalar::from_poly(f, c));
        uint32_t i = 0;
        while (i < k && c[i] == p - 1) { c[i] = 0; ++i; }
        if (i == k) break;
        ++c[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binomial utilities

inline BigInt binomial(uint64_t l, uint64_t k) {
    if (k > l) return 0;
    if (k > l - k) k = l - k;
    BigInt r = 1;
    for (uint64_t i = 1; i <= k; ++i) {
        r *= l - k + i;
        r /= i;
    }
    return r;
}

inline BigInt factorial(uint64_t n) {
    BigInt r = 1;
    for (uint64_t i = 2; i <= n; ++i) r *= i;
    return r;
}

// binomial(l,k) mod p by Lucas decomposition; agrees with exact reduction.
inline Scalar binomial_mod(uint64_t l, uint64_t k, uint32_t p) {
    const FieldSpec& f = FieldSpec::prime(p);
    if (k > l) return Scalar::zero(f);
    uint64_t acc = 1;
    while (l || k) {
        uint64_t ld = l % p, kd = k % p;
        if (kd > ld) return Scalar::zero(f);
        uint64_t c = (binomial(ld, kd) % p).convert_to<uint64_t>();
        acc = acc * c % p;
        l /= p;
        k /= p;
    }
    return Scalar::from_int(f, static_cast<long long>(acc));
}

} // namespace unidiag
