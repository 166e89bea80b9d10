#include "asjet/ffield.hpp"

#include <algorithm>
#include <sstream>

namespace asjet {

namespace {

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

uint64_t powmod_u64(uint64_t a, uint64_t k, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (k) {
        if (k & 1) r = r * a % m;
        a = a * a % m;
        k >>= 1;
    }
    return r;
}

uint64_t inv_mod_p(uint64_t a, uint64_t p) { return powmod_u64(a, p - 2, p); }

// Dense polynomials over F_p, low-to-high, trailing zeros trimmed.
using Poly = std::vector<uint32_t>;

void ptrim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmul(const Poly& a, const Poly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint64_t> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            acc[i + j] = (acc[i + j] + uint64_t(a[i]) * b[j]) % p;
    }
    Poly r(acc.begin(), acc.end());
    ptrim(r);
    return r;
}

// Remainder modulo a monic polynomial f.
Poly pmod(Poly a, const Poly& f, uint64_t p) {
    const size_t df = f.size() - 1;
    ptrim(a);
    while (a.size() > df) {
        uint64_t lead = a.back();
        size_t shift = a.size() - 1 - df;
        if (lead != 0) {
            for (size_t i = 0; i < df; ++i) {
                uint64_t s = uint64_t(f[i]) * lead % p;
                uint64_t cur = a[shift + i];
                a[shift + i] = uint32_t((cur + p - s) % p);
            }
        }
        a.pop_back();
        ptrim(a);
    }
    return a;
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& f, uint64_t p) {
    return pmod(pmul(a, b, p), f, p);
}

Poly ppowmod(Poly base, uint64_t k, const Poly& f, uint64_t p) {
    Poly r{1};
    while (k) {
        if (k & 1) r = pmulmod(r, base, f, p);
        base = pmulmod(base, base, f, p);
        k >>= 1;
    }
    return r;
}

Poly psub(const Poly& a, const Poly& b, uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        uint64_t x = i < a.size() ? a[i] : 0;
        uint64_t y = i < b.size() ? b[i] : 0;
        r[i] = uint32_t((x + p - y) % p);
    }
    ptrim(r);
    return r;
}

Poly pgcd(Poly a, Poly b, uint64_t p) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        Poly r = pmod(std::move(a), [&] {
            // make b monic for pmod
            Poly m = b;
            uint64_t li = inv_mod_p(m.back(), p);
            for (auto& c : m) c = uint32_t(uint64_t(c) * li % p);
            return m;
        }(), p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        uint64_t li = inv_mod_p(a.back(), p);
        for (auto& c : a) c = uint32_t(uint64_t(c) * li % p);
    }
    return a;
}

// Standard finite-field irreducibility test for a monic degree-e f:
// X^{p^e} = X mod f, and gcd(X^{p^{e/q}} - X, f) = 1 for every prime q | e.
bool irreducible(const Poly& f, uint64_t p, int e) {
    if (int(f.size()) != e + 1 || f.back() != 1) return false;
    std::vector<int> check_points;  // e/q for prime q | e
    int m = e;
    for (int q = 2; q <= m; ++q) {
        if (m % q == 0) {
            check_points.push_back(e / q);
            while (m % q == 0) m /= q;
        }
    }
    Poly x{0, 1};
    Poly h = pmod(x, f, p);
    for (int k = 1; k <= e; ++k) {
        h = ppowmod(h, p, f, p);  // h = X^{p^k} mod f
        if (std::find(check_points.begin(), check_points.end(), k) != check_points.end()) {
            Poly g = pgcd(psub(h, pmod(x, f, p), p), f, p);
            if (!(g.size() == 1 && g[0] == 1)) return false;
        }
    }
    return h == pmod(x, f, p);
}

// Extended Euclid: returns s with s*a = gcd(a, f) modulo f (f monic).
Poly pinv_mod(const Poly& a, const Poly& f, uint64_t p) {
    Poly r0 = f, r1 = pmod(a, f, p);
    Poly s0 = {}, s1 = {1};
    while (!r1.empty()) {
        // divide r0 by r1
        Poly q;
        Poly rem = r0;
        uint64_t li = inv_mod_p(r1.back(), p);
        while (rem.size() >= r1.size() && !rem.empty()) {
            size_t shift = rem.size() - r1.size();
            uint64_t c = uint64_t(rem.back()) * li % p;
            if (q.size() < shift + 1) q.resize(shift + 1, 0);
            q[shift] = uint32_t((q[shift] + c) % p);
            for (size_t i = 0; i < r1.size(); ++i) {
                uint64_t s = uint64_t(r1[i]) * c % p;
                uint64_t cur = rem[shift + i];
                rem[shift + i] = uint32_t((cur + p - s) % p);
            }
            ptrim(rem);
        }
        Poly s2 = psub(s0, pmul(q, s1, p), p);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (!(r0.size() == 1)) throw DomainError("element not invertible");
    uint64_t li = inv_mod_p(r0[0], p);
    for (auto& c : s0) c = uint32_t(uint64_t(c) * li % p);
    return pmod(s0, f, p);
}

uint32_t draw_mod(std::mt19937_64& rng, uint64_t p) {
    const uint64_t bound = UINT64_MAX - UINT64_MAX % p;
    uint64_t v;
    do {
        v = rng();
    } while (v >= bound);
    return uint32_t(v % p);
}

}  // namespace

// ---------------------------------------------------------------- Field

void Field::validate_pe(uint64_t p, int e) const {
    if (!is_prime(p)) throw DomainError("characteristic must be prime");
    if (p >= kMaxP) throw DomainError("characteristic too large (cap 2^20)");
    if (e < 1 || e > FieldElement::kMaxDegree)
        throw DomainError("extension degree out of range 1..16");
}

Field::Field(uint64_t p, int e) : Field(p, e, uint64_t{0}) {}

Field::Field(uint64_t p, int e, uint64_t modulus_seed) {
    validate_pe(p, e);
    p_ = uint32_t(p);
    e_ = e;
    if (e == 1) {
        modulus_ = {0, 1};  // X
        return;
    }
    std::mt19937_64 rng(modulus_seed);
    while (true) {
        Poly f(size_t(e) + 1, 0);
        f[size_t(e)] = 1;
        f[0] = 1 + draw_mod(rng, p - 1);  // nonzero constant term
        for (int i = 1; i < e; ++i) f[size_t(i)] = draw_mod(rng, p);
        if (irreducible(f, p, e)) {
            modulus_ = std::move(f);
            return;
        }
    }
}

Field::Field(uint64_t p, int e, const std::vector<uint32_t>& modulus) {
    validate_pe(p, e);
    p_ = uint32_t(p);
    e_ = e;
    if (int(modulus.size()) != e + 1)
        throw DomainError("modulus must have degree e (e+1 coefficients)");
    for (uint32_t c : modulus)
        if (c >= p) throw DomainError("modulus coefficient not reduced mod p");
    if (modulus.back() != 1) throw DomainError("modulus must be monic");
    if (!irreducible(modulus, p, e)) throw DomainError("reducible modulus");
    modulus_ = modulus;
}

bool Field::enumerable(uint64_t cap) const {
    uint64_t q = 1;
    for (int i = 0; i < e_; ++i) {
        if (q > cap / p_) return false;
        q *= p_;
    }
    return q <= cap;
}

uint64_t Field::order() const {
    uint64_t q = 1;
    for (int i = 0; i < e_; ++i) {
        if (q > UINT64_MAX / p_) throw DomainError("field order does not fit uint64");
        q *= p_;
    }
    return q;
}

FieldElement Field::make(std::array<uint32_t, FieldElement::kMaxDegree> c) const {
    FieldElement x;
    x.field_ = this;
    x.coords_ = c;
    return x;
}

FieldElement Field::zero() const { return make({}); }

FieldElement Field::one() const {
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    c[0] = 1;
    return make(c);
}

FieldElement Field::generator() const {
    if (e_ == 1) return one();
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    c[1] = 1;
    return make(c);
}

FieldElement Field::from_int(uint64_t n) const {
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    c[0] = uint32_t(n % p_);
    return make(c);
}

FieldElement Field::from_coords(std::span<const uint32_t> coords) const {
    if (int(coords.size()) != e_)
        throw DomainError("expected exactly e coordinates");
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    for (int i = 0; i < e_; ++i) {
        if (coords[size_t(i)] >= p_) throw DomainError("coordinate not reduced mod p");
        c[size_t(i)] = coords[size_t(i)];
    }
    return make(c);
}

FieldElement Field::element_at(uint64_t index) const {
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    for (int i = e_ - 1; i >= 0; --i) {
        c[size_t(i)] = uint32_t(index % p_);
        index /= p_;
    }
    if (index != 0) throw DomainError("element index out of range");
    return make(c);
}

uint64_t Field::index_of(const FieldElement& x) const {
    check(x);
    uint64_t idx = 0;
    for (int i = 0; i < e_; ++i) idx = idx * p_ + x.coords_[size_t(i)];
    return idx;
}

FieldElement Field::random_element(std::mt19937_64& rng) const {
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    for (int i = 0; i < e_; ++i) c[size_t(i)] = draw_mod(rng, p_);
    return make(c);
}

void Field::check(const FieldElement& a) const {
    if (!a.valid()) throw InternalError("detached field element");
    if (a.field_ != this && !same_as(*a.field_)) throw DomainError("mixed fields");
}

void Field::check_pair(const FieldElement& a, const FieldElement& b) const {
    check(a);
    check(b);
}

bool Field::same_as(const Field& o) const {
    return p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_;
}

FieldElement Field::add(const FieldElement& a, const FieldElement& b) const {
    check_pair(a, b);
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    for (int i = 0; i < e_; ++i) {
        uint32_t s = a.coords_[size_t(i)] + b.coords_[size_t(i)];
        c[size_t(i)] = s >= p_ ? s - p_ : s;
    }
    return make(c);
}

FieldElement Field::sub(const FieldElement& a, const FieldElement& b) const {
    check_pair(a, b);
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    for (int i = 0; i < e_; ++i) {
        uint32_t s = a.coords_[size_t(i)] + p_ - b.coords_[size_t(i)];
        c[size_t(i)] = s >= p_ ? s - p_ : s;
    }
    return make(c);
}

FieldElement Field::neg(const FieldElement& a) const {
    return sub(zero(), a);
}

FieldElement Field::mul(const FieldElement& a, const FieldElement& b) const {
    check_pair(a, b);
    std::array<uint64_t, 2 * FieldElement::kMaxDegree> acc{};
    for (int i = 0; i < e_; ++i) {
        if (a.coords_[size_t(i)] == 0) continue;
        for (int j = 0; j < e_; ++j)
            acc[size_t(i + j)] += uint64_t(a.coords_[size_t(i)]) * b.coords_[size_t(j)];
    }
    // reduce modulo the monic modulus
    for (int k = 2 * e_ - 2; k >= e_; --k) {
        uint64_t lead = acc[size_t(k)] % p_;
        acc[size_t(k)] = 0;
        if (lead == 0) continue;
        for (int i = 0; i < e_; ++i) {
            uint64_t s = uint64_t(modulus_[size_t(i)]) * lead % p_;
            acc[size_t(k - e_ + i)] += p_ - s;
        }
    }
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    for (int i = 0; i < e_; ++i) c[size_t(i)] = uint32_t(acc[size_t(i)] % p_);
    return make(c);
}

FieldElement Field::inv(const FieldElement& a) const {
    check(a);
    if (a.is_zero()) throw DomainError("division by zero");
    Poly pa(a.coords_.begin(), a.coords_.begin() + e_);
    ptrim(pa);
    Poly s = pinv_mod(pa, modulus_, p_);
    std::array<uint32_t, FieldElement::kMaxDegree> c{};
    for (size_t i = 0; i < s.size(); ++i) c[i] = s[i];
    return make(c);
}

FieldElement Field::div(const FieldElement& a, const FieldElement& b) const {
    return mul(a, inv(b));
}

FieldElement Field::pow(const FieldElement& a, int64_t k) const {
    check(a);
    if (k < 0) return pow(inv(a), -k);
    FieldElement r = one();
    FieldElement base = a;
    uint64_t kk = uint64_t(k);
    while (kk) {
        if (kk & 1) r = mul(r, base);
        base = mul(base, base);
        kk >>= 1;
    }
    return r;
}

FieldElement Field::frobenius(const FieldElement& a, int k) const {
    check(a);
    if (k < 0) throw DomainError("frobenius exponent must be nonnegative");
    int keff = e_ == 0 ? 0 : k % e_;
    FieldElement r = a;
    for (int i = 0; i < keff; ++i) r = pow(r, int64_t(p_));
    return r;
}

FieldElement Field::pth_root(const FieldElement& a) const {
    return frobenius(a, e_ - 1);
}

std::string Field::to_string(const FieldElement& x) const {
    check(x);
    std::ostringstream os;
    for (int i = 0; i < e_; ++i) {
        if (i) os << ',';
        os << x.coords_[size_t(i)];
    }
    return os.str();
}

FieldElement Field::parse(std::string_view text) const {
    std::vector<uint32_t> coords;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string_view tok = text.substr(pos, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - pos);
        // trim spaces
        while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
        while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
        if (tok.empty()) throw ParseError("empty field-element coordinate");
        uint64_t v = 0;
        for (char ch : tok) {
            if (ch < '0' || ch > '9') throw ParseError("invalid field-element coordinate");
            v = v * 10 + uint64_t(ch - '0');
            if (v >= p_) throw ParseError("field-element coordinate out of range");
        }
        coords.push_back(uint32_t(v));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (int(coords.size()) != e_)
        throw ParseError("expected exactly e field-element coordinates");
    return from_coords(coords);
}

// ---------------------------------------------------------------- FieldElement

bool FieldElement::is_zero() const {
    if (!valid()) throw InternalError("detached field element");
    for (int i = 0; i < field_->e(); ++i)
        if (coords_[size_t(i)] != 0) return false;
    return true;
}

bool FieldElement::is_one() const {
    if (!valid()) throw InternalError("detached field element");
    if (coords_[0] != 1) return false;
    for (int i = 1; i < field_->e(); ++i)
        if (coords_[size_t(i)] != 0) return false;
    return true;
}

FieldElement FieldElement::operator+(const FieldElement& o) const { return field_->add(*this, o); }
FieldElement FieldElement::operator-(const FieldElement& o) const { return field_->sub(*this, o); }
FieldElement FieldElement::operator*(const FieldElement& o) const { return field_->mul(*this, o); }
FieldElement FieldElement::operator/(const FieldElement& o) const { return field_->div(*this, o); }
FieldElement FieldElement::operator-() const { return field_->neg(*this); }

bool FieldElement::operator==(const FieldElement& o) const {
    if (!valid() || !o.valid()) throw InternalError("detached field element");
    if (field_ != o.field_ && !field_->same_as(*o.field_)) throw DomainError("mixed fields");
    for (int i = 0; i < field_->e(); ++i)
        if (coords_[size_t(i)] != o.coords_[size_t(i)]) return false;
    return true;
}

FieldElement FieldElement::inverse() const { return field_->inv(*this); }
FieldElement FieldElement::pow(int64_t k) const { return field_->pow(*this, k); }
FieldElement FieldElement::frobenius(int k) const { return field_->frobenius(*this, k); }
FieldElement FieldElement::pth_root() const { return field_->pth_root(*this); }

FieldElement FieldElement::pth_root_iter(int k) const {
    FieldElement r = *this;
    for (int i = 0; i < k; ++i) r = r.pth_root();
    return r;
}

std::string FieldElement::str() const {
    if (!valid()) throw InternalError("detached field element");
    return field_->to_string(*this);
}

}  // namespace asjet
