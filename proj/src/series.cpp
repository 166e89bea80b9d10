#include "asjet/series.hpp"

#include <algorithm>
#include <sstream>

namespace asjet {

int prec_add(int a, int b) {
    if (a >= kPrecInf || b >= kPrecInf) return kPrecInf;
    int64_t s = int64_t(a) + b;
    if (s >= kPrecInf) return kPrecInf;
    if (s < -kPrecInf) return -kPrecInf;
    return int(s);
}

int prec_min(int a, int b) { return std::min(a, b); }

int prec_mul_by(int prec, int factor) {
    if (factor < 1) throw InternalError("prec_mul_by factor must be >= 1");
    if (prec >= kPrecInf) return kPrecInf;
    int64_t s = int64_t(prec) * factor;
    if (s >= kPrecInf) return kPrecInf;
    if (s < -kPrecInf) return -kPrecInf;
    return int(s);
}

namespace {

void check_fields(const Field* a, const Field* b) {
    if (a == nullptr || b == nullptr) throw InternalError("detached series");
    if (a != b && !a->same_as(*b)) throw DomainError("mixed fields");
}

// Splits "c0,c1,c2,..." into field elements of e coordinates each.
std::vector<FieldElement> parse_element_list(const Field* f, std::string_view text) {
    std::vector<std::string> coords;
    size_t pos = 0;
    if (!text.empty()) {
        while (true) {
            size_t comma = text.find(',', pos);
            coords.emplace_back(text.substr(
                pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    const int e = f->e();
    if (coords.size() % size_t(e) != 0)
        throw ParseError("coordinate count is not a multiple of e");
    std::vector<FieldElement> out;
    for (size_t i = 0; i < coords.size(); i += size_t(e)) {
        std::string joined;
        for (int k = 0; k < e; ++k) {
            if (k) joined += ',';
            joined += coords[i + size_t(k)];
        }
        out.push_back(f->parse(joined));
    }
    return out;
}

}  // namespace

// ------------------------------------------------------------ LaurentSeries

LaurentSeries::LaurentSeries(const Field* f, int val, std::vector<FieldElement> coeffs,
                             int prec)
    : field_(f), val_(val), prec_(std::min(prec, kPrecInf)), coeffs_(std::move(coeffs)) {
    if (field_ == nullptr) throw InternalError("null field");
    for (const auto& c : coeffs_) {
        if (!c.valid()) throw InternalError("detached coefficient");
        check_fields(field_, c.field());
    }
    normalize();
}

void LaurentSeries::normalize() {
    // clip stored coefficients at the precision bound
    if (prec_ < kPrecInf) {
        int64_t end = int64_t(val_) + int64_t(coeffs_.size());
        if (end > prec_) {
            int64_t keep = int64_t(prec_) - val_;
            coeffs_.resize(size_t(std::max<int64_t>(keep, 0)));
        }
    }
    size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead].is_zero()) ++lead;
    if (lead) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + long(lead));
        val_ += int(lead);
    }
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    if (coeffs_.empty()) val_ = prec_;
}

LaurentSeries LaurentSeries::zero(const Field* f, int prec) {
    return LaurentSeries(f, prec, {}, prec);
}

LaurentSeries LaurentSeries::monomial(const Field* f, int exp, const FieldElement& c,
                                      int prec) {
    return LaurentSeries(f, exp, {c}, prec);
}

LaurentSeries LaurentSeries::variable(const Field* f) {
    return monomial(f, 1, f->one());
}

LaurentSeries LaurentSeries::constant(const Field* f, const FieldElement& c, int prec) {
    return monomial(f, 0, c, prec);
}

FieldElement LaurentSeries::coeff(int k) const {
    if (!valid()) throw InternalError("detached series");
    if (k >= prec_) throw PrecisionError("coefficient beyond certified precision");
    if (k < val_ || k >= stored_end()) return field_->zero();
    return coeffs_[size_t(k - val_)];
}

FieldElement LaurentSeries::leading() const {
    if (is_zero()) throw DomainError("zero series has no leading coefficient");
    return coeffs_.front();
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    check_fields(field_, o.field_);
    int prec = prec_min(prec_, o.prec_);
    // the merge window comes from stored data only; zero summands (whose val
    // equals their precision by convention) contribute nothing to it
    int lo = prec, hi = -kPrecInf;
    if (!is_zero()) {
        lo = std::min(lo, val_);
        hi = std::max(hi, stored_end());
    }
    if (!o.is_zero()) {
        lo = std::min(lo, o.val_);
        hi = std::max(hi, o.stored_end());
    }
    hi = std::min(hi, prec);
    if (hi <= lo) return LaurentSeries(field_, prec, {}, prec);
    std::vector<FieldElement> out;
    auto get = [&](const LaurentSeries& s, int k) {
        if (k < s.val_ || k >= s.stored_end()) return field_->zero();
        return s.coeffs_[size_t(k - s.val_)];
    };
    for (int k = lo; k < hi; ++k) out.push_back(get(*this, k) + get(o, k));
    return LaurentSeries(field_, lo, std::move(out), prec);
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const {
    return *this + o.negate();
}

LaurentSeries LaurentSeries::negate() const {
    std::vector<FieldElement> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(-c);
    return LaurentSeries(field_, val_, std::move(out), prec_);
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
    check_fields(field_, o.field_);
    int prec = prec_min(prec_add(prec_, o.val_), prec_add(o.prec_, val_));
    if (coeffs_.empty() || o.coeffs_.empty())
        return LaurentSeries(field_, prec, {}, prec);
    int lo = val_ + o.val_;
    std::vector<FieldElement> out(coeffs_.size() + o.coeffs_.size() - 1, field_->zero());
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        for (size_t j = 0; j < o.coeffs_.size(); ++j)
            out[i + j] = out[i + j] + coeffs_[i] * o.coeffs_[j];
    }
    return LaurentSeries(field_, lo, std::move(out), prec);
}

bool LaurentSeries::operator==(const LaurentSeries& o) const {
    check_fields(field_, o.field_);
    if (val_ != o.val_ || prec_ != o.prec_ || coeffs_.size() != o.coeffs_.size())
        return false;
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != o.coeffs_[i]) return false;
    return true;
}

LaurentSeries LaurentSeries::scale(const FieldElement& c) const {
    check_fields(field_, c.field());
    if (c.is_zero()) return LaurentSeries(field_, kPrecInf, {}, kPrecInf);
    std::vector<FieldElement> out;
    out.reserve(coeffs_.size());
    for (const auto& x : coeffs_) out.push_back(x * c);
    return LaurentSeries(field_, val_, std::move(out), prec_);
}

LaurentSeries LaurentSeries::shift(int k) const {
    return LaurentSeries(field_, val_ + k, coeffs_, prec_add(prec_, k));
}

LaurentSeries LaurentSeries::truncate(int prec) const {
    return LaurentSeries(field_, val_, coeffs_, prec_min(prec_, prec));
}

std::string LaurentSeries::str() const {
    if (!valid()) throw InternalError("detached series");
    std::ostringstream os;
    if (prec_ >= kPrecInf) {
        os << (is_zero() ? 0 : val_) << ":inf:";
        for (size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) os << ',';
            os << coeffs_[i].str();
        }
    } else {
        os << val_ << ':' << prec_ << ':';
        bool first = true;
        for (int k = val_; k < prec_; ++k) {
            if (!first) os << ',';
            first = false;
            os << coeff(k).str();
        }
    }
    return os.str();
}

LaurentSeries LaurentSeries::parse(const Field* f, std::string_view text) {
    size_t c1 = text.find(':');
    if (c1 == std::string_view::npos) throw ParseError("series: expected val:prec:coeffs");
    size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw ParseError("series: expected val:prec:coeffs");
    auto to_int = [](std::string_view s) {
        try {
            size_t used = 0;
            int v = std::stoi(std::string(s), &used);
            if (used != s.size()) throw ParseError("series: bad integer");
            return v;
        } catch (const std::exception&) {
            throw ParseError("series: bad integer");
        }
    };
    int val = to_int(text.substr(0, c1));
    std::string_view ps = text.substr(c1 + 1, c2 - c1 - 1);
    int prec = ps == "inf" ? kPrecInf : to_int(ps);
    auto coeffs = parse_element_list(f, text.substr(c2 + 1));
    return LaurentSeries(f, val, std::move(coeffs), prec);
}

LaurentSeries ls_invert(const LaurentSeries& s) {
    if (!s.valid()) throw InternalError("detached series");
    const Field* f = s.field();
    if (s.is_zero()) {
        if (s.prec() >= kPrecInf) throw DomainError("cannot invert the zero series");
        throw PrecisionError("leading coefficient not certified nonzero");
    }
    int v = s.val();
    if (s.prec() >= kPrecInf) {
        if (s.stored_end() - v == 1)
            return LaurentSeries::monomial(f, -v, s.leading().inverse());
        throw PrecisionError(
            "inverting an exact non-monomial series requires explicit truncation");
    }
    int rel = s.prec() - v;
    if (rel > (1 << 16)) throw DomainError("precision too large for series inversion");
    std::vector<FieldElement> u(size_t(rel), f->zero());
    for (int k = 0; k < rel; ++k) u[size_t(k)] = s.coeff(v + k);
    FieldElement u0inv = u[0].inverse();
    std::vector<FieldElement> b(size_t(rel), f->zero());
    b[0] = u0inv;
    for (int k = 1; k < rel; ++k) {
        FieldElement acc = f->zero();
        for (int i = 1; i <= k; ++i) acc = acc + u[size_t(i)] * b[size_t(k - i)];
        b[size_t(k)] = -(u0inv * acc);
    }
    return LaurentSeries(f, -v, std::move(b), -v + rel);
}

LaurentSeries ls_pow(const LaurentSeries& s, int64_t k) {
    if (!s.valid()) throw InternalError("detached series");
    const Field* f = s.field();
    if (k == 0) return LaurentSeries::constant(f, f->one());
    if (s.is_zero()) {
        if (k < 0) throw DomainError("negative power of a non-unit series");
        int p = prec_mul_by(s.prec(), int(std::min<int64_t>(k, kPrecInf)));
        return LaurentSeries(f, p, {}, p);
    }
    if (k < 0) return ls_pow(ls_invert(s), -k);
    LaurentSeries r = LaurentSeries::constant(f, f->one());
    LaurentSeries base = s;
    uint64_t kk = uint64_t(k);
    while (kk) {
        if (kk & 1) r = r * base;
        base = kk > 1 ? base * base : base;
        kk >>= 1;
    }
    return r;
}

LaurentSeries ls_substitute(const LaurentSeries& s, const LaurentSeries& g) {
    if (!s.valid() || !g.valid()) throw InternalError("detached series");
    check_fields(s.field(), g.field());
    const Field* f = s.field();
    int vg = g.val();  // equals prec for a zero-to-precision g
    if (vg < 1) throw DomainError("substitution requires a series of valuation >= 1");
    if (s.is_zero()) {
        int p = prec_mul_by(s.prec(), vg);
        return LaurentSeries(f, p, {}, p);
    }
    LaurentSeries acc = LaurentSeries::zero(f, kPrecInf);
    LaurentSeries cur = ls_pow(g, s.val());
    for (int k = s.val(); k < s.stored_end(); ++k) {
        FieldElement c = s.coeff(k);
        if (!c.is_zero()) acc = acc + cur.scale(c);
        if (k + 1 < s.stored_end()) cur = cur * g;
    }
    if (s.prec() < kPrecInf) acc = acc.truncate(prec_mul_by(s.prec(), vg));
    return acc;
}

// --------------------------------------------------------- BivariateLaurent

BivariateLaurent BivariateLaurent::exact(const Field* f, std::vector<BivTerm> terms) {
    return BivariateLaurent(f, std::move(terms), kPrecInf, kPrecInf, kPrecInf, kPrecInf);
}

BivariateLaurent::BivariateLaurent(const Field* f, std::vector<BivTerm> terms, int know_t,
                                   int know_u, int tail_floor_t, int tail_floor_u)
    : field_(f),
      terms_(std::move(terms)),
      know_t_(std::min(know_t, kPrecInf)),
      know_u_(std::min(know_u, kPrecInf)),
      tail_floor_t_(std::min(tail_floor_t, kPrecInf)),
      tail_floor_u_(std::min(tail_floor_u, kPrecInf)) {
    if (field_ == nullptr) throw InternalError("null field");
    normalize();
}

void BivariateLaurent::normalize() {
    for (const auto& t : terms_) {
        if (!t.c.valid()) throw InternalError("detached coefficient");
        check_fields(field_, t.c.field());
    }
    std::sort(terms_.begin(), terms_.end(), [](const BivTerm& a, const BivTerm& b) {
        return a.ti != b.ti ? a.ti < b.ti : a.ui < b.ui;
    });
    std::vector<BivTerm> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().ti == t.ti && merged.back().ui == t.ui)
            merged.back().c = merged.back().c + t.c;
        else
            merged.push_back(t);
    }
    terms_.clear();
    for (auto& t : merged)
        if (!t.c.is_zero()) terms_.push_back(t);
    for (const auto& t : terms_)
        if (!known(t.ti, t.ui))
            throw DomainError("stored term lies beyond the certified precision region");
}

bool BivariateLaurent::known(int i, int j) const {
    if (know_t_ < kPrecInf && i >= know_t_ && j >= tail_floor_u_) return false;
    if (know_u_ < kPrecInf && j >= know_u_ && i >= tail_floor_t_) return false;
    return true;
}

FieldElement BivariateLaurent::coeff(int i, int j) const {
    if (!valid()) throw InternalError("detached element");
    if (!known(i, j)) throw PrecisionError("bivariate coefficient beyond certified region");
    for (const auto& t : terms_)
        if (t.ti == i && t.ui == j) return t.c;
    return field_->zero();
}

int BivariateLaurent::v1() const {
    if (terms_.empty()) throw DomainError("zero element has no valuation");
    int lo = terms_.front().ti;  // sorted by ti first
    int min_unknown = kPrecInf;
    if (know_t_ < kPrecInf) min_unknown = std::min(min_unknown, know_t_);
    if (know_u_ < kPrecInf) min_unknown = std::min(min_unknown, tail_floor_t_);
    if (min_unknown < lo)
        throw PrecisionError("T-valuation uncertain: unknown tail may hide a deeper pole");
    return lo;
}

int BivariateLaurent::v2() const {
    if (terms_.empty()) throw DomainError("zero element has no valuation");
    int lo = terms_.front().ui;
    for (const auto& t : terms_) lo = std::min(lo, t.ui);
    int min_unknown = kPrecInf;
    if (know_u_ < kPrecInf) min_unknown = std::min(min_unknown, know_u_);
    if (know_t_ < kPrecInf) min_unknown = std::min(min_unknown, tail_floor_u_);
    if (min_unknown < lo)
        throw PrecisionError("U-valuation uncertain: unknown tail may hide a deeper pole");
    return lo;
}

std::vector<int> BivariateLaurent::t_levels() const {
    std::vector<int> out;
    for (const auto& t : terms_)
        if (out.empty() || out.back() != t.ti) out.push_back(t.ti);
    return out;
}

std::vector<int> BivariateLaurent::u_levels() const {
    std::vector<int> out;
    for (const auto& t : terms_) out.push_back(t.ui);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

LaurentSeries BivariateLaurent::t_level_series(int i) const {
    int prec = kPrecInf;
    if (know_t_ < kPrecInf && i >= know_t_) prec = prec_min(prec, tail_floor_u_);
    if (know_u_ < kPrecInf && i >= tail_floor_t_) prec = prec_min(prec, know_u_);
    std::vector<std::pair<int, FieldElement>> entries;
    for (const auto& t : terms_)
        if (t.ti == i) entries.emplace_back(t.ui, t.c);
    if (entries.empty()) return LaurentSeries::zero(field_, prec);
    int lo = entries.front().first;
    int hi = entries.back().first;
    std::vector<FieldElement> coeffs(size_t(hi - lo + 1), field_->zero());
    for (auto& [j, c] : entries) coeffs[size_t(j - lo)] = c;
    return LaurentSeries(field_, lo, std::move(coeffs), prec);
}

LaurentSeries BivariateLaurent::u_level_series(int j) const {
    int prec = kPrecInf;
    if (know_u_ < kPrecInf && j >= know_u_) prec = prec_min(prec, tail_floor_t_);
    if (know_t_ < kPrecInf && j >= tail_floor_u_) prec = prec_min(prec, know_t_);
    std::vector<std::pair<int, FieldElement>> entries;
    for (const auto& t : terms_)
        if (t.ui == j) entries.emplace_back(t.ti, t.c);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (entries.empty()) return LaurentSeries::zero(field_, prec);
    int lo = entries.front().first;
    int hi = entries.back().first;
    std::vector<FieldElement> coeffs(size_t(hi - lo + 1), field_->zero());
    for (auto& [i, c] : entries) coeffs[size_t(i - lo)] = c;
    return LaurentSeries(field_, lo, std::move(coeffs), prec);
}

LaurentSeries BivariateLaurent::slice_t_zero() const {
    for (const auto& t : terms_)
        if (t.ti < 0) throw DomainError("slice at T=0 hits a pole in T");
    if ((know_t_ < kPrecInf && know_t_ < 0) ||
        (know_u_ < kPrecInf && tail_floor_t_ < 0))
        throw PrecisionError("slice at T=0: unknown tail may contain T-poles");
    return t_level_series(0);
}

LaurentSeries BivariateLaurent::slice_u_zero() const {
    for (const auto& t : terms_)
        if (t.ui < 0) throw DomainError("slice at U=0 hits a pole in U");
    if ((know_u_ < kPrecInf && know_u_ < 0) ||
        (know_t_ < kPrecInf && tail_floor_u_ < 0))
        throw PrecisionError("slice at U=0: unknown tail may contain U-poles");
    return u_level_series(0);
}

BivariateLaurent BivariateLaurent::add(const BivariateLaurent& o) const {
    check_fields(field_, o.field_);
    std::vector<BivTerm> terms = terms_;
    terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
    return BivariateLaurent(field_, std::move(terms), prec_min(know_t_, o.know_t_),
                            prec_min(know_u_, o.know_u_),
                            prec_min(tail_floor_t_, o.tail_floor_t_),
                            prec_min(tail_floor_u_, o.tail_floor_u_));
}

BivariateLaurent BivariateLaurent::negate() const {
    std::vector<BivTerm> terms;
    terms.reserve(terms_.size());
    for (const auto& t : terms_) terms.push_back({t.ti, t.ui, -t.c});
    return BivariateLaurent(field_, std::move(terms), know_t_, know_u_, tail_floor_t_,
                            tail_floor_u_);
}

BivariateLaurent BivariateLaurent::shift(int dt, int du) const {
    std::vector<BivTerm> terms;
    terms.reserve(terms_.size());
    for (const auto& t : terms_) terms.push_back({t.ti + dt, t.ui + du, t.c});
    return BivariateLaurent(field_, std::move(terms), prec_add(know_t_, dt),
                            prec_add(know_u_, du), prec_add(tail_floor_t_, dt),
                            prec_add(tail_floor_u_, du));
}

BivariateLaurent BivariateLaurent::pth_power_termwise() const {
    if (!is_exact())
        throw DomainError("termwise p-th power is only defined for exact elements");
    const int64_t p = int64_t(field_->p());
    std::vector<BivTerm> terms;
    terms.reserve(terms_.size());
    for (const auto& t : terms_)
        terms.push_back({int(p * t.ti), int(p * t.ui), t.c.pow(p)});
    return exact(field_, std::move(terms));
}

LaurentSeries BivariateLaurent::substitute_core(bool into_u, const LaurentSeries& g) const {
    check_fields(field_, g.field());
    int vg = g.val();
    if (vg < 1) throw DomainError("substitution requires a series of valuation >= 1");
    std::vector<int> levels = into_u ? u_levels() : t_levels();
    LaurentSeries acc = LaurentSeries::zero(field_, kPrecInf);
    if (!levels.empty()) {
        LaurentSeries cur = ls_pow(g, levels.front());
        int at = levels.front();
        for (int lv : levels) {
            while (at < lv) {
                cur = cur * g;
                ++at;
            }
            LaurentSeries coeffs = into_u ? u_level_series(lv) : t_level_series(lv);
            acc = acc + coeffs * cur;
        }
    }
    // valuation floor of the image of the unknown tail
    auto clamp = [&](int64_t bound) {
        acc = acc.truncate(int(std::max<int64_t>(std::min<int64_t>(bound, kPrecInf),
                                                 -kPrecInf)));
    };
    if (into_u) {
        if (know_t_ < kPrecInf) clamp(int64_t(know_t_) + int64_t(tail_floor_u_) * vg);
        if (know_u_ < kPrecInf) clamp(int64_t(tail_floor_t_) + int64_t(know_u_) * vg);
    } else {
        if (know_t_ < kPrecInf) clamp(int64_t(know_t_) * vg + tail_floor_u_);
        if (know_u_ < kPrecInf) clamp(int64_t(tail_floor_t_) * vg + know_u_);
    }
    return acc;
}

LaurentSeries BivariateLaurent::substitute_u(const LaurentSeries& g) const {
    return substitute_core(true, g);
}

LaurentSeries BivariateLaurent::substitute_t(const LaurentSeries& g) const {
    return substitute_core(false, g);
}

std::string BivariateLaurent::str() const {
    std::ostringstream os;
    for (const auto& t : terms_) os << t.ti << ' ' << t.ui << ' ' << t.c.str() << '\n';
    return os.str();
}

}  // namespace asjet
