#include "asjet/cover.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <thread>

namespace asjet {

namespace {

void check_field_match(const Field* a, const Field* b) {
    if (a != b && !a->same_as(*b)) throw DomainError("mixed fields");
}

int parallel_chunks() {
    unsigned hw = std::thread::hardware_concurrency();
    return int(std::min<unsigned>(std::max<unsigned>(hw, 1), 8));
}

}  // namespace

// -------------------------------------------------------------- CurveJet

CurveJet::CurveJet(const Field* f, Kind k, int r, std::vector<FieldElement> coeffs)
    : field_(f), kind_(k), r_(r), coeffs_(std::move(coeffs)) {
    if (field_ == nullptr) throw InternalError("null field");
    if (coeffs_.empty()) throw DomainError("empty jet");
    for (const auto& c : coeffs_) {
        if (!c.valid()) throw InternalError("detached coefficient");
        check_field_match(field_, c.field());
    }
    if (kind_ == Kind::Transversal) {
        if (r_ != 1) throw DomainError("transversal jets have r = 1");
    } else {
        if (r_ < 1) throw DomainError("tangent jet needs r >= 1");
        if (coeffs_.front().is_zero())
            throw DomainError("tangent jet needs beta_r != 0");
    }
}

CurveJet CurveJet::transversal(const Field* f, std::vector<FieldElement> alphas) {
    return CurveJet(f, Kind::Transversal, 1, std::move(alphas));
}

CurveJet CurveJet::tangent(const Field* f, int r, std::vector<FieldElement> betas) {
    return CurveJet(f, Kind::Tangent, r, std::move(betas));
}

FieldElement CurveJet::coeff_at_exponent(int w) const {
    int first = kind_ == Kind::Transversal ? 1 : r_;
    if (w < first || w >= first + length())
        throw DomainError("jet coefficient index out of range");
    return coeffs_[size_t(w - first)];
}

LaurentSeries CurveJet::expansion() const {
    int first = kind_ == Kind::Transversal ? 1 : r_;
    return LaurentSeries(field_, first, coeffs_, first + length());
}

std::string CurveJet::str() const {
    std::ostringstream os;
    if (kind_ == Kind::Transversal)
        os << "x:";
    else
        os << "t:" << r_ << ':';
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ',';
        os << coeffs_[i].str();
    }
    return os.str();
}

IntersectionOrder intersection_order(const CurveJet& a, const CurveJet& b) {
    check_field_match(a.field(), b.field());
    if (a.kind() != b.kind() || a.r() != b.r())
        throw DomainError("intersection order needs jets from the same family");
    int first = a.kind() == CurveJet::Kind::Transversal ? 1 : a.r();
    int overlap = std::min(a.length(), b.length());
    for (int w = first; w < first + overlap; ++w)
        if (a.coeff_at_exponent(w) != b.coeff_at_exponent(w))
            return {w, false};
    return {first + overlap, true};
}

// -------------------------------------------------------------- CoverSpec

CoverSpec CoverSpec::raw(std::shared_ptr<const Field> field, BivariateLaurent a, int d) {
    if (!field) throw InternalError("null field");
    if (d != 1 && d != 2) throw DomainError("d must be 1 or 2");
    CoverSpec c;
    c.owner_ = field;
    c.field_ = field.get();
    check_field_match(c.field_, a.field());
    if (a.is_zero()) throw DomainError("cover datum is zero: cover is unramified");
    if (d == 1) {
        for (const auto& t : a.terms())
            if (t.ui < 0) throw DomainError("d=1 cover must have no pole along U=0");
    }
    c.a_ = std::move(a);
    c.d_ = d;
    int v1 = c.a_.v1();
    if (v1 >= 0) throw DomainError("cover is unramified along T=0 (needs a T-pole)");
    c.m_ = -v1;
    int v2 = d == 2 ? c.a_.v2() : 0;
    c.n_ = v2 < 0 ? -v2 : 0;
    c.normalized_ = false;
    return c;
}

namespace {

// One wp-shift that removes an entire extremal pole level whose exponents
// are all divisible by p.  level_of_t selects the T-level (m-reduction)
// versus the U-level (n-reduction).
BivariateLaurent fold_level(const BivariateLaurent& a, bool level_of_t, int depth) {
    const Field* f = a.field();
    const int p = int(f->p());
    std::vector<BivTerm> d_terms;
    for (const auto& t : a.terms()) {
        int lv = level_of_t ? t.ti : t.ui;
        if (lv != -depth) continue;
        int other = level_of_t ? t.ui : t.ti;
        if (other % p != 0) throw InternalError("fold_level: exponent not divisible by p");
        int new_lv = -depth / p;
        int new_other = other / p;
        BivTerm nt;
        nt.ti = level_of_t ? new_lv : new_other;
        nt.ui = level_of_t ? new_other : new_lv;
        nt.c = t.c.pth_root();
        d_terms.push_back(nt);
    }
    BivariateLaurent d_elt = BivariateLaurent::exact(f, std::move(d_terms));
    // a - d^p + d removes the level because d^p reproduces it exactly
    return a.add(d_elt.pth_power_termwise().negate()).add(d_elt);
}

// True when every exponent across the extremal level is divisible by p, so
// the level is a p-th power of a shallower one.  PrecisionError when the
// unknown tail could still contain a non-p-th-power term on that level.
bool level_is_pth_power(const BivariateLaurent& a, bool level_of_t, int depth) {
    const int p = int(a.field()->p());
    for (const auto& t : a.terms()) {
        int lv = level_of_t ? t.ti : t.ui;
        if (lv != -depth) continue;
        int other = level_of_t ? t.ui : t.ti;
        if (other % p != 0) return false;
    }
    bool tail_touches_level =
        level_of_t ? ((a.know_u() < kPrecInf && -depth >= a.tail_floor_t()) ||
                      (a.know_t() < kPrecInf && -depth >= a.know_t()))
                   : ((a.know_t() < kPrecInf && -depth >= a.tail_floor_u()) ||
                      (a.know_u() < kPrecInf && -depth >= a.know_u()));
    if (tail_touches_level)
        throw PrecisionError("cannot certify that a pole slice is a p-th power");
    return true;
}

}  // namespace

CoverSpec cover_normalize(std::shared_ptr<const Field> field, BivariateLaurent a, int d) {
    CoverSpec cover = CoverSpec::raw(field, std::move(a), d);
    const Field* f = cover.field_;
    const int p = int(f->p());
    BivariateLaurent cur = cover.a_;

    bool progress = true;
    while (progress) {
        progress = false;
        if (cur.is_zero()) throw DomainError("cover datum reduced to zero: unramified");
        if (d == 2) {
            int v2 = cur.v2();
            int n = v2 < 0 ? -v2 : 0;
            if (n >= 1 && n % p == 0 && level_is_pth_power(cur, false, n)) {
                cur = fold_level(cur, false, n);
                progress = true;
                continue;
            }
        }
        int v1 = cur.is_zero() ? 0 : cur.v1();
        int m = v1 < 0 ? -v1 : 0;
        if (m >= 1 && m % p == 0 && level_is_pth_power(cur, true, m)) {
            cur = fold_level(cur, true, m);
            progress = true;
        }
    }

    if (cur.is_zero()) throw DomainError("cover datum reduced to zero: unramified");
    int v1 = cur.v1();
    if (v1 >= 0) throw DomainError("cover is unramified along T=0 after normalization");
    int m = -v1;
    int n = 0;
    if (d == 2) {
        int v2 = cur.v2();
        if (v2 >= 0)
            throw DomainError("U-pole normalized away: cover is unramified along U=0, use d 1");
        n = -v2;
    }

    // When p | m, clear the leading row below the pivot: remove the terms
    // theta_{0i} with i < j (all with p | raw U-exponent) by one wp-shift each.
    if (m % p == 0) {
        int pivot_raw = kPrecInf;
        for (const auto& t : cur.terms())
            if (t.ti == -m && t.ui % p != 0) pivot_raw = std::min(pivot_raw, t.ui);
        if (pivot_raw >= kPrecInf)
            throw InternalError("normalized cover with p | m lacks a pivot entry");
        std::vector<BivTerm> to_clear;
        for (const auto& t : cur.terms())
            if (t.ti == -m && t.ui < pivot_raw) to_clear.push_back(t);
        for (const auto& t : to_clear) {
            std::vector<BivTerm> dt{{t.ti / p, t.ui / p, t.c.pth_root()}};
            BivariateLaurent d_elt = BivariateLaurent::exact(f, std::move(dt));
            cur = cur.add(d_elt.pth_power_termwise().negate()).add(d_elt);
        }
    }

    cover.a_ = std::move(cur);
    cover.m_ = m;
    cover.n_ = n;
    cover.normalized_ = true;
    return cover;
}

// ------------------------------------------------------------ ThetaMatrix

ThetaMatrix::ThetaMatrix(const Field* f, int r, int rows, int cols)
    : field_(f), r_(r), rows_(rows), cols_(cols),
      values_(size_t(rows) * size_t(cols), f->zero()) {}

const FieldElement& ThetaMatrix::at(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw DomainError("theta index out of range");
    return values_[size_t(i) * size_t(cols_) + size_t(j)];
}

FieldElement& ThetaMatrix::at(int i, int j) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw DomainError("theta index out of range");
    return values_[size_t(i) * size_t(cols_) + size_t(j)];
}

ThetaMatrix theta_extract(const CoverSpec& cover, int r) {
    if (r < 1) throw DomainError("jet regime r must be >= 1");
    const int m = cover.m(), n = cover.n();
    ThetaMatrix theta(cover.field(), r, m + n, r * m + n);
    for (int i = 0; i < m + n; ++i)
        for (int j = 0; j < r * m + n; ++j)
            theta.at(i, j) = cover.a().coeff(i - m, j - n);
    return theta;
}

// ------------------------------------------------------------- restriction

CurveJet::Kind jet_kind_for(const CoverSpec& cover, int r) {
    if (r < 1) throw DomainError("jet regime r must be >= 1");
    return (r == 1 && cover.d() == 1) ? CurveJet::Kind::Transversal
                                      : CurveJet::Kind::Tangent;
}

int required_jet_length(const CoverSpec& cover, int r) {
    return jet_kind_for(cover, r) == CurveJet::Kind::Transversal
               ? cover.m()
               : r * cover.m() + cover.n();
}

LaurentSeries restrict_to_curve(const CoverSpec& cover, const CurveJet& jet) {
    check_field_match(cover.field(), jet.field());
    if (jet.kind() == CurveJet::Kind::Transversal && cover.d() != 1)
        throw DomainError("transversal jets only parametrize T_1 for d = 1 covers");
    int need = jet.kind() == CurveJet::Kind::Transversal
                   ? cover.m()
                   : jet.r() * cover.m() + cover.n();
    if (jet.length() < need)
        throw DomainError("jet too short for this cover (needs length " +
                          std::to_string(need) + ")");
    LaurentSeries g = jet.expansion();
    LaurentSeries image = jet.kind() == CurveJet::Kind::Transversal
                              ? cover.a().substitute_u(g)
                              : cover.a().substitute_t(g);
    if (image.prec() < 0)
        throw PrecisionError("restricted series not certified through exponent 0");
    return image;
}

JumpReport jump_on_curve(const CoverSpec& cover, const CurveJet& jet) {
    LaurentSeries image = restrict_to_curve(cover, jet);
    ReducedForm red = as_reduce(image);
    int h = red.max_jump();
    int bound = jet.kind() == CurveJet::Kind::Transversal
                    ? cover.m()
                    : jet.r() * cover.m() + cover.n();
    if (h > bound) throw InternalError("jump exceeds its theoretical bound");
    return JumpReport{h, std::move(red), jet};
}

// ------------------------------------------------------------------ scans

uint64_t jet_space_size(const Field& f, CurveJet::Kind kind, int M) {
    if (M < 1) throw DomainError("jet length must be >= 1");
    uint64_t q = f.order();
    uint64_t total = kind == CurveJet::Kind::Tangent ? q - 1 : q;
    for (int i = 1; i < M; ++i) {
        if (total > UINT64_MAX / q) throw DomainError("jet space size overflows");
        total *= q;
    }
    return total;
}

CurveJet jet_at(const Field& f, CurveJet::Kind kind, int r, int M, uint64_t rank) {
    uint64_t q = f.order();
    std::vector<FieldElement> coeffs(size_t(M), f.zero());
    for (int i = M - 1; i >= 1; --i) {
        coeffs[size_t(i)] = f.element_at(rank % q);
        rank /= q;
    }
    if (kind == CurveJet::Kind::Tangent) {
        if (rank >= q - 1) throw DomainError("jet rank out of range");
        coeffs[0] = f.element_at(rank + 1);  // skip zero: beta_r != 0
        return CurveJet::tangent(&f, r, std::move(coeffs));
    }
    if (rank >= q) throw DomainError("jet rank out of range");
    coeffs[0] = f.element_at(rank);
    return CurveJet::transversal(&f, std::move(coeffs));
}

JumpTable build_jump_table(const CoverSpec& cover, int r, uint64_t cap) {
    CurveJet::Kind kind = jet_kind_for(cover, r);
    int M = required_jet_length(cover, r);
    uint64_t total = jet_space_size(*cover.field(), kind, M);
    if (total > cap)
        throw DomainError("enumeration cap exceeded: " + std::to_string(total) +
                          " jets > cap " + std::to_string(cap));
    JumpTable table{kind, r, M, std::vector<uint8_t>(total, 0)};
    const Field& f = *cover.field();
    int chunks = parallel_chunks();
    uint64_t chunk = (total + uint64_t(chunks) - 1) / uint64_t(chunks);
    std::vector<std::future<void>> work;
    for (int c = 0; c < chunks; ++c) {
        uint64_t lo = uint64_t(c) * chunk;
        uint64_t hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        work.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (uint64_t rank = lo; rank < hi; ++rank) {
                CurveJet jet = jet_at(f, kind, r, M, rank);
                int h = jump_on_curve(cover, jet).h;
                table.h[rank] = uint8_t(h);
            }
        }));
    }
    for (auto& w : work) w.get();
    return table;
}

int sufficient_jet_order(const CoverSpec& cover, int r, JetOrderMode mode, uint64_t cap) {
    const int m = cover.m(), n = cover.n();
    int bound = cover.d() == 1 ? (m + 1) * r - 1 : (m + 1) * r + n;
    if (mode == JetOrderMode::Bound) return bound;

    JumpTable table = build_jump_table(cover, r, cap);
    const uint64_t q = cover.field()->order();
    const int M = table.M;
    const int first = table.kind == CurveJet::Kind::Transversal ? 1 : r;
    // Smallest s such that h is constant on classes of jets sharing the
    // coefficients at exponents <= s.
    for (int s = 0; s <= first + M - 1; ++s) {
        int ncoords = std::max(0, std::min(s - first + 1, M));
        // jets sharing the first ncoords mixed-radix digits form contiguous
        // rank blocks of size q^{M-ncoords}
        uint64_t block = 1;
        for (int i = 0; i < M - ncoords; ++i) block *= q;
        bool constant = true;
        for (uint64_t start = 0; start < table.h.size() && constant; start += block) {
            uint8_t h0 = table.h[start];
            uint64_t end = std::min<uint64_t>(start + block, table.h.size());
            for (uint64_t k = start + 1; k < end; ++k) {
                if (table.h[k] != h0) {
                    constant = false;
                    break;
                }
            }
        }
        if (constant) {
            if (s > bound)
                throw InternalError("exhaustive sufficient jet order exceeds the bound");
            return s;
        }
    }
    throw InternalError("sufficient jet order not found at full jet length");
}

}  // namespace asjet
