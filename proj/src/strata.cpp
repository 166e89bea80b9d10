#include "asjet/strata.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <thread>

namespace asjet {

// -------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(const Field* f, int nvars) : field_(f), nvars_(nvars) {
    if (f == nullptr) throw InternalError("null field");
    if (nvars < 0) throw DomainError("negative variable count");
}

MultiPoly MultiPoly::constant(const Field* f, int nvars, const FieldElement& c) {
    MultiPoly p(f, nvars);
    if (!c.is_zero()) p.terms_.push_back({std::vector<uint16_t>(size_t(nvars), 0), c});
    return p;
}

MultiPoly MultiPoly::variable(const Field* f, int nvars, int index) {
    if (index < 0 || index >= nvars) throw DomainError("variable index out of range");
    MultiPoly p(f, nvars);
    std::vector<uint16_t> e(size_t(nvars), 0);
    e[size_t(index)] = 1;
    p.terms_.push_back({std::move(e), f->one()});
    return p;
}

MultiPoly MultiPoly::monomial(const Field* f, int nvars, std::vector<uint16_t> exps,
                              const FieldElement& c) {
    if (int(exps.size()) != nvars) throw DomainError("exponent vector length mismatch");
    MultiPoly p(f, nvars);
    if (!c.is_zero()) p.terms_.push_back({std::move(exps), c});
    return p;
}

void MultiPoly::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.exps < b.exps; });
    std::vector<Term> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().exps == t.exps)
            merged.back().c = merged.back().c + t.c;
        else
            merged.push_back(std::move(t));
    }
    terms_.clear();
    for (auto& t : merged)
        if (!t.c.is_zero()) terms_.push_back(std::move(t));
}

int MultiPoly::max_var() const {
    int mv = -1;
    for (const auto& t : terms_)
        for (int w = 0; w < nvars_; ++w)
            if (t.exps[size_t(w)] > 0) mv = std::max(mv, w);
    return mv;
}

namespace {
void check_compat(const MultiPoly& a, const MultiPoly& b) {
    if (!a.valid() || !b.valid()) throw InternalError("detached polynomial");
    if (a.nvars() != b.nvars()) throw DomainError("variable set mismatch");
    if (a.field() != b.field() && !a.field()->same_as(*b.field()))
        throw DomainError("mixed fields");
}
}  // namespace

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    check_compat(*this, o);
    MultiPoly out(field_, nvars_);
    out.terms_ = terms_;
    out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
    out.normalize();
    return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + o.negate(); }

MultiPoly MultiPoly::negate() const {
    MultiPoly out(field_, nvars_);
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) out.terms_.push_back({t.exps, -t.c});
    return out;
}

MultiPoly MultiPoly::scale(const FieldElement& c) const {
    if (c.is_zero()) return MultiPoly(field_, nvars_);
    MultiPoly out(field_, nvars_);
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) out.terms_.push_back({t.exps, t.c * c});
    return out;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    check_compat(*this, o);
    MultiPoly out(field_, nvars_);
    out.terms_.reserve(terms_.size() * o.terms_.size());
    for (const auto& s : terms_) {
        for (const auto& t : o.terms_) {
            Term nt;
            nt.exps.resize(size_t(nvars_));
            for (int w = 0; w < nvars_; ++w) {
                uint32_t e = uint32_t(s.exps[size_t(w)]) + t.exps[size_t(w)];
                if (e > UINT16_MAX) throw DomainError("monomial exponent overflow");
                nt.exps[size_t(w)] = uint16_t(e);
            }
            nt.c = s.c * t.c;
            out.terms_.push_back(std::move(nt));
        }
    }
    out.normalize();
    return out;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
    check_compat(*this, o);
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].exps != o.terms_[i].exps || terms_[i].c != o.terms_[i].c)
            return false;
    return true;
}

MultiPoly MultiPoly::pow(uint64_t k) const {
    MultiPoly r = constant(field_, nvars_, field_->one());
    MultiPoly base = *this;
    while (k) {
        if (k & 1) r = r * base;
        if (k > 1) base = base * base;
        k >>= 1;
    }
    return r;
}

MultiPoly MultiPoly::frobenius(int k) const {
    if (k < 0) throw DomainError("frobenius exponent must be nonnegative");
    uint64_t scale = 1;
    for (int i = 0; i < k; ++i) {
        scale *= field_->p();
        if (scale > UINT16_MAX) throw DomainError("frobenius exponent overflow");
    }
    MultiPoly out(field_, nvars_);
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        Term nt;
        nt.exps.resize(size_t(nvars_));
        for (int w = 0; w < nvars_; ++w) {
            uint64_t e = uint64_t(t.exps[size_t(w)]) * scale;
            if (e > UINT16_MAX) throw DomainError("monomial exponent overflow");
            nt.exps[size_t(w)] = uint16_t(e);
        }
        nt.c = t.c.frobenius(k);
        out.terms_.push_back(std::move(nt));
    }
    out.normalize();
    return out;
}

FieldElement MultiPoly::eval(std::span<const FieldElement> args) const {
    if (!valid()) throw InternalError("detached polynomial");
    if (int(args.size()) < nvars_) throw DomainError("too few evaluation arguments");
    FieldElement acc = field_->zero();
    for (const auto& t : terms_) {
        FieldElement prod = t.c;
        for (int w = 0; w < nvars_; ++w) {
            uint16_t e = t.exps[size_t(w)];
            if (e) prod = prod * args[size_t(w)].pow(e);
        }
        acc = acc + prod;
    }
    return acc;
}

std::string MultiPoly::str() const {
    std::ostringstream os;
    for (const auto& t : terms_) {
        os << t.c.str() << " :";
        for (int w = 0; w < nvars_; ++w) os << ' ' << t.exps[size_t(w)];
        os << '\n';
    }
    return os.str();
}

// ------------------------------------------------ truncated poly series

namespace {

// Truncated series in tau with MultiPoly coefficients, fixed modulus tau^cap.
struct PolySeries {
    const Field* field;
    int nvars;
    int cap;
    std::vector<MultiPoly> c;

    PolySeries(const Field* f, int nv, int cp)
        : field(f), nvars(nv), cap(cp), c(size_t(cp), MultiPoly(f, nv)) {}
};

PolySeries ps_mul(const PolySeries& a, const PolySeries& b) {
    PolySeries out(a.field, a.nvars, a.cap);
    for (int i = 0; i < a.cap; ++i) {
        if (a.c[size_t(i)].is_zero()) continue;
        for (int j = 0; i + j < a.cap; ++j) {
            if (b.c[size_t(j)].is_zero()) continue;
            out.c[size_t(i + j)] = out.c[size_t(i + j)] + a.c[size_t(i)] * b.c[size_t(j)];
        }
    }
    return out;
}

// Inverse of a series whose constant coefficient is a nonzero constant.
PolySeries ps_inv(const PolySeries& a) {
    if (a.c[0].terms().size() != 1 || a.c[0].max_var() >= 0)
        throw InternalError("poly series inversion needs a constant unit term");
    FieldElement c0inv = a.c[0].terms()[0].c.inverse();
    PolySeries out(a.field, a.nvars, a.cap);
    out.c[0] = MultiPoly::constant(a.field, a.nvars, c0inv);
    for (int k = 1; k < a.cap; ++k) {
        MultiPoly acc(a.field, a.nvars);
        for (int i = 1; i <= k; ++i)
            acc = acc + a.c[size_t(i)] * out.c[size_t(k - i)];
        out.c[size_t(k)] = acc.scale(c0inv).negate();
    }
    return out;
}

PolySeries ps_pow(const PolySeries& a, int k) {
    if (k < 0) return ps_pow(ps_inv(a), -k);
    PolySeries r(a.field, a.nvars, a.cap);
    r.c[0] = MultiPoly::constant(a.field, a.nvars, a.field->one());
    PolySeries base = a;
    while (k) {
        if (k & 1) r = ps_mul(r, base);
        if (k > 1) base = ps_mul(base, base);
        k >>= 1;
    }
    return r;
}

int parallel_chunks() {
    unsigned hw = std::thread::hardware_concurrency();
    return int(std::min<unsigned>(std::max<unsigned>(hw, 1), 8));
}

}  // namespace

// ------------------------------------------------------------- compute_F

std::vector<int> StrataSystem::jump_support() const {
    std::vector<int> out;
    const int p = int(field->p());
    for (int l = 1; l <= cap; ++l)
        if (l % p != 0) out.push_back(l);
    return out;
}

std::vector<MultiPoly> compute_F(const ThetaMatrix& theta, const CoverSpec& cover, int r) {
    const Field* f = cover.field();
    const int m = cover.m(), n = cover.n();
    if (theta.r() != r || theta.rows() != m + n || theta.cols() != r * m + n)
        throw DomainError("theta matrix was extracted for a different regime");
    CurveJet::Kind regime = jet_kind_for(cover, r);

    if (regime == CurveJet::Kind::Transversal) {
        const int cap = m;
        const int nvars = m;  // X_1..X_m at indices 0..m-1
        PolySeries wa(f, nvars, cap);
        for (int w = 0; w < std::min(cap, m); ++w)
            wa.c[size_t(w)] = MultiPoly::variable(f, nvars, w);
        PolySeries acc(f, nvars, cap);
        PolySeries pj(f, nvars, cap);  // wa^j, starting at j = 0
        pj.c[0] = MultiPoly::constant(f, nvars, f->one());
        for (int j = 0; j < cap; ++j) {
            if (j > 0) pj = ps_mul(pj, wa);
            for (int i = 0; i < cap; ++i) {
                const FieldElement& th = theta.at(i, j);
                if (th.is_zero() || i + j >= cap) continue;
                for (int w = 0; i + j + w < cap; ++w)
                    acc.c[size_t(i + j + w)] =
                        acc.c[size_t(i + j + w)] + pj.c[size_t(w)].scale(th);
            }
        }
        for (int i = 0; i < cap; ++i)
            if (acc.c[size_t(i)].max_var() > i - 1)
                throw InternalError("F_i involves a variable beyond X_i");
        return acc.c;
    }

    const int cap = r * m + n;
    const int nvars = cap;  // X_0..X_{cap-1}
    PolySeries w(f, nvars, cap);
    w.c[0] = MultiPoly::constant(f, nvars, f->one());
    for (int v = 1; v < cap; ++v) w.c[size_t(v)] = MultiPoly::variable(f, nvars, v);

    PolySeries acc(f, nvars, cap);
    PolySeries wpow = ps_pow(w, -m);  // runs over exponent -m+i as i grows
    for (int i = 0; i < m + n; ++i) {
        if (i > 0) wpow = ps_mul(wpow, w);
        // collect theta_{ij} X_0^i tau^{ri+j} W^{-m+i}
        bool row_used = false;
        MultiPoly x0i(f, nvars);
        for (int j = 0; j < cap; ++j) {
            const FieldElement& th = theta.at(i, j);
            if (th.is_zero()) continue;
            int64_t base = int64_t(r) * i + j;
            if (base >= cap) continue;
            if (!row_used) {
                std::vector<uint16_t> e(size_t(nvars), 0);
                e[0] = uint16_t(i);
                x0i = MultiPoly::monomial(f, nvars, std::move(e), f->one());
                row_used = true;
            }
            for (int t = 0; base + t < cap; ++t) {
                MultiPoly contrib = wpow.c[size_t(t)].scale(th) * x0i;
                acc.c[size_t(base + t)] = acc.c[size_t(base + t)] + contrib;
            }
        }
    }
    for (int i = 0; i < cap; ++i)
        if (acc.c[size_t(i)].max_var() > i)
            throw InternalError("F_i^(r) involves a variable beyond X_i");
    return acc.c;
}

// --------------------------------------------------------------- clearing

namespace {

struct LaurentMonomial {
    int64_t x0;
    std::vector<uint16_t> rest;  // exponents of X_1.. (index 0 unused)
    FieldElement c;
};

}  // namespace

StrataSystem build_strata_system(const CoverSpec& cover, int r) {
    if (!cover.normalized())
        throw DomainError("strata need a normalized cover");
    StrataSystem sys;
    sys.regime = jet_kind_for(cover, r);
    sys.r = r;
    sys.m = cover.m();
    sys.n = cover.n();
    sys.field = cover.field();
    sys.cap = sys.regime == CurveJet::Kind::Tangent ? r * sys.m + sys.n : sys.m;
    ThetaMatrix theta = theta_extract(cover, r);
    sys.F = compute_F(theta, cover, r);

    const Field* f = sys.field;
    const int p = int(f->p());
    const int nvars = sys.nvars();
    for (int l : sys.jump_support()) {
        int n_l = 0;
        {
            int64_t lp = int64_t(l) * p;
            while (sys.cap - lp >= 0) {
                ++n_l;
                lp *= p;
            }
        }
        if (sys.regime == CurveJet::Kind::Transversal) {
            MultiPoly s(f, nvars);
            int64_t lp = l;
            for (int nu = 0; nu <= n_l; ++nu, lp *= p) {
                int i = sys.cap - int(lp);
                if (i < 0) break;
                if (!sys.F[size_t(i)].is_zero())
                    s = s + sys.F[size_t(i)].frobenius(n_l - nu);
            }
            sys.cleared.push_back({l, 0, std::move(s)});
            continue;
        }
        // tangent: substitute X_w -> X_w / X_0, fold in X_0^{-m}, raise to
        // p^{n_l - nu}, then clear by the minimal power of X_0
        std::vector<LaurentMonomial> lterms;
        int64_t lp = l;
        for (int nu = 0; nu <= n_l; ++nu, lp *= p) {
            int i = sys.cap - int(lp);
            if (i < 0) break;
            const MultiPoly& fi = sys.F[size_t(i)];
            if (fi.is_zero()) continue;
            int64_t scale = 1;
            for (int k = 0; k < n_l - nu; ++k) scale *= p;
            for (const auto& t : fi.terms()) {
                int64_t sum_rest = 0;
                for (int w = 1; w < nvars; ++w) sum_rest += t.exps[size_t(w)];
                LaurentMonomial lm;
                lm.x0 = (int64_t(t.exps[0]) - sum_rest - sys.m) * scale;
                lm.rest.resize(size_t(nvars), 0);
                for (int w = 1; w < nvars; ++w) {
                    int64_t e = int64_t(t.exps[size_t(w)]) * scale;
                    if (e > UINT16_MAX) throw DomainError("cleared exponent overflow");
                    lm.rest[size_t(w)] = uint16_t(e);
                }
                lm.c = t.c.frobenius(n_l - nu);
                lterms.push_back(std::move(lm));
            }
        }
        int64_t min_x0 = 0;
        for (const auto& lm : lterms) min_x0 = std::min(min_x0, lm.x0);
        int clear_exp = int(-min_x0);
        MultiPoly s(f, nvars);
        for (auto& lm : lterms) {
            int64_t e0 = lm.x0 + clear_exp;
            if (e0 > UINT16_MAX) throw DomainError("cleared exponent overflow");
            std::vector<uint16_t> exps = lm.rest;
            exps[0] = uint16_t(e0);
            s = s + MultiPoly::monomial(f, nvars, std::move(exps), lm.c);
        }
        sys.cleared.push_back({l, clear_exp, std::move(s)});
    }
    return sys;
}

// -------------------------------------------------------------- pointwise

namespace {

std::vector<FieldElement> ratio_args(const StrataSystem& sys, const CurveJet& jet) {
    const Field* f = sys.field;
    std::vector<FieldElement> args(size_t(sys.nvars()), f->zero());
    if (sys.regime == CurveJet::Kind::Tangent) {
        if (jet.kind() != CurveJet::Kind::Tangent || jet.r() != sys.r)
            throw DomainError("jet does not belong to this system's family");
        if (jet.length() < sys.cap)
            throw DomainError("jet too short for G evaluation (needs rm+n)");
        FieldElement br = jet.coeffs()[0];
        FieldElement brinv = br.inverse();
        args[0] = br;
        for (int w = 1; w < sys.nvars(); ++w)
            args[size_t(w)] = jet.coeffs()[size_t(w)] * brinv;
    } else {
        if (jet.kind() != CurveJet::Kind::Transversal)
            throw DomainError("jet does not belong to this system's family");
        if (jet.length() < sys.m - 1)
            throw DomainError("jet too short for G evaluation (needs m-1)");
        for (int w = 0; w < sys.nvars() && w < jet.length(); ++w)
            args[size_t(w)] = jet.coeffs()[size_t(w)];
    }
    return args;
}

}  // namespace

std::map<int, FieldElement> eval_G(const StrataSystem& sys, const CurveJet& jet) {
    const Field* f = sys.field;
    const int p = int(f->p());
    std::vector<FieldElement> args = ratio_args(sys, jet);
    FieldElement pref = f->one();
    if (sys.regime == CurveJet::Kind::Tangent) pref = args[0].pow(-int64_t(sys.m));
    std::map<int, FieldElement> out;
    for (int l : sys.jump_support()) {
        FieldElement acc = f->zero();
        int64_t lp = l;
        for (int nu = 0; sys.cap - lp >= 0; ++nu, lp *= p) {
            int i = sys.cap - int(lp);
            FieldElement v = sys.F[size_t(i)].eval(args);
            if (sys.regime == CurveJet::Kind::Tangent) v = v * pref;
            acc = acc + v.pth_root_iter(nu);
        }
        out[l] = acc;
    }
    return out;
}

int jump_from_G(const std::map<int, FieldElement>& g) {
    int h = 0;
    for (const auto& [l, v] : g)
        if (!v.is_zero()) h = std::max(h, l);
    return h;
}

std::vector<StrataSystem::Cleared> clear_strata_polys(const StrataSystem& sys, int s) {
    if (s < 0 || s > sys.cap) throw DomainError("stratum level s out of range");
    std::vector<StrataSystem::Cleared> out;
    for (const auto& c : sys.cleared)
        if (c.l >= s + 1) out.push_back(c);
    return out;
}

bool stratum_contains(const StrataSystem& sys, int s, const CurveJet& jet) {
    if (s < 0) return false;
    auto g = eval_G(sys, jet);
    for (const auto& [l, v] : g)
        if (l >= s + 1 && !v.is_zero()) return false;
    return true;
}

StrataScan build_strata_scan(const CoverSpec& cover, const StrataSystem& sys,
                             uint64_t cap) {
    StrataScan scan;
    scan.support = sys.jump_support();
    if (scan.support.size() > 16) throw DomainError("jump support too large for scan");
    if (sys.cleared.size() != scan.support.size())
        throw InternalError("cleared polynomials out of sync with the jump support");
    for (size_t k = 0; k < scan.support.size(); ++k)
        if (sys.cleared[k].l != scan.support[k])
            throw InternalError("cleared polynomials out of sync with the jump support");
    scan.jumps.kind = sys.regime;
    scan.jumps.r = sys.r;
    scan.jumps.M = required_jet_length(cover, sys.r);
    uint64_t total = jet_space_size(*cover.field(), sys.regime, scan.jumps.M);
    if (total > cap)
        throw DomainError("enumeration cap exceeded: " + std::to_string(total) +
                          " jets > cap " + std::to_string(cap));
    scan.jumps.h.assign(total, 0);
    scan.g_max.assign(total, 0);
    scan.g_nonzero_mask.assign(total, 0);
    scan.s_nonzero_mask.assign(total, 0);

    const Field& f = *cover.field();
    const int M = scan.jumps.M;
    int chunks = parallel_chunks();
    uint64_t chunk = (total + uint64_t(chunks) - 1) / uint64_t(chunks);
    std::vector<std::future<void>> work;
    for (int c = 0; c < chunks; ++c) {
        uint64_t lo = uint64_t(c) * chunk;
        uint64_t hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        work.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (uint64_t rank = lo; rank < hi; ++rank) {
                CurveJet jet = jet_at(f, sys.regime, sys.r, M, rank);
                scan.jumps.h[rank] = uint8_t(jump_on_curve(cover, jet).h);
                auto g = eval_G(sys, jet);
                scan.g_max[rank] = uint8_t(jump_from_G(g));
                uint16_t gm = 0, sm = 0;
                for (size_t k = 0; k < scan.support.size(); ++k) {
                    if (!g.at(scan.support[k]).is_zero()) gm |= uint16_t(1u << k);
                    const auto& cl = sys.cleared[k];
                    if (!cl.poly.eval(jet.coeffs()).is_zero()) sm |= uint16_t(1u << k);
                }
                scan.g_nonzero_mask[rank] = gm;
                scan.s_nonzero_mask[rank] = sm;
            }
        }));
    }
    for (auto& w : work) w.get();
    return scan;
}

SemicontReport verify_semicontinuity(const CoverSpec& cover, const StrataSystem& sys,
                                     int s, uint64_t cap) {
    StrataScan scan = build_strata_scan(cover, sys, cap);
    SemicontReport rep;
    rep.r = sys.r;
    rep.s = s;
    rep.total = scan.jumps.h.size();
    rep.count_per_h.assign(size_t(sys.cap) + 1, 0);
    // bits of the support with l >= s+1
    uint16_t high = 0;
    for (size_t k = 0; k < scan.support.size(); ++k)
        if (scan.support[k] >= s + 1) high |= uint16_t(1u << k);
    for (uint64_t rank = 0; rank < rep.total; ++rank) {
        int h = scan.jumps.h[rank];
        rep.count_per_h[size_t(h)]++;
        bool in_by_jump = h <= s;
        bool in_by_g = (scan.g_nonzero_mask[rank] & high) == 0;
        bool in_by_s = (scan.s_nonzero_mask[rank] & high) == 0;
        bool route_b_matches = scan.g_max[rank] == scan.jumps.h[rank];
        if (in_by_jump != in_by_g || in_by_g != in_by_s || !route_b_matches)
            rep.mismatches++;
    }
    rep.ok = rep.mismatches == 0;
    return rep;
}

}  // namespace asjet
