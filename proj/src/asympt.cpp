#include "asjet/asympt.hpp"

#include <numeric>

namespace asjet {

int pivot_index(const CoverSpec& cover) {
    if (!cover.normalized()) throw DomainError("pivot index needs a normalized cover");
    const int p = int(cover.field()->p());
    const int m = cover.m(), n = cover.n();
    const bool p_divides_m = m % p == 0;
    int best = kPrecInf;
    for (const auto& t : cover.a().terms()) {
        if (t.ti != -m) continue;
        int j = t.ui + n;
        if (p_divides_m && (j - n) % p == 0) continue;  // needs j != n mod p
        best = std::min(best, j);
    }
    if (best >= kPrecInf)
        throw InternalError("no pivot entry: cover is not properly normalized");
    return best;
}

namespace {

CurveJet padded_tangent(const Field* f, int r, int len,
                        std::vector<FieldElement> head) {
    while (int(head.size()) < len) head.push_back(f->zero());
    return CurveJet::tangent(f, r, std::move(head));
}

GenericReport measured_report(const CoverSpec& cover, int r, int j,
                              const GenericOptions& opts) {
    GenericReport rep;
    rep.r = r;
    rep.pivot_j = j;
    rep.case_kind = GenericCase::None;
    if (opts.fallback == GenericOptions::Fallback::None)
        throw DomainError(
            "closed form needs r > max(1, j); enable exhaustive or sampled fallback");
    if (opts.fallback == GenericOptions::Fallback::Exhaustive) {
        JumpTable table = build_jump_table(cover, r, opts.cap);
        int best = 0;
        uint64_t best_rank = 0;
        for (uint64_t k = 0; k < table.h.size(); ++k) {
            if (table.h[k] > best) {
                best = table.h[k];
                best_rank = k;
            }
        }
        rep.h_r = best;
        rep.method = GenericMethod::Exhaustive;
        rep.witness = jet_at(*cover.field(), table.kind, r, table.M, best_rank);
    } else {
        rep.h_r = generic_jump_sampled(cover, r, opts.trials, opts.seed);
        rep.method = GenericMethod::SampledLowerBound;
    }
    long long g = std::gcd((long long)rep.h_r, (long long)r);
    rep.slope_num = rep.h_r / g;
    rep.slope_den = r / g;
    return rep;
}

}  // namespace

GenericReport generic_jump(const CoverSpec& cover, int r, const GenericOptions& opts) {
    if (!cover.normalized()) throw DomainError("generic jump needs a normalized cover");
    if (r < 1) throw DomainError("jet regime r must be >= 1");
    const Field* f = cover.field();
    const int p = int(f->p());
    const int m = cover.m(), n = cover.n();
    const int j = pivot_index(cover);

    if (r <= std::max(1, j)) return measured_report(cover, r, j, opts);

    GenericReport rep;
    rep.r = r;
    rep.pivot_j = j;
    rep.method = GenericMethod::ClosedForm;
    const int rmn = r * m + n;
    if (m % p != 0) {
        if ((rmn - j) % p != 0) {
            rep.case_kind = GenericCase::PrimeToMNoDiv;
            rep.h_r = rmn - j;
        } else {
            rep.case_kind = GenericCase::PrimeToMDiv;
            rep.h_r = rmn - j - 1;
        }
    } else {
        rep.case_kind = GenericCase::PDividesM;
        rep.h_r = rmn - j;  // p never divides rm+n-j here
    }

    // Witness: in the two every-jet cases any jet attains h_r; in the
    // remaining case h depends on beta_{r+1} through a nonconstant affine
    // function, so one of two candidate values works.
    const int len = rmn;
    std::vector<std::vector<FieldElement>> candidates;
    if (rep.case_kind == GenericCase::PrimeToMDiv) {
        candidates.push_back({f->one(), f->zero()});
        candidates.push_back({f->one(), f->one()});
    } else {
        candidates.push_back({f->one()});
    }
    for (auto& head : candidates) {
        CurveJet jet = padded_tangent(f, r, len, std::move(head));
        if (jump_on_curve(cover, jet).h == rep.h_r) {
            rep.witness = jet;
            break;
        }
    }
    if (!rep.witness)
        throw InternalError("generic jump witness construction failed");
    long long g = std::gcd((long long)rep.h_r, (long long)r);
    rep.slope_num = rep.h_r / g;
    rep.slope_den = r / g;
    return rep;
}

int generic_jump_sampled(const CoverSpec& cover, int r, uint64_t trials, uint64_t seed,
                         bool exhaustive, uint64_t cap) {
    if (r < 1) throw DomainError("jet regime r must be >= 1");
    if (exhaustive) {
        JumpTable table = build_jump_table(cover, r, cap);
        uint8_t best = 0;
        for (uint8_t h : table.h) best = std::max(best, h);
        return best;
    }
    const Field* f = cover.field();
    CurveJet::Kind kind = jet_kind_for(cover, r);
    int M = required_jet_length(cover, r);
    std::mt19937_64 rng(seed);
    int best = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        std::vector<FieldElement> coeffs;
        coeffs.reserve(size_t(M));
        for (int i = 0; i < M; ++i) coeffs.push_back(f->random_element(rng));
        if (kind == CurveJet::Kind::Tangent) {
            while (coeffs[0].is_zero()) coeffs[0] = f->random_element(rng);
            best = std::max(best, jump_on_curve(cover, CurveJet::tangent(f, r, coeffs)).h);
        } else {
            best = std::max(best, jump_on_curve(cover, CurveJet::transversal(f, coeffs)).h);
        }
    }
    return best;
}

SlopeReport asymptotic_slope(const CoverSpec& cover, int r_max, const GenericOptions& opts) {
    if (!cover.normalized()) throw DomainError("asymptotics need a normalized cover");
    if (r_max < 1) throw DomainError("r_max must be >= 1");
    SlopeReport rep;
    rep.m = cover.m();
    rep.pivot_j = pivot_index(cover);
    rep.limit = cover.m();
    rep.envelope_ok = true;
    const int n = cover.n(), j = rep.pivot_j;

    for (int r = 1; r <= r_max; ++r) {
        GenericOptions row_opts = opts;
        if (row_opts.fallback == GenericOptions::Fallback::None) {
            // below the closed-form range fall back to whatever is feasible
            uint64_t size = UINT64_MAX;
            try {
                size = jet_space_size(*cover.field(), jet_kind_for(cover, r),
                                      required_jet_length(cover, r));
            } catch (const DomainError&) {
            }
            row_opts.fallback = size <= opts.cap ? GenericOptions::Fallback::Exhaustive
                                                 : GenericOptions::Fallback::Sampled;
        }
        GenericReport g = generic_jump(cover, r, row_opts);
        rep.rows.push_back({r, g.h_r, g.slope_num, g.slope_den, g.method});
        if (g.method == GenericMethod::ClosedForm) {
            // |h_r/r - m| <= (n+j+1)/r  <=>  |h_r - r m| <= n+j+1
            if (std::abs(int64_t(g.h_r) - int64_t(r) * cover.m()) > int64_t(n) + j + 1)
                rep.envelope_ok = false;
        }
    }
    return rep;
}

}  // namespace asjet
