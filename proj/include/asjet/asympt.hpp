#pragma once

#include "asjet/strata.hpp"

namespace asjet {

/// The minimal j with theta_{0j} != 0 (p prime to m), or the minimal j with
/// theta_{0j} != 0 and j != n mod p (p | m).  Exists for normalized covers.
int pivot_index(const CoverSpec& cover);

struct GenericOptions {
    enum class Fallback { None, Exhaustive, Sampled };
    /// What to do for r <= max(1, j), where the closed form does not apply.
    Fallback fallback = Fallback::None;
    uint64_t cap = uint64_t(1) << 20;
    uint64_t trials = 2000;
    uint64_t seed = 0;
};

enum class GenericMethod { ClosedForm, Exhaustive, SampledLowerBound };
enum class GenericCase { None, PrimeToMNoDiv, PrimeToMDiv, PDividesM };

struct GenericReport {
    int r = 0;
    int h_r = 0;
    int pivot_j = 0;
    GenericCase case_kind = GenericCase::None;
    GenericMethod method = GenericMethod::ClosedForm;
    std::optional<CurveJet> witness;  // a jet attaining h_r, verified
    long long slope_num = 0;          // h_r / r reduced
    long long slope_den = 1;
};

/// Generic jump h_r = sup of h over T_r.  Closed form for r > max(1, j);
/// smaller r falls back per the options (DomainError when disabled).
GenericReport generic_jump(const CoverSpec& cover, int r,
                           const GenericOptions& opts = {});

/// Max of jump_on_curve over random jets (a certified lower bound for h_r),
/// or the exact value over the cover's field with exhaustive = true.
int generic_jump_sampled(const CoverSpec& cover, int r, uint64_t trials, uint64_t seed,
                         bool exhaustive = false, uint64_t cap = uint64_t(1) << 20);

struct SlopeRow {
    int r;
    int h;
    long long num;
    long long den;
    GenericMethod method;
};

struct SlopeReport {
    int m = 0;
    int pivot_j = 0;
    std::vector<SlopeRow> rows;
    /// |h_r/r - m| <= (n+j+1)/r verified for every closed-form row.
    bool envelope_ok = false;
    int limit = 0;  // the limit of h_r / r, which is m
};

SlopeReport asymptotic_slope(const CoverSpec& cover, int r_max,
                             const GenericOptions& opts = {});

}  // namespace asjet
