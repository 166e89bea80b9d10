#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "asjet/local.hpp"
#include "asjet/series.hpp"

namespace asjet {

/// A regular curve germ through the origin in Weierstrass normal form.
/// Transversal (r = 1, d = 1): u = a_1 t + ... + a_M t^M, free coefficients.
/// Tangent (r >= 2, or r = 1 with d = 2): t = b_r u^r + ... + b_{r+M-1} u^{r+M-1}
/// with b_r != 0.
class CurveJet {
public:
    enum class Kind { Transversal, Tangent };

    static CurveJet transversal(const Field* f, std::vector<FieldElement> alphas);
    static CurveJet tangent(const Field* f, int r, std::vector<FieldElement> betas);

    const Field* field() const { return field_; }
    Kind kind() const { return kind_; }
    int r() const { return r_; }
    int length() const { return int(coeffs_.size()); }
    const std::vector<FieldElement>& coeffs() const { return coeffs_; }
    /// Coefficient at normal-form exponent w (w >= 1 transversal, w >= r tangent).
    FieldElement coeff_at_exponent(int w) const;

    /// The germ's parameter expansion: u(t) with precision M+1, or t(u) with
    /// precision r+M.  The tail beyond the stored jet is honestly unknown.
    LaurentSeries expansion() const;

    /// "x:a1,a2,..." or "t:r:br,b_{r+1},..."
    std::string str() const;

private:
    CurveJet(const Field* f, Kind k, int r, std::vector<FieldElement> coeffs);
    const Field* field_;
    Kind kind_;
    int r_;
    std::vector<FieldElement> coeffs_;
};

/// Intersection number of the two prime divisors defined by jets of the
/// same family; a lower bound when the stored jets agree everywhere.
struct IntersectionOrder {
    int value;
    bool lower_bound;
};
IntersectionOrder intersection_order(const CurveJet& a, const CurveJet& b);

/// Artin-Schreier datum a for the cover x^p - x = a, branch divisor
/// inside {T=0} (d=1) or {T=0, U=0} (d=2).
class CoverSpec {
public:
    const Field* field() const { return field_; }
    int d() const { return d_; }
    int m() const { return m_; }
    int n() const { return n_; }
    bool normalized() const { return normalized_; }
    const BivariateLaurent& a() const { return a_; }

    /// Wraps a datum without minimizing pole orders (restriction and jumps
    /// work on it; theta extraction and strata demand a normalized cover).
    static CoverSpec raw(std::shared_ptr<const Field> field, BivariateLaurent a, int d);

private:
    friend CoverSpec cover_normalize(std::shared_ptr<const Field>, BivariateLaurent, int);
    CoverSpec() = default;
    std::shared_ptr<const Field> owner_;  // may be empty when caller keeps the field
    const Field* field_ = nullptr;
    BivariateLaurent a_;
    int d_ = 0;
    int m_ = 0;
    int n_ = 0;
    bool normalized_ = false;
};

/// Minimizes the pole orders (n, then m) by wp-shifts, and, when p | m,
/// clears the leading theta row below the pivot.  DomainError when the
/// cover degenerates (unramified along a claimed branch component).
CoverSpec cover_normalize(std::shared_ptr<const Field> field, BivariateLaurent a, int d);

/// theta_{ij} = coefficient of T^{i-m} U^{j-n} in a, 0 <= i < m+n,
/// 0 <= j < rm+n.  Entries beyond the certified precision are an error.
class ThetaMatrix {
public:
    ThetaMatrix(const Field* f, int r, int rows, int cols);
    int r() const { return r_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const FieldElement& at(int i, int j) const;
    FieldElement& at(int i, int j);

private:
    const Field* field_;
    int r_, rows_, cols_;
    std::vector<FieldElement> values_;
};

ThetaMatrix theta_extract(const CoverSpec& cover, int r);

/// The jet family T_r uses transversal jets exactly when r = 1 and d = 1.
CurveJet::Kind jet_kind_for(const CoverSpec& cover, int r);
/// Jet length needed by restriction and the strata machinery:
/// m (transversal) or rm+n (tangent).
int required_jet_length(const CoverSpec& cover, int r);

/// Image of a in the completed local ring of the curve, certified through
/// exponent 0 (PrecisionError otherwise).
LaurentSeries restrict_to_curve(const CoverSpec& cover, const CurveJet& jet);

struct JumpReport {
    int h;
    ReducedForm reduced;
    CurveJet jet;
};
JumpReport jump_on_curve(const CoverSpec& cover, const CurveJet& jet);

// ----------------------------------------------------------------- scans

/// Number of jets of length M: (q-1) q^{M-1} tangent, q^M transversal.
uint64_t jet_space_size(const Field& f, CurveJet::Kind kind, int M);
/// rank-th jet in the fixed enumeration order.
CurveJet jet_at(const Field& f, CurveJet::Kind kind, int r, int M, uint64_t rank);

/// h for every jet of the required length, indexed by enumeration rank.
struct JumpTable {
    CurveJet::Kind kind;
    int r;
    int M;
    std::vector<uint8_t> h;
};
JumpTable build_jump_table(const CoverSpec& cover, int r, uint64_t cap);

enum class JetOrderMode { Bound, Exhaustive };

/// Minimal s such that jets agreeing to intersection order >= s+1 have equal
/// jumps.  Bound mode returns the a-priori bound (m+1)r - 1 (d=1) resp.
/// (m+1)r + n (d=2); exhaustive mode computes the true minimum over the
/// cover's finite field and checks it against the bound.
int sufficient_jet_order(const CoverSpec& cover, int r, JetOrderMode mode,
                         uint64_t cap = uint64_t(1) << 20);

}  // namespace asjet
