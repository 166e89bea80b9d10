#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "asjet/ffield.hpp"

namespace asjet {

// Saturating precision arithmetic.  kPrecInf marks exactly-known values.
constexpr int kPrecInf = 1 << 28;
int prec_add(int a, int b);
int prec_min(int a, int b);
int prec_mul_by(int prec, int factor);  // prec * factor for factor >= 1

/// Truncated Laurent series over a finite field: coefficients for exponents
/// below prec() are certified, everything at or above prec() is unknown.
/// Values are immutable; all operations propagate precision and never
/// silently treat an unknown coefficient as zero.
class LaurentSeries {
public:
    LaurentSeries() = default;  // invalid

    /// coeffs are the coefficients of t^val, t^{val+1}, ...; exponents
    /// beyond the list but below prec are zero.
    LaurentSeries(const Field* f, int val, std::vector<FieldElement> coeffs,
                  int prec = kPrecInf);

    static LaurentSeries zero(const Field* f, int prec = kPrecInf);
    static LaurentSeries monomial(const Field* f, int exp, const FieldElement& c,
                                  int prec = kPrecInf);
    static LaurentSeries variable(const Field* f);
    static LaurentSeries constant(const Field* f, const FieldElement& c,
                                  int prec = kPrecInf);

    const Field* field() const { return field_; }
    bool valid() const { return field_ != nullptr; }
    /// Exponent of the lowest certainly-nonzero term; equals prec() for a
    /// series that is zero to its precision.
    int val() const { return val_; }
    int prec() const { return prec_; }
    bool is_zero() const { return coeffs_.empty(); }
    int stored_end() const { return val_ + int(coeffs_.size()); }

    /// PrecisionError for k >= prec(); zero for known-zero positions.
    FieldElement coeff(int k) const;
    FieldElement leading() const;

    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    bool operator==(const LaurentSeries& o) const;
    bool operator!=(const LaurentSeries& o) const { return !(*this == o); }

    LaurentSeries negate() const;
    LaurentSeries scale(const FieldElement& c) const;
    LaurentSeries shift(int k) const;        // multiply by t^k
    LaurentSeries truncate(int prec) const;  // weaken precision

    /// "val:prec:c_val,c_{val+1},..." with ffield element serialization.
    std::string str() const;
    static LaurentSeries parse(const Field* f, std::string_view text);

private:
    const Field* field_ = nullptr;
    int val_ = 0;
    int prec_ = 0;
    std::vector<FieldElement> coeffs_;

    void normalize();
};

/// Multiplicative inverse; requires a certainly-nonzero leading term.
/// The result keeps prec - 2*val certified exponents.
LaurentSeries ls_invert(const LaurentSeries& s);
/// Integer power, repeated squaring; ls_pow(s, 0) == 1 exactly.
LaurentSeries ls_pow(const LaurentSeries& s, int64_t k);
/// Composition s(g) for val(g) >= 1, with computed (not guessed) precision.
LaurentSeries ls_substitute(const LaurentSeries& s, const LaurentSeries& g);

/// One term of a bivariate Laurent element.
struct BivTerm {
    int ti;  // exponent of T
    int ui;  // exponent of U
    FieldElement c;
};

/// Sparse bivariate Laurent element a in k[[T,U]][T^-1, U^-1].
/// Knowledge contract: the coefficient at (i, j) is certified exactly when
/// i < know_t() and j < know_u(); the unknown tail lives in
/// { i >= know_t, j >= tail_floor_u } + { i >= tail_floor_t, j >= know_u }.
/// Exact elements have know_t == know_u == kPrecInf.
class BivariateLaurent {
public:
    BivariateLaurent() = default;

    static BivariateLaurent exact(const Field* f, std::vector<BivTerm> terms);
    BivariateLaurent(const Field* f, std::vector<BivTerm> terms, int know_t,
                     int know_u, int tail_floor_t, int tail_floor_u);

    const Field* field() const { return field_; }
    bool valid() const { return field_ != nullptr; }
    const std::vector<BivTerm>& terms() const { return terms_; }
    int know_t() const { return know_t_; }
    int know_u() const { return know_u_; }
    int tail_floor_t() const { return tail_floor_t_; }
    int tail_floor_u() const { return tail_floor_u_; }
    bool is_exact() const { return know_t_ >= kPrecInf && know_u_ >= kPrecInf; }
    bool is_zero() const { return terms_.empty(); }

    bool known(int i, int j) const;
    FieldElement coeff(int i, int j) const;  // PrecisionError in unknown region

    /// T-adic / U-adic valuation of the element.  PrecisionError when the
    /// unknown tail could hide a deeper pole, DomainError for zero.
    int v1() const;
    int v2() const;

    std::vector<int> t_levels() const;  // distinct T-exponents, ascending
    std::vector<int> u_levels() const;
    /// Series in U formed by the coefficients of T^i (precision know_u).
    LaurentSeries t_level_series(int i) const;
    /// Series in T formed by the coefficients of U^j (precision know_t).
    LaurentSeries u_level_series(int j) const;

    /// Residue class at T = 0 resp. U = 0; the element must have no pole in
    /// the sliced variable.
    LaurentSeries slice_t_zero() const;
    LaurentSeries slice_u_zero() const;

    BivariateLaurent add(const BivariateLaurent& o) const;
    BivariateLaurent negate() const;
    BivariateLaurent shift(int dt, int du) const;  // multiply by T^dt U^du
    /// Termwise p-th power (the Frobenius of an exact element).
    BivariateLaurent pth_power_termwise() const;

    /// Substitute U := g(t) (series in t), keeping T as t; or T := g(u).
    /// This is the common core of curve restriction.
    LaurentSeries substitute_u(const LaurentSeries& g) const;
    LaurentSeries substitute_t(const LaurentSeries& g) const;

    /// Lines "i j c".
    std::string str() const;

private:
    const Field* field_ = nullptr;
    std::vector<BivTerm> terms_;
    int know_t_ = kPrecInf;
    int know_u_ = kPrecInf;
    int tail_floor_t_ = kPrecInf;
    int tail_floor_u_ = kPrecInf;

    void normalize();
    LaurentSeries substitute_core(bool into_u, const LaurentSeries& g) const;
};

}  // namespace asjet
