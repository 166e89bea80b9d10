#pragma once

#include <cstdint>
#include <map>

#include "asjet/cover.hpp"

namespace asjet {

/// Sparse multivariate polynomial over a finite field, exponent vectors of
/// fixed length nvars.  Terms are kept sorted and nonzero.
class MultiPoly {
public:
    struct Term {
        std::vector<uint16_t> exps;
        FieldElement c;
    };

    MultiPoly() = default;
    MultiPoly(const Field* f, int nvars);  // zero polynomial
    static MultiPoly constant(const Field* f, int nvars, const FieldElement& c);
    static MultiPoly variable(const Field* f, int nvars, int index);
    static MultiPoly monomial(const Field* f, int nvars, std::vector<uint16_t> exps,
                              const FieldElement& c);

    const Field* field() const { return field_; }
    bool valid() const { return field_ != nullptr; }
    int nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Largest variable index actually used, -1 for constants.
    int max_var() const;

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    bool operator==(const MultiPoly& o) const;
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    MultiPoly negate() const;
    MultiPoly scale(const FieldElement& c) const;
    MultiPoly pow(uint64_t k) const;
    /// Coefficient Frobenius plus exponent scaling: f^{p^k} in characteristic p.
    MultiPoly frobenius(int k) const;

    FieldElement eval(std::span<const FieldElement> args) const;

    /// One line per term: "c : e_0 e_1 ... e_{V-1}".
    std::string str() const;

private:
    const Field* field_ = nullptr;
    int nvars_ = 0;
    std::vector<Term> terms_;
    void normalize();
};

/// The strata data of a cover at jet regime r: the polynomials F_i (F_i^(r)
/// in the tangent regime), and the cleared stratification polynomials S_l
/// for every l in the jump support.
struct StrataSystem {
    CurveJet::Kind regime;
    int r = 0;
    int m = 0;
    int n = 0;
    /// rm+n (tangent) or m (transversal): number of F's and the top l.
    int cap = 0;
    const Field* field = nullptr;
    std::vector<MultiPoly> F;

    struct Cleared {
        int l;
        int clear_exp;  // the power of X_0 used to clear denominators
        MultiPoly poly;
    };
    std::vector<Cleared> cleared;  // ascending l, every 1 <= l <= cap with p∤l

    /// All pole depths that can carry a jump: 1 <= l <= cap, p not dividing l.
    std::vector<int> jump_support() const;
    int nvars() const { return regime == CurveJet::Kind::Tangent ? cap : m; }
};

/// The F_i from the tau-expansion; entry i depends only on X_0..X_i
/// (tangent) resp. X_1..X_i (transversal) — verified.
std::vector<MultiPoly> compute_F(const ThetaMatrix& theta, const CoverSpec& cover, int r);

/// F's plus cleared strata polynomials for every admissible l.
StrataSystem build_strata_system(const CoverSpec& cover, int r);

/// Pointwise G_l values at a jet, every l in the jump support.  The p^{-nu}
/// powers are exact p-th roots in the finite field.
std::map<int, FieldElement> eval_G(const StrataSystem& system, const CurveJet& jet);

/// Deepest l with G_l != 0, or 0: an independent route to the jump.
int jump_from_G(const std::map<int, FieldElement>& g);

/// The cleared polynomials cutting out {h <= s}: those with l >= s+1.
std::vector<StrataSystem::Cleared> clear_strata_polys(const StrataSystem& system, int s);

/// h <= s test through G-vanishing.
bool stratum_contains(const StrataSystem& system, int s, const CurveJet& jet);

/// Exhaustive per-jet data for one (cover, r): the jump by restriction, the
/// jump by G-values, and the vanishing pattern of the cleared polynomials.
struct StrataScan {
    JumpTable jumps;
    std::vector<int> support;
    std::vector<uint8_t> g_max;             // jump route (b)
    std::vector<uint16_t> g_nonzero_mask;   // bit k: G_{support[k]} != 0
    std::vector<uint16_t> s_nonzero_mask;   // bit k: S_{support[k]} != 0
};
StrataScan build_strata_scan(const CoverSpec& cover, const StrataSystem& system,
                             uint64_t cap);

struct SemicontReport {
    int r = 0;
    int s = 0;
    uint64_t total = 0;
    std::vector<uint64_t> count_per_h;  // indexed by h, route (a)
    uint64_t mismatches = 0;            // jets where the three routes disagree
    bool ok = false;
};

/// Checks {h <= s} == {all S_l vanish, l > s} == {stratum_contains} over the
/// whole jet space.  A mismatch is a bug, not a math failure.
SemicontReport verify_semicontinuity(const CoverSpec& cover, const StrataSystem& system,
                                     int s, uint64_t cap);

}  // namespace asjet
