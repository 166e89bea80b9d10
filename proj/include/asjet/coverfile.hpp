#pragma once

#include <string>

#include "asjet/cover.hpp"

namespace asjet {

/// Parsed form of the line-oriented cover-spec text format:
///   # comment
///   p <int>
///   e <int>
///   modulus <c0> <c1> ... <ce>
///   d <1|2>
///   term <i> <j> <field-element>     (one or more; c * T^i U^j)
///   prec <I> <J>                     (certified modulo (T^I, U^J) after
///                                     clearing poles)
///   exact <0|1>                      (optional; 1 = the term list IS the
///                                     element, with no unknown tail)
///   normalized <0|1>                 (optional; 1 = verify instead of reduce)
struct CoverFile {
    uint64_t p = 0;
    int e = 0;
    std::vector<uint32_t> modulus;
    int d = 0;
    struct Term {
        int i = 0;
        int j = 0;
        std::string coeff;  // ffield serialization, parsed once the field exists
        int line = 0;
    };
    std::vector<Term> terms;
    long prec_t = 0;
    long prec_u = 0;
    bool exact_flag = false;
    bool normalized_flag = false;
};

CoverFile parse_cover_text(const std::string& text, const std::string& source_name);
CoverFile parse_cover_path(const std::string& path);

/// Canonical serialization; parse(serialize(parse(x))) == parse(x).
std::string serialize_cover(const CoverFile& file);

struct LoadedCover {
    std::shared_ptr<const Field> field;
    CoverSpec cover;
};

/// Builds the field and datum, then normalizes (or, with the normalized
/// flag, verifies minimality and fails if it does not hold).
LoadedCover load_cover(const CoverFile& file);
LoadedCover load_cover_path(const std::string& path);

/// Inline jet forms: "x:a1,a2,..." (transversal) and "t:r:br,...," (tangent),
/// field elements in ffield coordinate serialization.
CurveJet parse_jet(const Field* f, const std::string& text);

/// Curve file: lines "term <i> <j> <c>" describing a regular germ
/// f in k[[T,U]] through the origin, not necessarily in normal form.
BivariateLaurent parse_curve_text(const Field* f, const std::string& text,
                                  const std::string& source_name);

/// Weierstrass pre-normalization: divides by the unit and solves for the
/// normal-form coefficients, producing a jet of the requested length.
/// The orientation (transversal vs tangent) follows the curve's linear part
/// and the cover's branch count d.
CurveJet normalize_curve(const Field* f, const BivariateLaurent& curve, int d,
                         int jet_length);

}  // namespace asjet
