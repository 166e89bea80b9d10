#pragma once

#include <map>

#include "asjet/series.hpp"

namespace asjet {

/// Canonical form of an Artin-Schreier right-hand side over k((t)) modulo
/// wp-shifts d^p - d and integral elements: only prime-to-p pole terms
/// survive.  Usable as an equality certificate for the extensions.
struct ReducedForm {
    const Field* field = nullptr;
    /// l -> c_l for the surviving poles c_l t^{-l}; every key l >= 1 has
    /// p not dividing l and c_l != 0.
    std::map<int, FieldElement> terms;
    /// Pole depth up to which the reduction is certified complete.
    int certified_depth = 0;

    /// The ramification jump: deepest surviving pole, 0 for the trivial case.
    int max_jump() const { return terms.empty() ? 0 : terms.rbegin()->first; }
};

/// Full reduction of a: repeatedly replaces the deepest pole c t^{-ps} by
/// c^{1/p} t^{-s} and discards all nonnegative exponents.  Requires every
/// negative-exponent coefficient of a to be certified (prec >= 0).
ReducedForm as_reduce(const LaurentSeries& a);

/// The unique ramification jump of x^p - x = a over k((t)), 0 if trivial.
int as_jump(const LaurentSeries& a);

}  // namespace asjet
