#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asjet/errors.hpp"

namespace asjet {

class Field;

/// Element of F_{p^e}, stored as e coordinates over F_p in the basis
/// 1, X, ..., X^{e-1} modulo the field's defining polynomial.
/// Elements are immutable values; they keep a pointer to their field.
class FieldElement {
public:
    static constexpr int kMaxDegree = 16;

    FieldElement() = default;  // detached; only Field factories make valid ones

    const Field* field() const { return field_; }
    bool valid() const { return field_ != nullptr; }
    uint32_t coord(int i) const { return coords_[static_cast<size_t>(i)]; }

    bool is_zero() const;
    bool is_one() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement inverse() const;
    FieldElement pow(int64_t k) const;
    /// x -> x^{p^k}
    FieldElement frobenius(int k = 1) const;
    /// the unique y with y^p = x (finite fields are perfect)
    FieldElement pth_root() const;
    /// k-fold p-th root, x -> x^{p^{-k}}
    FieldElement pth_root_iter(int k) const;

    /// Coordinates low-to-high, comma separated ("1,0,1" in F_8).
    std::string str() const;

private:
    friend class Field;
    const Field* field_ = nullptr;
    std::array<uint32_t, kMaxDegree> coords_{};
};

/// F_{p^e} given by a monic irreducible degree-e modulus over F_p.
/// Immutable after construction; safe to share across threads.
class Field {
public:
    static constexpr uint64_t kMaxP = 1u << 20;

    /// Modulus generated deterministically (seed 0).
    Field(uint64_t p, int e);
    /// Modulus searched from the given seed: random monic candidates,
    /// retried until irreducible.
    Field(uint64_t p, int e, uint64_t modulus_seed);
    /// User-supplied modulus, e+1 coefficients low-to-high, validated.
    Field(uint64_t p, int e, const std::vector<uint32_t>& modulus);

    uint64_t p() const { return p_; }
    int e() const { return e_; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    bool enumerable(uint64_t cap) const;
    /// p^e; DomainError if it does not fit uint64.
    uint64_t order() const;

    FieldElement zero() const;
    FieldElement one() const;
    /// Class of X for e >= 2, 1 for e == 1.
    FieldElement generator() const;
    FieldElement from_int(uint64_t n) const;
    FieldElement from_coords(std::span<const uint32_t> c) const;
    /// Enumeration in lexicographic coordinate order (c_0 most significant).
    FieldElement element_at(uint64_t index) const;
    uint64_t index_of(const FieldElement& x) const;
    FieldElement random_element(std::mt19937_64& rng) const;

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement div(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement inv(const FieldElement& a) const;
    FieldElement pow(const FieldElement& a, int64_t k) const;
    FieldElement frobenius(const FieldElement& a, int k) const;
    FieldElement pth_root(const FieldElement& a) const;

    bool same_as(const Field& o) const;

    std::string to_string(const FieldElement& x) const;
    FieldElement parse(std::string_view text) const;

private:
    uint32_t p_ = 0;
    int e_ = 0;
    std::vector<uint32_t> modulus_;  // size e_+1, monic

    void validate_pe(uint64_t p, int e) const;
    void check(const FieldElement& a) const;
    void check_pair(const FieldElement& a, const FieldElement& b) const;
    FieldElement make(std::array<uint32_t, FieldElement::kMaxDegree> c) const;
};

}  // namespace asjet
