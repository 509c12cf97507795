#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "flyprac/errors.hpp"

namespace flyprac::gf {

/// A field element value; always < 2^q for the field in use.
using Element = std::uint8_t;

/// Description of GF(2^q). Only q = 1 and q = 8 are supported.
struct FieldSpec {
    unsigned q;                    // bits per symbol
    unsigned reduction_polynomial; // degree-q polynomial mask, bit q set

    static FieldSpec gf2() { return {1u, 0x3u}; }          // x + 1
    static FieldSpec gf256() { return {8u, 0x11Du}; }      // x^8+x^4+x^3+x^2+1

    void validate() const;  // throws ConfigError, checks irreducibility
    bool operator==(const FieldSpec&) const = default;
};

/// Returns true if `poly` (with its degree-q bit set) has no nontrivial
/// polynomial divisor over GF(2). Exhaustive trial division, fine for q <= 8.
bool is_irreducible(unsigned poly, unsigned q);

/// GF(2^q) arithmetic. For q = 8 multiplication goes through a 256x256 table
/// built once from shift-and-reduce; addition is XOR in every binary field.
class Field {
public:
    explicit Field(FieldSpec spec);

    const FieldSpec& spec() const { return spec_; }
    unsigned q() const { return spec_.q; }
    unsigned size() const { return 1u << spec_.q; }

    static Element add(Element a, Element b) { return a ^ b; }
    static Element sub(Element a, Element b) { return a ^ b; }

    Element mul(Element a, Element b) const {
        return mul_table_ ? mul_table_[(std::size_t(a) << 8) | b] : Element(a & b);
    }

    Element inv(Element a) const {
        if (a == 0) throw ZeroInverseError();
        return inv_table_[a];
    }

    Element div(Element a, Element b) const { return mul(a, inv(b)); }

    /// dst[i] += c * src[i]
    void add_scaled(std::span<Element> dst, std::span<const Element> src, Element c) const;
    /// row[i] *= c
    void scale(std::span<Element> row, Element c) const;

    /// Reference multiply: polynomial product reduced by `poly`, no tables.
    static Element mul_shift_reduce(Element a, Element b, unsigned poly, unsigned q);

private:
    FieldSpec spec_;
    std::shared_ptr<const Element[]> mul_table_;  // null for q = 1
    std::array<Element, 256> inv_table_{};
};

/// Dense row-major matrix over one field.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Element> entries;  // rows * cols

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0) {}

    Element& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    Element at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
    std::span<Element> row(std::size_t r) { return {entries.data() + r * cols, cols}; }
    std::span<const Element> row(std::size_t r) const {
        return {entries.data() + r * cols, cols};
    }
};

struct RrefResult {
    Matrix matrix;
    std::size_t rank = 0;
    /// provenance[i] = sorted set of original row indices combined into row i.
    /// Empty when tracking was disabled.
    std::vector<std::vector<std::uint32_t>> provenance;
};

/// Reduced row-echelon form with pivoting restricted to columns
/// [0, pivot_cols). Rows are fully reduced above and below each pivot.
/// With track_provenance, every output row carries the set of input rows it
/// combines; the set survives row swaps because it is attached to the row
/// content, not the slot.
RrefResult rref(const Field& field, Matrix m, std::size_t pivot_cols,
                bool track_provenance = false);

inline RrefResult rref(const Field& field, Matrix m) {
    std::size_t cols = m.cols;
    return rref(field, std::move(m), cols, false);
}

}  // namespace flyprac::gf
