#include "flyprac/galois.hpp"

#include <algorithm>
#include <array>

namespace flyprac::gf {

namespace {

/// Degree of a polynomial mask, -1 for the zero polynomial.
int poly_degree(unsigned p) {
    int d = -1;
    while (p) {
        ++d;
        p >>= 1;
    }
    return d;
}

unsigned poly_mod(unsigned a, unsigned b) {
    int db = poly_degree(b);
    int da = poly_degree(a);
    while (da >= db) {
        a ^= b << (da - db);
        da = poly_degree(a);
    }
    return a;
}

}  // namespace

bool is_irreducible(unsigned poly, unsigned q) {
    if (poly_degree(poly) != static_cast<int>(q)) return false;
    for (unsigned d = 1; d < q; ++d) {
        for (unsigned low = 0; low < (1u << d); ++low) {
            unsigned divisor = (1u << d) | low;
            if (poly_mod(poly, divisor) == 0) return false;
        }
    }
    return true;
}

void FieldSpec::validate() const {
    if (q != 1 && q != 8) throw ConfigError("field exponent q must be 1 or 8");
    if (!is_irreducible(reduction_polynomial, q))
        throw ConfigError("reduction polynomial is not irreducible of degree q");
}

Element Field::mul_shift_reduce(Element a, Element b, unsigned poly, unsigned q) {
    unsigned acc = 0;
    unsigned aa = a;
    for (unsigned bit = 0; bit < q; ++bit) {
        if (b & (1u << bit)) acc ^= aa << bit;
    }
    // Reduce the product (degree <= 2q-2) by the field polynomial.
    for (int d = poly_degree(acc); d >= static_cast<int>(q); d = poly_degree(acc)) {
        acc ^= poly << (d - q);
    }
    return static_cast<Element>(acc);
}

Field::Field(FieldSpec spec) : spec_(spec) {
    spec_.validate();
    if (spec_.q == 8) {
        auto table = std::make_unique<Element[]>(256 * 256);
        for (unsigned a = 0; a < 256; ++a)
            for (unsigned b = 0; b < 256; ++b)
                table[(a << 8) | b] = mul_shift_reduce(
                    Element(a), Element(b), spec_.reduction_polynomial, 8);
        mul_table_ = std::shared_ptr<const Element[]>(std::move(table));
        for (unsigned a = 1; a < 256; ++a) {
            for (unsigned b = 1; b < 256; ++b) {
                if (mul_table_[(a << 8) | b] == 1) {
                    inv_table_[a] = Element(b);
                    break;
                }
            }
        }
    } else {
        inv_table_[1] = 1;
    }
}

void Field::add_scaled(std::span<Element> dst, std::span<const Element> src,
                       Element c) const {
    if (c == 0) return;
    if (c == 1 || !mul_table_) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
        return;
    }
    const Element* row = mul_table_.get() + (std::size_t(c) << 8);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= row[src[i]];
}

void Field::scale(std::span<Element> row_span, Element c) const {
    if (c == 1) return;
    if (!mul_table_) {
        if (c == 0) std::fill(row_span.begin(), row_span.end(), Element(0));
        return;
    }
    const Element* row = mul_table_.get() + (std::size_t(c) << 8);
    for (auto& v : row_span) v = row[v];
}

RrefResult rref(const Field& field, Matrix m, std::size_t pivot_cols,
                bool track_provenance) {
    RrefResult out;
    const std::size_t rows = m.rows;
    pivot_cols = std::min(pivot_cols, m.cols);

    std::vector<std::vector<std::uint32_t>> prov;
    if (track_provenance) {
        prov.resize(rows);
        for (std::size_t i = 0; i < rows; ++i) prov[i] = {std::uint32_t(i)};
    }

    auto merge_prov = [&](std::size_t into, std::size_t from) {
        if (!track_provenance) return;
        auto& dst = prov[into];
        const auto& src = prov[from];
        std::vector<std::uint32_t> merged;
        merged.reserve(dst.size() + src.size());
        std::set_union(dst.begin(), dst.end(), src.begin(), src.end(),
                       std::back_inserter(merged));
        dst = std::move(merged);
    };

    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < pivot_cols && pivot_row < rows; ++col) {
        std::size_t sel = pivot_row;
        while (sel < rows && m.at(sel, col) == 0) ++sel;
        if (sel == rows) continue;
        if (sel != pivot_row) {
            for (std::size_t c = 0; c < m.cols; ++c)
                std::swap(m.at(sel, c), m.at(pivot_row, c));
            if (track_provenance) std::swap(prov[sel], prov[pivot_row]);
        }
        field.scale(m.row(pivot_row), field.inv(m.at(pivot_row, col)));
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pivot_row) continue;
            Element factor = m.at(r, col);
            if (factor == 0) continue;
            field.add_scaled(m.row(r), m.row(pivot_row), factor);
            merge_prov(r, pivot_row);
        }
        ++pivot_row;
    }

    out.rank = pivot_row;
    out.matrix = std::move(m);
    out.provenance = std::move(prov);
    return out;
}

}  // namespace flyprac::gf
