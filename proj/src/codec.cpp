#include "flyprac/codec.hpp"

#include <algorithm>
#include <cstring>

namespace flyprac {

void GenerationConfig::validate() const {
    field.validate();
    if (g == 0) throw ConfigError("generation size g must be positive");
    if (l == 0 || s == 0) throw ConfigError("l and s must be positive");
    if (l % s != 0) throw ConfigError("l must be divisible by s");
    if (group_size <= 2 || group_size > g + 1)
        throw ConfigError("group size R must satisfy 2 < R <= g+1");
    if (sparsity && (*sparsity < 1 || *sparsity > g))
        throw ConfigError("sparsity w must satisfy 1 <= w <= g");
}

void refresh_crcs(CodedPacket& p, const GenerationConfig& cfg) {
    crc::Crc8 crc(cfg.crc);
    p.inner_crcs.resize(cfg.s);
    for (std::size_t k = 0; k < cfg.s; ++k)
        p.inner_crcs[k] = crc.of_symbols(p.segment(k, cfg), cfg.field.q);
    p.outer_crc = crc.of_symbols(p.symbols, cfg.field.q);
}

bool outer_crc_ok(const CodedPacket& p, const GenerationConfig& cfg) {
    crc::Crc8 crc(cfg.crc);
    return crc.of_symbols(p.symbols, cfg.field.q) == p.outer_crc;
}

bool inner_crc_ok(const CodedPacket& p, std::size_t segment, const GenerationConfig& cfg) {
    crc::Crc8 crc(cfg.crc);
    return crc.of_symbols(p.segment(segment, cfg), cfg.field.q) == p.inner_crcs[segment];
}

namespace {

std::uint8_t draw_element(Rng& rng, unsigned q) {
    return static_cast<std::uint8_t>(rng.next() & ((1u << q) - 1));
}

std::uint8_t draw_nonzero(Rng& rng, unsigned q) {
    std::uint8_t v;
    do {
        v = draw_element(rng, q);
    } while (v == 0);
    return v;
}

/// Incremental independence check for coefficient draws within one group.
class RankTracker {
public:
    explicit RankTracker(const gf::Field& field) : field_(field) {}

    /// True when `row` is independent of the accepted rows; accepts it then.
    /// Basis rows are kept in ascending pivot order so one forward pass
    /// eliminates completely.
    bool try_add(std::vector<std::uint8_t> row) {
        for (const auto& basis : rows_) {
            std::uint8_t factor = row[basis.second];
            if (factor != 0) field_.add_scaled(row, basis.first, factor);
        }
        std::size_t pivot = row.size();
        for (std::size_t c = 0; c < row.size(); ++c)
            if (row[c] != 0) {
                pivot = c;
                break;
            }
        if (pivot == row.size()) return false;
        field_.scale(row, field_.inv(row[pivot]));
        auto pos = std::find_if(rows_.begin(), rows_.end(),
                                [&](const auto& b) { return b.second > pivot; });
        rows_.emplace(pos, std::move(row), pivot);
        return true;
    }

private:
    const gf::Field& field_;
    std::vector<std::pair<std::vector<std::uint8_t>, std::size_t>> rows_;
};

void multiply_into(const gf::Field& field, std::span<const std::uint8_t> coeff,
                   const std::vector<OriginalPacket>& originals,
                   std::span<std::uint8_t> out) {
    std::fill(out.begin(), out.end(), 0);
    for (std::size_t j = 0; j < coeff.size(); ++j) {
        if (coeff[j] == 0) continue;
        field.add_scaled(out, originals[j].symbols, coeff[j]);
    }
}

CodedPacket make_packet(const gf::Field& field, const GenerationConfig& cfg,
                        std::vector<std::uint8_t> coeff,
                        const std::vector<OriginalPacket>& originals,
                        std::uint16_t group_id) {
    CodedPacket p;
    p.group_id = group_id;
    p.coefficients = std::move(coeff);
    p.symbols.assign(cfg.l, 0);
    multiply_into(field, p.coefficients, originals, p.symbols);
    refresh_crcs(p, cfg);
    return p;
}

}  // namespace

GroupEncoder::GroupEncoder(std::vector<OriginalPacket> originals, GenerationConfig cfg,
                           std::uint64_t seed)
    : cfg_(std::move(cfg)), field_(cfg_.field), originals_(std::move(originals)),
      rng_(seed) {
    cfg_.validate();
    for (const auto& o : originals_)
        if (o.symbols.size() != cfg_.l) throw ConfigError("original packet has wrong length");
    if (originals_.size() != cfg_.g)
        throw ConfigError("expected exactly g original packets");
}

std::vector<std::uint8_t> GroupEncoder::draw_row() {
    std::vector<std::uint8_t> row(cfg_.g, 0);
    if (!cfg_.sparsity) {
        for (auto& v : row) v = draw_element(rng_, cfg_.field.q);
        return row;
    }
    // w-sparse: w distinct positions, each with a nonzero element.
    std::size_t w = *cfg_.sparsity;
    for (std::size_t placed = 0; placed < w;) {
        std::size_t pos = rng_.below(cfg_.g);
        if (row[pos] != 0) continue;
        row[pos] = draw_nonzero(rng_, cfg_.field.q);
        ++placed;
    }
    return row;
}

DependentGroup GroupEncoder::next_group() {
    const std::size_t innovative = cfg_.group_size - 1;
    std::vector<std::vector<std::uint8_t>> rows;
    rows.reserve(innovative);
    RankTracker tracker(field_);
    while (rows.size() < innovative) {
        auto row = draw_row();
        if (!tracker.try_add(row)) continue;  // dependent draw, regenerate
        rows.push_back(std::move(row));
    }

    std::uint16_t id = next_group_id_;
    next_group_id_ = static_cast<std::uint16_t>((next_group_id_ + 1) % CodedPacket::kUngrouped);

    DependentGroup group;
    group.packets.reserve(cfg_.group_size);
    std::vector<std::uint8_t> sum(cfg_.g, 0);
    for (auto& row : rows) {
        for (std::size_t j = 0; j < cfg_.g; ++j) sum[j] ^= row[j];
        group.packets.push_back(make_packet(field_, cfg_, std::move(row), originals_, id));
    }
    if (cfg_.append_dependent_row)
        group.packets.push_back(make_packet(field_, cfg_, std::move(sum), originals_, id));
    return group;
}

StreamEncoder::StreamEncoder(std::vector<OriginalPacket> originals, GenerationConfig cfg,
                             std::uint64_t seed)
    : cfg_(std::move(cfg)), field_(cfg_.field), originals_(std::move(originals)),
      rng_(seed) {
    cfg_.validate();
    if (originals_.size() != cfg_.g)
        throw ConfigError("expected exactly g original packets");
}

CodedPacket StreamEncoder::next_packet() {
    std::vector<std::uint8_t> row(cfg_.g, 0);
    do {
        if (!cfg_.sparsity) {
            for (auto& v : row) v = draw_element(rng_, cfg_.field.q);
        } else {
            std::fill(row.begin(), row.end(), 0);
            for (std::size_t placed = 0; placed < *cfg_.sparsity;) {
                std::size_t pos = rng_.below(cfg_.g);
                if (row[pos] != 0) continue;
                row[pos] = draw_nonzero(rng_, cfg_.field.q);
                ++placed;
            }
        }
    } while (std::all_of(row.begin(), row.end(), [](std::uint8_t v) { return v == 0; }));
    return make_packet(field_, cfg_, std::move(row), originals_, CodedPacket::kUngrouped);
}

Decoder::Decoder(GenerationConfig cfg)
    : cfg_(std::move(cfg)), field_(cfg_.field), pivot_of_col_(cfg_.g, -1) {
    cfg_.validate();
}

void Decoder::refresh_singleton(Row& row) {
    bool single = true;
    for (std::size_t c = 0; c < cfg_.g; ++c) {
        if (c != row.pivot && row.coeff[c] != 0) {
            single = false;
            break;
        }
    }
    if (single && !row.singleton) {
        row.singleton = true;
        fresh_.push_back(row.pivot);
    }
}

bool Decoder::add(const CodedPacket& p) {
    std::vector<std::uint8_t> coeff(p.coefficients);
    std::vector<std::uint8_t> symbols(p.symbols);

    // Reduce against existing pivot rows.
    for (std::size_t c = 0; c < cfg_.g; ++c) {
        if (coeff[c] == 0 || pivot_of_col_[c] < 0) continue;
        const Row& pr = rows_[pivot_of_col_[c]];
        std::uint8_t factor = coeff[c];
        field_.add_scaled(coeff, pr.coeff, factor);
        field_.add_scaled(symbols, pr.symbols, factor);
    }
    std::size_t pivot = cfg_.g;
    for (std::size_t c = 0; c < cfg_.g; ++c) {
        if (coeff[c] != 0) {
            pivot = c;
            break;
        }
    }
    if (pivot == cfg_.g) return false;  // dependent

    std::uint8_t lead_inv = field_.inv(coeff[pivot]);
    field_.scale(coeff, lead_inv);
    field_.scale(symbols, lead_inv);

    Row row{std::move(coeff), std::move(symbols), pivot};
    // Back-substitute into earlier rows so the basis stays fully reduced.
    for (auto& r : rows_) {
        std::uint8_t factor = r.coeff[pivot];
        if (factor == 0) continue;
        field_.add_scaled(r.coeff, row.coeff, factor);
        field_.add_scaled(r.symbols, row.symbols, factor);
        refresh_singleton(r);
    }
    rows_.push_back(std::move(row));
    pivot_of_col_[pivot] = static_cast<int>(rows_.size() - 1);
    refresh_singleton(rows_.back());
    return true;
}

std::vector<std::size_t> Decoder::take_newly_decodable() {
    auto out = std::move(fresh_);
    fresh_.clear();
    return out;
}

std::vector<std::pair<std::size_t, OriginalPacket>> Decoder::decodable() const {
    std::vector<std::pair<std::size_t, OriginalPacket>> out;
    for (const auto& r : rows_)
        if (r.singleton) out.emplace_back(r.pivot, OriginalPacket{r.symbols});
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

std::vector<OriginalPacket> Decoder::originals() const {
    if (!complete())
        throw RankDeficientError("decoder holds fewer than g independent packets");
    std::vector<OriginalPacket> out(cfg_.g);
    for (const auto& r : rows_) out[r.pivot] = OriginalPacket{r.symbols};
    return out;
}

std::vector<OriginalPacket> decode(std::span<const CodedPacket> packets,
                                   const GenerationConfig& cfg) {
    Decoder d(cfg);
    for (const auto& p : packets) d.add(p);
    return d.originals();
}

std::vector<std::pair<std::size_t, OriginalPacket>> partial_decode(
    std::span<const CodedPacket> packets, const GenerationConfig& cfg) {
    Decoder d(cfg);
    for (const auto& p : packets) d.add(p);
    return d.decodable();
}

CodedPacket recode_with(std::span<const CodedPacket> packets,
                        std::span<const std::uint8_t> scalars,
                        const GenerationConfig& cfg, std::uint16_t group_id) {
    if (packets.empty()) throw EmptyBufferError();
    gf::Field field(cfg.field);
    CodedPacket out;
    out.group_id = group_id;
    out.coefficients.assign(cfg.g, 0);
    out.symbols.assign(cfg.l, 0);
    for (std::size_t k = 0; k < packets.size(); ++k) {
        field.add_scaled(out.coefficients, packets[k].coefficients, scalars[k]);
        field.add_scaled(out.symbols, packets[k].symbols, scalars[k]);
    }
    refresh_crcs(out, cfg);
    return out;
}

CodedPacket recode(std::span<const CodedPacket> packets, const GenerationConfig& cfg,
                   Rng& rng, std::uint16_t group_id,
                   std::span<const std::size_t> force_nonzero) {
    if (packets.empty()) throw EmptyBufferError();
    std::vector<std::uint8_t> scalars(packets.size(), 0);
    bool all_zero = true;
    do {
        all_zero = true;
        for (auto& v : scalars) {
            v = draw_element(rng, cfg.field.q);
            if (v) all_zero = false;
        }
        for (std::size_t idx : force_nonzero)
            if (scalars[idx] == 0) scalars[idx] = draw_nonzero(rng, cfg.field.q);
        if (!force_nonzero.empty()) all_zero = false;
    } while (all_zero);
    return recode_with(packets, scalars, cfg, group_id);
}

namespace {

class BitWriter {
public:
    explicit BitWriter(std::size_t bits) : bytes_((bits + 7) / 8, 0) {}
    void put(std::uint32_t value, unsigned bits) {
        for (unsigned i = bits; i-- > 0;) {
            if ((value >> i) & 1u) bytes_[pos_ >> 3] |= std::uint8_t(0x80u >> (pos_ & 7));
            ++pos_;
        }
    }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
    std::uint32_t get(unsigned bits) {
        std::uint32_t v = 0;
        for (unsigned i = 0; i < bits; ++i) {
            v = (v << 1) | ((bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u);
            ++pos_;
        }
        return v;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::size_t protected_bit_offset(const GenerationConfig& cfg) {
    return 16 + cfg.g * cfg.field.q;
}

std::vector<std::uint8_t> serialize(const CodedPacket& p, const GenerationConfig& cfg) {
    const unsigned q = cfg.field.q;
    BitWriter w(cfg.frame_bits());
    w.put(p.group_id, 16);
    for (std::uint8_t c : p.coefficients) w.put(c, q);
    const std::size_t seg_syms = cfg.segment_symbols();
    for (std::size_t k = 0; k < cfg.s; ++k) {
        auto seg = p.segment(k, cfg);
        for (std::size_t i = 0; i < seg_syms; ++i) w.put(seg[i], q);
        w.put(p.inner_crcs[k], 8);
    }
    w.put(p.outer_crc, 8);
    return w.take();
}

CodedPacket deserialize(std::span<const std::uint8_t> frame, const GenerationConfig& cfg) {
    if (frame.size() != (cfg.frame_bits() + 7) / 8)
        throw FormatError("frame size does not match configuration");
    const unsigned q = cfg.field.q;
    BitReader r(frame);
    CodedPacket p;
    p.group_id = static_cast<std::uint16_t>(r.get(16));
    p.coefficients.resize(cfg.g);
    for (auto& c : p.coefficients) c = static_cast<std::uint8_t>(r.get(q));
    p.symbols.resize(cfg.l);
    p.inner_crcs.resize(cfg.s);
    const std::size_t seg_syms = cfg.segment_symbols();
    for (std::size_t k = 0; k < cfg.s; ++k) {
        for (std::size_t i = 0; i < seg_syms; ++i)
            p.symbols[k * seg_syms + i] = static_cast<std::uint8_t>(r.get(q));
        p.inner_crcs[k] = static_cast<std::uint8_t>(r.get(8));
    }
    p.outer_crc = static_cast<std::uint8_t>(r.get(8));
    return p;
}

}  // namespace flyprac
