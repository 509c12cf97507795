#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flyprac/crc.hpp"
#include "flyprac/errors.hpp"
#include "flyprac/galois.hpp"
#include "flyprac/rng.hpp"

namespace flyprac {

/// Parameters of one generation.
struct GenerationConfig {
    std::size_t g = 0;          // packets per generation
    std::size_t l = 0;          // symbols per packet
    std::size_t s = 1;          // segments per packet; l % s == 0
    std::size_t group_size = 0; // R, packets per dependent group; 2 < R <= g+1
    gf::FieldSpec field = gf::FieldSpec::gf256();
    std::optional<std::size_t> sparsity;  // w nonzeros per row (SNC); empty = dense
    bool append_dependent_row = true;     // SNC can drop the appended row
    crc::CrcSpec crc;

    void validate() const;
    std::size_t segment_symbols() const { return l / s; }
    std::size_t segment_bits() const { return segment_symbols() * field.q + 8; }  // N_p
    /// Bits exposed to channel noise: coded symbols, inner CRCs, outer CRC.
    std::size_t protected_bits() const { return l * field.q + s * 8 + 8; }
    std::size_t frame_bits() const { return 16 + g * field.q + protected_bits(); }
};

struct OriginalPacket {
    std::vector<std::uint8_t> symbols;  // l field elements
};

struct CodedPacket {
    static constexpr std::uint16_t kUngrouped = 0xFFFF;

    std::uint16_t group_id = kUngrouped;
    std::vector<std::uint8_t> coefficients;  // g field elements
    std::vector<std::uint8_t> symbols;       // l field elements
    std::vector<std::uint8_t> inner_crcs;    // s checksums
    std::uint8_t outer_crc = 0;

    std::span<const std::uint8_t> segment(std::size_t k, const GenerationConfig& cfg) const {
        return {symbols.data() + k * cfg.segment_symbols(), cfg.segment_symbols()};
    }
    std::span<std::uint8_t> segment(std::size_t k, const GenerationConfig& cfg) {
        return {symbols.data() + k * cfg.segment_symbols(), cfg.segment_symbols()};
    }
};

struct DependentGroup {
    std::vector<CodedPacket> packets;  // R packets sharing group_id
};

/// Recompute all inner checksums and the outer checksum from the symbols.
void refresh_crcs(CodedPacket& p, const GenerationConfig& cfg);
/// True when every inner CRC and the outer CRC match the symbols.
bool outer_crc_ok(const CodedPacket& p, const GenerationConfig& cfg);
bool inner_crc_ok(const CodedPacket& p, std::size_t segment, const GenerationConfig& cfg);

/// Streams dependent groups: R-1 random rows plus their field sum (Fig. 1
/// framing). Dense rows are uniform; sparse rows carry exactly w nonzeros at
/// random positions. Rows dependent on the group's earlier rows are redrawn.
class GroupEncoder {
public:
    GroupEncoder(std::vector<OriginalPacket> originals, GenerationConfig cfg,
                 std::uint64_t seed);

    DependentGroup next_group();
    const GenerationConfig& config() const { return cfg_; }

private:
    std::vector<std::uint8_t> draw_row();

    GenerationConfig cfg_;
    gf::Field field_;
    std::vector<OriginalPacket> originals_;
    Rng rng_;
    std::uint16_t next_group_id_ = 0;
};

/// Streams plain coded packets with no dependent rows (the discard-partials
/// baseline source).
class StreamEncoder {
public:
    StreamEncoder(std::vector<OriginalPacket> originals, GenerationConfig cfg,
                  std::uint64_t seed);
    CodedPacket next_packet();

private:
    GenerationConfig cfg_;
    gf::Field field_;
    std::vector<OriginalPacket> originals_;
    Rng rng_;
};

/// Incremental Gaussian-elimination decoder. Valid packets are added as
/// [coefficients | symbols] rows; pivots are chosen in the coefficient block
/// only. Partial decoding reads off rows whose coefficient part became a
/// singleton.
class Decoder {
public:
    explicit Decoder(GenerationConfig cfg);

    /// Returns true when the packet increased the rank.
    bool add(const CodedPacket& p);
    std::size_t rank() const { return rows_.size(); }
    bool complete() const { return rank() == cfg_.g; }

    /// Original indices that became decodable since the previous call.
    std::vector<std::size_t> take_newly_decodable();
    /// Currently decodable subset as (index, packet) pairs.
    std::vector<std::pair<std::size_t, OriginalPacket>> decodable() const;

    /// All g originals; throws RankDeficientError when rank < g.
    std::vector<OriginalPacket> originals() const;

private:
    struct Row {
        std::vector<std::uint8_t> coeff;
        std::vector<std::uint8_t> symbols;
        std::size_t pivot;
        bool singleton = false;
    };
    void refresh_singleton(Row& row);

    GenerationConfig cfg_;
    gf::Field field_;
    std::vector<Row> rows_;             // one per pivot, kept reduced
    std::vector<int> pivot_of_col_;     // column -> row index or -1
    std::vector<std::size_t> fresh_;    // newly decodable indices
};

/// One-shot decode; requires g independent valid packets among the inputs.
std::vector<OriginalPacket> decode(std::span<const CodedPacket> packets,
                                   const GenerationConfig& cfg);

/// One-shot partial decode: every original recoverable from the inputs.
std::vector<std::pair<std::size_t, OriginalPacket>> partial_decode(
    std::span<const CodedPacket> packets, const GenerationConfig& cfg);

/// Random linear combination of held packets with fresh checksums.
/// Throws EmptyBufferError on empty input. `force_nonzero` indexes entries of
/// `packets` whose combination scalar must not be zero.
CodedPacket recode(std::span<const CodedPacket> packets, const GenerationConfig& cfg,
                   Rng& rng, std::uint16_t group_id = CodedPacket::kUngrouped,
                   std::span<const std::size_t> force_nonzero = {});

/// Deterministic combination with caller-chosen scalars.
CodedPacket recode_with(std::span<const CodedPacket> packets,
                        std::span<const std::uint8_t> scalars,
                        const GenerationConfig& cfg,
                        std::uint16_t group_id = CodedPacket::kUngrouped);

/// Bit-exact frame layout, most significant bit first:
/// [group_id:16][coefficients: g*q][per segment: (l/s)*q payload + 8 ICRC][8 OCRC].
/// The protected region starts after the coefficients.
std::vector<std::uint8_t> serialize(const CodedPacket& p, const GenerationConfig& cfg);
CodedPacket deserialize(std::span<const std::uint8_t> frame, const GenerationConfig& cfg);
/// First protected bit offset within a frame.
std::size_t protected_bit_offset(const GenerationConfig& cfg);

}  // namespace flyprac
