#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flyprac/codec.hpp"

namespace flyprac {

/// Receiver buffers: OCRC-verified packets and refuted ones.
struct PacketBuffers {
    std::vector<CodedPacket> valid;    // B_valid
    std::vector<CodedPacket> invalid;  // B_invalid
};

/// Sorted, unique symbol column indices flagged inconsistent (V_Broken).
struct BrokenVector {
    std::vector<std::uint32_t> columns;

    bool contains(std::uint32_t col) const;
    bool empty() const { return columns.empty(); }
};

/// Limits on the correction search.
struct RecoveryConfig {
    unsigned max_flip_weight = 3;              // candidate patterns per segment
    std::uint64_t max_trials_per_segment = 1u << 20;  // ICRC evaluations cap

    void validate() const {
        if (max_flip_weight == 0 || max_trials_per_segment == 0)
            throw ConfigError("recovery limits must be positive");
    }
};

/// Locate inconsistent columns in one dependent group. Elimination over the
/// [coefficients | symbols] reception matrix with pivots restricted to the
/// coefficient block leaves one row with an all-zero coefficient part; the
/// nonzero symbol positions of that row are the broken columns.
/// Throws NoDependentRowError if the rows carry no dependency.
BrokenVector estimate(std::span<const CodedPacket> group, const GenerationConfig& cfg);

/// A linear dependency among received packets: sum of scalars[k] times the
/// coefficient row of packet_ids[k] is zero, with every scalar nonzero.
struct Dependency {
    std::vector<std::uint32_t> packet_ids;
    std::vector<std::uint8_t> scalars;
};

/// Algorithm result for dependent-group discovery over mixed buffers.
struct DiscoveredGroup {
    std::vector<std::uint32_t> rows;  // indices into valid ++ invalid ordering
    BrokenVector broken;              // estimated error locations (L)
};

/// Provenance-tracked elimination over the reception matrix built from
/// valid then invalid packets. Returns the first dependent set found
/// together with its broken-column estimate, or nothing when the rows are
/// independent. The returned set is dependent but not necessarily minimal.
std::optional<DiscoveredGroup> find_dependent_group(const PacketBuffers& buffers,
                                                    const GenerationConfig& cfg);

/// Incremental form of the same discovery: coefficient rows are eliminated
/// as they arrive and each insertion reports at most one closing dependency,
/// carrying the exact combination scalars.
class DependencyTracker {
public:
    explicit DependencyTracker(const GenerationConfig& cfg);

    std::optional<Dependency> add(std::uint32_t packet_id,
                                  std::span<const std::uint8_t> coefficients);
    std::size_t rank() const { return rows_.size(); }

private:
    struct Row {
        std::vector<std::uint8_t> coeff;
        std::vector<std::pair<std::uint32_t, std::uint8_t>> combo;  // id -> scalar
        std::size_t pivot;
    };

    gf::Field field_;
    std::size_t width_;
    std::vector<Row> rows_;  // ascending pivot order
};

/// Outcome of one segment search.
struct SegmentFix {
    enum class Status { recovered, exhausted, no_suspects };
    Status status = Status::exhausted;
    std::vector<std::uint8_t> symbols;  // corrected segment when recovered
    std::uint64_t trials = 0;           // ICRC evaluations spent
};

/// Bit-flip search over the suspect columns of one segment. Candidates are
/// enumerated in strictly nondecreasing Hamming weight, lexicographic by bit
/// position within each weight, and the first candidate the checksum
/// verifies wins. `suspect_columns` are local to the segment.
SegmentFix search_segment(std::span<const std::uint8_t> segment_symbols,
                          std::uint8_t received_crc,
                          std::span<const std::uint32_t> suspect_columns, unsigned q,
                          const crc::CrcSpec& spec, const RecoveryConfig& rcfg);

/// Spec-facing wrapper: correct segment `segment_index` of a received packet
/// using the group-level broken vector (global column indices).
SegmentFix correct_segment(const CodedPacket& packet, std::size_t segment_index,
                           const BrokenVector& broken, const GenerationConfig& cfg,
                           const RecoveryConfig& rcfg);

/// Result of recovering one dependent group.
struct GroupOutcome {
    std::vector<CodedPacket> valid_packets;  // valid on arrival or recovered
    std::vector<char> was_recovered;         // parallel to valid_packets
    std::size_t corrupted_received = 0;      // OCRC-refuted arrivals
    std::size_t recovered = 0;               // of those, recovered
};

/// Full group recovery: estimation, per-segment correction of invalid
/// packets, OCRC gate, and reconstruction of the last member once R-1 are
/// valid. Unrecovered packets are dropped from the result.
GroupOutcome recover_group(std::span<const CodedPacket> group, const GenerationConfig& cfg,
                           const RecoveryConfig& rcfg);

/// Recover the invalid members of one dependency in place. `valid[id]` flags
/// packets verified or already recovered; recovered ids are returned and
/// their flags updated. Content of packets that stay invalid is untouched.
std::vector<std::uint32_t> recover_dependent_set(std::span<CodedPacket> packets,
                                                 const Dependency& dep,
                                                 std::vector<char>& valid,
                                                 const GenerationConfig& cfg,
                                                 const RecoveryConfig& rcfg);

}  // namespace flyprac
