#include "flyprac/recovery.hpp"

#include <algorithm>

namespace flyprac {

bool BrokenVector::contains(std::uint32_t col) const {
    return std::binary_search(columns.begin(), columns.end(), col);
}

namespace {

/// Scalars of the unique dependency among the group's coefficient rows.
/// Well-formed groups close under the all-ones combination; anything else
/// falls back to elimination.
Dependency group_dependency(std::span<const CodedPacket> group,
                            const GenerationConfig& cfg) {
    std::vector<std::uint8_t> coeff_sum(cfg.g, 0);
    for (const auto& p : group)
        for (std::size_t j = 0; j < cfg.g; ++j) coeff_sum[j] ^= p.coefficients[j];
    Dependency dep;
    if (std::all_of(coeff_sum.begin(), coeff_sum.end(),
                    [](std::uint8_t v) { return v == 0; })) {
        for (std::uint32_t i = 0; i < group.size(); ++i) {
            dep.packet_ids.push_back(i);
            dep.scalars.push_back(1);
        }
        return dep;
    }
    DependencyTracker tracker(cfg);
    for (std::uint32_t i = 0; i < group.size(); ++i) {
        if (auto found = tracker.add(i, group[i].coefficients)) return *found;
    }
    throw NoDependentRowError("group rows carry no linear dependency");
}

/// Symbol part of the dependency's zero row: the scaled mix of the members'
/// error patterns. Nonzero entries mark inconsistent columns.
std::vector<std::uint8_t> zero_row_symbols(std::span<const CodedPacket* const> members,
                                           std::span<const std::uint8_t> scalars,
                                           const gf::Field& field, std::size_t l) {
    std::vector<std::uint8_t> sum(l, 0);
    for (std::size_t k = 0; k < members.size(); ++k)
        field.add_scaled(sum, members[k]->symbols, scalars[k]);
    return sum;
}

BrokenVector broken_from_row(std::span<const std::uint8_t> row) {
    BrokenVector broken;
    for (std::uint32_t c = 0; c < row.size(); ++c)
        if (row[c] != 0) broken.columns.push_back(c);
    return broken;
}

/// Reconstruct the single non-valid member of a dependency: the zero row
/// equals scalar_j times its error pattern, so the fix is exact.
void reconstruct_member(CodedPacket& target, std::uint8_t target_scalar,
                        std::span<const std::uint8_t> zero_row, const gf::Field& field,
                        const GenerationConfig& cfg) {
    std::uint8_t inv = field.inv(target_scalar);
    for (std::size_t c = 0; c < cfg.l; ++c)
        target.symbols[c] ^= field.mul(inv, zero_row[c]);
    refresh_crcs(target, cfg);
}

/// Correct one packet segment by segment against the shared broken vector.
/// Returns the fixed packet when every refuted segment verifies and the
/// outer checksum passes.
std::optional<CodedPacket> try_fix_packet(const CodedPacket& received,
                                          const BrokenVector& broken,
                                          const GenerationConfig& cfg,
                                          const RecoveryConfig& rcfg) {
    CodedPacket work = received;
    for (std::size_t k = 0; k < cfg.s; ++k) {
        if (inner_crc_ok(work, k, cfg)) continue;
        SegmentFix fix = correct_segment(work, k, broken, cfg, rcfg);
        if (fix.status != SegmentFix::Status::recovered) return std::nullopt;
        auto seg = work.segment(k, cfg);
        std::copy(fix.symbols.begin(), fix.symbols.end(), seg.begin());
    }
    if (!outer_crc_ok(work, cfg)) return std::nullopt;
    return work;
}

}  // namespace

BrokenVector estimate(std::span<const CodedPacket> group, const GenerationConfig& cfg) {
    gf::Field field(cfg.field);
    Dependency dep = group_dependency(group, cfg);
    std::vector<const CodedPacket*> members;
    members.reserve(dep.packet_ids.size());
    for (std::uint32_t id : dep.packet_ids) members.push_back(&group[id]);
    auto zero = zero_row_symbols(members, dep.scalars, field, cfg.l);
    return broken_from_row(zero);
}

std::optional<DiscoveredGroup> find_dependent_group(const PacketBuffers& buffers,
                                                    const GenerationConfig& cfg) {
    const std::size_t m = buffers.valid.size() + buffers.invalid.size();
    if (m == 0) return std::nullopt;
    gf::Field field(cfg.field);
    gf::Matrix mat(m, cfg.g + cfg.l);
    auto fill = [&](std::size_t r, const CodedPacket& p) {
        auto row = mat.row(r);
        std::copy(p.coefficients.begin(), p.coefficients.end(), row.begin());
        std::copy(p.symbols.begin(), p.symbols.end(), row.begin() + cfg.g);
    };
    std::size_t r = 0;
    for (const auto& p : buffers.valid) fill(r++, p);
    for (const auto& p : buffers.invalid) fill(r++, p);

    auto res = gf::rref(field, std::move(mat), cfg.g, /*track_provenance=*/true);
    for (std::size_t i = 0; i < m; ++i) {
        auto row = res.matrix.row(i);
        bool zero_coeff = std::all_of(row.begin(), row.begin() + cfg.g,
                                      [](std::uint8_t v) { return v == 0; });
        if (!zero_coeff) continue;
        DiscoveredGroup out;
        out.rows = res.provenance[i];
        out.broken = broken_from_row(row.subspan(cfg.g));
        return out;
    }
    return std::nullopt;
}

DependencyTracker::DependencyTracker(const GenerationConfig& cfg)
    : field_(cfg.field), width_(cfg.g) {}

std::optional<Dependency> DependencyTracker::add(std::uint32_t packet_id,
                                                 std::span<const std::uint8_t> coefficients) {
    Row incoming;
    incoming.coeff.assign(coefficients.begin(), coefficients.end());
    incoming.combo = {{packet_id, std::uint8_t(1)}};

    auto merge_combo = [&](Row& dst, const Row& src, std::uint8_t factor) {
        for (const auto& [id, c] : src.combo) {
            std::uint8_t add = field_.mul(factor, c);
            auto it = std::find_if(dst.combo.begin(), dst.combo.end(),
                                   [&](const auto& e) { return e.first == id; });
            if (it == dst.combo.end()) {
                dst.combo.emplace_back(id, add);
            } else {
                it->second ^= add;
                if (it->second == 0) dst.combo.erase(it);
            }
        }
    };

    for (const auto& basis : rows_) {
        std::uint8_t factor = incoming.coeff[basis.pivot];
        if (factor == 0) continue;
        field_.add_scaled(incoming.coeff, basis.coeff, factor);
        merge_combo(incoming, basis, factor);
    }

    std::size_t pivot = width_;
    for (std::size_t c = 0; c < width_; ++c)
        if (incoming.coeff[c] != 0) {
            pivot = c;
            break;
        }
    if (pivot == width_) {
        Dependency dep;
        std::sort(incoming.combo.begin(), incoming.combo.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [id, c] : incoming.combo) {
            dep.packet_ids.push_back(id);
            dep.scalars.push_back(c);
        }
        return dep;
    }

    std::uint8_t lead_inv = field_.inv(incoming.coeff[pivot]);
    field_.scale(incoming.coeff, lead_inv);
    for (auto& [id, c] : incoming.combo) c = field_.mul(lead_inv, c);
    incoming.pivot = pivot;
    auto pos = std::find_if(rows_.begin(), rows_.end(),
                            [&](const Row& b) { return b.pivot > pivot; });
    rows_.insert(pos, std::move(incoming));
    return std::nullopt;
}

SegmentFix search_segment(std::span<const std::uint8_t> segment_symbols,
                          std::uint8_t received_crc,
                          std::span<const std::uint32_t> suspect_columns, unsigned q,
                          const crc::CrcSpec& spec, const RecoveryConfig& rcfg) {
    crc::Crc8 crc(spec);
    SegmentFix out;
    const std::uint8_t syndrome =
        static_cast<std::uint8_t>(crc.of_symbols(segment_symbols, q) ^ received_crc);
    if (syndrome == 0) {  // already consistent
        out.status = SegmentFix::Status::recovered;
        out.symbols.assign(segment_symbols.begin(), segment_symbols.end());
        return out;
    }
    if (suspect_columns.empty()) {
        out.status = SegmentFix::Status::no_suspects;
        return out;
    }

    const std::size_t n_bits = segment_symbols.size() * q;
    // Checksum contribution of each suspect bit, by linearity. One ladder of
    // x-powers covers the whole segment.
    std::vector<std::uint8_t> xpow(n_bits + 8);
    std::uint8_t state = 1;
    for (std::size_t e = 0; e < xpow.size(); ++e) {
        if (e < 8) {
            xpow[e] = static_cast<std::uint8_t>(1u << e);
        } else {
            state = (e == 8) ? crc.step_bit(0x80, false) : crc.step_bit(state, false);
            xpow[e] = state;
        }
    }
    std::vector<std::uint32_t> bits;          // suspect bit positions, ascending
    std::vector<std::uint8_t> contrib;        // matching checksum contributions
    bits.reserve(suspect_columns.size() * q);
    for (std::uint32_t col : suspect_columns) {
        for (unsigned b = 0; b < q; ++b) {
            std::uint32_t bit = col * q + b;
            bits.push_back(bit);
            contrib.push_back(xpow[n_bits - 1 - bit + 8]);
        }
    }

    const std::size_t m = bits.size();
    std::uint64_t trials = 0;
    std::vector<std::size_t> idx;  // current combination
    auto apply_and_return = [&](std::span<const std::size_t> chosen) {
        out.status = SegmentFix::Status::recovered;
        out.symbols.assign(segment_symbols.begin(), segment_symbols.end());
        for (std::size_t i : chosen) {
            std::uint32_t bit = bits[i];
            out.symbols[bit / q] ^= std::uint8_t(1u << (q - 1 - (bit % q)));
        }
        out.trials = trials;
        return out;
    };

    for (unsigned weight = 1; weight <= rcfg.max_flip_weight && weight <= m; ++weight) {
        idx.resize(weight);
        for (unsigned i = 0; i < weight; ++i) idx[i] = i;
        while (true) {
            std::uint8_t acc = 0;
            for (std::size_t i : idx) acc ^= contrib[i];
            ++trials;
            if (acc == syndrome) return apply_and_return(idx);
            if (trials >= rcfg.max_trials_per_segment) {
                out.status = SegmentFix::Status::exhausted;
                out.trials = trials;
                return out;
            }
            // Next combination in lexicographic order.
            int pos = static_cast<int>(weight) - 1;
            while (pos >= 0 && idx[pos] == m - weight + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (unsigned j = pos + 1; j < weight; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    out.status = SegmentFix::Status::exhausted;
    out.trials = trials;
    return out;
}

SegmentFix correct_segment(const CodedPacket& packet, std::size_t segment_index,
                           const BrokenVector& broken, const GenerationConfig& cfg,
                           const RecoveryConfig& rcfg) {
    rcfg.validate();
    const std::size_t seg_syms = cfg.segment_symbols();
    const std::uint32_t first = static_cast<std::uint32_t>(segment_index * seg_syms);
    std::vector<std::uint32_t> local;
    for (std::uint32_t col : broken.columns) {
        if (col >= first && col < first + seg_syms) local.push_back(col - first);
    }
    return search_segment(packet.segment(segment_index, cfg),
                          packet.inner_crcs[segment_index], local, cfg.field.q, cfg.crc,
                          rcfg);
}

std::vector<std::uint32_t> recover_dependent_set(std::span<CodedPacket> packets,
                                                 const Dependency& dep,
                                                 std::vector<char>& valid,
                                                 const GenerationConfig& cfg,
                                                 const RecoveryConfig& rcfg) {
    rcfg.validate();
    gf::Field field(cfg.field);
    std::vector<std::uint32_t> recovered;

    auto invalid_members = [&]() {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < dep.packet_ids.size(); ++k)
            if (!valid[dep.packet_ids[k]]) out.push_back(k);
        return out;
    };
    auto current_zero_row = [&]() {
        std::vector<const CodedPacket*> members;
        for (std::uint32_t id : dep.packet_ids) members.push_back(&packets[id]);
        return zero_row_symbols(members, dep.scalars, field, cfg.l);
    };

    // Broken columns come from the as-received mix and are not refreshed
    // after a successful fix. The reconstruction rule below does use the
    // current content, which it needs to be exact.
    BrokenVector broken = broken_from_row(current_zero_row());

    std::vector<char> attempted(dep.packet_ids.size(), 0);
    while (true) {
        auto inv = invalid_members();
        if (inv.empty()) break;
        if (inv.size() == 1) {
            std::size_t k = inv[0];
            auto zero = current_zero_row();
            reconstruct_member(packets[dep.packet_ids[k]], dep.scalars[k], zero, field,
                               cfg);
            valid[dep.packet_ids[k]] = 1;
            recovered.push_back(dep.packet_ids[k]);
            break;
        }
        std::size_t next = dep.packet_ids.size();
        for (std::size_t k : inv)
            if (!attempted[k]) {
                next = k;
                break;
            }
        if (next == dep.packet_ids.size()) break;  // everything attempted, stuck
        attempted[next] = 1;
        auto fixed = try_fix_packet(packets[dep.packet_ids[next]], broken, cfg, rcfg);
        if (fixed) {
            packets[dep.packet_ids[next]] = std::move(*fixed);
            valid[dep.packet_ids[next]] = 1;
            recovered.push_back(dep.packet_ids[next]);
        }
    }
    return recovered;
}

GroupOutcome recover_group(std::span<const CodedPacket> group, const GenerationConfig& cfg,
                           const RecoveryConfig& rcfg) {
    GroupOutcome out;
    std::vector<CodedPacket> work(group.begin(), group.end());
    std::vector<char> valid(work.size(), 0);
    std::vector<char> arrived_valid(work.size(), 0);
    std::size_t invalid_count = 0;
    for (std::size_t i = 0; i < work.size(); ++i) {
        valid[i] = outer_crc_ok(work[i], cfg) ? 1 : 0;
        arrived_valid[i] = valid[i];
        if (!valid[i]) ++invalid_count;
    }
    out.corrupted_received = invalid_count;

    if (invalid_count > 0) {
        Dependency dep = group_dependency(work, cfg);
        auto recovered = recover_dependent_set(work, dep, valid, cfg, rcfg);
        out.recovered = recovered.size();
    }
    for (std::size_t i = 0; i < work.size(); ++i) {
        if (!valid[i]) continue;
        out.valid_packets.push_back(std::move(work[i]));
        out.was_recovered.push_back(arrived_valid[i] ? 0 : 1);
    }
    return out;
}

}  // namespace flyprac
