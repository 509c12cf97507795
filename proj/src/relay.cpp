#include "flyprac/relay.hpp"

#include <array>

namespace flyprac {

Relay::Relay(GenerationConfig cfg, RelayConfig relay_cfg, RecoveryConfig rcfg,
             std::uint64_t seed)
    : cfg_(std::move(cfg)), relay_cfg_(relay_cfg), rcfg_(rcfg), rng_(seed) {
    cfg_.validate();
    relay_cfg_.validate();
    rcfg_.validate();
}

std::vector<CodedPacket> Relay::on_receive(const CodedPacket& packet) {
    std::vector<CodedPacket> outgoing;

    const bool valid = outer_crc_ok(packet, cfg_);
    if (!valid) ++corrupted_;

    if (relay_cfg_.forward_policy == ForwardPolicy::store_and_forward) {
        outgoing.push_back(packet);
        return outgoing;
    }

    if (packet.group_id == CodedPacket::kUngrouped) {
        // No group context: recode valid packets alone, drop partials.
        if (valid) {
            std::array<CodedPacket, 1> one{packet};
            outgoing.push_back(recode(one, cfg_, rng_));
        }
        return outgoing;
    }

    auto& state = groups_[packet.group_id];
    state.received.push_back(packet);
    if (valid) {
        state.valid.push_back(packet);
        outgoing.push_back(recode(state.valid, cfg_, rng_));
    }

    if (state.received.size() < cfg_.group_size) return outgoing;

    // Group complete.
    if (relay_cfg_.recovery_enabled && state.valid.size() < state.received.size()) {
        GroupOutcome outcome = recover_group(state.received, cfg_, rcfg_);
        recovered_ += outcome.recovered;
        // Recode once per recovered packet, forcing it into the combination.
        std::vector<CodedPacket> pool = state.valid;
        for (std::size_t i = 0; i < outcome.valid_packets.size(); ++i) {
            if (!outcome.was_recovered[i]) continue;
            pool.push_back(std::move(outcome.valid_packets[i]));
            std::size_t forced = pool.size() - 1;
            outgoing.push_back(
                recode(pool, cfg_, rng_, CodedPacket::kUngrouped, {&forced, 1}));
        }
    }
    groups_.erase(packet.group_id);
    return outgoing;
}

}  // namespace flyprac
