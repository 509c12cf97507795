#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "flyprac/recovery.hpp"
#include "flyprac/rng.hpp"

namespace flyprac {

enum class ForwardPolicy { recode_on_valid, store_and_forward };

struct RelayConfig {
    bool recovery_enabled = true;
    bool recoding_enabled = true;
    ForwardPolicy forward_policy = ForwardPolicy::recode_on_valid;

    void validate() const {
        if (forward_policy == ForwardPolicy::recode_on_valid && !recoding_enabled)
            throw ConfigError("recode-on-valid forwarding requires recoding");
        if (recovery_enabled && forward_policy != ForwardPolicy::recode_on_valid)
            throw ConfigError("relay recovery requires the recode-on-valid policy");
    }

    static RelayConfig recoding(bool recovery) {
        return {recovery, true, ForwardPolicy::recode_on_valid};
    }
    static RelayConfig store_and_forward() {
        return {false, false, ForwardPolicy::store_and_forward};
    }
};

/// Intermediate node. Valid arrivals join the group's buffer and trigger one
/// recoded transmission; once a group is complete the invalid members are
/// recovered, each recovered packet is recoded and sent, and both buffers
/// for that group are dropped.
class Relay {
public:
    Relay(GenerationConfig cfg, RelayConfig relay_cfg, RecoveryConfig rcfg,
          std::uint64_t seed);

    /// Packets to put on the outgoing link, in order.
    std::vector<CodedPacket> on_receive(const CodedPacket& packet);

    std::size_t recovered_count() const { return recovered_; }
    std::size_t corrupted_received() const { return corrupted_; }

private:
    struct GroupState {
        std::vector<CodedPacket> received;  // arrival order
        std::vector<CodedPacket> valid;     // B_valid slice for this group
    };

    GenerationConfig cfg_;
    RelayConfig relay_cfg_;
    RecoveryConfig rcfg_;
    Rng rng_;
    std::map<std::uint16_t, GroupState> groups_;
    std::size_t recovered_ = 0;
    std::size_t corrupted_ = 0;
};

}  // namespace flyprac
