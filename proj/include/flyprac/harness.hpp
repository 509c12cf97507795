#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "flyprac/channel.hpp"
#include "flyprac/recovery.hpp"
#include "flyprac/relay.hpp"

namespace flyprac {

enum class Topology { point_to_point, two_hop };
enum class Mode { dense, snc };
enum class RecoveryMode { fprac, none };

std::string to_string(Topology t);
std::string to_string(Mode m);
std::string to_string(RecoveryMode r);

struct ScenarioConfig {
    Topology topology = Topology::point_to_point;
    Mode mode = Mode::dense;
    RecoveryMode recovery = RecoveryMode::fprac;
    GenerationConfig gen;
    RecoveryConfig rec;
    RelayConfig relay = RelayConfig::recoding(true);
    double epsilon1 = 0.0;
    double epsilon2 = 0.0;  // second hop; ignored point-to-point
    double data_rate_bps = 500e3;
    std::size_t trials = 1000;
    std::uint64_t master_seed = 1;
    /// Safety stop for pathological settings; generous for everything sane.
    std::uint64_t max_transmissions = 0;  // 0 = 2000 * g

    void validate() const;
    std::uint64_t transmission_cap() const {
        return max_transmissions ? max_transmissions
                                 : 2000ull * static_cast<std::uint64_t>(gen.g);
    }
};

/// Destination state machine shared by all topologies. Grouped packets flow
/// through group recovery (dense mode) or dependency discovery (SNC mode);
/// ungrouped packets are plain OCRC-filtered decoder input.
class Receiver {
public:
    Receiver(GenerationConfig cfg, Mode mode, RecoveryMode recovery, RecoveryConfig rcfg);

    /// `transmission_index`: transmissions counted so far, used for decode
    /// delay bookkeeping.
    void receive(const CodedPacket& packet, std::uint64_t transmission_index);

    bool complete() const { return decoder_.complete(); }
    std::vector<OriginalPacket> originals() const { return decoder_.originals(); }

    std::uint64_t corrupted_received() const { return corrupted_; }
    std::uint64_t recovered() const { return recovered_; }
    /// Transmission index at which each original became decodable (0 = never).
    const std::vector<std::uint64_t>& decode_times() const { return decode_time_; }

private:
    void feed(const CodedPacket& packet, std::uint64_t tx);
    void note_decodable(std::uint64_t tx);

    GenerationConfig cfg_;
    Mode mode_;
    RecoveryMode recovery_;
    RecoveryConfig rcfg_;
    Decoder decoder_;
    std::map<std::uint16_t, std::vector<CodedPacket>> groups_;
    DependencyTracker tracker_;
    std::vector<CodedPacket> received_;  // SNC path: all arrivals by id
    std::vector<char> valid_;
    std::uint64_t corrupted_ = 0;
    std::uint64_t recovered_ = 0;
    std::vector<std::uint64_t> decode_time_;
};

struct TrialResult {
    std::uint64_t total_transmissions = 0;
    std::uint64_t corrupted_received = 0;  // destination + relay
    std::uint64_t recovered = 0;           // destination + relay
    std::vector<std::uint64_t> decode_times;
    double model_seconds = 0.0;  // transmitted bits / data rate
    double wall_seconds = 0.0;   // measured recovery + decoding compute
    bool decoded = false;        // decoded content matches the source data
    double add() const;          // mean decode delay, Eq.-19 style
};

/// Averages over trials. recovery_ratio pools recovered / corrupted across
/// trials; the other metrics are per-trial means.
struct MetricsRow {
    double total_transmissions = 0;
    double corrupted_received = 0;
    double recovered_count = 0;
    double recovery_ratio = 0;
    double add = 0;
    double goodput_bps = 0;
    double completion_time_model_s = 0;
    double completion_time_wall_s = 0;
    double decoded_fraction = 0;
};

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index);
MetricsRow reduce(const ScenarioConfig& cfg, const std::vector<TrialResult>& trials);
MetricsRow run_scenario(const ScenarioConfig& cfg, unsigned threads = 1);

/// Topology/mode-checked entry points.
MetricsRow run_point_to_point(const ScenarioConfig& cfg, unsigned threads = 1);
MetricsRow run_two_hop(const ScenarioConfig& cfg, unsigned threads = 1);
MetricsRow run_snc(const ScenarioConfig& cfg, unsigned threads = 1);

/// Cartesian parameter sweep. A dimension with an empty value list yields an
/// empty sweep (header-only CSV). Cell seeds derive from (master_seed, cell
/// index) so re-runs are byte-identical.
struct SweepGrid {
    ScenarioConfig base;
    std::vector<double> epsilons;
    std::vector<std::size_t> group_sizes;     // R
    std::vector<std::size_t> segment_counts;  // s
    std::vector<std::size_t> payload_symbols; // l
    std::vector<std::size_t> sparsities;      // w; 0 = dense
};

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ScenarioConfig& cfg, const MetricsRow& row);
void sweep(const SweepGrid& grid, std::ostream& os, unsigned threads = 1);

}  // namespace flyprac
