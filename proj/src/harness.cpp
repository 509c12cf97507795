#include "flyprac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <thread>

namespace flyprac {

std::string to_string(Topology t) {
    return t == Topology::point_to_point ? "point_to_point" : "two_hop";
}
std::string to_string(Mode m) { return m == Mode::dense ? "dense" : "snc"; }
std::string to_string(RecoveryMode r) { return r == RecoveryMode::fprac ? "fprac" : "none"; }

void ScenarioConfig::validate() const {
    gen.validate();
    rec.validate();
    if (topology == Topology::two_hop) relay.validate();
    if (mode == Mode::snc && !gen.sparsity)
        throw ConfigError("snc mode requires a sparsity w");
    if (mode == Mode::dense && gen.sparsity)
        throw ConfigError("dense mode must not set sparsity");
    if (!(epsilon1 >= 0.0 && epsilon1 <= 1.0) || !(epsilon2 >= 0.0 && epsilon2 <= 1.0))
        throw ConfigError("bit error rates must lie in [0, 1]");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (!(data_rate_bps > 0)) throw ConfigError("data rate must be positive");
}

Receiver::Receiver(GenerationConfig cfg, Mode mode, RecoveryMode recovery,
                   RecoveryConfig rcfg)
    : cfg_(std::move(cfg)), mode_(mode), recovery_(recovery), rcfg_(rcfg),
      decoder_(cfg_), tracker_(cfg_), decode_time_(cfg_.g, 0) {}

void Receiver::note_decodable(std::uint64_t tx) {
    for (std::size_t idx : decoder_.take_newly_decodable())
        if (decode_time_[idx] == 0) decode_time_[idx] = tx;
}

void Receiver::feed(const CodedPacket& packet, std::uint64_t tx) {
    decoder_.add(packet);
    note_decodable(tx);
}

void Receiver::receive(const CodedPacket& packet, std::uint64_t tx) {
    const bool ok = outer_crc_ok(packet, cfg_);
    if (!ok) ++corrupted_;

    if (recovery_ == RecoveryMode::none) {
        if (ok) feed(packet, tx);
        return;
    }

    if (mode_ == Mode::snc) {
        // Every arrival, valid or not, joins the reception matrix; closing
        // dependencies drive recovery.
        std::uint32_t id = static_cast<std::uint32_t>(received_.size());
        received_.push_back(packet);
        valid_.push_back(ok ? 1 : 0);
        if (ok) feed(packet, tx);
        auto dep = tracker_.add(id, received_[id].coefficients);
        if (dep) {
            bool has_invalid = std::any_of(dep->packet_ids.begin(), dep->packet_ids.end(),
                                           [&](std::uint32_t m) { return !valid_[m]; });
            if (has_invalid) {
                auto fixed = recover_dependent_set(received_, *dep, valid_, cfg_, rcfg_);
                recovered_ += fixed.size();
                for (std::uint32_t m : fixed) feed(received_[m], tx);
            }
        }
        return;
    }

    // Dense mode: per-group buffering and recovery.
    if (packet.group_id == CodedPacket::kUngrouped) {
        if (ok) feed(packet, tx);
        return;
    }
    if (ok) feed(packet, tx);
    auto& group = groups_[packet.group_id];
    group.push_back(packet);
    if (group.size() < cfg_.group_size) return;

    std::size_t invalid = 0;
    for (const auto& p : group)
        if (!outer_crc_ok(p, cfg_)) ++invalid;
    if (invalid > 0) {
        GroupOutcome outcome = recover_group(group, cfg_, rcfg_);
        recovered_ += outcome.recovered;
        for (std::size_t i = 0; i < outcome.valid_packets.size(); ++i)
            if (outcome.was_recovered[i]) feed(outcome.valid_packets[i], tx);
    }
    groups_.erase(packet.group_id);
}

double TrialResult::add() const {
    if (decode_times.empty()) return 0.0;
    double sum = 0;
    for (auto d : decode_times) sum += static_cast<double>(d);
    return sum / static_cast<double>(decode_times.size());
}

namespace {

std::vector<OriginalPacket> random_originals(const GenerationConfig& cfg,
                                             std::uint64_t seed) {
    Rng rng(seed);
    std::vector<OriginalPacket> out(cfg.g);
    const std::uint8_t mask = static_cast<std::uint8_t>((1u << cfg.field.q) - 1);
    for (auto& p : out) {
        p.symbols.resize(cfg.l);
        for (auto& s : p.symbols) s = static_cast<std::uint8_t>(rng.next()) & mask;
    }
    return out;
}

/// Packet source: dependent groups under fprac, a plain coded stream for the
/// discard-partials baseline.
class Source {
public:
    Source(const ScenarioConfig& cfg, std::vector<OriginalPacket> originals,
           std::uint64_t seed) {
        if (cfg.recovery == RecoveryMode::fprac)
            group_.emplace(std::move(originals), cfg.gen, seed);
        else
            stream_.emplace(std::move(originals), cfg.gen, seed);
    }

    CodedPacket next() {
        if (stream_) return stream_->next_packet();
        if (next_idx_ >= queued_.size()) {
            queued_ = group_->next_group().packets;
            next_idx_ = 0;
        }
        return queued_[next_idx_++];
    }

private:
    std::optional<GroupEncoder> group_;
    std::optional<StreamEncoder> stream_;
    std::vector<CodedPacket> queued_;
    std::size_t next_idx_ = 0;
};

class Stopwatch {
public:
    void start() { t0_ = std::chrono::steady_clock::now(); }
    void stop() {
        auto t1 = std::chrono::steady_clock::now();
        seconds_ += std::chrono::duration<double>(t1 - t0_).count();
    }
    double seconds() const { return seconds_; }

private:
    std::chrono::steady_clock::time_point t0_;
    double seconds_ = 0;
};

}  // namespace

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    cfg.validate();
    const std::uint64_t data_seed = Rng::derive(cfg.master_seed, trial_index, 0);
    const std::uint64_t source_seed = Rng::derive(cfg.master_seed, trial_index, 1);
    const std::uint64_t link1_seed = Rng::derive(cfg.master_seed, trial_index, 2);
    const std::uint64_t link2_seed = Rng::derive(cfg.master_seed, trial_index, 3);
    const std::uint64_t relay_seed = Rng::derive(cfg.master_seed, trial_index, 4);

    auto originals = random_originals(cfg.gen, data_seed);
    Source source(cfg, originals, source_seed);
    Channel link1({cfg.epsilon1, link1_seed});
    Channel link2({cfg.epsilon2, link2_seed});
    std::optional<Relay> relay;
    if (cfg.topology == Topology::two_hop)
        relay.emplace(cfg.gen, cfg.relay, cfg.rec, relay_seed);

    Receiver dest(cfg.gen, cfg.mode, cfg.recovery, cfg.rec);
    const std::size_t prot_first = protected_bit_offset(cfg.gen);
    const std::size_t prot_bits = cfg.gen.protected_bits();

    TrialResult result;
    Stopwatch wall;
    std::uint64_t bits_sent = 0;
    const std::uint64_t cap = cfg.transmission_cap();

    while (!dest.complete() && result.total_transmissions < cap) {
        CodedPacket p = source.next();
        auto frame = serialize(p, cfg.gen);
        link1.transmit(frame, prot_first, prot_bits);
        ++result.total_transmissions;
        bits_sent += cfg.gen.frame_bits();

        if (!relay) {
            wall.start();
            dest.receive(deserialize(frame, cfg.gen), result.total_transmissions);
            wall.stop();
            continue;
        }

        wall.start();
        auto forwards = relay->on_receive(deserialize(frame, cfg.gen));
        wall.stop();
        for (auto& out : forwards) {
            auto frame2 = serialize(out, cfg.gen);
            link2.transmit(frame2, prot_first, prot_bits);
            ++result.total_transmissions;
            bits_sent += cfg.gen.frame_bits();
            wall.start();
            dest.receive(deserialize(frame2, cfg.gen), result.total_transmissions);
            wall.stop();
            if (dest.complete()) break;
        }
    }

    result.corrupted_received = dest.corrupted_received();
    result.recovered = dest.recovered();
    if (relay) {
        result.corrupted_received += relay->corrupted_received();
        result.recovered += relay->recovered_count();
    }
    result.decode_times = dest.decode_times();
    result.model_seconds = static_cast<double>(bits_sent) / cfg.data_rate_bps;
    if (dest.complete()) {
        wall.start();
        auto decoded = dest.originals();
        wall.stop();
        result.decoded = true;
        for (std::size_t i = 0; i < decoded.size(); ++i)
            if (decoded[i].symbols != originals[i].symbols) result.decoded = false;
    }
    result.wall_seconds = wall.seconds();
    return result;
}

MetricsRow reduce(const ScenarioConfig& cfg, const std::vector<TrialResult>& trials) {
    MetricsRow row;
    if (trials.empty()) return row;
    double n = static_cast<double>(trials.size());
    double corrupted_sum = 0, recovered_sum = 0;
    const double payload_bits =
        static_cast<double>(cfg.gen.g) * cfg.gen.l * cfg.gen.field.q;
    for (const auto& t : trials) {
        row.total_transmissions += static_cast<double>(t.total_transmissions) / n;
        row.corrupted_received += static_cast<double>(t.corrupted_received) / n;
        row.recovered_count += static_cast<double>(t.recovered) / n;
        row.add += t.add() / n;
        row.completion_time_model_s += t.model_seconds / n;
        row.completion_time_wall_s += t.wall_seconds / n;
        row.goodput_bps += payload_bits / (t.model_seconds + t.wall_seconds) / n;
        row.decoded_fraction += (t.decoded ? 1.0 : 0.0) / n;
        corrupted_sum += static_cast<double>(t.corrupted_received);
        recovered_sum += static_cast<double>(t.recovered);
    }
    row.recovery_ratio = corrupted_sum > 0 ? recovered_sum / corrupted_sum : 0.0;
    return row;
}

MetricsRow run_scenario(const ScenarioConfig& cfg, unsigned threads) {
    cfg.validate();
    std::vector<TrialResult> results(cfg.trials);
    if (threads <= 1) {
        for (std::size_t t = 0; t < cfg.trials; ++t) results[t] = run_trial(cfg, t);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t t = next.fetch_add(1); t < cfg.trials;
                 t = next.fetch_add(1))
                results[t] = run_trial(cfg, t);
        };
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return reduce(cfg, results);
}

MetricsRow run_point_to_point(const ScenarioConfig& cfg, unsigned threads) {
    if (cfg.topology != Topology::point_to_point)
        throw ConfigError("run_point_to_point requires point-to-point topology");
    return run_scenario(cfg, threads);
}

MetricsRow run_two_hop(const ScenarioConfig& cfg, unsigned threads) {
    if (cfg.topology != Topology::two_hop)
        throw ConfigError("run_two_hop requires two-hop topology");
    return run_scenario(cfg, threads);
}

MetricsRow run_snc(const ScenarioConfig& cfg, unsigned threads) {
    if (cfg.mode != Mode::snc) throw ConfigError("run_snc requires snc mode");
    return run_scenario(cfg, threads);
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

void write_csv_header(std::ostream& os) {
    os << "topology,mode,recovery,g,l,s,R,w,q,epsilon1,epsilon2,relay_policy,"
          "relay_recovery,data_rate_bps,trials,master_seed,max_flip_weight,"
          "max_trials_per_segment,total_transmissions,corrupted_received,"
          "recovered_count,recovery_ratio,add,goodput_kbps,completion_time_model_s,"
          "completion_time_wall_s,decoded_fraction\n";
}

void write_csv_row(std::ostream& os, const ScenarioConfig& cfg, const MetricsRow& row) {
    os << to_string(cfg.topology) << ',' << to_string(cfg.mode) << ','
       << to_string(cfg.recovery) << ',' << cfg.gen.g << ',' << cfg.gen.l << ','
       << cfg.gen.s << ',' << cfg.gen.group_size << ','
       << (cfg.gen.sparsity ? *cfg.gen.sparsity : 0) << ',' << cfg.gen.field.q << ','
       << fmt(cfg.epsilon1) << ',' << fmt(cfg.epsilon2) << ','
       << (cfg.topology == Topology::two_hop
               ? (cfg.relay.forward_policy == ForwardPolicy::recode_on_valid
                      ? "recode_on_valid"
                      : "store_and_forward")
               : "none")
       << ',' << (cfg.topology == Topology::two_hop && cfg.relay.recovery_enabled ? 1 : 0)
       << ',' << fmt(cfg.data_rate_bps) << ',' << cfg.trials << ',' << cfg.master_seed
       << ',' << cfg.rec.max_flip_weight << ',' << cfg.rec.max_trials_per_segment << ','
       << fmt(row.total_transmissions) << ',' << fmt(row.corrupted_received) << ','
       << fmt(row.recovered_count) << ',' << fmt(row.recovery_ratio) << ','
       << fmt(row.add) << ',' << fmt(row.goodput_bps / 1000.0) << ','
       << fmt(row.completion_time_model_s) << ',' << fmt(row.completion_time_wall_s)
       << ',' << fmt(row.decoded_fraction) << '\n';
}

void sweep(const SweepGrid& grid, std::ostream& os, unsigned threads) {
    write_csv_header(os);
    std::uint64_t cell = 0;
    for (double eps : grid.epsilons) {
        for (std::size_t R : grid.group_sizes) {
            for (std::size_t s : grid.segment_counts) {
                for (std::size_t l : grid.payload_symbols) {
                    for (std::size_t w : grid.sparsities) {
                        ScenarioConfig cfg = grid.base;
                        cfg.epsilon1 = eps;
                        if (cfg.topology == Topology::two_hop) cfg.epsilon2 = eps;
                        cfg.gen.group_size = R;
                        cfg.gen.s = s;
                        cfg.gen.l = l;
                        if (w == 0) {
                            cfg.gen.sparsity.reset();
                            cfg.mode = Mode::dense;
                        } else {
                            cfg.gen.sparsity = w;
                            cfg.mode = Mode::snc;
                        }
                        cfg.master_seed = Rng::derive(grid.base.master_seed, cell);
                        write_csv_row(os, cfg, run_scenario(cfg, threads));
                        ++cell;
                    }
                }
            }
        }
    }
}

}  // namespace flyprac
