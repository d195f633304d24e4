#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fbq/analytic/sojourn.hpp"
#include "fbq/dist/service.hpp"

namespace fbq {

struct SimConfig {
    std::uint64_t warmup_jobs = 0;
    std::uint64_t measured_jobs = 1;
    std::uint32_t replications = 1;
    std::uint64_t seed = 1;
    std::uint64_t max_events = 1'000'000'000ULL;  // per replication
    std::size_t ccdf_points = 256;
    bool parallel = true;        // fan replications across threads
    bool collect_sizes = false;  // keep each sample's size and arrival epoch
    // Replaces every drawn size s by min(s, truncate_sizes); the draw itself
    // is unchanged, so streams stay aligned across truncation levels.
    double truncate_sizes = std::numeric_limits<double>::infinity();
};

class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

// One measured busy period (regeneration cycle).
struct BusyPeriodRecord {
    std::uint64_t first_sample;       // index into SimResult::sojourns
    std::uint32_t count;              // departures in this period
    std::uint32_t departure_epochs;   // distinct departure timestamps
    double start_time;
    double end_time;
};

struct SimResult {
    std::vector<double> sojourns;  // departure order, measured periods only
    std::vector<double> sizes;     // matching sizes (when collect_sizes)
    std::vector<double> arrivals;  // matching arrival epochs (when collect_sizes)
    std::vector<BusyPeriodRecord> periods;
    double max_departure_gap = 0.0;  // max |attained - size| over departures
    std::uint64_t events = 0;

    void append(SimResult&& other);
};

struct SojournStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;  // regenerative (busy-period) batching
    std::uint64_t busy_periods = 0;
    // Sorted (y, P(T > y)) grid; fractions non-increasing in y.
    std::vector<std::pair<double, double>> empirical_ccdf;
};

// Exact event-driven M/GI/1/FB simulation: between events the
// minimum-attained cohort of k jobs gains attained service at rate 1/k;
// cohorts at equal attained levels are merged exactly. Draw order per
// replication: one interarrival at t = 0, then (size, next interarrival) at
// each arrival. Replication r uses RandomStream(seed, r); merging is by
// ascending replication index, so results do not depend on scheduling.
SimResult simulate_fb_detailed(const TrafficPoint& tp, const SimConfig& cfg);

// Runs one replication only (stream id = rep_index); building block for
// simulate_fb_detailed, exposed for stream-replay property tests.
SimResult simulate_fb_single(const TrafficPoint& tp, const SimConfig& cfg,
                             std::uint32_t rep_index);

SojournStats summarize(const SimResult& result, std::size_t ccdf_points);

SojournStats simulate_fb(const TrafficPoint& tp, const SimConfig& cfg);

}  // namespace fbq
