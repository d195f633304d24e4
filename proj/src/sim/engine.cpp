#include "fbq/sim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace fbq {

namespace {

// Attained-service levels closer than this are one cohort.
constexpr double kLevelTol = 1e-12;

struct Job {
    double size;
    double arrival;
};

struct BySize {
    bool operator()(const Job& a, const Job& b) const { return a.size < b.size; }
};

// Jobs sharing one attained-service level, sorted by size. head marks the
// first job that has not departed yet.
struct Cohort {
    double attained;
    std::vector<Job> jobs;
    std::size_t head = 0;

    std::size_t live() const { return jobs.size() - head; }
    double min_size() const { return jobs[head].size; }
};

enum class Phase { Warmup, AwaitCycle, Measuring, Done };

class FbEngine {
public:
    FbEngine(const TrafficPoint& tp, const SimConfig& cfg, std::uint32_t rep)
        : tp_(tp), cfg_(cfg), rng_(cfg.seed, rep) {}

    SimResult run() {
        if (tp_.lambda == 0.0) return run_degenerate();
        next_arrival_ = rng_.next_exponential(tp_.lambda);
        phase_ = cfg_.warmup_jobs == 0 ? Phase::AwaitCycle : Phase::Warmup;
        while (phase_ != Phase::Done) {
            step();
            if (++result_.events > cfg_.max_events) {
                throw SimulationError("event wall reached (" +
                                      std::to_string(cfg_.max_events) + " events)");
            }
        }
        return std::move(result_);
    }

private:
    // lambda = 0: no queueing at all, every sojourn equals its service time.
    SimResult run_degenerate() {
        for (std::uint64_t i = 0; i < cfg_.warmup_jobs; ++i) sample(*tp_.dist, rng_);
        for (std::uint64_t i = 0; i < cfg_.measured_jobs; ++i) {
            const double s = std::min(sample(*tp_.dist, rng_), cfg_.truncate_sizes);
            result_.sojourns.push_back(s);
            if (cfg_.collect_sizes) {
                result_.sizes.push_back(s);
                result_.arrivals.push_back(0.0);
            }
            result_.periods.push_back({result_.sojourns.size() - 1, 1, 1, 0.0, s});
        }
        return std::move(result_);
    }

    void step() {
        if (ladder_.empty()) {
            // Idle: the next arrival opens a busy period.
            now_ = next_arrival_;
            if (phase_ == Phase::AwaitCycle) {
                phase_ = Phase::Measuring;
            }
            if (phase_ == Phase::Measuring) {
                open_period();
            }
            arrive();
            return;
        }

        Cohort& active = ladder_.back();
        const std::size_t k = active.live();
        const double dt_completion =
            std::max(0.0, static_cast<double>(k) * (active.min_size() - active.attained));
        const double dt_merge =
            ladder_.size() >= 2
                ? std::max(0.0, static_cast<double>(k) *
                                    (ladder_[ladder_.size() - 2].attained - active.attained))
                : kInf;
        const double dt_internal = std::min(dt_completion, dt_merge);
        const double dt_arrival = next_arrival_ - now_;

        if (dt_arrival < dt_internal) {
            now_ = next_arrival_;
            active.attained += dt_arrival / static_cast<double>(k);
            arrive();
        } else if (dt_completion <= dt_merge) {
            now_ += dt_completion;
            complete(active.min_size());
        } else {
            now_ += dt_merge;
            merge();
        }
    }

    void arrive() {
        const double size = std::min(sample(*tp_.dist, rng_), cfg_.truncate_sizes);
        next_arrival_ = now_ + rng_.next_exponential(tp_.lambda);
        Job job{size, now_};
        if (!ladder_.empty() && ladder_.back().attained <= kLevelTol) {
            Cohort& zero = ladder_.back();
            zero.jobs.insert(
                std::upper_bound(zero.jobs.begin() + zero.head, zero.jobs.end(), job, BySize{}),
                job);
        } else {
            ladder_.push_back(Cohort{0.0, {job}, 0});
        }
    }

    void merge() {
        Cohort& upper = ladder_[ladder_.size() - 2];
        Cohort& active = ladder_.back();
        std::vector<Job> merged;
        merged.reserve(upper.live() + active.live());
        std::merge(upper.jobs.begin() + upper.head, upper.jobs.end(),
                   active.jobs.begin() + active.head, active.jobs.end(),
                   std::back_inserter(merged), BySize{});
        upper.jobs = std::move(merged);
        upper.head = 0;
        ladder_.pop_back();
    }

    void complete(double level) {
        Cohort& active = ladder_.back();
        active.attained = level;
        bool departed = false;
        while (active.head < active.jobs.size() &&
               active.jobs[active.head].size <= level + kLevelTol) {
            const Job& job = active.jobs[active.head];
            record_departure(job, level);
            ++active.head;
            departed = true;
        }
        if (departed && phase_ == Phase::Measuring) {
            ++epochs_this_period_;
        }
        if (active.live() == 0) {
            ladder_.pop_back();
            if (ladder_.empty()) close_period();
        }
    }

    void record_departure(const Job& job, double attained) {
        ++total_departures_;
        result_.max_departure_gap =
            std::max(result_.max_departure_gap, std::abs(attained - job.size));
        if (phase_ == Phase::Measuring) {
            result_.sojourns.push_back(now_ - job.arrival);
            if (cfg_.collect_sizes) {
                result_.sizes.push_back(job.size);
                result_.arrivals.push_back(job.arrival);
            }
            ++count_this_period_;
        } else if (phase_ == Phase::Warmup && total_departures_ >= cfg_.warmup_jobs) {
            phase_ = Phase::AwaitCycle;
        }
    }

    void open_period() {
        period_start_ = now_;
        period_first_sample_ = result_.sojourns.size();
        count_this_period_ = 0;
        epochs_this_period_ = 0;
    }

    void close_period() {
        if (phase_ != Phase::Measuring) return;
        result_.periods.push_back({period_first_sample_, count_this_period_,
                                   epochs_this_period_, period_start_, now_});
        if (result_.sojourns.size() >= cfg_.measured_jobs) {
            phase_ = Phase::Done;
        }
    }

    const TrafficPoint& tp_;
    const SimConfig& cfg_;
    RandomStream rng_;
    SimResult result_;
    std::vector<Cohort> ladder_;  // back = minimum attained = in service
    double now_ = 0.0;
    double next_arrival_ = 0.0;
    Phase phase_ = Phase::Warmup;
    std::uint64_t total_departures_ = 0;
    double period_start_ = 0.0;
    std::uint64_t period_first_sample_ = 0;
    std::uint32_t count_this_period_ = 0;
    std::uint32_t epochs_this_period_ = 0;
};

}  // namespace

void SimResult::append(SimResult&& other) {
    const std::uint64_t offset = sojourns.size();
    sojourns.insert(sojourns.end(), other.sojourns.begin(), other.sojourns.end());
    sizes.insert(sizes.end(), other.sizes.begin(), other.sizes.end());
    arrivals.insert(arrivals.end(), other.arrivals.begin(), other.arrivals.end());
    for (BusyPeriodRecord p : other.periods) {
        p.first_sample += offset;
        periods.push_back(p);
    }
    max_departure_gap = std::max(max_departure_gap, other.max_departure_gap);
    events += other.events;
}

SimResult simulate_fb_single(const TrafficPoint& tp, const SimConfig& cfg,
                             std::uint32_t rep_index) {
    return FbEngine(tp, cfg, rep_index).run();
}

SimResult simulate_fb_detailed(const TrafficPoint& tp, const SimConfig& cfg) {
    if (cfg.measured_jobs < 1 || cfg.replications < 1) {
        throw std::invalid_argument("SimConfig requires measured_jobs >= 1, replications >= 1");
    }
    const std::uint32_t reps = cfg.replications;
    SimConfig per = cfg;
    // measured_jobs is a total across replications; warmup applies per
    // replication (each starts from its own empty system).
    per.measured_jobs = (cfg.measured_jobs + reps - 1) / reps;

    std::vector<SimResult> parts(reps);
    if (cfg.parallel && reps > 1) {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        std::vector<std::thread> pool;
        std::atomic<std::uint32_t> next{0};
        std::vector<std::exception_ptr> errors(reps);
        for (unsigned w = 0; w < std::min<unsigned>(hw, reps); ++w) {
            pool.emplace_back([&] {
                for (std::uint32_t r; (r = next.fetch_add(1)) < reps;) {
                    try {
                        parts[r] = simulate_fb_single(tp, per, r);
                    } catch (...) {
                        errors[r] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    } else {
        for (std::uint32_t r = 0; r < reps; ++r) {
            parts[r] = simulate_fb_single(tp, per, r);
        }
    }
    SimResult merged;
    for (auto& part : parts) merged.append(std::move(part));
    return merged;
}

SojournStats summarize(const SimResult& result, std::size_t ccdf_points) {
    SojournStats stats;
    stats.n = result.sojourns.size();
    stats.busy_periods = result.periods.size();
    if (stats.n == 0) return stats;

    double sum = 0.0;
    for (double t : result.sojourns) sum += t;
    stats.mean = sum / static_cast<double>(stats.n);
    double ss = 0.0;
    for (double t : result.sojourns) ss += (t - stats.mean) * (t - stats.mean);
    stats.variance = stats.n > 1 ? ss / static_cast<double>(stats.n - 1) : 0.0;

    // Regenerative ratio-estimator standard error over busy periods.
    const std::uint64_t m = result.periods.size();
    if (m > 1) {
        double sq = 0.0;
        for (const auto& p : result.periods) {
            double x = 0.0;
            for (std::uint64_t i = p.first_sample; i < p.first_sample + p.count; ++i) {
                x += result.sojourns[i];
            }
            const double dev = x - stats.mean * p.count;
            sq += dev * dev;
        }
        const double nbar = static_cast<double>(stats.n) / static_cast<double>(m);
        const double s2 = sq / static_cast<double>(m - 1);
        stats.std_error = std::sqrt(s2 / static_cast<double>(m)) / nbar;
    }

    std::vector<double> sorted(result.sojourns);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t points = std::min(ccdf_points, sorted.size());
    stats.empirical_ccdf.reserve(points);
    double last_y = -kInf;
    for (std::size_t j = 0; j < points; ++j) {
        const std::size_t idx = points == 1 ? sorted.size() - 1
                                            : j * (sorted.size() - 1) / (points - 1);
        const double y = sorted[idx];
        if (y == last_y) continue;
        last_y = y;
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), y);
        stats.empirical_ccdf.emplace_back(
            y, static_cast<double>(above) / static_cast<double>(sorted.size()));
    }
    return stats;
}

SojournStats simulate_fb(const TrafficPoint& tp, const SimConfig& cfg) {
    return summarize(simulate_fb_detailed(tp, cfg), cfg.ccdf_points);
}

}  // namespace fbq
