#pragma once

// Monte Carlo estimates over sampled end-to-end SNR.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "relayperf/errors.hpp"
#include "relayperf/fading.hpp"
#include "relayperf/metrics.hpp"
#include "relayperf/relay.hpp"

namespace relayperf {

struct SimConfig {
    std::uint64_t trials = 10'000'000;
    std::uint64_t seed = 1;
    unsigned shards = 8;
    unsigned threads = 0;  // 0: hardware concurrency; never changes the result
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Running mean and sum of squared deviations (Welford), mergeable (Chan et al.).
struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / double(count);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n = double(count) + double(o.count);
        const double d = o.mean - mean;
        mean += d * double(o.count) / n;
        m2 += o.m2 + d * d * double(count) * double(o.count) / n;
        count += o.count;
    }

    Estimate estimate() const {
        if (count < 2) return {mean, 0.0};
        const double var = m2 / double(count - 1);
        return {mean, std::sqrt(var / double(count))};
    }
};

/// Seed of shard i, derived from (seed, i) by the splitmix64 finalizer.
inline std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (shard + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Gaussian tail Q(x) = erfc(x/√2)/2.
inline double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Conditional bit error probability at SNR γ.
inline double conditional_bep(const ModulationScheme& scheme, double gamma) {
    if (scheme.kind == ModulationScheme::Kind::bdpsk) return 0.5 * std::exp(-gamma);
    return gaussian_q(std::sqrt(2.0 * scheme.psi * gamma));
}

/// Monte Carlo over several systems that share the shape parameters m1 and
/// m2: every shard draws X1 ~ Gamma(m1), X2 ~ Gamma(m2) once and maps them to
/// γ_end of each system, calling `observe(system_index, γ_end, stats)` where
/// stats has `width` accumulators.  Each system sees exactly the draws it
/// would see if simulated alone with the same configuration.  Shards run on
/// worker threads and are merged in shard order.
template <class Observe>
std::vector<std::vector<RunningStats>> mc_run_batch(const std::vector<RelaySystem>& systems, const SimConfig& cfg,
                                                    std::size_t width, Observe observe) {
    if (cfg.trials < 1) throw domain_error("simulation: trials must be at least 1");
    if (cfg.shards < 1) throw domain_error("simulation: shards must be at least 1");
    if (systems.empty()) return {};
    for (const auto& sys : systems) {
        if (sys.hop1.m != systems[0].hop1.m || sys.hop2.m != systems[0].hop2.m) {
            throw domain_error("simulation batch: all systems must share m1 and m2");
        }
    }
    const std::size_t count = systems.size();
    const unsigned shards = cfg.shards;
    std::vector<std::vector<std::vector<RunningStats>>> parts(
        shards, std::vector<std::vector<RunningStats>>(count, std::vector<RunningStats>(width)));

    struct Mapping {
        double scale1, exponent1, scale2, exponent2, C;
    };
    std::vector<Mapping> maps;
    for (const auto& sys : systems) {
        maps.push_back({sys.hop1.scale(), 2.0 / sys.hop1.beta, sys.hop2.scale(), 2.0 / sys.hop2.beta, sys.C});
    }

    auto run_shard = [&](unsigned s) {
        const std::uint64_t n = cfg.trials / shards + (s < cfg.trials % shards ? 1 : 0);
        std::mt19937_64 rng(shard_seed(cfg.seed, s));
        std::gamma_distribution<double> gamma1(systems[0].hop1.m, 1.0);
        std::gamma_distribution<double> gamma2(systems[0].hop2.m, 1.0);
        constexpr std::size_t block = 4096;
        std::vector<double> x1(block), x2(block);
        auto& stats = parts[s];
        for (std::uint64_t done = 0; done < n; done += block) {
            const auto len = static_cast<std::size_t>(std::min<std::uint64_t>(block, n - done));
            for (std::size_t i = 0; i < len; ++i) {
                x1[i] = gamma1(rng);
                x2[i] = gamma2(rng);
            }
            for (std::size_t k = 0; k < count; ++k) {
                const auto& mp = maps[k];
                for (std::size_t i = 0; i < len; ++i) {
                    const double g1 = mp.scale1 * std::pow(x1[i], mp.exponent1);
                    const double g2 = mp.scale2 * std::pow(x2[i], mp.exponent2);
                    observe(k, g1 * g2 / (mp.C + g2), stats[k]);
                }
            }
        }
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, shards);
    if (threads <= 1) {
        for (unsigned s = 0; s < shards; ++s) run_shard(s);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (unsigned s = t; s < shards; s += threads) run_shard(s);
            });
        }
        for (auto& th : pool) th.join();
    }
    std::vector<std::vector<RunningStats>> total(count, std::vector<RunningStats>(width));
    for (const auto& part : parts)
        for (std::size_t k = 0; k < count; ++k)
            for (std::size_t j = 0; j < width; ++j) total[k][j].merge(part[k][j]);
    return total;
}

/// Single-system form of mc_run_batch; `observe(γ_end, stats)`.
template <class Observe>
std::vector<RunningStats> mc_run(const RelaySystem& sys, const SimConfig& cfg, std::size_t width, Observe observe) {
    auto total = mc_run_batch(std::vector<RelaySystem>{sys}, cfg, width,
                              [&](std::size_t, double g, std::vector<RunningStats>& st) { observe(g, st); });
    return std::move(total[0]);
}

/// Moments 1..n_max for each system of a batch sharing m1 and m2.
inline std::vector<std::vector<Estimate>> mc_moments_batch(const std::vector<RelaySystem>& systems,
                                                           const SimConfig& cfg, int n_max) {
    if (n_max < 1) throw domain_error("mc_moments: n_max must be at least 1");
    const auto stats =
        mc_run_batch(systems, cfg, std::size_t(n_max), [n_max](std::size_t, double g, std::vector<RunningStats>& st) {
            double p = 1.0;
            for (int n = 0; n < n_max; ++n) {
                p *= g;
                st[std::size_t(n)].add(p);
            }
        });
    std::vector<std::vector<Estimate>> out;
    for (const auto& per : stats) {
        out.emplace_back();
        for (const auto& s : per) out.back().push_back(s.estimate());
    }
    return out;
}

/// Mean and standard error of γ_end^n for n = 1..n_max.
inline std::vector<Estimate> mc_moments(const RelaySystem& sys, const SimConfig& cfg, int n_max) {
    return mc_moments_batch({sys}, cfg, n_max)[0];
}

/// Fraction of trials with γ_end <= γth and its binomial standard error.
inline Estimate mc_outage(const RelaySystem& sys, const SimConfig& cfg, double gamma_th) {
    if (!(gamma_th > 0.0)) throw domain_error("mc_outage: threshold must be positive");
    const auto stats = mc_run(sys, cfg, 1, [gamma_th](double g, std::vector<RunningStats>& st) {
        st[0].add(g <= gamma_th ? 1.0 : 0.0);
    });
    const double p = stats[0].mean;
    return {p, std::sqrt(p * (1.0 - p) / double(stats[0].count))};
}

/// Outage at several thresholds from one set of draws.
inline std::vector<Estimate> mc_outage(const RelaySystem& sys, const SimConfig& cfg,
                                       const std::vector<double>& thresholds) {
    for (double t : thresholds)
        if (!(t > 0.0)) throw domain_error("mc_outage: thresholds must be positive");
    const auto stats = mc_run(sys, cfg, thresholds.size(), [&](double g, std::vector<RunningStats>& st) {
        for (std::size_t j = 0; j < thresholds.size(); ++j) st[j].add(g <= thresholds[j] ? 1.0 : 0.0);
    });
    std::vector<Estimate> out;
    for (const auto& s : stats) out.push_back({s.mean, std::sqrt(s.mean * (1.0 - s.mean) / double(s.count))});
    return out;
}

/// Semi-analytic ABEP: average of the conditional BEP over sampled γ_end.
inline Estimate mc_abep(const RelaySystem& sys, const SimConfig& cfg, const ModulationScheme& scheme) {
    const auto stats = mc_run(sys, cfg, 1, [&](double g, std::vector<RunningStats>& st) {
        st[0].add(conditional_bep(scheme, g));
    });
    return stats[0].estimate();
}

/// ABEP for several schemes from one set of draws.
inline std::vector<Estimate> mc_abep(const RelaySystem& sys, const SimConfig& cfg,
                                     const std::vector<ModulationScheme>& schemes) {
    const auto stats = mc_run(sys, cfg, schemes.size(), [&](double g, std::vector<RunningStats>& st) {
        for (std::size_t j = 0; j < schemes.size(); ++j) st[j].add(conditional_bep(schemes[j], g));
    });
    std::vector<Estimate> out;
    for (const auto& s : stats) out.push_back(s.estimate());
    return out;
}

}  // namespace relayperf
