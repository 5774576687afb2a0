#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gravmc/scene.hpp"
#include "gravmc/vec3.hpp"
#include "gravmc/walker.hpp"

namespace gravmc {

enum class Precision { Single, Double };
enum class TruncationPolicy { Error, DropAndReport };

struct EstimatorConfig {
    std::int64_t n_walks = 1;
    std::uint64_t base_seed = 0;
    int workers = 0;  // 0 => hardware concurrency; never affects results
    Precision precision = Precision::Double;
    TruncationPolicy truncation_policy = TruncationPolicy::Error;
};

struct PointEstimate {
    Vec3d point{};               // meters
    double mean = 0;             // potential, m^2/s^2
    double sample_variance = 0;
    double standard_error = 0;   // sqrt(variance / n_effective)
    std::int64_t n_effective = 0;
    std::int64_t n_truncated = 0;
    double mean_exit_time = 0;   // internal time units
    double wall_time = 0;        // seconds, apportioned share of the batch
};

// deterministic pairwise (tree) reduction, order fixed by index
double pairwise_sum(std::span<const double> v);

// N independent walks from x0; per-walk streams are keyed by
// (base_seed, point_index, walk_index), so the result is a pure function of
// the inputs regardless of `workers`.
PointEstimate estimate_potential(const Scene& s, Vec3d x0, const WalkerParams& wp,
                                 const EstimatorConfig& cfg);

// per-point estimates with disjoint stream ranges (point index in the high
// counter word); schedulable across workers in any partition
std::vector<PointEstimate> estimate_many(const Scene& s, std::span<const Vec3d> points,
                                         const WalkerParams& wp, const EstimatorConfig& cfg);

// standard error as a function of N at one point, evaluated on nested
// prefixes of a single walk sequence; Ns must be strictly increasing
std::vector<std::pair<std::int64_t, double>> convergence_probe(
    const Scene& s, Vec3d x0, const WalkerParams& wp, std::span<const std::int64_t> Ns,
    std::uint64_t seed);

} // namespace gravmc
