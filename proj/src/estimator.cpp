#include "gravmc/estimator.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace gravmc {

namespace {

constexpr std::int64_t kBlockWalks = 4096;

struct BlockStats {
    double sum_u = 0;
    double sum_uu = 0;
    double sum_tau = 0;
    std::int64_t n_kept = 0;
    std::int64_t n_truncated = 0;
};

struct Task {
    std::uint32_t point_index;
    std::int64_t walk_begin;
    std::int64_t walk_end;
    BlockStats* out;
};

template <class Real>
void run_block(const WalkScene<Real>& ws, Vec3<Real> x0, const WalkerParams& wp,
               std::uint64_t seed, std::uint32_t point_index, std::int64_t walk_begin,
               std::int64_t walk_end, TruncationPolicy policy, BlockStats& out) {
    for (std::int64_t w = walk_begin; w < walk_end; ++w) {
        const std::uint64_t stream_id =
            (static_cast<std::uint64_t>(point_index) << 32) | static_cast<std::uint64_t>(w);
        NormalSource<Real> ns(seed, stream_id);
        const WalkResult r = run_walk_internal<Real>(ws, x0, wp, ns);
        if (r.truncated) {
            ++out.n_truncated;
            if (policy == TruncationPolicy::Error)
                throw std::runtime_error(
                    "estimator: walk hit max_steps (truncation policy is 'error')");
            continue;
        }
        out.sum_u += r.integral;
        out.sum_uu += r.integral * r.integral;
        out.sum_tau += r.exit_time;
        ++out.n_kept;
    }
}

template <class Real>
void run_tasks(const Scene& s, std::span<const Vec3d> points, const WalkerParams& wp,
               const EstimatorConfig& cfg, std::vector<Task>& tasks) {
    const WalkScene<Real> ws = make_walk_scene<Real>(s);
    const double L = s.length_scale;
    std::vector<Vec3<Real>> x0(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        x0[i] = {static_cast<Real>(points[i].x / L), static_cast<Real>(points[i].y / L),
                 static_cast<Real>(points[i].z / L)};

    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load(std::memory_order_relaxed)) return;
            const Task& t = tasks[i];
            try {
                run_block<Real>(ws, x0[t.point_index], wp, cfg.base_seed, t.point_index,
                                t.walk_begin, t.walk_end, cfg.truncation_policy, *t.out);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    if (workers == 1 || tasks.size() == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
}

PointEstimate reduce_point(Vec3d point, std::span<const BlockStats> blocks,
                           std::int64_t n_walks) {
    std::vector<double> su, suu, stau;
    su.reserve(blocks.size());
    suu.reserve(blocks.size());
    stau.reserve(blocks.size());
    std::int64_t kept = 0, truncated = 0;
    for (const BlockStats& b : blocks) {
        su.push_back(b.sum_u);
        suu.push_back(b.sum_uu);
        stau.push_back(b.sum_tau);
        kept += b.n_kept;
        truncated += b.n_truncated;
    }
    PointEstimate e;
    e.point = point;
    e.n_effective = kept;
    e.n_truncated = truncated;
    if (kept > 0) {
        const double sum = pairwise_sum(su);
        e.mean = sum / static_cast<double>(kept);
        e.mean_exit_time = pairwise_sum(stau) / static_cast<double>(kept);
        if (kept > 1) {
            const double ss = pairwise_sum(suu);
            double var = (ss - static_cast<double>(kept) * e.mean * e.mean) /
                         static_cast<double>(kept - 1);
            if (var < 0) var = 0; // rounding guard for near-degenerate data
            e.sample_variance = var;
            e.standard_error = std::sqrt(var / static_cast<double>(kept));
        }
    }
    (void)n_walks;
    return e;
}

} // namespace

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

std::vector<PointEstimate> estimate_many(const Scene& s, std::span<const Vec3d> points,
                                         const WalkerParams& wp, const EstimatorConfig& cfg) {
    if (cfg.n_walks < 1) throw std::invalid_argument("estimator: n_walks must be >= 1");
    if (!(wp.dt > 0)) throw std::invalid_argument("estimator: dt must be > 0");
    if (cfg.n_walks >= (std::int64_t(1) << 32))
        throw std::invalid_argument("estimator: n_walks must fit in 32 bits");
    if (points.size() >= (std::size_t(1) << 32))
        throw std::invalid_argument("estimator: too many points");
    for (const Vec3d& p : points)
        if (!contains(s.domain, p))
            throw std::invalid_argument("estimator: evaluation point outside the domain");

    WalkerParams wpa = wp;
    if (wpa.max_steps <= 0) wpa.max_steps = auto_max_steps(s, wpa.dt);

    const auto t0 = std::chrono::steady_clock::now();

    const std::int64_t blocks_per_point = (cfg.n_walks + kBlockWalks - 1) / kBlockWalks;
    std::vector<BlockStats> stats(points.size() * blocks_per_point);
    std::vector<Task> tasks;
    tasks.reserve(stats.size());
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        for (std::int64_t b = 0; b < blocks_per_point; ++b) {
            Task t;
            t.point_index = static_cast<std::uint32_t>(pi);
            t.walk_begin = b * kBlockWalks;
            t.walk_end = std::min<std::int64_t>(t.walk_begin + kBlockWalks, cfg.n_walks);
            t.out = &stats[pi * blocks_per_point + b];
            tasks.push_back(t);
        }
    }

    if (cfg.precision == Precision::Double)
        run_tasks<double>(s, points, wpa, cfg, tasks);
    else
        run_tasks<float>(s, points, wpa, cfg, tasks);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<PointEstimate> out(points.size());
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        out[pi] = reduce_point(points[pi],
                               {stats.data() + pi * blocks_per_point,
                                static_cast<std::size_t>(blocks_per_point)},
                               cfg.n_walks);
        out[pi].wall_time = elapsed / static_cast<double>(points.size());
    }
    return out;
}

PointEstimate estimate_potential(const Scene& s, Vec3d x0, const WalkerParams& wp,
                                 const EstimatorConfig& cfg) {
    const Vec3d pts[1] = {x0};
    return estimate_many(s, pts, wp, cfg)[0];
}

std::vector<std::pair<std::int64_t, double>> convergence_probe(
    const Scene& s, Vec3d x0, const WalkerParams& wp, std::span<const std::int64_t> Ns,
    std::uint64_t seed) {
    if (Ns.empty()) return {};
    for (std::size_t i = 0; i + 1 < Ns.size(); ++i)
        if (Ns[i] >= Ns[i + 1])
            throw std::invalid_argument("convergence_probe: Ns must be strictly increasing");
    if (Ns.front() < 1) throw std::invalid_argument("convergence_probe: N must be >= 1");

    EstimatorConfig cfg;
    cfg.n_walks = Ns.back();
    cfg.base_seed = seed;

    // run the full prefix once, then read off statistics at each checkpoint;
    // block layout matches estimate_many so prefixes are replayable
    if (!contains(s.domain, x0))
        throw std::invalid_argument("convergence_probe: point outside the domain");
    WalkerParams wpa = wp;
    if (wpa.max_steps <= 0) wpa.max_steps = auto_max_steps(s, wpa.dt);

    // checkpoint boundaries define the block edges
    std::vector<Task> tasks;
    std::vector<BlockStats> stats;
    std::vector<std::int64_t> edges;
    std::int64_t prev = 0;
    for (std::int64_t n : Ns) {
        for (std::int64_t b = prev; b < n; b += kBlockWalks)
            edges.push_back(b);
        prev = n;
    }
    edges.push_back(Ns.back());
    // consecutive edges never straddle a checkpoint: each segment restarts
    // its block grid at the previous checkpoint
    stats.resize(edges.size() - 1);
    tasks.reserve(stats.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        tasks.push_back(Task{0, edges[i], edges[i + 1], &stats[i]});

    if (cfg.precision == Precision::Double)
        run_tasks<double>(s, {&x0, 1}, wpa, cfg, tasks);
    else
        run_tasks<float>(s, {&x0, 1}, wpa, cfg, tasks);

    std::vector<std::pair<std::int64_t, double>> out;
    std::size_t bi = 0;
    std::vector<double> su, suu;
    std::int64_t kept = 0;
    for (std::int64_t n : Ns) {
        while (bi < stats.size() && tasks[bi].walk_end <= n) {
            su.push_back(stats[bi].sum_u);
            suu.push_back(stats[bi].sum_uu);
            kept += stats[bi].n_kept;
            ++bi;
        }
        double se = 0;
        if (kept > 1) {
            const double mean = pairwise_sum(su) / static_cast<double>(kept);
            double var = (pairwise_sum(suu) - static_cast<double>(kept) * mean * mean) /
                         static_cast<double>(kept - 1);
            if (var < 0) var = 0;
            se = std::sqrt(var / static_cast<double>(kept));
        }
        out.emplace_back(n, se);
    }
    return out;
}

} // namespace gravmc
