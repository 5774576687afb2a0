#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "gravmc/vec3.hpp"

namespace gravmc {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). The 64-bit key is the run seed; the 128-bit
// counter is split into a 64-bit stream id and a 64-bit block index. Distinct
// (seed, stream) pairs give statistically independent sequences, and any
// block can be computed directly, so walker streams are replayable and
// independent of scheduling.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t seed, std::uint64_t stream_id,
                                        std::uint64_t block);

// Sequential view over one (seed, stream_id) pair. One block yields two u64s.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t next_u64();

    // uniform in [0,1), 53-bit resolution
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1p-53;
    }

    // Raw block fill: writes 2*n_blocks u64 words as two planes,
    // out[k] = words (0,1) of block k and out[n_blocks+k] = words (2,3),
    // then advances the counter. The plane layout keeps the SIMD path free
    // of lane interleaving.
    void fill_raw(std::uint64_t* out, std::size_t n_blocks);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::uint64_t buf_[2] = {0, 0};
    int have_ = 0;
};

void normal_batch(const std::uint64_t* raw, double* out, int n_pairs);
void normal_batch(const std::uint64_t* raw, float* out, int n_pairs);

// Batched standard-normal source: Box-Muller over philox uniforms.
// next3() is the per-step hot path of the walker. Bridge tests draw uniforms
// from the same underlying counter stream, so a walk's whole consumption is
// one deterministic sequence.
template <class Real>
class NormalSource {
public:
    NormalSource(std::uint64_t seed, std::uint64_t stream_id)
        : rs_(seed, stream_id) {}

    Real next() {
        if (pos_ == kBatch) refill();
        return buf_[pos_++];
    }

    Vec3<Real> next3() {
        if (pos_ + 3 > kBatch) refill();
        Vec3<Real> v{buf_[pos_], buf_[pos_ + 1], buf_[pos_ + 2]};
        pos_ += 3;
        return v;
    }

    double next_unit() { return rs_.next_unit(); }

    RandomStream& stream() { return rs_; }

private:
    static constexpr int kBatch = 256; // normals per refill; 128 blocks

    void refill();

    RandomStream rs_;
    alignas(64) Real buf_[kBatch];
    int pos_ = kBatch;
};

extern template class NormalSource<double>;
extern template class NormalSource<float>;

} // namespace gravmc
