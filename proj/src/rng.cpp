#include "gravmc/rng.hpp"

#include <cmath>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

namespace gravmc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

struct Block {
    std::uint32_t c0, c1, c2, c3;
};

inline Block philox_rounds(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                           std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return {c0, c1, c2, c3};
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t seed, std::uint64_t stream_id,
                                        std::uint64_t block) {
    const Block b = philox_rounds(static_cast<std::uint32_t>(block),
                                  static_cast<std::uint32_t>(block >> 32),
                                  static_cast<std::uint32_t>(stream_id),
                                  static_cast<std::uint32_t>(stream_id >> 32),
                                  static_cast<std::uint32_t>(seed),
                                  static_cast<std::uint32_t>(seed >> 32));
    return {b.c0, b.c1, b.c2, b.c3};
}

std::uint64_t RandomStream::next_u64() {
    if (have_ == 0) {
        fill_raw(buf_, 1);
        have_ = 2;
    }
    return buf_[2 - have_--];
}

void RandomStream::fill_raw(std::uint64_t* out, std::size_t n_blocks) {
    const std::uint32_t key0 = static_cast<std::uint32_t>(seed_);
    const std::uint32_t key1 = static_cast<std::uint32_t>(seed_ >> 32);
    const std::uint32_t s0 = static_cast<std::uint32_t>(stream_);
    const std::uint32_t s1 = static_cast<std::uint32_t>(stream_ >> 32);

    std::uint64_t* w01 = out;
    std::uint64_t* w23 = out + n_blocks;
    std::size_t i = 0;

#if defined(__AVX512F__)
    if (n_blocks >= 8) {
        const __m512i m0 = _mm512_set1_epi64(kMul0);
        const __m512i m1 = _mm512_set1_epi64(kMul1);
        const __m512i low32 = _mm512_set1_epi64(0xffffffffll);
        const __m512i sv0 = _mm512_set1_epi64(s0);
        const __m512i sv1 = _mm512_set1_epi64(s1);
        const __m512i lane = _mm512_setr_epi64(0, 1, 2, 3, 4, 5, 6, 7);
        __m512i kv0[10], kv1[10];
        {
            std::uint32_t k0 = key0, k1 = key1;
            for (int r = 0; r < 10; ++r) {
                kv0[r] = _mm512_set1_epi64(k0);
                kv1[r] = _mm512_set1_epi64(k1);
                k0 += kWeyl0;
                k1 += kWeyl1;
            }
        }
        for (; i + 8 <= n_blocks; i += 8) {
            const __m512i ctr =
                _mm512_add_epi64(_mm512_set1_epi64(static_cast<long long>(counter_ + i)), lane);
            __m512i c0 = _mm512_and_si512(ctr, low32);
            __m512i c1 = _mm512_srli_epi64(ctr, 32);
            __m512i c2 = sv0;
            __m512i c3 = sv1;
            for (int r = 0; r < 10; ++r) {
                const __m512i p0 = _mm512_mul_epu32(m0, c0);
                const __m512i p1 = _mm512_mul_epu32(m1, c2);
                c0 = _mm512_xor_si512(_mm512_xor_si512(_mm512_srli_epi64(p1, 32), c1), kv0[r]);
                c1 = _mm512_and_si512(p1, low32);
                c2 = _mm512_xor_si512(_mm512_xor_si512(_mm512_srli_epi64(p0, 32), c3), kv1[r]);
                c3 = _mm512_and_si512(p0, low32);
            }
            _mm512_storeu_si512(w01 + i, _mm512_or_si512(_mm512_slli_epi64(c0, 32), c1));
            _mm512_storeu_si512(w23 + i, _mm512_or_si512(_mm512_slli_epi64(c2, 32), c3));
        }
    }
#endif

    for (; i < n_blocks; ++i) {
        const std::uint64_t ctr = counter_ + i;
        const Block b = philox_rounds(static_cast<std::uint32_t>(ctr),
                                      static_cast<std::uint32_t>(ctr >> 32),
                                      s0, s1, key0, key1);
        w01[i] = (static_cast<std::uint64_t>(b.c0) << 32) | b.c1;
        w23[i] = (static_cast<std::uint64_t>(b.c2) << 32) | b.c3;
    }
    counter_ += n_blocks;
}

// Box-Muller over the raw word batch. Words [0, n) set the radii, words
// [n, 2n) the angles; outputs land as [cos block | sin block]. The loops are
// kept contiguous and single-purpose so the compiler can lower log/cos/sin
// to their libmvec versions. u1 is kept away from zero so the log is finite.
void normal_batch(const std::uint64_t* raw, double* out, int n_pairs) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    constexpr int kMax = 128;
    double r[kMax], t[kMax];
    for (int i = 0; i < n_pairs; ++i)
        r[i] = std::sqrt(-2.0 * std::log((static_cast<double>(raw[i] >> 11) + 1.0) * 0x1p-53));
    for (int i = 0; i < n_pairs; ++i)
        t[i] = kTwoPi * (static_cast<double>(raw[n_pairs + i] >> 11) * 0x1p-53);
    for (int i = 0; i < n_pairs; ++i) out[i] = r[i] * std::cos(t[i]);
    for (int i = 0; i < n_pairs; ++i) out[n_pairs + i] = r[i] * std::sin(t[i]);
}

void normal_batch(const std::uint64_t* raw, float* out, int n_pairs) {
    constexpr float kTwoPi = 6.28318530717958647692f;
    constexpr int kMax = 128;
    float r[kMax], t[kMax];
    for (int i = 0; i < n_pairs; ++i)
        r[i] = std::sqrt(-2.0f * std::log((static_cast<float>(raw[i] >> 40) + 1.0f) * 0x1p-24f));
    for (int i = 0; i < n_pairs; ++i)
        t[i] = kTwoPi * (static_cast<float>(raw[n_pairs + i] >> 40) * 0x1p-24f);
    for (int i = 0; i < n_pairs; ++i) out[i] = r[i] * std::cos(t[i]);
    for (int i = 0; i < n_pairs; ++i) out[n_pairs + i] = r[i] * std::sin(t[i]);
}

template <class Real>
void NormalSource<Real>::refill() {
    std::uint64_t raw[kBatch];
    rs_.fill_raw(raw, kBatch / 2);
    normal_batch(raw, buf_, kBatch / 2);
    pos_ = 0;
}

template class NormalSource<double>;
template class NormalSource<float>;

} // namespace gravmc
