#pragma once

// Counter-based randomness: Philox 4x32-10. A (seed, stream) pair selects an
// independent substream and every draw is a pure function of
// (seed, stream, block counter), so ensembles built from per-path streams are
// reproducible no matter how the paths are scheduled across threads.

#include <cstdint>
#include <cmath>

namespace gammatel {

class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    /// Uniform draw strictly inside (0, 1).
    double uniform() {
        if (pair_ == 2) refill();
        const std::uint64_t bits =
            (static_cast<std::uint64_t>(out_[2 * pair_]) << 32) | out_[2 * pair_ + 1];
        ++pair_;
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double a, b, s;
        do {
            a = 2.0 * uniform() - 1.0;
            b = 2.0 * uniform() - 1.0;
            s = a * a + b * b;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = b * m;
        have_spare_ = true;
        return a * m;
    }

private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                        std::uint32_t& lo) {
        const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(prod >> 32);
        lo = static_cast<std::uint32_t>(prod);
    }

    void refill() {
        std::uint32_t x0 = stream_lo_;
        std::uint32_t x1 = stream_hi_;
        std::uint32_t x2 = static_cast<std::uint32_t>(block_);
        std::uint32_t x3 = static_cast<std::uint32_t>(block_ >> 32);
        std::uint32_t k0 = key0_;
        std::uint32_t k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2511F53u, x0, hi0, lo0);
            mulhilo(0xCD9E8D57u, x2, hi1, lo1);
            x0 = hi1 ^ x1 ^ k0;
            x1 = lo1;
            x2 = hi0 ^ x3 ^ k1;
            x3 = lo0;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_[0] = x0;
        out_[1] = x1;
        out_[2] = x2;
        out_[3] = x3;
        ++block_;
        pair_ = 0;
    }

    std::uint32_t key0_;
    std::uint32_t key1_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t block_ = 0;
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int pair_ = 2;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace gammatel
