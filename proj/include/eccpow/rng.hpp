#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace eccpow {

// mt19937_64 plus hand-rolled draw functions. std::*_distribution is
// implementation-defined, so sims and calibration harnesses would not
// reproduce across standard libraries; these transforms are pinned.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return double(gen_() >> 11) * 0x1.0p-53; }

    // Mean-1/lambda exponential via inverse CDF.
    double exponential(double lambda) { return -std::log1p(-uniform01()) / lambda; }

    // Attempts-to-first-success for success probability p; support {1, 2, ...}.
    uint64_t geometric_attempts(double p) {
        if (p >= 1.0) return 1;
        double k = std::floor(std::log1p(-uniform01()) / std::log1p(-p));
        if (k < 0.0) k = 0.0;
        if (k > 0x1.0p62) k = 0x1.0p62;  // keep the cast defined
        return 1 + static_cast<uint64_t>(k);
    }

    // Box-Muller, cosine branch only.
    double normal(double mean, double sd) {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // Resample until non-negative; sd = 0 degenerates to max(mean, 0).
    double truncated_normal_nonneg(double mean, double sd) {
        if (sd <= 0.0) return mean < 0.0 ? 0.0 : mean;
        for (;;) {
            double x = normal(mean, sd);
            if (x >= 0.0) return x;
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace eccpow
