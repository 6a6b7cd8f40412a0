#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace eccpow::stats {

// p-value from a finite critical-value table: exact when interpolable,
// otherwise a one-sided cap ("p >= 0.250" / "p <= 0.001").
struct PBound {
    enum class Kind { exact, at_least, at_most };
    Kind kind = Kind::exact;
    double value = 0.0;

    std::string str() const;
};

struct AdResult {
    double a2 = 0.0;           // raw two-sample statistic
    double standardized = 0.0;
    PBound p_bound;
    size_t m = 0;
    size_t n = 0;

    std::string to_json() const;  // fields a2, standardized, p_bound, M, N
};

// lambda = 1 / mean. Empty input or any value <= 0 is a parameter error.
double fit_exponential_mean(const std::vector<double>& samples);

struct Histogram {
    std::vector<double> edges;     // bins + 1 ascending
    std::vector<uint64_t> counts;  // sum equals the sample count
};

// Equal-width bins over [min, max]; all bins half-open except the last,
// which is closed so the maximum lands inside. All-equal samples are a
// degenerate-range error.
Histogram histogram10(const std::vector<double>& samples, size_t bins = 10);

// Exponential-model counts per bin: total * (exp(-lambda*a) - exp(-lambda*b)).
std::vector<double> expected_frequencies(double lambda, const std::vector<double>& edges,
                                         uint64_t total);

// Order-statistic form of the one-sample statistic:
//   A^2 = -M - (1/M) * sum_i (2i-1) * [ln F(x_(i)) + ln(1 - F(x_(M+1-i)))].
// F(x) touching 0 or 1 at a sample point is a domain error.
double ad_one_sample(const std::vector<double>& samples,
                     const std::function<double(double)>& cdf);

// Rank-based two-sample statistic, tie-adjusted midrank variant, then
// standardized against its permutation-null moments with p from the embedded
// critical-value table. Needs m + n >= 4 and at least two distinct pooled
// values; fails degenerate otherwise.
AdResult ad_two_sample(const std::vector<double>& f, const std::vector<double>& g);

std::pair<double, PBound> standardize_and_p(double a2, size_t m, size_t n);

// One value per line; a non-numeric first line is treated as a header and
// skipped; blank lines ignored. Parse failures report the line number.
std::vector<double> read_samples_csv(std::istream& in);

}  // namespace eccpow::stats
