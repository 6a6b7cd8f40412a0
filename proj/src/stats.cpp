#include "eccpow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>

#include <json.hpp>

#include "eccpow/errors.hpp"

namespace eccpow::stats {

std::string PBound::str() const {
    char buf[32];
    const char* rel = kind == Kind::at_least ? ">=" : kind == Kind::at_most ? "<=" : "=";
    std::snprintf(buf, sizeof(buf), "p %s %.3f", rel, value);
    return buf;
}

std::string AdResult::to_json() const {
    nlohmann::json doc;
    doc["a2"] = a2;
    doc["standardized"] = standardized;
    doc["p_bound"] = p_bound.str();
    doc["M"] = m;
    doc["N"] = n;
    return doc.dump(2);
}

double fit_exponential_mean(const std::vector<double>& samples) {
    if (samples.empty())
        fail(ErrorCode::param, "fit_exponential_mean: empty sample");
    double sum = 0.0;
    for (double v : samples) {
        if (!(v > 0.0))
            fail(ErrorCode::param, "fit_exponential_mean: values must be positive");
        sum += v;
    }
    return double(samples.size()) / sum;
}

Histogram histogram10(const std::vector<double>& samples, size_t bins) {
    if (bins < 1)
        fail(ErrorCode::param, "histogram: need at least one bin");
    if (samples.size() < 2)
        fail(ErrorCode::param, "histogram: need at least two samples");
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo))
        fail(ErrorCode::degenerate, "histogram: all samples equal, range is empty");

    Histogram h;
    h.edges.resize(bins + 1);
    for (size_t i = 0; i <= bins; ++i)
        h.edges[i] = lo + (hi - lo) * double(i) / double(bins);
    h.edges[bins] = hi;
    h.counts.assign(bins, 0);
    for (double v : samples) {
        size_t idx = static_cast<size_t>((v - lo) / (hi - lo) * double(bins));
        if (idx >= bins) idx = bins - 1;  // max value closes the last bin
        ++h.counts[idx];
    }
    return h;
}

std::vector<double> expected_frequencies(double lambda, const std::vector<double>& edges,
                                         uint64_t total) {
    if (!(lambda > 0.0))
        fail(ErrorCode::param, "expected_frequencies: lambda must be positive");
    if (edges.size() < 2)
        fail(ErrorCode::param, "expected_frequencies: need at least two edges");
    for (size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            fail(ErrorCode::param, "expected_frequencies: edges must ascend");

    std::vector<double> out(edges.size() - 1);
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        out[i] = double(total) * (std::exp(-lambda * edges[i]) - std::exp(-lambda * edges[i + 1]));
    return out;
}

double ad_one_sample(const std::vector<double>& samples,
                     const std::function<double(double)>& cdf) {
    const size_t m = samples.size();
    if (m == 0)
        fail(ErrorCode::param, "ad_one_sample: empty sample");
    std::vector<double> x = samples;
    std::sort(x.begin(), x.end());

    std::vector<double> u(m);
    for (size_t i = 0; i < m; ++i) {
        u[i] = cdf(x[i]);
        if (!(u[i] > 0.0) || !(u[i] < 1.0))
            fail(ErrorCode::domain, "ad_one_sample: F(x) hit 0 or 1 at a sample point");
    }

    double acc = 0.0;
    for (size_t i = 0; i < m; ++i)
        acc += double(2 * i + 1) * (std::log(u[i]) + std::log1p(-u[m - 1 - i]));
    return -double(m) - acc / double(m);
}

namespace {

// Tie-adjusted midrank two-sample statistic (the k = 2 case of the
// rank-based k-sample formula).
double a2_midrank(const std::vector<double>& f, const std::vector<double>& g) {
    const double nf = double(f.size()), ng = double(g.size());
    const double big_k = nf + ng;

    std::vector<double> pooled;
    pooled.reserve(f.size() + g.size());
    pooled.insert(pooled.end(), f.begin(), f.end());
    pooled.insert(pooled.end(), g.begin(), g.end());
    std::sort(pooled.begin(), pooled.end());

    std::vector<double> fs = f, gs = g;
    std::sort(fs.begin(), fs.end());
    std::sort(gs.begin(), gs.end());

    // Distinct pooled values and per-sample multiplicities.
    std::vector<double> z;
    std::vector<double> lj, fj, gj;
    size_t i = 0;
    while (i < pooled.size()) {
        size_t j = i;
        while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
        z.push_back(pooled[i]);
        lj.push_back(double(j - i));
        i = j;
    }
    if (z.size() < 2)
        fail(ErrorCode::degenerate, "ad_two_sample: all pooled values identical");
    auto counts_in = [](const std::vector<double>& sorted, const std::vector<double>& vals) {
        std::vector<double> out(vals.size(), 0.0);
        size_t p = 0;
        for (size_t k = 0; k < vals.size(); ++k) {
            while (p < sorted.size() && sorted[p] == vals[k]) {
                out[k] += 1.0;
                ++p;
            }
        }
        return out;
    };
    fj = counts_in(fs, z);
    gj = counts_in(gs, z);

    double inner_f = 0.0, inner_g = 0.0;
    double f_less = 0.0, g_less = 0.0, all_less = 0.0;
    for (size_t k = 0; k < z.size(); ++k) {
        const double l = lj[k];
        const double bj = all_less + l / 2.0;
        const double maf = f_less + fj[k] / 2.0;
        const double mag = g_less + gj[k] / 2.0;
        const double denom = bj * (big_k - bj) - big_k * l / 4.0;
        // denom > 0 is guaranteed once z.size() >= 2
        const double tf = big_k * maf - nf * bj;
        const double tg = big_k * mag - ng * bj;
        inner_f += (l / big_k) * tf * tf / denom;
        inner_g += (l / big_k) * tg * tg / denom;
        f_less += fj[k];
        g_less += gj[k];
        all_less += l;
    }
    return (big_k - 1.0) / big_k * (inner_f / nf + inner_g / ng);
}

// Critical values of the standardized statistic for two samples, with the
// matching upper-tail significance levels.
constexpr double kCrit[7] = {0.325, 1.226, 1.961, 2.718, 3.752, 4.592, 6.546};
constexpr double kSig[7] = {0.25, 0.10, 0.05, 0.025, 0.01, 0.005, 0.001};

}  // namespace

std::pair<double, PBound> standardize_and_p(double a2, size_t m, size_t n) {
    if (m < 1 || n < 1)
        fail(ErrorCode::param, "standardize_and_p: both samples must be non-empty");
    const size_t big_k = m + n;
    if (big_k < 4)
        fail(ErrorCode::degenerate,
             "standardize_and_p: pooled sample too small to standardize (need m + n >= 4)");

    const double K = double(big_k);
    const double k = 2.0;  // number of samples
    const double H = 1.0 / double(m) + 1.0 / double(n);

    // Harmonic prefix sums give h and the double sum g in O(K).
    std::vector<double> hp(big_k, 0.0);  // hp[t] = sum_{j=1..t} 1/j
    for (size_t t = 1; t < big_k; ++t) hp[t] = hp[t - 1] + 1.0 / double(t);
    const double h = hp[big_k - 1];
    double g = 0.0;
    for (size_t u = 2; u <= big_k - 1; ++u)
        g += (hp[big_k - 1] - hp[big_k - u]) / double(u);

    const double a = (4.0 * g - 6.0) * (k - 1.0) + (10.0 - 6.0 * g) * H;
    const double b = (2.0 * g - 4.0) * k * k + 8.0 * h * k +
                     (2.0 * g - 14.0 * h - 4.0) * H - 8.0 * h + 4.0 * g - 6.0;
    const double c = (6.0 * h + 2.0 * g - 2.0) * k * k + (4.0 * h - 4.0 * g + 6.0) * k +
                     (2.0 * h - 6.0) * H + 4.0 * h;
    const double d = (2.0 * h + 6.0) * k * k - 4.0 * h * k;
    const double var =
        (a * K * K * K + b * K * K + c * K + d) / ((K - 1.0) * (K - 2.0) * (K - 3.0));
    if (!(var > 0.0))
        fail(ErrorCode::degenerate, "standardize_and_p: null variance not positive");

    const double t = (a2 - (k - 1.0)) / std::sqrt(var);

    PBound p;
    if (t < kCrit[0]) {
        p.kind = PBound::Kind::at_least;
        p.value = kSig[0];
    } else if (t > kCrit[6]) {
        p.kind = PBound::Kind::at_most;
        p.value = kSig[6];
    } else {
        size_t i = 0;
        while (t > kCrit[i + 1]) ++i;
        const double w = (t - kCrit[i]) / (kCrit[i + 1] - kCrit[i]);
        const double neg_log_p =
            -std::log(kSig[i]) + w * (-std::log(kSig[i + 1]) + std::log(kSig[i]));
        p.kind = PBound::Kind::exact;
        p.value = std::exp(-neg_log_p);
    }
    return {t, p};
}

AdResult ad_two_sample(const std::vector<double>& f, const std::vector<double>& g) {
    if (f.empty() || g.empty())
        fail(ErrorCode::param, "ad_two_sample: both samples must be non-empty");
    AdResult r;
    r.m = f.size();
    r.n = g.size();
    r.a2 = a2_midrank(f, g);
    auto [t, p] = standardize_and_p(r.a2, r.m, r.n);
    r.standardized = t;
    r.p_bound = p;
    return r;
}

std::vector<double> read_samples_csv(std::istream& in) {
    std::vector<double> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
        if (trimmed.empty()) continue;
        try {
            size_t used = 0;
            double v = std::stod(trimmed, &used);
            if (used != trimmed.size()) throw std::invalid_argument("trailing text");
            out.push_back(v);
        } catch (const std::exception&) {
            if (lineno == 1 && out.empty()) continue;  // header row
            fail(ErrorCode::param,
                 "samples: line " + std::to_string(lineno) + ": not a number: " + trimmed);
        }
    }
    return out;
}

}  // namespace eccpow::stats
