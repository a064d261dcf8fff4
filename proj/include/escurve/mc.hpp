#pragma once

// Monte Carlo validation of the Gaussian-source prediction: eigenvalues
// of diag(a, ..., a, -a, ..., -a) + H with H a GUE matrix of variance
// 1/n, compared against the curve-derived density.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "escurve/density.hpp"
#include "escurve/rng.hpp"

namespace escurve {

struct McConfig {
    int n = 400;
    int samples = 100;
    std::uint64_t seed = 1;
    int bins = 80;
};

struct SpectrumBatch {
    McConfig config;
    double a = 0.0;
    std::vector<double> eigenvalues;  // sorted within each sample block
};

// Sample the Gaussian-source ensemble by completing the square: M = A + H
// with A = diag(a 1_{n/2}, -a 1_{n/2}) and H GUE-distributed with entry
// variance 1/n. Per-sample RNG streams make the batch order-free.
inline SpectrumBatch sample_spectrum_gaussian(const McConfig& cfg, double a) {
    if (cfg.n <= 0 || cfg.n % 2 != 0)
        throw std::invalid_argument("sample_spectrum_gaussian: n must be even positive");
    if (cfg.samples <= 0) throw std::invalid_argument("samples must be positive");
    SpectrumBatch batch;
    batch.config = cfg;
    batch.a = a;
    batch.eigenvalues.resize(std::size_t(cfg.n) * cfg.samples);
    const int n = cfg.n;
    const double sd_diag = 1.0 / std::sqrt(double(n));
    const double sd_off = 1.0 / std::sqrt(2.0 * n);
    for (int s = 0; s < cfg.samples; ++s) {
        SplitMix64 rng = SplitMix64::derive(cfg.seed, std::uint64_t(s));
        Eigen::MatrixXcd m(n, n);
        for (int i = 0; i < n; ++i) {
            double src = (i < n / 2) ? a : -a;
            m(i, i) = src + sd_diag * rng.next_normal();
            for (int j = i + 1; j < n; ++j) {
                double re = sd_off * rng.next_normal();
                double im = sd_off * rng.next_normal();
                m(i, j) = cplx(re, im);
                m(j, i) = cplx(re, -im);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("eigensolver failed at sample " + std::to_string(s));
        Eigen::VectorXd ev = es.eigenvalues();
        std::vector<double> vals(ev.data(), ev.data() + n);
        std::sort(vals.begin(), vals.end());
        std::copy(vals.begin(), vals.end(), batch.eigenvalues.begin() + std::size_t(s) * n);
    }
    return batch;
}

struct HistogramComparison {
    double cdf_sup_distance = 0.0;
    double per_bin_max = 0.0;
};

namespace detail {

// Piecewise-linear CDF of the curve density on a fine per-cut table.
struct CurveCdf {
    std::vector<double> xs, cdf;
    double total = 0.0;

    CurveCdf(const SheetSampler& s, int pts_per_cut = 400) {
        const BranchStructure& b = s.branch();
        double acc = 0.0;
        for (auto [lo, hi] : {std::pair{-b.gamma2, -b.gamma1}, {b.gamma1, b.gamma2}}) {
            xs.push_back(lo);
            cdf.push_back(acc);
            double prev = lo;
            for (int k = 1; k <= pts_per_cut; ++k) {
                double th = std::numbers::pi * k / (pts_per_cut + 1.0);
                double x = 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(th);
                acc += integrate([&](double t) { return density_at(s, t); }, prev, x, 1,
                                 k == 1, k == pts_per_cut);
                xs.push_back(x);
                cdf.push_back(acc);
                prev = x;
            }
            acc += integrate([&](double t) { return density_at(s, t); }, prev, hi, 1,
                             false, true);
            xs.push_back(hi);
            cdf.push_back(acc);
            prev = hi;
        }
        total = acc;
    }

    double operator()(double x) const {
        if (x <= xs.front()) return 0.0;
        if (x >= xs.back()) return total;
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = std::size_t(it - xs.begin());
        double x0 = xs[i - 1], x1 = xs[i];
        double c0 = cdf[i - 1], c1 = cdf[i];
        if (x1 == x0) return c0;
        return c0 + (c1 - c0) * (x - x0) / (x1 - x0);
    }
};

}  // namespace detail

inline HistogramComparison compare_histogram(const SpectrumBatch& batch,
                                             const SheetSampler& sampler) {
    HistogramComparison out;
    std::vector<double> ev = batch.eigenvalues;
    std::sort(ev.begin(), ev.end());
    const std::size_t n = ev.size();
    detail::CurveCdf cdf(sampler);
    for (std::size_t i = 0; i < n; ++i) {
        double fc = cdf(ev[i]) / cdf.total;
        double lo = double(i) / n, hi = double(i + 1) / n;
        out.cdf_sup_distance = std::max({out.cdf_sup_distance, std::abs(fc - lo),
                                         std::abs(fc - hi)});
    }
    // Per-bin density discrepancy on equal-width bins over the data range.
    const int bins = batch.config.bins;
    double lo = ev.front(), hi = ev.back();
    double w = (hi - lo) / bins;
    if (w > 0.0) {
        for (int b = 0; b < bins; ++b) {
            double x0 = lo + b * w, x1 = x0 + w;
            auto i0 = std::lower_bound(ev.begin(), ev.end(), x0);
            auto i1 = (b == bins - 1) ? ev.end() : std::lower_bound(ev.begin(), ev.end(), x1);
            double emp = double(i1 - i0) / double(n) / w;
            double cur = (cdf(x1) - cdf(x0)) / cdf.total / w;
            out.per_bin_max = std::max(out.per_bin_max, std::abs(emp - cur));
        }
    }
    return out;
}

// Empirical-vs-empirical comparison: Kolmogorov-Smirnov distance between
// the two batches' eigenvalue CDFs (identical batches give exactly zero).
inline HistogramComparison compare_histogram(const SpectrumBatch& lhs,
                                             const SpectrumBatch& rhs) {
    std::vector<double> x = lhs.eigenvalues, y = rhs.eigenvalues;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    HistogramComparison out;
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        // Advance past all ties at the current smallest value on both
        // sides before measuring, so equal samples never register a gap.
        double v = (j >= y.size() || (i < x.size() && x[i] <= y[j])) ? x[i] : y[j];
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        out.cdf_sup_distance =
            std::max(out.cdf_sup_distance,
                     std::abs(double(i) / x.size() - double(j) / y.size()));
    }
    out.per_bin_max = out.cdf_sup_distance;
    return out;
}

// Empirical cluster edges: for a two-cluster spectrum, the outermost
// eigenvalues and the widest interior gap's flanks, averaged per sample.
inline std::array<double, 4> cluster_edges(const SpectrumBatch& batch) {
    const int n = batch.config.n;
    std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
    for (int s = 0; s < batch.config.samples; ++s) {
        const double* v = batch.eigenvalues.data() + std::size_t(s) * n;
        int gap_at = 0;
        double gap = -1.0;
        for (int i = 0; i + 1 < n; ++i)
            if (v[i + 1] - v[i] > gap) {
                gap = v[i + 1] - v[i];
                gap_at = i;
            }
        acc[0] += v[0];
        acc[1] += v[gap_at];
        acc[2] += v[gap_at + 1];
        acc[3] += v[n - 1];
    }
    for (double& x : acc) x /= batch.config.samples;
    return acc;
}

}  // namespace escurve
