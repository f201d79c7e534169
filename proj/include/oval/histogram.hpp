#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace oval {

inline constexpr int kHistBins = 16;

// Per-channel HSV histogram, each channel normalized to sum 1.
struct HsvHistogram {
    std::array<std::array<double, kHistBins>, 3> channels{};

    static int bin_of(double v) {
        v = std::clamp(v, 0.0, 1.0);
        int b = static_cast<int>(v * kHistBins);
        return std::min(b, kHistBins - 1);
    }

    // samples: HSV triples in [0,1]^3.
    static HsvHistogram from_samples(std::span<const std::array<double, 3>> samples) {
        HsvHistogram h;
        if (samples.empty()) {
            for (auto& ch : h.channels) ch.fill(1.0 / kHistBins);
            return h;
        }
        for (const auto& s : samples)
            for (int c = 0; c < 3; ++c) h.channels[c][bin_of(s[c])] += 1.0;
        double inv = 1.0 / static_cast<double>(samples.size());
        for (auto& ch : h.channels)
            for (auto& b : ch) b *= inv;
        return h;
    }

    static HsvHistogram one_hot(int h_bin, int s_bin, int v_bin) {
        HsvHistogram h;
        h.channels[0][h_bin] = 1.0;
        h.channels[1][s_bin] = 1.0;
        h.channels[2][v_bin] = 1.0;
        return h;
    }

    bool normalized(double tol = 1e-9) const {
        for (const auto& ch : channels) {
            double sum = 0.0;
            for (double b : ch) {
                if (b < 0.0) return false;
                sum += b;
            }
            if (std::abs(sum - 1.0) > tol) return false;
        }
        return true;
    }
};

// Mean over channels of the per-channel histogram intersection
// (sum of element-wise minima); lands in [0, 1].
inline double histogram_intersection(const HsvHistogram& a, const HsvHistogram& b) {
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int i = 0; i < kHistBins; ++i)
            s += std::min(a.channels[c][i], b.channels[c][i]);
        total += s;
    }
    return total / 3.0;
}

} // namespace oval
