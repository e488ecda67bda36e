/*
Copyright 2026 the wecsim authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "wec/spectral.hpp"

#include <cmath>
#include <numbers>

#include "wec/error.hpp"

namespace wec {

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    require(n > 0 && (n & (n - 1)) == 0, ErrorCode::InvalidArgument,
            "fft size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang =
            2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= double(n);
}

PsdEstimate welch_psd(const std::vector<double>& series, double dt_sample,
                      std::size_t segment) {
    require(dt_sample > 0.0, ErrorCode::InvalidArgument,
            "welch_psd needs a positive sample interval");
    require(segment > 1 && (segment & (segment - 1)) == 0,
            ErrorCode::InvalidArgument, "welch_psd segment must be a power of two");
    require(series.size() >= segment, ErrorCode::InvalidArgument,
            "series shorter than one segment");

    const std::size_t hop = segment / 2;
    const std::size_t nseg = (series.size() - segment) / hop + 1;
    const double fs = 1.0 / dt_sample;

    std::vector<double> window(segment);
    double wss = 0.0; // sum of squared window samples, normalises segment power
    for (std::size_t i = 0; i < segment; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(i) /
                                          double(segment)));
        wss += window[i] * window[i];
    }

    PsdEstimate est;
    est.df = fs / double(segment);
    const std::size_t nbin = segment / 2 + 1;
    est.freq.resize(nbin);
    est.psd.assign(nbin, 0.0);
    for (std::size_t k = 0; k < nbin; ++k) est.freq[k] = double(k) * est.df;

    std::vector<std::complex<double>> buf(segment);
    for (std::size_t s = 0; s < nseg; ++s) {
        const double* x = series.data() + s * hop;
        double mean = 0.0;
        for (std::size_t i = 0; i < segment; ++i) mean += x[i];
        mean /= double(segment);
        for (std::size_t i = 0; i < segment; ++i)
            buf[i] = {(x[i] - mean) * window[i], 0.0};
        fft_pow2(buf);
        for (std::size_t k = 0; k < nbin; ++k) {
            const double two_sided = std::norm(buf[k]) / (fs * wss);
            const bool interior = k > 0 && k < segment / 2;
            est.psd[k] += interior ? 2.0 * two_sided : two_sided;
        }
    }
    for (auto& p : est.psd) p /= double(nseg);
    return est;
}

double significant_height(const PsdEstimate& est) {
    double m0 = 0.0;
    for (std::size_t k = 1; k < est.psd.size(); ++k) m0 += est.psd[k] * est.df;
    return 4.0 * std::sqrt(m0);
}

double peak_period(const PsdEstimate& est) {
    require(est.psd.size() > 1, ErrorCode::InvalidArgument, "empty spectrum");
    std::size_t best = 1;
    for (std::size_t k = 2; k < est.psd.size(); ++k)
        if (est.psd[k] > est.psd[best]) best = k;
    return 1.0 / est.freq[best];
}

} // namespace wec
