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

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wec {

// In-place iterative radix-2 FFT; n must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse = false);

struct PsdEstimate {
    std::vector<double> freq; // Hz, one-sided, freq[0] = 0
    std::vector<double> psd;  // m^2/Hz, scaled so sum(psd)*df = signal variance
    double df = 0.0;
};

// Welch periodogram: Hann window, 50% overlap, power-of-two segments.
// The series must hold at least one full segment.
PsdEstimate welch_psd(const std::vector<double>& series, double dt_sample,
                      std::size_t segment = 512);

// Significant wave height 4*sqrt(m0) with m0 the PSD integral (DC excluded).
double significant_height(const PsdEstimate& est);

// Peak period 1/argmax of the PSD (DC excluded).
double peak_period(const PsdEstimate& est);

} // namespace wec
