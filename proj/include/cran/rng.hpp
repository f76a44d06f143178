// SPDX-License-Identifier: Apache-2.0
//
// Portable seeded random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
// Each (seed, stream) pair is expanded through std::seed_seq (also fully
// specified), so streams with different tags are statistically independent and
// reproduce bit-for-bit across conforming standard libraries. The standard
// <random> distributions are implementation-defined, so the transforms below
// are written out explicitly.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cran {

enum class RngStream : std::uint32_t {
    kTopology = 1,
    kShadowing = 2,
    kFading = 3,
};

class RandomStream {
public:
    RandomStream(std::uint64_t seed, RngStream stream);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();
    /// Circularly symmetric complex Gaussian with unit variance (1/2 per real dimension).
    std::complex<double> complex_normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cran
