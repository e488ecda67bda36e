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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wec/error.hpp"

namespace wec {

inline constexpr const char* kVersion = "0.1.0";

// --- stable 64-bit content hash (FNV-1a), used for config fingerprints ---

inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string to_hex(std::uint64_t v); // 16 lowercase hex digits

// --- deterministic RNG wrapper ---
//
// std::mt19937_64 plus explicit value mappings. The standard distribution
// objects carry hidden state (normal_distribution caches its second draw),
// which would leak across snapshot boundaries; these mappings are stateless
// beyond the engine itself, so serialising the engine captures everything.
class Rng {
public:
    Rng() : eng_(0x9e3779b97f4a7c15ull) {}
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    void reseed(std::uint64_t seed) { eng_.seed(seed); }

    std::uint64_t raw() { return eng_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // rejection to avoid modulo bias
        const std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = eng_(); } while (v >= lim);
        return v % n;
    }

    // standard normal via polar Box-Muller, second value discarded (stateless)
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0)
                return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    std::string serialize() const {
        std::ostringstream os;
        os << eng_;
        return os.str();
    }

    void deserialize(const std::string& s) {
        std::istringstream is(s);
        is >> eng_;
        require(!is.fail(), ErrorCode::Version, "corrupt RNG state");
    }

    bool operator==(const Rng& o) const { return eng_ == o.eng_; }

private:
    std::mt19937_64 eng_;
};

// --- little-endian binary buffer io (snapshots, checkpoints) ---
//
// The sim targets little-endian hosts; raw copies keep round trips bitwise.

class ByteWriter {
public:
    void u8(std::uint8_t v) { push(&v, 1); }
    void u32(std::uint32_t v) { push(&v, 4); }
    void u64(std::uint64_t v) { push(&v, 8); }
    void i64(std::int64_t v) { push(&v, 8); }
    void f64(double v) { push(&v, 8); }
    void str(const std::string& s) {
        u64(s.size());
        push(s.data(), s.size());
    }
    template <class T>
    void vec(const std::vector<T>& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        u64(v.size());
        push(v.data(), v.size() * sizeof(T));
    }
    const std::vector<char>& bytes() const { return buf_; }
    std::vector<char>&& take() { return std::move(buf_); }

private:
    void push(const void* p, std::size_t n) {
        const char* c = static_cast<const char*>(p);
        buf_.insert(buf_.end(), c, c + n);
    }
    std::vector<char> buf_;
};

class ByteReader {
public:
    ByteReader(const char* data, std::size_t n) : p_(data), end_(data + n) {}
    explicit ByteReader(const std::vector<char>& v) : ByteReader(v.data(), v.size()) {}

    std::uint8_t u8() { std::uint8_t v; pull(&v, 1); return v; }
    std::uint32_t u32() { std::uint32_t v; pull(&v, 4); return v; }
    std::uint64_t u64() { std::uint64_t v; pull(&v, 8); return v; }
    std::int64_t i64() { std::int64_t v; pull(&v, 8); return v; }
    double f64() { double v; pull(&v, 8); return v; }
    std::string str() {
        const std::uint64_t n = u64();
        check(n);
        std::string s(p_, p_ + n);
        p_ += n;
        return s;
    }
    template <class T>
    std::vector<T> vec() {
        static_assert(std::is_trivially_copyable_v<T>);
        const std::uint64_t n = u64();
        check(n * sizeof(T));
        std::vector<T> v(n);
        std::memcpy(v.data(), p_, n * sizeof(T));
        p_ += n * sizeof(T);
        return v;
    }
    bool exhausted() const { return p_ == end_; }

private:
    void check(std::size_t n) {
        require(static_cast<std::size_t>(end_ - p_) >= n, ErrorCode::Version,
                "truncated binary payload");
    }
    void pull(void* out, std::size_t n) {
        check(n);
        std::memcpy(out, p_, n);
        p_ += n;
    }
    const char* p_;
    const char* end_;
};

std::vector<char> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<char>& bytes);

// --- wall-clock phase accounting for the runtime report ---

class PhaseTimers {
public:
    enum Phase { Sph = 0, Rl = 1, Io = 2, kCount };

    void start(Phase p) { marks_[p] = clock::now(); }
    void stop(Phase p) {
        acc_[p] += std::chrono::duration<double>(clock::now() - marks_[p]).count();
    }
    double seconds(Phase p) const { return acc_[p]; }

    void start_total() { total_mark_ = clock::now(); }
    void stop_total() {
        total_ += std::chrono::duration<double>(clock::now() - total_mark_).count();
    }
    double total_seconds() const { return total_; }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point marks_[kCount];
    clock::time_point total_mark_;
    double acc_[kCount] = {0, 0, 0};
    double total_ = 0;
};

// scoped helper
class PhaseScope {
public:
    PhaseScope(PhaseTimers& t, PhaseTimers::Phase p) : t_(t), p_(p) { t_.start(p_); }
    ~PhaseScope() { t_.stop(p_); }

private:
    PhaseTimers& t_;
    PhaseTimers::Phase p_;
};

} // namespace wec
