#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mosearch {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0) a += 2.0 * kPi;
    return a - kPi;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    bool operator==(const Vec2&) const = default;
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Vec2 position() const { return {x, y}; }
    Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }
    bool operator==(const Pose&) const = default;
};

// Deterministic RNG. All sampling goes through hand-rolled conversions so
// results do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<int64_t>(next_u64());  // full range
        const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return lo + static_cast<int64_t>(v % span);
    }

    /// Standard normal via Box-Muller. Consumes two draws per sample.
    double normal() {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerationFailure : Error { using Error::Error; };
struct InfeasibleSpawn : Error { using Error::Error; };
struct MalformedFile : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };
struct UnknownInstance : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct NonFiniteGradient : Error { using Error::Error; };
struct NoReachableTarget : Error { using Error::Error; };
struct DegenerateEpisode : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

/// FNV-1a, used to stamp outputs with a config fingerprint.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace mosearch
