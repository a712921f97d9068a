#pragma once

#include <array>

#include "mosearch/common.hpp"

namespace mosearch {

// Direction labels are discretized into 12 sectors of 30 degrees. Bin 6 is
// centered on straight ahead (alpha = 0); bin 0 is the wrap bin centered on
// +-pi. The same convention feeds the oracle label, the state vector and the
// egocentric overlay.
inline constexpr int kNumAngleBins = 12;
inline constexpr double kAngleBinWidth = 2.0 * kPi / kNumAngleBins;

inline int angle_bin(double alpha) {
    alpha = wrap_angle(alpha);
    int bin = static_cast<int>(std::floor((alpha + kPi + 0.5 * kAngleBinWidth) / kAngleBinWidth));
    return bin % kNumAngleBins;
}

inline double bin_center(int bin) {
    return (bin - kNumAngleBins / 2) * kAngleBinWidth;
}

struct AngleLabel {
    double alpha = 0.0;  // radians, robot frame, in (-pi, pi]
    int bin = 0;

    static AngleLabel from_angle(double alpha) {
        return {wrap_angle(alpha), angle_bin(alpha)};
    }
    std::array<double, kNumAngleBins> one_hot() const {
        std::array<double, kNumAngleBins> v{};
        v[static_cast<size_t>(bin)] = 1.0;
        return v;
    }
};

}  // namespace mosearch
