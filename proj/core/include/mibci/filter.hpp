#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mibci {

/// One second-order section, a0 normalised to 1.
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

/// Cascade of biquads designed from an analog Butterworth prototype with the
/// bilinear transform (band edges prewarped).
class SosFilter {
public:
    SosFilter(std::vector<Biquad> sections, int order)
        : sections_(std::move(sections)), order_(order) {}

    [[nodiscard]] const std::vector<Biquad>& sections() const noexcept { return sections_; }
    /// Order of the digital transfer function (poles in the cascade).
    [[nodiscard]] int order() const noexcept { return order_; }
    /// Odd-reflection padding used by filtfilt: 3x the filter order.
    [[nodiscard]] std::size_t pad_length() const noexcept {
        return 3 * static_cast<std::size_t>(order_);
    }

    [[nodiscard]] std::complex<double> response(double freq_hz, double fs_hz) const;

    /// Single causal pass, starting from the steady state of a constant input
    /// equal to x[0]. In-place allowed.
    void filter(std::span<const double> x, std::span<double> y) const;

    /// Zero-phase forward-backward pass. Requires x.size() > pad_length().
    void filtfilt(std::span<const double> x, std::span<double> y) const;

private:
    std::vector<Biquad> sections_;
    int order_;
};

/// Low-pass Butterworth of the given prototype order.
SosFilter butter_lowpass(int order, double cutoff_hz, double fs_hz);
/// Band-pass Butterworth; the digital filter has 2 * order poles.
SosFilter butter_bandpass(int order, double low_hz, double high_hz, double fs_hz);

}  // namespace mibci
